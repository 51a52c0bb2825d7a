//! `drkit`: build block counterexample families, extract bounded-ratio
//! subsets, verify both, and run small experiments.
//!
//! Exit codes: 0 success or verified, 1 verification found violations,
//! 2 usage, domain or limit errors.

pub mod files;
pub mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use drkit::construct::{
    self, build_cis, solve_params_with, verify_cis, verify_counterexample, CounterexampleMode,
    Limits, ParamOverrides,
};
use drkit::extract::{compute_depth, extract_subset, validate_certificate};
use drkit::format;
use drkit::oracle::{self, best_subset_bruteforce, random_family};
use drkit::packing::{self, greedy_packing, Enumeration, PackingParams};
use drkit::rational::{self, Rational};
use drkit::{distance_ratio, distance_stats, VectorFamily};

use crate::manifest::Manifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

fn parse_rational(text: &str) -> Result<Rational, String> {
    rational::parse(text).map_err(|e| e.to_string())
}

fn parse_sample(text: &str) -> Result<(u64, usize), String> {
    let (seed, count) = text.split_once(',').ok_or("expected `seed,count`")?;
    Ok((
        seed.trim()
            .parse()
            .map_err(|_| format!("bad seed {seed:?}"))?,
        count
            .trim()
            .parse()
            .map_err(|_| format!("bad count {count:?}"))?,
    ))
}

#[derive(Debug, Parser)]
#[command(
    name = "drkit",
    version,
    about = "Distance-ratio toolkit for constant-weight binary vector families"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Solve parameters and build the block family with its tree.
    Construct(ConstructArgs),
    /// Extract a subset with distance ratio at most C (> 2).
    Extract(ExtractArgs),
    /// Print distance statistics and check block structure.
    Verify(VerifyArgs),
    /// Exact best subset by brute force, compared against extraction.
    Oracle(OracleArgs),
    /// Greedy minimum-distance packing over the weight-p slice.
    Pack(PackArgs),
    /// Per-trial best sizes and exponents on seeded random families.
    AlphaScan(AlphaScanArgs),
    /// Re-run a manifest and confirm its outputs are byte-identical.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_parser = parse_rational)]
    pub alpha: Rational,
    #[arg(long = "C", value_parser = parse_rational)]
    pub c: Rational,
    #[arg(long, value_parser = parse_rational)]
    pub lambda: Rational,
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long)]
    pub a: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, default_value_t = Limits::default().max_family_size)]
    pub max_family_size: u64,
    #[arg(long, default_value_t = Limits::default().max_dimension)]
    pub max_dimension: u64,
    /// Family file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Block tree file [default: <out>.tree]
    #[arg(long)]
    pub tree: Option<PathBuf>,
    /// Parameter file [default: <out>.params]
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// [default: <out>.manifest]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long = "C", value_parser = parse_rational)]
    pub c: Rational,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Certificate file [default: <out>.cert]
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// [default: <out>.manifest]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CheckMode {
    Structural,
    Exhaustive,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, requires = "params")]
    pub tree: Option<PathBuf>,
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, value_enum, requires = "params")]
    pub counterexample: Option<CheckMode>,
    /// Largest number of (q+1)-subsets the exhaustive check will enumerate.
    #[arg(long, default_value_t = construct::DEFAULT_MAX_SUBSETS)]
    pub max_subsets: u64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long = "C", value_parser = parse_rational)]
    pub c: Rational,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Brute-force size cap [env: DRKIT_MAX_BRUTE, default 20]
    #[arg(long)]
    pub cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PackArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    /// Minimum distance [default: ceil((p+1)/4) rounded up to even]
    #[arg(long)]
    pub dmin: Option<usize>,
    /// Scan `count` seeded random vectors instead of the full slice.
    #[arg(long, value_parser = parse_sample, value_name = "SEED,COUNT")]
    pub sample: Option<(u64, usize)>,
    #[arg(long)]
    pub out: PathBuf,
    /// [default: <out>.manifest]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AlphaScanArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long = "C", value_parser = parse_rational)]
    pub c: Rational,
    #[arg(long)]
    pub trials: u64,
    /// Trial k uses seed + k.
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub csv: PathBuf,
    /// Brute-force size cap [env: DRKIT_MAX_BRUTE, default 20]
    #[arg(long)]
    pub cap: Option<usize>,
    /// [default: <csv>.manifest]
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

/// Parses `args` (program name first) and runs the command, printing to
/// `out`. Returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let recorded = args.get(1..).unwrap_or_default().to_vec();
    match dispatch(cli.command, &recorded, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: Command, args: &[String], out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Construct(a) => cmd_construct(a, args, out),
        Command::Extract(a) => cmd_extract(a, args, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Oracle(a) => cmd_oracle(a, out),
        Command::Pack(a) => cmd_pack(a, args, out),
        Command::AlphaScan(a) => cmd_alpha_scan(a, args, out),
        Command::Replay(a) => cmd_replay(a, out),
    }
}

fn load_family(path: &Path) -> Result<VectorFamily> {
    format::parse_family(&files::read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn write_family(path: &Path, family: &VectorFamily) -> Result<()> {
    files::write_atomic(path, &format::write_family(family))
}

fn ratio_text(family: &VectorFamily) -> String {
    distance_ratio(family).map_or_else(|_| "undefined".into(), |r| rational::display(&r))
}

fn cmd_construct(a: ConstructArgs, args: &[String], out: &mut dyn Write) -> Result<i32> {
    let overrides = ParamOverrides {
        t: a.t,
        a: a.a,
        p: a.p,
        q: a.q,
        n: a.n,
    };
    let limits = Limits {
        max_family_size: a.max_family_size,
        max_dimension: a.max_dimension,
    };
    let params = solve_params_with(&a.alpha, &a.c, &a.lambda, overrides, limits)?;
    writeln!(out, "params: {params}")?;
    let (family, tree) = build_cis(&params)?;

    let tree_path = a.tree.unwrap_or_else(|| files::sibling(&a.out, ".tree"));
    let params_path = a
        .params
        .unwrap_or_else(|| files::sibling(&a.out, ".params"));
    let manifest_path = a
        .manifest
        .unwrap_or_else(|| files::sibling(&a.out, ".manifest"));
    write_family(&a.out, &family)?;
    files::write_atomic(&tree_path, &format::write_tree(&tree))?;
    files::write_atomic(&params_path, &format::write_params(&params))?;
    writeln!(
        out,
        "family: {} vectors, n={} p={}",
        family.len(),
        family.dimension(),
        family.weight()
    )?;

    let mut m = Manifest::new("construct", args);
    m.param("t", params.t)
        .param("a", params.a)
        .param("p", params.p)
        .param("q", params.q)
        .param("n", params.n)
        .param("alpha", rational::display(&params.alpha))
        .param("C", rational::display(&params.c))
        .param("lambda", rational::display(&params.lambda));
    for path in [&a.out, &tree_path, &params_path] {
        m.output(path)?;
    }
    m.write(&manifest_path)?;
    Ok(EXIT_OK)
}

fn cmd_extract(a: ExtractArgs, args: &[String], out: &mut dyn Write) -> Result<i32> {
    let family = load_family(&a.input)?;
    let (subset, cert) = extract_subset(&family, &a.c)?;
    let report = validate_certificate(&family, &a.c, &cert, &subset);
    if !report.is_valid() {
        bail!(
            "internal: certificate failed validation: {}",
            report.problems.join("; ")
        );
    }
    let cert_path = a.cert.unwrap_or_else(|| files::sibling(&a.out, ".cert"));
    let manifest_path = a
        .manifest
        .unwrap_or_else(|| files::sibling(&a.out, ".manifest"));
    write_family(&a.out, &subset)?;
    files::write_atomic(&cert_path, &format::write_certificate(&cert))?;
    writeln!(
        out,
        "|K|={} t={} |K'|={} dr={} branch={}",
        family.len(),
        cert.t,
        subset.len(),
        ratio_text(&subset),
        cert.kind
    )?;

    let mut m = Manifest::new("extract", args);
    m.param("C", rational::display(&a.c)).param("t", cert.t);
    m.input(&a.input)?;
    m.output(&a.out)?;
    m.output(&cert_path)?;
    m.write(&manifest_path)?;
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let family = load_family(&a.input)?;
    match distance_stats(&family) {
        Ok(stats) => writeln!(out, "stats: {stats}")?,
        Err(_) => writeln!(out, "stats: undefined ({} vectors)", family.len())?,
    }
    let Some(params_path) = a.params else {
        return Ok(EXIT_OK);
    };
    let params = format::parse_params(&files::read(&params_path)?)
        .with_context(|| format!("loading {}", params_path.display()))?;
    let tree = match &a.tree {
        Some(path) => Some(
            format::parse_tree(&files::read(path)?)
                .with_context(|| format!("loading {}", path.display()))?,
        ),
        None => None,
    };
    let mut code = EXIT_OK;
    if let Some(tree) = &tree {
        let report = verify_cis(&family, tree, &params)?;
        writeln!(
            out,
            "blocks: {} nodes checked, {} violations",
            report.nodes_checked,
            report.violations.len()
        )?;
        for v in &report.violations {
            writeln!(out, "violation: {v}")?;
        }
        if !report.is_valid() {
            code = EXIT_VIOLATION;
        }
    }
    if let Some(mode) = a.counterexample {
        let mode = match mode {
            CheckMode::Structural => CounterexampleMode::Structural,
            CheckMode::Exhaustive => CounterexampleMode::Exhaustive {
                max_subsets: a.max_subsets,
            },
        };
        let report = verify_counterexample(&family, tree.as_ref(), &params, mode)?;
        match &report.violation {
            None => writeln!(
                out,
                "counterexample: ok ({} checked, every subset of more than q={} vectors has ratio >= a={})",
                report.checked, params.q, params.a
            )?,
            Some(v) => {
                code = EXIT_VIOLATION;
                let subset = v.subset.as_ref().map(|s| format!(" subset [{}]", join_one_based(s))).unwrap_or_default();
                let path = v.path.as_ref().map(|p| format!(" node /{}", join_path(p))).unwrap_or_default();
                writeln!(out, "counterexample: violation{subset}{path}: {}", v.detail)?;
            }
        }
    }
    Ok(code)
}

fn join_one_based(indices: &[usize]) -> String {
    indices
        .iter()
        .map(|i| (i + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_path(path: &[usize]) -> String {
    path.iter()
        .map(|k| k.to_string())
        .collect::<Vec<_>>()
        .join("/")
}

fn cmd_oracle(a: OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let family = load_family(&a.input)?;
    let cap = oracle::resolve_cap(a.cap)?;
    let best = best_subset_bruteforce(&family, &a.c, cap).map_err(|e| match e {
        drkit::Error::BruteForceCap { .. } => {
            anyhow!("{e}; raise --cap / DRKIT_MAX_BRUTE or sample a smaller family")
        }
        e => e.into(),
    })?;
    writeln!(
        out,
        "oracle: size={} ratio={} subset=[{}] explored={} pruned={}",
        best.size,
        rational::display(&best.ratio),
        join_one_based(&best.subset),
        best.explored,
        best.pruned
    )?;
    if a.c > rational::integer(2) {
        let (subset, cert) = extract_subset(&family, &a.c)?;
        writeln!(
            out,
            "extract: size={} ratio={} branch={} (oracle >= extract: {})",
            subset.len(),
            ratio_text(&subset),
            cert.kind,
            if best.size >= subset.len() {
                "yes"
            } else {
                "NO"
            }
        )?;
    } else {
        writeln!(out, "extract: not applicable for C <= 2")?;
    }
    Ok(EXIT_OK)
}

fn cmd_pack(a: PackArgs, args: &[String], out: &mut dyn Write) -> Result<i32> {
    let d_min = a.dmin.unwrap_or_else(|| packing::classic_threshold(a.p));
    let enumeration = match a.sample {
        Some((seed, count)) => Enumeration::SeededSample { seed, count },
        None => Enumeration::FullLex,
    };
    let params = PackingParams::new(a.n, a.p, d_min, enumeration)?;
    let family = greedy_packing(&params)?;
    write_family(&a.out, &family)?;
    let min =
        distance_stats(&family).map_or_else(|_| "undefined".into(), |s| s.min_dist.to_string());
    writeln!(
        out,
        "packing: {} vectors from a slice of {}, d_min={} min distance={} dr={}",
        family.len(),
        packing::slice_size(a.n, a.p),
        params.d_min,
        min,
        ratio_text(&family)
    )?;

    let mut m = Manifest::new("pack", args);
    m.param("n", a.n)
        .param("p", a.p)
        .param("dmin", params.d_min);
    if let Some((seed, count)) = a.sample {
        m.seeds.push(seed);
        m.param("count", count);
    }
    m.output(&a.out)?;
    m.write(
        &a.manifest
            .unwrap_or_else(|| files::sibling(&a.out, ".manifest")),
    )?;
    Ok(EXIT_OK)
}

pub const ALPHA_CSV_HEADER: &str = "trial,seed,m,method,size,exponent";

fn cmd_alpha_scan(a: AlphaScanArgs, args: &[String], out: &mut dyn Write) -> Result<i32> {
    if a.m < 2 {
        bail!("--m must be at least 2");
    }
    let cap = oracle::resolve_cap(a.cap)?;
    let brute = a.m <= cap;
    if !brute {
        compute_depth(a.p, &a.c).context("m exceeds the brute-force cap, so extraction is used")?;
    }
    let mut csv = format!("{ALPHA_CSV_HEADER}\n");
    let mut m = Manifest::new("alpha-scan", args);
    for trial in 0..a.trials {
        let seed = a.seed.wrapping_add(trial);
        let family = random_family(a.n, a.p, a.m, seed)?;
        let (method, size) = if brute {
            ("oracle", best_subset_bruteforce(&family, &a.c, cap)?.size)
        } else {
            ("extract", extract_subset(&family, &a.c)?.0.len())
        };
        let exponent = oracle::format_exponent(oracle::exponent(size, family.len()));
        csv.push_str(&format!(
            "{trial},{seed},{},{method},{size},{exponent}\n",
            family.len()
        ));
        m.seeds.push(seed);
    }
    files::write_atomic(&a.csv, &csv)?;
    writeln!(
        out,
        "alpha-scan: {} trials written to {}",
        a.trials,
        a.csv.display()
    )?;
    m.param("n", a.n)
        .param("p", a.p)
        .param("m", a.m)
        .param("C", rational::display(&a.c))
        .param("cap", cap);
    m.output(&a.csv)?;
    m.write(
        &a.manifest
            .unwrap_or_else(|| files::sibling(&a.csv, ".manifest")),
    )?;
    Ok(EXIT_OK)
}

fn cmd_replay(a: ReplayArgs, out: &mut dyn Write) -> Result<i32> {
    let recorded = Manifest::parse(&files::read(&a.manifest)?)?;
    if recorded.command == "replay"
        || recorded.args.first().map(String::as_str) != Some(recorded.command.as_str())
    {
        bail!("manifest does not record a replayable command");
    }
    for (path, digest) in &recorded.inputs {
        if files::digest_file(path)? != *digest {
            writeln!(out, "input changed: {}", path.display())?;
            return Ok(EXIT_VIOLATION);
        }
    }
    let mut sink = Vec::new();
    let code = run(
        std::iter::once("drkit".to_string()).chain(recorded.args.iter().cloned()),
        &mut sink,
    );
    if code != EXIT_OK {
        bail!("replayed command exited with {code}");
    }
    let mut mismatches = 0;
    for (path, digest) in &recorded.outputs {
        let now = files::digest_file(path)?;
        let same = now == *digest;
        writeln!(
            out,
            "{} {}",
            if same { "same" } else { "DIFFERS" },
            path.display()
        )?;
        mismatches += usize::from(!same);
    }
    Ok(if mismatches == 0 {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}
