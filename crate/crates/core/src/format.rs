//! Plain-text file formats.
//!
//! Every file opens with a tag line (`HWF 1`, `HWT 1`, `HWP 1`, `HWC 1`).
//! Vector indices in files are 1-based positions in the family file.
//! Rationals are written `num/den`. Files end with a newline and carry no
//! trailing whitespace, so re-saving a loaded file reproduces it byte for byte.

use std::fmt::Write as _;

use crate::construct::{Block, BlockTree, CisParams};
use crate::error::{Error, Result};
use crate::extract::{CertificateKind, ExtractionCertificate};
use crate::rational::{self, Rational};
use crate::vector::{SupportVector, VectorFamily};

const FAMILY_TAG: &str = "HWF 1";
const TREE_TAG: &str = "HWT 1";
const PARAMS_TAG: &str = "HWP 1";
const CERT_TAG: &str = "HWC 1";

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Lines of `text`, numbered from 1, requiring the final newline.
fn lines(text: &str) -> Result<Vec<(usize, &str)>> {
    if !text.is_empty() && !text.ends_with('\n') {
        return Err(parse_err(text.lines().count(), "missing final newline"));
    }
    Ok(text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect())
}

fn expect_tag(lines: &[(usize, &str)], tag: &str) -> Result<()> {
    match lines.first() {
        Some((_, l)) if *l == tag => Ok(()),
        Some((_, l)) => Err(parse_err(1, format!("expected `{tag}`, found `{l}`"))),
        None => Err(parse_err(1, format!("empty file, expected `{tag}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| parse_err(line, format!("`{key}` is not a number: {value:?}")))
}

/// `key=value` fields with a fixed key order.
struct Fields<'a> {
    items: Vec<(usize, &'a str, &'a str)>,
    at: usize,
}

impl<'a> Fields<'a> {
    fn new(lines: &[(usize, &'a str)]) -> Result<Self> {
        let items = lines
            .iter()
            .map(|&(no, l)| {
                l.split_once('=')
                    .map(|(k, v)| (no, k, v))
                    .ok_or_else(|| parse_err(no, format!("expected key=value, found {l:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(Self { items, at: 0 })
    }

    fn take(&mut self, key: &str) -> Result<(usize, &'a str)> {
        match self.items.get(self.at) {
            Some(&(no, k, v)) if k == key => {
                self.at += 1;
                Ok((no, v))
            }
            Some(&(no, k, _)) => Err(parse_err(no, format!("expected `{key}`, found `{k}`"))),
            None => Err(parse_err(0, format!("missing `{key}`"))),
        }
    }

    fn num<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (no, v) = self.take(key)?;
        parse_num(no, key, v)
    }

    fn rational(&mut self, key: &str) -> Result<Rational> {
        let (no, v) = self.take(key)?;
        rational::parse(v).map_err(|e| parse_err(no, e.to_string()))
    }

    fn finish(self) -> Result<()> {
        match self.items.get(self.at) {
            Some(&(no, k, _)) => Err(parse_err(no, format!("unexpected field `{k}`"))),
            None => Ok(()),
        }
    }
}

pub fn write_family(family: &VectorFamily) -> String {
    let mut out = format!(
        "{FAMILY_TAG}\nn={} p={} m={}\n",
        family.dimension(),
        family.weight(),
        family.len()
    );
    for v in family {
        out.push_str(&join(v.support()));
        out.push('\n');
    }
    out
}

pub fn parse_family(text: &str) -> Result<VectorFamily> {
    let lines = lines(text)?;
    expect_tag(&lines, FAMILY_TAG)?;
    let header = lines
        .get(1)
        .ok_or_else(|| parse_err(2, "missing `n= p= m=` header"))?
        .1;
    let fields: Vec<&str> = header.split(' ').collect();
    let value = |k: usize, key: &str| -> Result<usize> {
        let raw = fields
            .get(k)
            .and_then(|f| f.strip_prefix(key))
            .ok_or_else(|| {
                parse_err(2, format!("expected `n=<n> p=<p> m=<m>`, found {header:?}"))
            })?;
        parse_num(2, key, raw)
    };
    if fields.len() != 3 {
        return Err(parse_err(
            2,
            format!("expected `n=<n> p=<p> m=<m>`, found {header:?}"),
        ));
    }
    let (n, p, m) = (value(0, "n=")?, value(1, "p=")?, value(2, "m=")?);
    let body = &lines[2..];
    if body.len() != m {
        return Err(parse_err(
            lines.len(),
            format!("header says m={m} but {} vector lines follow", body.len()),
        ));
    }
    let vectors = body
        .iter()
        .map(|&(no, l)| {
            let indices = if l.is_empty() {
                Vec::new()
            } else {
                l.split(' ')
                    .map(|x| parse_num(no, "index", x))
                    .collect::<Result<Vec<usize>>>()?
            };
            SupportVector::new(n, indices).map_err(|e| parse_err(no, e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    VectorFamily::new(n, p, vectors).map_err(|e| match e {
        Error::DuplicateVector { first, second } => parse_err(
            second + 3,
            format!("duplicate of the vector on line {}", first + 3),
        ),
        other => parse_err(2, other.to_string()),
    })
}

fn write_tree_node(node: &BlockTree, out: &mut String) {
    match &node.block {
        Block::Leaf(i) => {
            let _ = write!(out, "{}", i + 1);
        }
        Block::Split(children) => {
            out.push('(');
            for (k, child) in children.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                write_tree_node(child, out);
            }
            out.push(')');
        }
    }
}

/// Block trees as nested parenthesized lists of 1-based vector indices.
pub fn write_tree(tree: &BlockTree) -> String {
    let mut body = String::new();
    write_tree_node(tree, &mut body);
    format!(
        "{TREE_TAG}\nheight={} leaves={}\n{body}\n",
        tree.level,
        tree.leaves().len()
    )
}

struct TreeParser<'a> {
    bytes: &'a [u8],
    at: usize,
    line: usize,
}

impl TreeParser<'_> {
    fn err(&self, msg: &str) -> Error {
        parse_err(self.line, format!("{msg} at column {}", self.at + 1))
    }

    fn node(&mut self, depth: usize) -> Result<BlockTree> {
        if depth > 64 {
            return Err(self.err("tree nested too deeply"));
        }
        match self.bytes.get(self.at) {
            Some(b'(') => {
                self.at += 1;
                let mut children = vec![self.node(depth + 1)?];
                loop {
                    match self.bytes.get(self.at) {
                        Some(b' ') => {
                            self.at += 1;
                            children.push(self.node(depth + 1)?);
                        }
                        Some(b')') => {
                            self.at += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ' ' or ')'")),
                    }
                }
                BlockTree::split(children).map_err(|e| self.err(&e.to_string()))
            }
            Some(b'1'..=b'9') => {
                let start = self.at;
                while self.bytes.get(self.at).is_some_and(u8::is_ascii_digit) {
                    self.at += 1;
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.at]).expect("ascii");
                let index: usize = digits.parse().map_err(|_| self.err("index too large"))?;
                Ok(BlockTree::leaf(index - 1))
            }
            _ => Err(self.err("expected '(' or a 1-based index")),
        }
    }
}

pub fn parse_tree(text: &str) -> Result<BlockTree> {
    let lines = lines(text)?;
    expect_tag(&lines, TREE_TAG)?;
    let header = lines.get(1).map_or("", |l| l.1);
    let (height, leaves) = header
        .split_once(' ')
        .and_then(|(h, l)| Some((h.strip_prefix("height=")?, l.strip_prefix("leaves=")?)))
        .ok_or_else(|| {
            parse_err(
                2,
                format!("expected `height=<h> leaves=<m>`, found {header:?}"),
            )
        })?;
    let height: usize = parse_num(2, "height", height)?;
    let leaves: usize = parse_num(2, "leaves", leaves)?;
    let (no, body) = *lines
        .get(2)
        .ok_or_else(|| parse_err(3, "missing tree body"))?;
    if lines.len() > 3 {
        return Err(parse_err(4, "unexpected content after tree body"));
    }
    let mut parser = TreeParser {
        bytes: body.as_bytes(),
        at: 0,
        line: no,
    };
    let tree = parser.node(0)?;
    if parser.at != body.len() {
        return Err(parser.err("unexpected trailing characters"));
    }
    if tree.level != height || tree.leaves().len() != leaves {
        return Err(parse_err(
            2,
            format!(
                "header says height={height} leaves={leaves}, body has height={} leaves={}",
                tree.level,
                tree.leaves().len()
            ),
        ));
    }
    Ok(tree)
}

pub fn write_params(params: &CisParams) -> String {
    format!(
        "{PARAMS_TAG}\nt={}\na={}\np={}\nq={}\nn={}\nalpha={}\nC={}\nlambda={}\n",
        params.t,
        params.a,
        params.p,
        params.q,
        params.n,
        rational::display(&params.alpha),
        rational::display(&params.c),
        rational::display(&params.lambda)
    )
}

/// Loads parameters and re-checks all four admissibility conditions.
pub fn parse_params(text: &str) -> Result<CisParams> {
    let lines = lines(text)?;
    expect_tag(&lines, PARAMS_TAG)?;
    let mut f = Fields::new(&lines[1..])?;
    let (t, a, p, q, n) = (
        f.num("t")?,
        f.num("a")?,
        f.num("p")?,
        f.num("q")?,
        f.num("n")?,
    );
    let (alpha, c, lambda) = (
        f.rational("alpha")?,
        f.rational("C")?,
        f.rational("lambda")?,
    );
    f.finish()?;
    CisParams::new(t, a, p, q, n, alpha, c, lambda)
}

pub fn write_certificate(cert: &ExtractionCertificate) -> String {
    let thresholds = (1..cert.t).map(|i| {
        let half = &cert.c / rational::integer(2);
        rational::display(&(rational::pow(&half, i) * rational::integer(2)))
    });
    let (kind, level, center) = match cert.kind {
        CertificateKind::Ball { level, center } => ("ball", level, (center + 1).to_string()),
        CertificateKind::Net { level } => ("net", level, "-".to_string()),
    };
    format!(
        "{CERT_TAG}\nC={}\nt={}\nalpha=1/{}\nthresholds={}\nkind={kind}\nlevel={level}\ncenter={center}\nchain={}\nsubset={}\n",
        rational::display(&cert.c),
        cert.t,
        cert.t,
        join(thresholds),
        join(&cert.chain_sizes),
        join(cert.subset.iter().map(|i| i + 1)),
    )
}

pub fn parse_certificate(text: &str) -> Result<ExtractionCertificate> {
    let lines = lines(text)?;
    expect_tag(&lines, CERT_TAG)?;
    let mut f = Fields::new(&lines[1..])?;
    let c = f.rational("C")?;
    let t: usize = f.num("t")?;
    f.take("alpha")?;
    f.take("thresholds")?;
    let (no, kind) = f.take("kind")?;
    let level: usize = f.num("level")?;
    let (center_no, center) = f.take("center")?;
    let list = |(no, v): (usize, &str), key: &str| -> Result<Vec<usize>> {
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(' ').map(|x| parse_num(no, key, x)).collect()
    };
    let chain_sizes = list(f.take("chain")?, "chain")?;
    let subset = list(f.take("subset")?, "subset")?;
    f.finish()?;
    if subset.contains(&0) {
        return Err(parse_err(0, "subset indices are 1-based"));
    }
    let kind = match kind {
        "net" => CertificateKind::Net { level },
        "ball" => {
            let center: usize = parse_num(center_no, "center", center)?;
            if center == 0 {
                return Err(parse_err(center_no, "center is 1-based"));
            }
            CertificateKind::Ball {
                level,
                center: center - 1,
            }
        }
        other => return Err(parse_err(no, format!("unknown kind `{other}`"))),
    };
    Ok(ExtractionCertificate {
        c,
        t,
        kind,
        chain_sizes,
        subset: subset.into_iter().map(|i| i - 1).collect(),
    })
}
