mod common;

use common::{golden, Workdir};

fn construct_a1(w: &Workdir) {
    let out = w.run(&[
        "construct",
        "--alpha",
        "3/5",
        "--C",
        "3/2",
        "--lambda",
        "11/10",
        "--out",
        "a1.hwf",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(
        out.stdout.contains("t=2 a=2 p=4 q=2 n=12"),
        "{}",
        out.stdout
    );
}

#[test]
fn construct_writes_golden_artifacts() {
    let w = Workdir::new();
    construct_a1(&w);
    assert_eq!(w.read("a1.hwf"), golden("a1.hwf"));
    assert_eq!(w.read("a1.hwf.tree"), golden("a1.tree"));
    assert_eq!(w.read("a1.hwf.params"), golden("a1.params"));
    assert_eq!(w.read("a1.hwf.manifest"), golden("a1.manifest"));

    let out = w.run(&[
        "construct",
        "--alpha",
        "2/5",
        "--C",
        "3/2",
        "--lambda",
        "11/10",
        "--out",
        "a2.hwf",
        "--tree",
        "a2.tree",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(w.read("a2.hwf"), golden("a2.hwf"));
    assert_eq!(w.read("a2.tree"), golden("a2.tree"));
}

#[test]
fn construct_errors_exit_2() {
    let w = Workdir::new();
    let out = w.run(&[
        "construct",
        "--alpha",
        "1/100",
        "--C",
        "2",
        "--lambda",
        "3/2",
        "--out",
        "x.hwf",
    ]);
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("exceed configured limits"),
        "{}",
        out.stderr
    );

    let out = w.run(&[
        "construct",
        "--alpha",
        "3/5",
        "--C",
        "3/2",
        "--lambda",
        "11/10",
        "--n",
        "11",
        "--out",
        "x.hwf",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("condition 4"), "{}", out.stderr);

    let out = w.run(&[
        "construct",
        "--alpha",
        "3/5",
        "--C",
        "3/2",
        "--lambda",
        "11/10",
        "--max-family-size",
        "3",
        "--out",
        "x.hwf",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("q^t"), "{}", out.stderr);

    let out = w.run(&[
        "construct",
        "--alpha",
        "three",
        "--C",
        "3/2",
        "--lambda",
        "11/10",
        "--out",
        "x.hwf",
    ]);
    assert_eq!(out.code, 2);
    assert!(!w.path("x.hwf").exists());
}

#[test]
fn construct_accepts_valid_overrides() {
    let w = Workdir::new();
    let out = w.run(&[
        "construct",
        "--alpha",
        "3/5",
        "--C",
        "3/2",
        "--lambda",
        "11/10",
        "--q",
        "3",
        "--out",
        "q3.hwf",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("q=3 n=24"), "{}", out.stdout);
    let out = w.run(&[
        "verify",
        "--in",
        "q3.hwf",
        "--tree",
        "q3.hwf.tree",
        "--params",
        "q3.hwf.params",
        "--counterexample",
        "exhaustive",
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn extract_writes_certificate() {
    let w = Workdir::new();
    construct_a1(&w);
    let out = w.run(&["extract", "--C", "3", "--in", "a1.hwf", "--out", "sub.hwf"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout.trim(),
        "|K|=4 t=2 |K'|=4 dr=2/1 branch=net(level=2)"
    );
    assert_eq!(w.read("sub.hwf"), golden("a1.hwf"));
    assert_eq!(w.read("sub.hwf.cert"), golden("a1_c3.cert"));

    w.write("one.hwf", "HWF 1\nn=12 p=4 m=1\n3 5 7 9\n");
    let out = w.run(&[
        "extract",
        "--C",
        "5/2",
        "--in",
        "one.hwf",
        "--out",
        "one_sub.hwf",
        "--cert",
        "one.cert",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("|K'|=1 dr=1/1"), "{}", out.stdout);

    let out = w.run(&["extract", "--C", "2", "--in", "a1.hwf", "--out", "bad.hwf"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("requires C > 2"), "{}", out.stderr);
}

#[test]
fn verify_reports_stats_and_violations() {
    let w = Workdir::new();
    construct_a1(&w);
    let out = w.run(&[
        "verify",
        "--in",
        "a1.hwf",
        "--tree",
        "a1.hwf.tree",
        "--params",
        "a1.hwf.params",
        "--counterexample",
        "exhaustive",
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(
        out.stdout.starts_with("stats: min=4 max=8 ratio=2/1\n"),
        "{}",
        out.stdout
    );
    assert!(
        out.stdout.contains("counterexample: ok (4 checked"),
        "{}",
        out.stdout
    );

    let out = w.run(&["verify", "--in", "a1.hwf"]);
    assert_eq!(
        (out.code, out.stdout.as_str()),
        (0, "stats: min=4 max=8 ratio=2/1\n")
    );

    w.write(
        "mutated.hwf",
        &golden("a1.hwf").replace("1 2 5 6", "1 2 5 7"),
    );
    let out = w.run(&[
        "verify",
        "--in",
        "mutated.hwf",
        "--tree",
        "a1.hwf.tree",
        "--params",
        "a1.hwf.params",
    ]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert!(
        out.stdout
            .contains("violation: node / (level 2): cross-distance"),
        "{}",
        out.stdout
    );

    w.write(
        "three.hwf",
        "HWF 1\nn=12 p=4 m=3\n1 2 3 4\n5 6 7 8\n9 10 11 12\n",
    );
    let out = w.run(&[
        "verify",
        "--in",
        "three.hwf",
        "--params",
        "a1.hwf.params",
        "--counterexample",
        "exhaustive",
    ]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    assert!(
        out.stdout
            .contains("counterexample: violation subset [1 2 3]"),
        "{}",
        out.stdout
    );

    let out = w.run(&[
        "verify",
        "--in",
        "three.hwf",
        "--tree",
        "a1.hwf.tree",
        "--params",
        "a1.hwf.params",
    ]);
    assert_eq!(out.code, 2, "{}", out.stdout);
    assert!(out.stderr.contains("tree does not match"), "{}", out.stderr);

    let out = w.run(&["verify", "--in", "a1.hwf", "--tree", "a1.hwf.tree"]);
    assert_eq!(out.code, 2);
}

#[test]
fn structural_counterexample_check() {
    let w = Workdir::new();
    let out = w.run(&[
        "construct",
        "--alpha",
        "2/5",
        "--C",
        "3/2",
        "--lambda",
        "11/10",
        "--out",
        "a2.hwf",
    ]);
    assert_eq!(out.code, 0);
    let out = w.run(&[
        "verify",
        "--in",
        "a2.hwf",
        "--tree",
        "a2.hwf.tree",
        "--params",
        "a2.hwf.params",
        "--counterexample",
        "structural",
    ]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let out = w.run(&[
        "verify",
        "--in",
        "a2.hwf",
        "--params",
        "a2.hwf.params",
        "--counterexample",
        "exhaustive",
        "--max-subsets",
        "10",
    ]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("structural"), "{}", out.stderr);
}

#[test]
fn oracle_compares_with_extraction() {
    let w = Workdir::new();
    construct_a1(&w);
    let out = w.run(&["oracle", "--C", "3/2", "--in", "a1.hwf"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(
        out.stdout
            .starts_with("oracle: size=2 ratio=1/1 subset=[1 2]"),
        "{}",
        out.stdout
    );
    let out = w.run(&["oracle", "--C", "3", "--in", "a1.hwf"]);
    assert!(out.stdout.contains("oracle: size=4"), "{}", out.stdout);
    assert!(
        out.stdout
            .contains("extract: size=4 ratio=2/1 branch=net(level=2) (oracle >= extract: yes)"),
        "{}",
        out.stdout
    );
}

#[test]
fn oracle_cap_from_flag_and_environment() {
    let w = Workdir::new();
    construct_a1(&w);
    let out = w.run_env(
        &["oracle", "--C", "3", "--in", "a1.hwf"],
        &[("DRKIT_MAX_BRUTE", "3")],
    );
    assert_eq!(out.code, 2);
    assert!(
        out.stderr.contains("cap is 3") && out.stderr.contains("--cap"),
        "{}",
        out.stderr
    );
    let out = w.run_env(
        &["oracle", "--C", "3", "--in", "a1.hwf", "--cap", "4"],
        &[("DRKIT_MAX_BRUTE", "3")],
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = w.run(&["oracle", "--C", "3", "--in", "a1.hwf", "--cap", "2"]);
    assert_eq!(out.code, 2);
}

#[test]
fn pack_full_slice() {
    let w = Workdir::new();
    let out = w.run(&[
        "pack", "--n", "16", "--p", "8", "--dmin", "4", "--out", "pk.hwf",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout.trim(),
        "packing: 870 vectors from a slice of 12870, d_min=4 min distance=4 dr=4/1"
    );
    let out = w.run(&["verify", "--in", "pk.hwf"]);
    assert_eq!(out.stdout.trim(), "stats: min=4 max=16 ratio=4/1");

    // odd d_min rounds up; the default is the classic threshold
    let out = w.run(&[
        "pack", "--n", "16", "--p", "8", "--dmin", "3", "--out", "odd.hwf",
    ]);
    assert!(out.stdout.contains("d_min=4"), "{}", out.stdout);
    assert_eq!(w.read("odd.hwf"), w.read("pk.hwf"));
    let out = w.run(&["pack", "--n", "16", "--p", "8", "--out", "default.hwf"]);
    assert!(out.stdout.contains("d_min=4"), "{}", out.stdout);

    let out = w.run(&[
        "pack", "--n", "40", "--p", "5", "--dmin", "6", "--sample", "7,200", "--out", "s.hwf",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(w.read("s.hwf.manifest").contains("seed=7\n"));
}

#[test]
fn alpha_scan_rows() {
    let w = Workdir::new();
    let out = w.run(&[
        "alpha-scan",
        "--n",
        "24",
        "--p",
        "4",
        "--m",
        "10",
        "--C",
        "3",
        "--trials",
        "0",
        "--seed",
        "1",
        "--csv",
        "empty.csv",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(w.read("empty.csv"), "trial,seed,m,method,size,exponent\n");

    let out = w.run(&[
        "alpha-scan",
        "--n",
        "24",
        "--p",
        "4",
        "--m",
        "10",
        "--C",
        "3",
        "--trials",
        "3",
        "--seed",
        "9",
        "--csv",
        "s.csv",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let csv = w.read("s.csv");
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("0,9,10,oracle,"), "{csv}");
    assert!(rows[2].starts_with("2,11,10,oracle,"), "{csv}");

    let out = w.run(&[
        "alpha-scan",
        "--n",
        "24",
        "--p",
        "4",
        "--m",
        "30",
        "--C",
        "3",
        "--trials",
        "1",
        "--seed",
        "9",
        "--csv",
        "x.csv",
    ]);
    assert_eq!(out.code, 0);
    assert!(w.read("x.csv").contains(",extract,"));

    let out = w.run(&[
        "alpha-scan",
        "--n",
        "24",
        "--p",
        "4",
        "--m",
        "30",
        "--C",
        "2",
        "--trials",
        "1",
        "--seed",
        "9",
        "--csv",
        "y.csv",
    ]);
    assert_eq!(out.code, 2);
}

#[test]
fn replay_reproduces_outputs() {
    let w = Workdir::new();
    construct_a1(&w);
    let out = w.run(&["extract", "--C", "3", "--in", "a1.hwf", "--out", "sub.hwf"]);
    assert_eq!(out.code, 0);
    let manifest = w.read("sub.hwf.manifest");
    let out = w.run(&["replay", "--manifest", "sub.hwf.manifest"]);
    assert_eq!(out.code, 0, "{} {}", out.stdout, out.stderr);
    assert_eq!(out.stdout, "same sub.hwf\nsame sub.hwf.cert\n");
    assert_eq!(w.read("sub.hwf.manifest"), manifest);

    // input and output share a digest here (the subset is the whole family)
    let line = manifest.lines().find(|l| l.starts_with("output=")).unwrap();
    let tampered = format!("output={} {}", "0".repeat(64), &line[72..]);
    w.write("bad.manifest", &manifest.replace(line, &tampered));
    let out = w.run(&["replay", "--manifest", "bad.manifest"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("DIFFERS sub.hwf"), "{}", out.stdout);

    w.write("a1.hwf", &golden("a2.hwf"));
    let out = w.run(&["replay", "--manifest", "sub.hwf.manifest"]);
    assert_eq!(out.code, 1);
    assert!(
        out.stdout.contains("input changed: a1.hwf"),
        "{}",
        out.stdout
    );
}

#[test]
fn malformed_inputs_exit_2() {
    let w = Workdir::new();
    w.write("dup.hwf", "HWF 1\nn=12 p=4 m=2\n1 2 3 4\n1 2 3 4\n");
    let out = w.run(&["verify", "--in", "dup.hwf"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 4"), "{}", out.stderr);
    let out = w.run(&["verify", "--in", "missing.hwf"]);
    assert_eq!(out.code, 2);
    let out = w.run(&["frobnicate"]);
    assert_eq!(out.code, 2);
}
