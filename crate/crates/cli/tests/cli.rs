use std::io::Write;
use std::process::Command;

use clarkson_cli::{run, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn clarkson(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("clarkson").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn field(row: &str, k: usize) -> f64 {
    row.split(',').nth(k).unwrap().parse().unwrap()
}

#[test]
fn verify_main_example_from_file() {
    let f = json_file(r#"{"pairs":[{"x":[1,1],"y":[1,0]}]}"#);
    let r = clarkson(&["verify", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--input", f.path().to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "pair_index,ineq_id,p,q,lhs,rhs,gap,scale,normalized_gap,verdict");
    assert!(lines[1].starts_with("0,main-1.7,2,3,"));
    assert!((field(lines[1], 6) - 4.523486).abs() < 1e-6);
    assert!(lines[1].ends_with(",HOLDS"));
    assert!(!r.out.contains('\r'));
}

#[test]
fn verify_rejects_bad_input() {
    let neg = json_file(r#"{"pairs":[{"x":[1,1],"y":[1,0]},{"x":[1,1],"y":[-1,0]}]}"#);
    let r = clarkson(&["verify", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--input", neg.path().to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("pair 1"), "{}", r.err);
    assert!(r.out.is_empty());

    let empty = json_file(r#"{"pairs":[]}"#);
    let r = clarkson(&["verify", "--ineq", "main-1.7", "--p", "2", "--input", empty.path().to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("no input pairs"));

    let bad = json_file(r#"{"pairs":[{"x":[1],"y":[1]},{"x":[1],"y":"oops"}]}"#);
    let r = clarkson(&["verify", "--ineq", "c-1.1", "--p", "3", "--input", bad.path().to_str().unwrap()]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("pair 1"), "{}", r.err);

    let r = clarkson(&["verify", "--ineq", "main-1.7", "--p", "3", "--q", "2", "--x", "1", "--y", "0"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = clarkson(&["verify", "--ineq", "nope", "--p", "3", "--x", "1", "--y", "0"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = clarkson(&["verify", "--ineq", "c-1.1", "--p", "3"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn verify_rows_per_pair_and_exponent() {
    let f = json_file(r#"{"pairs":[{"x":[1,-2],"y":[0.5,3]},{"x":[2,0],"y":[1,0],"w":[1,2]}]}"#);
    let r = clarkson(&["verify", "--ineq", "c-1.3-left", "--p", "1.5,2,3", "--input", f.path().to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().count(), 1 + 2 * 3);
    // the conjugate family derives q from p
    let row = r.out.lines().nth(1).unwrap();
    assert_eq!(field(row, 3), 3.0);
}

#[test]
fn verify_scalar_and_swap() {
    let r = clarkson(&["verify", "--ineq", "cor-1.6", "--q", "3", "--x", "2", "--y", "1"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let row = r.out.lines().nth(1).unwrap();
    assert_eq!((field(row, 4), field(row, 5), field(row, 6)), (20.0, 28.0, 8.0));

    let r = clarkson(&["verify", "--ineq", "swap-2.8", "--q", "2", "--x", "3,2", "--y", "1,1"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(field(r.out.lines().nth(1).unwrap(), 6) > 0.0);
}

#[test]
fn scan_counts_cells_and_is_reproducible() {
    let args = [
        "scan", "--ineq", "main-1.7", "--p-grid", "2:4:1", "--q-grid", "2:4:1", "--samples", "300", "--seed", "11",
    ];
    let a = clarkson(&args);
    assert_eq!(a.code, EXIT_OK, "{}", a.err);
    let lines: Vec<&str> = a.out.lines().collect();
    assert_eq!(lines[0], "ineq_id,p,q,n_samples,min_normalized_gap,violations,seed");
    assert_eq!(lines.len(), 1 + 6);
    assert_eq!(a.err.matches("skipped").count(), 3);
    for row in &lines[1..] {
        assert!(field(row, 2) >= field(row, 1));
        assert!(row.ends_with(",0,11"), "{row}");
    }
    let b = clarkson(&args);
    assert_eq!(a.out, b.out);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "3"]);
    assert_eq!(a.out, clarkson(&threaded).out);
}

#[test]
fn scan_rejects_bad_grids() {
    for grid in ["2:4", "2:4:0", "a:b:c", "4:2:1"] {
        let r = clarkson(&["scan", "--ineq", "main-1.7", "--p-grid", grid]);
        assert_eq!(r.code, EXIT_USAGE, "{grid}");
    }
    let r = clarkson(&["scan", "--ineq", "main-1.7", "--p-grid", "2:3:1", "--dist", "gaussian"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = clarkson(&["scan", "--ineq", "prop-1.4", "--p-grid", "2:3:1", "--constraint", "signed"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn scan_other_families() {
    let r = clarkson(&["scan", "--ineq", "c-1.1", "--p-grid", "1.5:3:0.5", "--samples", "100", "--dist", "sparse:0.5"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().count(), 1 + 4);
    let r = clarkson(&["scan", "--ineq", "swap-2.8", "--q-grid", "1:3:1", "--samples", "100", "--dist", "exponential"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().count(), 1 + 3);
}

#[test]
fn search_statuses() {
    let r = clarkson(&["search", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--budget", "500", "--seed", "4"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("status: NO_VIOLATION"));
    assert!(r.out.contains("seed: 4"));
    assert!(r.out.contains("best_normalized_gap: "));

    let r = clarkson(&["search", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--budget", "0"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("status: BUDGET_EXHAUSTED"));

    let r = clarkson(&["search", "--ineq", "main-1.7", "--p", "3", "--q", "2"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = clarkson(&["search", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--constraint", "signed"]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = clarkson(&[
        "search", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--constraint", "signed", "--explore", "--budget", "200",
    ]);
    assert_ne!(r.code, EXIT_USAGE, "{}", r.err);
    assert!(r.out.contains("exploratory: true"));
}

#[test]
fn inverted_search_writes_reproducible_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    let args = [
        "search", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--budget", "300", "--seed", "9",
        "--invert-orientation", "--out", path.to_str().unwrap(),
    ];
    let r = clarkson(&args);
    assert_eq!(r.code, EXIT_VIOLATION, "{}", r.err);
    assert!(r.out.contains("status: VIOLATION_FOUND"));
    let first = std::fs::read_to_string(&path).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["seed"], 9);
    assert_eq!(doc["p"], 2.0);
    assert_eq!(doc["pairs"].as_array().unwrap().len(), 1);
    assert_eq!(clarkson(&args).out, r.out);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);

    // the witness file is valid verify input; as stated the inequality holds there
    let v = clarkson(&["verify", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--input", path.to_str().unwrap()]);
    assert_eq!(v.code, EXIT_OK, "{}", v.err);
}

#[test]
fn extremal_search_runs() {
    let r = clarkson(&["search", "--ineq", "prop-1.4", "--p", "2", "--q", "3", "--mode", "extremal", "--budget", "400"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.contains("converged: "));
}

#[test]
fn phi_table() {
    let r = clarkson(&["phi", "--u", "1,0.5", "--v", "0,0", "--p", "2", "--q", "3", "--grid-size", "9"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "t,phi,phi_prime,is_breakpoint_adjacent");
    assert_eq!(lines.len(), 1 + 9 + 3);
    let phis: Vec<f64> = lines[1..10].iter().map(|l| field(l, 1)).collect();
    assert!(phis.iter().all(|&v| v == phis[0]));
    assert_eq!(lines[1].split(',').nth(2), Some(""));
    assert_eq!(lines[9].split(',').nth(2), Some(""));
    assert_eq!(*lines.last().unwrap(), "is_nondecreasing,true");

    // u − t v vanishes in its second entry at t = 1, an endpoint
    let r = clarkson(&["phi", "--u", "2,1", "--v", "1,1", "--p", "2.5", "--q", "4"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.lines().count(), 1 + 257 + 3);
    assert!(r.out.ends_with("is_nondecreasing,true\n"));

    let r = clarkson(&["phi", "--u", "1,0.5", "--v", "2,0", "--p", "2", "--q", "3"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn phi_from_file() {
    let f = json_file(r#"{"pairs":[{"x":[3,1],"y":[1,1],"w":[1,0.5]}]}"#);
    let r = clarkson(&["phi", "--input", f.path().to_str().unwrap(), "--p", "3", "--q", "3", "--grid-size", "17"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.ends_with("is_nondecreasing,true\n"));
}

#[test]
fn chi_table() {
    let r = clarkson(&["chi", "--p", "4/3", "--q", "4"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().next(), Some("s,chi"));
    assert!(r.out.contains("has_positive,true\nhas_negative,true\n"));
    let changes: usize = r
        .out
        .lines()
        .find_map(|l| l.strip_prefix("sign_changes,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!(changes >= 1);

    let r = clarkson(&["chi", "--p", "2", "--q", "2", "--grid-size", "11"]);
    assert!(r.out.contains("sign_changes,0\n"));
    assert!(r.out.lines().skip(1).take(11).all(|l| field(l, 1).abs() <= 1e-12));

    let r = clarkson(&["chi", "--p", "2", "--q", "2", "--grid-size", "2"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("grid too coarse"));
    for c in ["0", "1.5", "-1"] {
        let r = clarkson(&["chi", "--p", "2", "--q", "3", "--c", c]);
        assert_eq!(r.code, EXIT_USAGE, "{c}");
    }
}

#[test]
fn tolerance_overrides() {
    let r = clarkson(&["--rel-tol", "1e-6", "--borderline-band", "1e-3", "verify", "--ineq", "cor-1.6", "--q", "2", "--x", "1", "--y", "1"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("BORDERLINE"));
    let r = clarkson(&["--rel-tol", "1e-3", "--borderline-band", "1e-6", "verify", "--ineq", "cor-1.6", "--q", "2", "--x", "1", "--y", "1"]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(clarkson(&[]).code, EXIT_USAGE);
    assert_eq!(clarkson(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(clarkson(&["chi", "--p", "x", "--q", "2"]).code, EXIT_USAGE);
    let r = clarkson(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("verify"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_clarkson");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&["verify", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--x", "1,1", "--y", "1,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("HOLDS"));
    let o = status(&["search", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--budget", "50", "--invert-orientation"]);
    assert_eq!(o.status.code(), Some(1));
    let o = status(&["chi", "--p", "2", "--q", "2", "--grid-size", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_from_environment() {
    let bin = env!("CARGO_BIN_EXE_clarkson");
    let search = |seed: Option<&str>| {
        let mut cmd = Command::new(bin);
        cmd.args(["search", "--ineq", "main-1.7", "--p", "2", "--q", "3", "--budget", "50"]);
        cmd.env_remove("CLARKSON_SEED");
        if let Some(s) = seed {
            cmd.env("CLARKSON_SEED", s);
        }
        String::from_utf8(cmd.output().unwrap().stdout).unwrap()
    };
    assert!(search(Some("77")).contains("seed: 77"));
    assert!(search(None).contains("seed: 0"));
    // an explicit flag wins over the environment
    let mut cmd = Command::new(bin);
    cmd.args(["search", "--ineq", "main-1.7", "--p", "2", "--budget", "10", "--seed", "5"]);
    cmd.env("CLARKSON_SEED", "77");
    assert!(String::from_utf8(cmd.output().unwrap().stdout).unwrap().contains("seed: 5"));
}
