//! End-to-end runs of the `symdyn` binary on the shipped configurations.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn symdyn(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_symdyn")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

fn reports(path: &PathBuf) -> Vec<Value> {
    let text = std::fs::read_to_string(path).expect("json written");
    serde_json::from_str::<Value>(&text).expect("valid json").as_array().expect("array").clone()
}

fn run_json(cmd: &[&str], cfg: &str, tag: &str) -> (i32, Vec<Value>) {
    let json = scratch(&format!("{tag}.json"));
    let c = config(cfg);
    let mut args: Vec<&str> = cmd.to_vec();
    args.extend(["--config", c.to_str().unwrap(), "--json", json.to_str().unwrap()]);
    let (code, _, err) = symdyn(&args);
    assert!(err.is_empty() || code != 3, "{err}");
    (code, reports(&json))
}

#[test]
fn describe_counts_factors() {
    let (code, r) = run_json(&["describe", "--depth", "5"], "golden.toml", "describe_golden");
    assert_eq!(code, 0);
    assert_eq!(r[0]["metrics"]["factor_counts"], serde_json::json!([2, 3, 5, 8, 13]));
    assert_eq!(r[0]["metrics"]["atom_counts"]["1,1"], 3);
    let (_, r) = run_json(&["describe", "--depth", "6"], "fibonacci.toml", "describe_fib");
    assert_eq!(r[0]["metrics"]["factor_counts"], serde_json::json!([2, 3, 4, 5, 6, 7]));
    let (_, r) = run_json(&["describe", "--depth", "4"], "full_shift.toml", "describe_full");
    assert_eq!(r[0]["metrics"]["factor_counts"], serde_json::json!([2, 4, 8, 16]));
}

#[test]
fn report_schema() {
    let (code, r) = run_json(&["check", "--suite", "ck"], "golden.toml", "schema");
    assert_eq!(code, 0);
    for key in ["suite", "verdict", "params", "counterexamples", "coverage", "timings_ms"] {
        assert!(r[0].get(key).is_some(), "missing {key}");
    }
    assert_eq!(r[0]["suite"], "ck");
    assert_eq!(r[0]["verdict"], "pass");
}

#[test]
fn check_suites_on_golden_mean() {
    let (code, r) = run_json(&["check", "--suite", "axioms,stone,modsat"], "golden.toml", "golden_suites");
    assert_eq!(code, 0);
    let names: Vec<_> = r.iter().map(|x| x["suite"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["axioms", "disjointness", "stone-separation", "stone-iso", "modsat-matrix", "modsat-boolean"]);
}

#[test]
fn crossed_product_on_two_sided_full_shift() {
    let (code, r) = run_json(&["check", "--suite", "crossed"], "full_shift_two_sided.toml", "crossed");
    assert_eq!(code, 0);
    assert_eq!(r[0]["params"]["radius"], 3);
}

#[test]
fn ideals_with_dot() {
    let dot = scratch("ut.dot");
    let c = config("upper_triangular.toml");
    let (code, out, _) = symdyn(&["ideals", "--config", c.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("digraph ideals"));
    assert_eq!(text.matches(" -> ").count(), 2);
    let (_, r) = run_json(&["ideals", "--resolution", "2,2"], "full_shift.toml", "ideals_full");
    assert_eq!(r[0]["metrics"]["count"], 2);
}

#[test]
fn special_verdicts() {
    let (code, r) = run_json(&["special"], "golden.toml", "special_golden");
    assert_eq!(code, 1);
    assert_eq!(r[0]["verdict"], "fail");
    let (code, r) = run_json(&["special"], "fibonacci.toml", "special_fib");
    assert_eq!(code, 0);
    assert_eq!(r[0]["metrics"]["n_x"], 1);
}

#[test]
fn psi_and_units() {
    let (code, r) = run_json(&["psi", "--resolution", "2,2"], "fibonacci.toml", "psi_fib");
    assert_eq!(code, 0);
    assert_eq!(r[1]["suite"], "psi");
    let (code, r) = run_json(&["psi"], "golden.toml", "psi_golden");
    assert_eq!(code, 1);
    assert_eq!(r.len(), 1);
    let (code, _) = run_json(&["units"], "fibonacci.toml", "units_fib");
    assert_eq!(code, 0);
}

#[test]
fn seeded_runs_are_deterministic() {
    let strip = |mut v: Vec<Value>| {
        for r in &mut v {
            r["timings_ms"] = Value::Null;
        }
        v
    };
    let (_, a) = run_json(&["check", "--suite", "lambda-phi", "--seed", "7"], "golden.toml", "det_a");
    let (_, b) = run_json(&["check", "--suite", "lambda-phi", "--seed", "7"], "golden.toml", "det_b");
    assert_eq!(strip(a.clone()), strip(b));
    assert_eq!(a[0]["params"]["seed"], 7);
}

#[test]
fn input_errors_exit_three() {
    let golden = config("golden.toml");
    let g = golden.to_str().unwrap();
    assert_eq!(symdyn(&["describe", "--config", "/nonexistent.toml"]).0, 3);
    assert_eq!(symdyn(&["check", "--suite", "bogus", "--config", g]).0, 3);
    assert_eq!(symdyn(&["check", "--suite", "crossed", "--config", g]).0, 3);
    assert_eq!(symdyn(&["describe", "--config", g, "--resolution", "3"]).0, 3);
    assert_eq!(symdyn(&["describe", "--config", g, "--coverage-floor", "1.5"]).0, 3);
    assert_eq!(symdyn(&["describe"]).0, 3);
    let bad = scratch("bad.toml");
    std::fs::write(&bad, "[system]\nalphabet = [\"a\", \"b\"]\nkind = \"matrix\"\nmatrix = [[1, 2], [1, 0]]\n").unwrap();
    let (code, _, err) = symdyn(&["describe", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(err.starts_with("error:"));
}

#[test]
fn low_coverage_is_inconclusive() {
    // no room around the core: most relation instances leave the basis
    let cfg = scratch("tight.toml");
    std::fs::write(&cfg, "[system]\nalphabet = [\"a\", \"b\"]\nkind = \"full\"\n[bounds]\nbasis = [1, 1]\nclosure_depth = 0\ncoverage_floor = 1.0\n").unwrap();
    let (code, out, _) = symdyn(&["check", "--suite", "definition", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
}
