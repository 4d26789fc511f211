use eulersum_cli::RunReport;
use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eulersum"))
        .args(args)
        .env("EULERSUM_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn report(cache: &Path, args: &[&str]) -> (RunReport, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(cache, &full);
    let rep: RunReport = serde_json::from_slice(&out.stdout).expect("one JSON document");
    (rep, out.status.code().unwrap())
}

fn value_re(rep: &RunReport) -> f64 {
    rep.results["value"]["value"][0].as_f64().unwrap()
}

#[test]
fn evaluation_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let (rep, code) = report(&cache, &["eval", "polylog", "--p", "2", "--x", "c:-1+0i"]);
    assert_eq!(code, 0);
    assert!((value_re(&rep) + std::f64::consts::PI.powi(2) / 12.0).abs() < 1e-12);
    let (rep, _) = report(&cache, &["eval", "eulersum", "--p", "1", "--q", "2", "--xs", "root:0/1", "--x", "root:0/1"]);
    assert!((value_re(&rep) - 2.404113806319188).abs() < 1e-8);
    let (rep, _) = report(&cache, &["eval", "amzv", "--idx", "bar3,2,bar1,4"]);
    assert_eq!(rep.results["spec"]["k"], serde_json::json!([3, 2, 1, 4]));
    assert_eq!(rep.results["spec"]["x"], serde_json::json!(["-1", "1", "-1", "1"]));
}

#[test]
fn identity_and_residue_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let (rep, code) = report(&cache, &["identity", "list"]);
    assert_eq!((code, rep.results.as_array().unwrap().len()), (0, 19));
    let (rep, code) = report(&cache, &["identity", "check", "--id", "eq-3.6", "--params", "q=3"]);
    assert_eq!(code, 0);
    let lhs = rep.results[0]["lhs"]["value"][0].as_f64().unwrap();
    assert!((lhs - std::f64::consts::PI.powi(4) / 72.0).abs() < 1e-8);
    let (rep, code) = report(&cache, &["identity", "sweep", "--id", "cor-3.3", "--seed", "7", "--count", "20"]);
    assert_eq!((code, rep.summary.passed), (0, 20));
    let f = ["residue", "check", "--kernel", "F", "--p", "1", "--q", "2", "--x", "root:0/1", "--xs", "root:1/2", "--nmax", "10000"];
    assert_eq!(report(&cache, &f).1, 0);
    let g = ["residue", "check", "--kernel", "G", "--p", "1,1", "--q", "3", "--xs", "c:0.7+0i,c:0.5+0i", "--nmax", "300"];
    let (rep, code) = report(&cache, &g);
    assert_eq!(code, 0);
    let t = &rep.results["extrapolated_total"]["value"];
    assert!(t[0].as_f64().unwrap().hypot(t[1].as_f64().unwrap()) <= 1e-9);
    let d = ["residue", "decompose", "--kernel", "F", "--p", "1,1", "--q", "2", "--x", "root:1/2", "--xs", "root:1/2,root:1/2"];
    assert_eq!(report(&cache, &d).1, 0);
}

#[test]
fn exit_code_contract() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    assert_eq!(run(&cache, &["identity", "check", "--id", "eq-3.6", "--params", "q=2"]).status.code(), Some(0));
    // The displayed sign of the 6ζ(2̄)ζ(1̄,1̄) term fails numerically.
    let (rep, code) = report(&cache, &["identity", "check", "--id", "ex-5.2b"]);
    assert_eq!((code, rep.summary.exit_code, rep.summary.pass), (1, 1, false));
    for bad in [
        vec!["identity", "check", "--id", "thm-9.9"],
        vec!["identity", "check", "--id", "thm-3.1", "--params", "p=1,q=1,x=root:0/1,y=root:0/1"],
        vec!["eval", "polylog", "--p", "1", "--x", "root:0/1"],
        vec!["eval", "polylog", "--p", "2", "--x", "1"],
        vec!["eval", "polylog", "--p", "2"],
        vec!["eval", "mpl", "--k", "2", "--xs", "root:0/1", "--accel", "fast"],
        vec!["residue", "check", "--kernel", "F", "--p", "1", "--q", "2", "--xs", "root:1/2"],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&cache, &bad).status.code(), Some(2), "{bad:?}");
    }
    let (rep, code) = report(&cache, &["identity", "check", "--id", "thm-9.9"]);
    assert_eq!((code, rep.summary.exit_code), (2, 2));
    assert!(rep.error.unwrap().contains("thm-9.9"));
}

#[test]
fn warm_cache_is_transparent_and_cheaper() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let args = ["identity", "sweep", "--id", "thm-3.1", "--seed", "3", "--count", "10"];
    let (cold, c1) = report(&cache, &args);
    assert!(cache.exists());
    let (warm, c2) = report(&cache, &args);
    assert_eq!(c1, c2);
    assert_eq!(cold.results, warm.results);
    assert_eq!(cold.config.cache_entries_loaded, 0);
    assert!(warm.config.cache_entries_loaded > 0);
    assert!(warm.terms_summed < cold.terms_summed, "{} vs {}", warm.terms_summed, cold.terms_summed);
}

#[test]
fn corrupt_cache_warns_and_cold_starts() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    std::fs::write(&cache, "{not json").unwrap();
    let out = run(&cache, &["eval", "polylog", "--p", "3", "--x", "root:1/3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(serde_json::from_str::<serde_json::Value>(&text).is_ok());
}

#[test]
fn cache_flag_overrides_environment() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.json");
    let flag_path = dir.path().join("flag.json");
    let out = run(&env_path, &["--cache", flag_path.to_str().unwrap(), "eval", "polylog", "--p", "2", "--x", "root:1/5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(flag_path.exists() && !env_path.exists());
}

#[test]
fn report_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let (rep, _) = report(&cache, &["identity", "check", "--id", "thm-3.2", "--params", "p1=1,p2=2,q=2,x1=root:1/3,x2=root:1/2"]);
    let text = serde_json::to_string(&rep).unwrap();
    let back: RunReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rep);
    assert_eq!(rep.command[1..3], ["--json".to_string(), "identity".to_string()]);
}
