use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .env_remove("WORKBENCH_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn out_arg(dir: &TempDir) -> String {
    dir.path().to_str().unwrap().to_string()
}

#[test]
fn bounds_prints_report() {
    let o = workbench(&["bounds", "--n", "1e6", "--k", "1e4", "--eps", "0.1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["membership"], 100.0);
    assert_eq!(v["copies"], 1000.0);
    assert_eq!(v["n_regime"], true);
    assert_eq!(v["t"], 2.0);
}

#[test]
fn bounds_flags_out_of_regime_and_rejects_zero_eps() {
    let o = workbench(&["bounds", "--n", "100", "--k", "50", "--eps", "2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n_regime"], false);
    assert_eq!(v["eps_regime"], false);
    assert_eq!(code(&workbench(&["bounds", "--n", "1e6", "--k", "1e4", "--eps", "0"])), 2);
    assert_eq!(code(&workbench(&["bounds", "--n", "1e6", "--k", "1e4"])), 2);
    assert_eq!(code(&workbench(&["bounds", "--n", "abc", "--k", "1e4", "--eps", "0.1"])), 2);
}

#[test]
fn bounds_cprime_flag_moves_t() {
    let o = workbench(&["bounds", "--n", "1e6", "--k", "1e4", "--eps", "0.1", "--ell-prime", "2", "--cprime", "10"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["t"], 20.0);
    assert_eq!(v["cprime"], 10.0);
}

#[test]
fn verify_single_instance() {
    let dir = TempDir::new().unwrap();
    let o = workbench(&["verify", "--instance", "6,1,2", "--t", "1", "--t", "2", "--out", &out_arg(&dir)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "check_id,n,k,k_prime,t,ell,closed_form,brute_force,discrepancy,pass,millis"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r.ends_with(",true,0")));
    // stable order: check id first, then instance and t
    assert!(rows[0].starts_with("PSI_COEFFS,6,1,2,1.0,0,"));
    assert!(rows[1].starts_with("PSI_COEFFS,6,1,2,2.0,1,"));
    assert!(rows[19].starts_with("PSI_POWER,6,1,2,2.0,1,"));
    let report = read_json(&dir.path().join("verify.json"));
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(report["all_pass"], true);
    assert_eq!(report["checks"].as_array().unwrap().len(), 10);
    assert_eq!(report["config"]["instances"][0], "6,1,2");
    assert!(report["checks"][0]["statement"].as_str().unwrap().contains('Γ'));
}

#[test]
fn verify_impossible_tolerance_fails() {
    let dir = TempDir::new().unwrap();
    let o = workbench(&[
        "verify",
        "--instance",
        "6,1,2",
        "--t",
        "1",
        "--tol-norm",
        "1e-30",
        "--tol-exact",
        "1e-30",
        "--out",
        &out_arg(&dir),
    ]);
    assert_eq!(code(&o), 1);
    let report = read_json(&dir.path().join("verify.json"));
    assert!(report["failed"].as_u64().unwrap() > 0);
}

#[test]
fn verify_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = out_arg(&dir);
    let cfg = dir.path().join("empty.cfg");
    std::fs::write(&cfg, "instance=\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify", "--config", cfg.to_str().unwrap(), "--out", &out],
        vec!["verify", "--instance", "6,2,2", "--out", &out],
        vec!["verify", "--instance", "6,1", "--out", &out],
        vec!["verify", "--instance", "19,3,9", "--out", &out],
        vec!["verify", "--instance", "6,1,2", "--check", "NOPE", "--out", &out],
        vec!["verify", "--instance", "6,1,2", "--t", "0.5", "--out", &out],
        vec!["verify", "--instance", "6,1,2", "--jobs", "0", "--out", &out],
        vec!["verify", "--instance", "6,1,2", "--tol-norm", "-1", "--out", &out],
        vec!["verify", "--config", "/nonexistent/x.cfg"],
        vec!["frobnicate"],
    ];
    for args in cases {
        assert_eq!(code(&workbench(&args)), 2, "{args:?}");
    }
}

#[test]
fn verify_reads_config_and_flags_override() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg,
        "# two instances, one t\ninstance=6,1,2\ninstance = 7,1,2\nt=1\ncheck=NORM_GAMMA\ncheck=TABLES\ntol-norm=1e-9\n",
    )
    .unwrap();
    let o = workbench(&["verify", "--config", cfg.to_str().unwrap(), "--out", &out_arg(&dir)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_json(&dir.path().join("verify.json"));
    assert_eq!(report["rows"], 4);
    assert_eq!(report["config"]["tol_norm"], 1e-9);
    let o = workbench(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--instance",
        "8,2,3",
        "--tol-norm",
        "1e-7",
        "--out",
        &out_arg(&dir),
    ]);
    assert_eq!(code(&o), 0);
    let report = read_json(&dir.path().join("verify.json"));
    assert_eq!(report["rows"], 2);
    assert_eq!(report["config"]["instances"][0], "8,2,3");
    assert_eq!(report["config"]["tol_norm"], 1e-7);

    std::fs::write(&cfg, "instance=6,1,2\nbogus=1\n").unwrap();
    assert_eq!(code(&workbench(&["verify", "--config", cfg.to_str().unwrap(), "--out", &out_arg(&dir)])), 2);
    std::fs::write(&cfg, "seed=1\nseed=2\n").unwrap();
    assert_eq!(code(&workbench(&["verify", "--config", cfg.to_str().unwrap(), "--out", &out_arg(&dir)])), 2);
}

#[test]
fn verify_explicit_ell_list() {
    let dir = TempDir::new().unwrap();
    let o = workbench(&[
        "verify", "--instance", "8,2,3", "--t", "4", "--check", "PSI_POWER", "--ell", "1", "--ell", "2", "--ell", "3",
        "--out", &out_arg(&dir),
    ]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    let ells: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(5).unwrap()).collect();
    assert_eq!(ells, vec!["1", "2"]);
}

#[test]
fn simulate_qcount_campaign() {
    let dir = TempDir::new().unwrap();
    let o = workbench(&[
        "simulate", "qcount", "--n", "1024", "--k", "16", "--eps", "1", "--trials", "1000", "--seed", "7", "--out",
        &out_arg(&dir),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let agg = read_json(&dir.path().join("aggregate.json"));
    assert!(agg["aggregate"]["success_rate"].as_f64().unwrap() >= 0.66);
    assert_eq!(agg["config"]["k_prime"], 32);
    let csv = std::fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1001);
    assert!(csv.starts_with("index,hidden_size,decision,correct,aborted,in_regime,copies,"));
}

#[test]
fn simulate_usage_errors() {
    let dir = TempDir::new().unwrap();
    let out = out_arg(&dir);
    let cases: Vec<Vec<&str>> = vec![
        vec!["simulate", "qcount", "--k", "16", "--eps", "1", "--trials", "0", "--out", &out],
        vec!["simulate", "grover", "--k", "16", "--eps", "1", "--trials", "5", "--out", &out],
        vec!["simulate", "--k", "16", "--eps", "1", "--trials", "5", "--out", &out],
        vec!["simulate", "qcount", "--k", "16", "--eps", "0.3", "--trials", "5", "--out", &out],
        vec!["simulate", "qcount", "--k", "16", "--eps", "1", "--trials", "5", "--charge", "x", "--out", &out],
        vec!["simulate", "subset", "--k", "16", "--eps", "1", "--trials", "5", "--ell", "17", "--out", &out],
    ];
    for args in cases {
        assert_eq!(code(&workbench(&args)), 2, "{args:?}");
    }
}

#[test]
fn simulate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let out = out_arg(&dir);
    let files = |dir: &TempDir| {
        (
            std::fs::read(dir.path().join("trials.csv")).unwrap(),
            std::fs::read(dir.path().join("aggregate.json")).unwrap(),
        )
    };
    let args = ["simulate", "bootstrap", "--n", "4096", "--k", "64", "--eps", "0.125", "--trials", "200", "--seed", "5"];
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", &out]);
    assert_eq!(code(&workbench(&a)), 0);
    let first = files(&dir);
    assert_eq!(code(&workbench(&a)), 0);
    assert_eq!(files(&dir), first);

    // the seed can come from the environment
    let mut b: Vec<&str> = args[..args.len() - 2].to_vec();
    b.extend(["--out", &out]);
    let o = Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(&b)
        .env("WORKBENCH_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(files(&dir), first);
    assert_eq!(code(&workbench(&b)), 0);
    assert_ne!(files(&dir).0, first.0);
}

#[test]
fn simulate_from_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("sim.cfg");
    std::fs::write(&cfg, "procedure=collision\nk=256\neps=0.5\ntrials=300\nseed=3\nrepeats=3\n").unwrap();
    let o = workbench(&["simulate", "--config", cfg.to_str().unwrap(), "--out", &out_arg(&dir)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let agg = read_json(&dir.path().join("aggregate.json"));
    assert_eq!(agg["config"]["budget"], 256);
    assert_eq!(agg["config"]["repeats"], 3);
    assert_eq!(agg["aggregate"]["mean_tally"]["copies"], 768.0);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&workbench(&["--help"])), 0);
    assert_eq!(code(&workbench(&["--version"])), 0);
    assert_eq!(code(&workbench(&[])), 2);
}
