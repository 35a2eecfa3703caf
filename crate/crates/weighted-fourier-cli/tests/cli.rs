use serde_json::Value;
use std::process::{Command, Output};
use weighted_fourier_cli::app::Report;

fn wfi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wfi"))
        .args(args)
        .env_remove("WFI_SEED")
        .output()
        .expect("spawn wfi")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn invalid_exponent_exits_2() {
    let out = wfi(&["criteria", "--u", "pow(0)", "--v", "pow(0)", "--p", "0.5", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid"));
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    assert_eq!(wfi(&["criteria", "--u", "pow(0)"]).status.code(), Some(2));
    assert_eq!(wfi(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(wfi(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(wfi(&["--help"]).status.code(), Some(0));
}

#[test]
fn wrong_way_dsl_is_rejected() {
    let out = wfi(&["criteria", "--u", "pow(1/4", "--v", "pow(0)", "--p", "2", "--q", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn regime_one_example() {
    let v = json(&wfi(&["criteria", "--u", "pow(0.25)@d=1", "--v", "pow(0)", "--p", "4/3", "--q", "2"]));
    assert_eq!(v["report"], "criteria");
    assert_eq!(v["result"]["regime"], "I");
    let c3 = &v["result"]["constants"]["C3"];
    assert_eq!(c3["status"], "finite");
    assert!((c3["value"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["result"]["holds"], true);
}

#[test]
fn json_round_trips_through_report() {
    for args in [
        vec!["criteria", "--u", "pow(1/2)", "--v", "pow(0)", "--p", "4", "--q", "3/2"],
        vec!["hardy", "--kind", "tail", "--u", "ind(1)", "--v", "pow(0)", "--p", "2", "--q", "2"],
        vec!["norms", "--kind", "theta", "--seq", "1,1/2,1/3", "--p", "4"],
        vec!["sweep", "--u", "pow(0)", "--v", "pow(0)", "--p", "2,4", "--q", "2"],
    ] {
        let out = wfi(&args);
        let raw = json(&out);
        let report: Report = serde_json::from_value(raw.clone()).expect("schema");
        assert_eq!(serde_json::to_value(&report).unwrap(), raw, "{args:?}");
    }
}

#[test]
fn estimate_plancherel() {
    let v = json(&wfi(&[
        "estimate", "--u", "pow(0)", "--v", "pow(0)", "--p", "2", "--q", "2", "--N", "1024", "--L", "32", "--budget", "8",
    ]));
    let b = &v["bracket"];
    assert!(b["lower"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert_eq!(b["upper"]["value"].as_f64(), Some(1.0));
    assert_eq!(b["consistent"], true);
}

#[test]
fn seed_from_environment_is_deterministic() {
    let args = ["estimate", "--u", "ind(1)", "--v", "pow(0)", "--p", "3", "--q", "3", "--N", "512", "--L", "16", "--budget", "4"];
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_wfi"))
            .args(args)
            .env("WFI_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("5"), run("5"));
}

#[test]
fn csv_format_flattens() {
    let out = wfi(&["--format", "csv", "criteria", "--u", "pow(0)", "--v", "pow(0)", "--p", "2", "--q", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,value"));
    assert!(text.lines().any(|l| l == "result.constants.C3.value,1.0" || l == "result.constants.C3.value,1"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = wfi(&["--out", path.to_str().unwrap(), "criteria", "--u", "pow(0)", "--v", "pow(0)", "--p", "2", "--q", "2"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["report"], "criteria");
}

#[test]
fn plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = wfi(&["--plot-dir", d, "criteria", "--u", "pow(1/2)", "--v", "pow(0)", "--p", "4", "--q", "3/2"]);
    assert!(out.status.success());
    let xi = std::fs::read_to_string(dir.path().join("xi_over_U.csv")).unwrap();
    let mut lines = xi.lines();
    assert_eq!(lines.next(), Some("t,xi,U,xi_over_U"));
    let ts: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert!(ts.len() > 10);
    assert!(ts.windows(2).all(|w| w[0] < w[1]));

    let out = wfi(&[
        "--plot-dir", d, "estimate", "--u", "pow(0)", "--v", "pow(0)", "--p", "2", "--q", "2", "--N", "512", "--L", "16", "--budget", "4",
    ]);
    assert!(out.status.success());
    let res = std::fs::read_to_string(dir.path().join("ratio_vs_resolution.csv")).unwrap();
    assert_eq!(res.lines().next(), Some("N,L,lower"));
    assert!(res.lines().count() >= 3);
}

#[test]
fn reports_without_series_write_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("plots");
    let out = wfi(&["--plot-dir", d.to_str().unwrap(), "criteria", "--u", "pow(0)", "--v", "pow(0)", "--p", "2", "--q", "2"]);
    assert!(out.status.success());
    assert!(!d.exists() || std::fs::read_dir(&d).unwrap().next().is_none());
}

#[test]
fn verify_single_suite() {
    let out = wfi(&["verify", "--suite", "rearrangement"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("PASS criterion  1"));
}

#[test]
fn discrete_hardy_accepts_inline_sequences() {
    // p = q = 1: K = sup_n (Σ_{k≤n} u_k) sup_{j≥n} 1/v_j = 1
    let v = json(&wfi(&["hardy", "--kind", "headsum", "--u", "1", "--v", "1,1,1", "--p", "1", "--q", "1"]));
    assert_eq!(v["kind"], "HeadSum");
    assert!((v["constant"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    // p = 2 with v ≡ 1 is unbounded: x = (1, ..., 1)
    let v = json(&wfi(&["hardy", "--kind", "headsum", "--u", "1", "--v", "1,1,1", "--p", "2", "--q", "2"]));
    assert_eq!(v["constant"]["status"], "infinite");
}
