use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gapprob")).args(args).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("each line is a JSON object"))
        .collect()
}

fn single(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = records(&out);
    assert_eq!(r.len(), 1);
    r.pop().unwrap()
}

fn num(v: &Value, key: &str) -> f64 {
    v["outputs"][key].as_f64().unwrap_or_else(|| panic!("no numeric output {key} in {v}"))
}

fn assert_usage_error(args: &[&str]) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
}

#[test]
fn constants_record() {
    let r = single(&["constants"]);
    assert_eq!(r["command"], "constants");
    assert!((num(&r, "zeta_prime_minus1") + 0.1654211437).abs() < 1e-10);
    assert!((num(&r, "c0") + 0.4385011).abs() < 1e-6);
    assert_eq!(r["provenance"]["c0"], "constants");
}

#[test]
fn single_site_log_determinant() {
    let r = single(&["toeplitz", "--n", "1", "--alpha", "1.5707963", "--log"]);
    assert!((num(&r, "log_det") - 0.5f64.ln()).abs() < 1e-7);
    assert_eq!(r["inputs"]["n"], 1);
    assert_eq!(r["provenance"]["log_det"], "toeplitz");
    let plain = single(&["toeplitz", "--n", "1", "--alpha", "1.5707963"]);
    assert!((num(&plain, "det") - 0.5).abs() < 1e-7);
}

#[test]
fn beta_matches_alpha() {
    let a = single(&["toeplitz", "--n", "6", "--alpha", "2.8415926535897931", "--log"]);
    let b = single(&["toeplitz", "--n", "6", "--beta", "0.3", "--log"]);
    assert!((num(&a, "log_det") - num(&b, "log_det")).abs() < 1e-9);
    assert_eq!(b["inputs"]["beta"], 0.3);
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = records(&out);
    assert!(r.len() >= 10);
    assert!(r.iter().all(|x| x["outputs"]["pass"] == true));
    let routes: Vec<&str> = r.iter().map(|x| x["provenance"]["defect"].as_str().unwrap()).collect();
    for route in ["toeplitz", "fredholm", "rh-model", "painleve", "constants"] {
        assert!(routes.contains(&route), "{route}");
    }
}

#[test]
fn every_output_has_a_route() {
    let cases: [&[&str]; 6] = [
        &["fredholm", "--s", "1"],
        &["delta", "--n", "10", "--alpha", "1.3"],
        &["theta", "--n", "10", "--alpha", "1.3"],
        &["painleve", "--n", "4", "--alpha", "2.0"],
        &["dyson-fit"],
        &["dinteg", "--n", "4", "--alpha", "1.0", "--quad-order", "16"],
    ];
    for args in cases {
        let r = single(args);
        let outs = r["outputs"].as_object().unwrap();
        let prov = r["provenance"].as_object().unwrap();
        assert_eq!(outs.keys().collect::<Vec<_>>(), prov.keys().collect::<Vec<_>>(), "{args:?}");
        assert_eq!(r["command"], args[0]);
    }
}

#[test]
fn fits_land_near_the_constant() {
    let w = single(&["widom-fit", "--n", "40:160:x2", "--alpha", "1.2"]);
    assert!((num(&w, "c0") - num(&w, "c0_reference")).abs() < 0.01);
    let d = single(&["dyson-fit", "--s", "3,4.5,6"]);
    assert!((num(&d, "c0") - num(&d, "c0_reference")).abs() < 5e-3);
}

#[test]
fn validation_errors_exit_2() {
    assert_usage_error(&["toeplitz", "--n", "0", "--alpha", "1"]);
    assert_usage_error(&["toeplitz", "--n", "3", "--alpha", "4"]);
    assert_usage_error(&["toeplitz", "--n", "3", "--alpha=-1"]);
    assert_usage_error(&["toeplitz", "--n", "3"]);
    assert_usage_error(&["toeplitz", "--n", "3", "--alpha", "1", "--beta", "2"]);
    assert_usage_error(&["fredholm", "--s", "0"]);
    assert_usage_error(&["fredholm", "--s", "1", "--gamma", "2"]);
    assert_usage_error(&["delta", "--n", "5", "--alpha", "3.141592653589793"]);
    assert_usage_error(&["constants", "--bogus"]);
    assert_usage_error(&["nonsense"]);
    assert_usage_error(&["sweep", "--quantity", "toeplitz", "--n", "1:4:*2", "--alpha", "1"]);
    assert_usage_error(&["sweep", "--quantity", "fredholm", "--n", "3", "--s", "1"]);
    assert_usage_error(&["sweep", "--quantity", "delta", "--n", "3"]);
    assert_usage_error(&["sweep", "--quantity", "theta", "--n", "3", "--alpha", "1", "--jobs", "0"]);
    assert_usage_error(&["widom-fit", "--n", "100"]);
}

#[test]
fn numerical_faults_exit_3() {
    for args in [
        &["toeplitz", "--n", "300", "--alpha", "2.5", "--digits", "15"][..],
        &["fredholm", "--s", "20", "--quad-order", "4"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
    }
}

#[test]
fn sweep_is_ordered_and_deterministic() {
    let args = |jobs: &'static str| {
        [
            "sweep",
            "--quantity",
            "toeplitz",
            "--n",
            "5:40:x2",
            "--alpha",
            "0.4:2.8:+0.8",
            "--log",
            "--jobs",
            jobs,
        ]
    };
    let one = run(&args("1"));
    let many = run(&args("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.stdout, run(&args("4")).stdout);
    let r = records(&one);
    let keys: Vec<(u64, f64)> = r
        .iter()
        .map(|x| (x["inputs"]["n"].as_u64().unwrap(), x["inputs"]["alpha"].as_f64().unwrap()))
        .collect();
    let mut expect = Vec::new();
    for n in [5, 10, 20, 40] {
        for a in [0.4, 1.2, 2.0, 2.8] {
            expect.push((n, a));
        }
    }
    assert_eq!(keys, expect);
    assert!(r.iter().all(|x| x["command"] == "toeplitz"));
}

#[test]
fn csv_layout() {
    let out = run(&["--format", "csv", "sweep", "--quantity", "fredholm", "--s", "1,2", "--gamma", "0.5,1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "command,inputs.s,inputs.gamma,inputs.quad_order,outputs.log_det,outputs.det,\
         provenance.log_det,provenance.det"
    );
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("fredholm,1.0,0.5,40,"));
    assert!(lines[4].starts_with("fredholm,2.0,1.0,40,"));
}

#[test]
fn sweep_stops_at_the_first_fault_in_input_order() {
    let out = run(&["sweep", "--quantity", "fredholm", "--s", "1,20,2", "--quad-order", "4", "--jobs", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let r = records(&out);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["inputs"]["s"], 1.0);
}
