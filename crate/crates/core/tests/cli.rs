use std::path::Path;
use std::process::{Command, Output};

fn apx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apx"))
        .args(args)
        .output()
        .expect("spawn apx")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn norms_of_cos() {
    let o = apx(&[
        "norms",
        "--fn",
        "corpus:cos",
        "--p",
        "2",
        "--which",
        "besicovitch",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("norm,p,value\n"), "{out}");
    assert!(out.contains("7.07107e-1"), "{out}");
}

#[test]
fn function_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "sin.json",
        r#"{"alpha": 1.0, "terms": [{"lambda": 1.0, "im": -0.5}]}"#,
    );
    let o = apx(&["norms", "--fn", &f]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("stepanov,2.00000e0,7.07107e-1"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn modulus_and_kernel_csv_headers() {
    let o = apx(&[
        "modulus",
        "--fn",
        "corpus:cos",
        "--kind",
        "omega",
        "--deltas",
        "0.1:1:4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("delta,value,raw\n"));
    assert_eq!(out.lines().count(), 5);

    let o = apx(&[
        "kernel-check",
        "--fn",
        "corpus:cos",
        "--k-max",
        "2",
        "--x",
        "0,1.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("k,x,kernel_value,truncation_value,abs_err,tail_bound\n"));
    assert_eq!(out.lines().count(), 1 + 3 * 2);
}

#[test]
fn classify_cesaro_json() {
    let o = apx(&["classify", "--matrix", "cesaro", "--n-max", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["class"], "both");
    assert_eq!(v["uniform_K_rbvs"], 1.0);
    let o = apx(&["classify", "--matrix", "one_hot", "--n-max", "32"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["uniform_K_rbvs"], "UNBOUNDED");
}

#[test]
fn strong_mean_value() {
    let o = apx(&[
        "strong-mean",
        "--fn",
        "corpus:cos",
        "--matrix",
        "cesaro",
        "--n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn verify_passing_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let exp = write(
        dir.path(),
        "t1.json",
        r#"{"kind": "T1", "function": "corpus:cos", "matrix": "cesaro", "beta": 0.25, "x": 0.0, "n_list": [2, 4, 8, 16, 32]}"#,
    );
    let csv = dir.path().join("t1.csv");
    let json = dir.path().join("t1.report.json");
    let o = apx(&[
        "verify",
        "--exp",
        &exp,
        "--out",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("n,value,bound,e_term,ratio\n"));
    assert_eq!(text.lines().count(), 6);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["verdict"]["pass"], true);
}

#[test]
fn verify_refuses_matrix_outside_class() {
    let dir = tempfile::tempdir().unwrap();
    let exp = write(
        dir.path(),
        "t2.json",
        r#"{"kind": "T2", "function": "corpus:cos", "matrix": "one_hot", "beta": 0.25, "x": 0.0, "n_list": [2, 4, 8]}"#,
    );
    let csv = dir.path().join("t2.csv");
    let o = apx(&["verify", "--exp", &exp, "--out", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!csv.exists());
}

#[test]
fn verify_reports_failed_verdict() {
    // With every cutoff at zero the mean stays at |f(x) - A_0| while the
    // bound decays, so the ratios double along n.
    let dir = tempfile::tempdir().unwrap();
    let exp = write(
        dir.path(),
        "t1.json",
        r#"{"kind": "T1", "function": "corpus:cos", "matrix": "cesaro", "beta": 0.25, "x": 0.0,
            "n_list": [2, 4, 8, 16, 32], "gamma": {"linear": {"slope": 0.0, "offset": 0.0}}}"#,
    );
    let csv = dir.path().join("t1.csv");
    let o = apx(&["verify", "--exp", &exp, "--out", csv.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(csv.exists());
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let exp = write(
        dir.path(),
        "bad.json",
        r#"{"kind": "T1", "function": "corpus:cos", "matrix": "cesaro", "beta": 0.25, "colour": 1}"#,
    );
    let o = apx(&[
        "verify",
        "--exp",
        &exp,
        "--out",
        dir.path().join("x.csv").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(65));
}

#[test]
fn usage_errors() {
    assert_eq!(apx(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(apx(&["classify"]).status.code(), Some(64));
    assert_eq!(
        apx(&["classify", "--matrix", "mystery"]).status.code(),
        Some(65)
    );
}
