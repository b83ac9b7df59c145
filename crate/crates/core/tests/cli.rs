use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bihermitian"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

fn diag_form(dir: &Path, name: &str, values: &[f64]) -> String {
    let n = values.len();
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    if i == j {
                        format!("[{}, 0]", values[i])
                    } else {
                        "[0, 0]".into()
                    }
                })
                .collect();
            format!("[{}]", row.join(", "))
        })
        .collect();
    write(
        dir,
        name,
        &format!("{{\"n\": {n}, \"matrix\": [{}]}}", rows.join(", ")),
    )
}

fn error_of(out: &Output) -> Value {
    let stderr = String::from_utf8(out.stderr.clone()).unwrap();
    let line = stderr.lines().last().expect("error object on stderr");
    serde_json::from_str(line).unwrap()
}

fn read_json(path: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_generic_pair() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0, 1.0]);
    let h2 = write(
        dir.path(),
        "b.json",
        r#"{"n": 3, "matrix": [[[2,0],[1,0],[0,0]], [[1,0],[2,0],[0,1]], [[0,0],[0,-1],[2,0]]]}"#,
    );
    let out = dir.path().join("r.json").display().to_string();
    let o = run(&["analyze", "--h1", &h1, "--h2", &h2, "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["genericity"]["generic"], true);
    assert_eq!(r["genericity"]["krylov_rank"], 3);
    assert_eq!(r["genericity"]["commutant_dim"], 3);
    assert_eq!(
        r["biunitary_group"]["block_sizes"],
        serde_json::json!([1, 1, 1])
    );
    // eigenvalues of [[2,1,0],[1,2,i],[0,-i,2]] are 2 - sqrt 2, 2, 2 + sqrt 2
    let eig: Vec<f64> = r["connecting_operator"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    let s = 2f64.sqrt();
    for (a, b) in eig.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
        assert!((a - b).abs() < 1e-12);
    }
    // complex entries are [re, im] pairs
    assert_eq!(
        r["connecting_operator"]["matrix"][1][2],
        serde_json::json!([0.0, 1.0])
    );
    for entry in r["residuals"].as_array().unwrap() {
        assert!(entry["gate"].is_string() && entry["tolerance"].is_number());
        assert_eq!(entry["within"], true, "{entry}");
    }
    assert_eq!(r["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn analyze_degenerate_pair_reports_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0, 1.0]);
    let h2 = diag_form(dir.path(), "b.json", &[2.0, 2.0, 5.0]);
    let o = run(&["analyze", "--h1", &h1, "--h2", &h2]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["genericity"]["generic"], false);
    assert_eq!(
        r["biunitary_group"]["block_sizes"],
        serde_json::json!([2, 1])
    );
    assert_eq!(r["biunitary_group"]["real_dimension"], 5);
    assert_eq!(r["genericity"]["bicommutant_dim"], 2);
}

#[test]
fn mismatched_dimensions_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0]);
    let h2 = diag_form(dir.path(), "b.json", &[1.0, 2.0, 3.0]);
    let o = run(&["analyze", "--h1", &h1, "--h2", &h2]);
    assert_eq!(o.status.code(), Some(1));
    let e = error_of(&o);
    assert_eq!(e["schema"], 1);
    assert_eq!(e["error"]["kind"], "DimensionMismatch");
}

#[test]
fn indefinite_file_is_not_positive_with_file_context() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0]);
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"n": 2, "matrix": [[[1,0],[2,0]], [[2,0],[1,0]]]}"#,
    );
    let o = run(&["analyze", "--h1", &h1, "--h2", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let e = error_of(&o);
    assert_eq!(e["error"]["kind"], "NotPositive");
    assert!(e["error"]["file"].as_str().unwrap().ends_with("bad.json"));
}

#[test]
fn missing_field_is_a_parse_error_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0]);
    let bad = write(
        dir.path(),
        "nofield.json",
        r#"{"matrix": [[[1,0],[0,0]], [[0,0],[1,0]]]}"#,
    );
    let o = run(&["analyze", "--h1", &h1, "--h2", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let e = error_of(&o);
    assert_eq!(e["error"]["kind"], "ParseError");
    assert!(e["error"]["message"].as_str().unwrap().contains("`n`"));
    let ragged = write(
        dir.path(),
        "ragged.json",
        r#"{"n": 2, "matrix": [[[1,0]], [[0,0],[1,0]]]}"#,
    );
    let e = error_of(&run(&["analyze", "--h1", &h1, "--h2", &ragged]));
    assert!(e["error"]["message"].as_str().unwrap().contains("`matrix`"));
}

#[test]
fn non_hermitian_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0]);
    let bad = write(
        dir.path(),
        "nh.json",
        r#"{"n": 2, "matrix": [[[1,0],[0.5,0]], [[0,0],[1,0]]]}"#,
    );
    let e = error_of(&run(&["analyze", "--h1", &h1, "--h2", &bad]));
    assert_eq!(e["error"]["kind"], "NotHermitian");
}

#[test]
fn misconfigured_tolerance_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0]);
    let h2 = diag_form(dir.path(), "b.json", &[1.0, 1.1]);
    let o = run(&["analyze", "--h1", &h1, "--h2", &h2, "--tol-cluster", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_of(&o)["error"]["kind"], "EquivalenceViolation");
}

#[test]
fn usage_errors_exit_1() {
    let o = run(&["analyze", "--h1", "x.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_of(&o)["error"]["kind"], "UsageError");
    let o = run(&["box", "--half", "--beta", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&[
        "analyze",
        "--h1",
        "/nonexistent/a.json",
        "--h2",
        "/nonexistent/b.json",
    ]);
    assert_eq!(error_of(&o)["error"]["kind"], "IoError");
}

#[test]
fn box_profile_csv_has_breakpoint_at_two() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("box.csv");
    let sigma = dir.path().join("sigma.csv");
    let report = dir.path().join("box.json");
    let o = run(&[
        "box",
        "--alpha",
        "1",
        "--beta",
        "2",
        "--n",
        "200",
        "--bins",
        "0.05",
        "--out",
        csv_path.to_str().unwrap(),
        "--sigma-out",
        sigma.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["lambda_lo", "lambda_hi", "multiplicity"]
    );
    let rows: Vec<(f64, f64, usize)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].parse().unwrap(),
                r[1].parse().unwrap(),
                r[2].parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.first().unwrap().0, 1.0);
    assert_eq!(rows.last().unwrap().1, 5.0);
    let switch = rows.iter().position(|r| r.2 == 1).unwrap();
    assert_eq!(rows[switch].0, 2.0);
    assert!(rows[..switch].iter().all(|r| r.2 == 2));
    assert!(rows[switch..].iter().all(|r| r.2 == 1));

    let mut reader = csv::Reader::from_path(&sigma).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec!["lambda", "sigma_numeric", "sigma_analytic"]
    );
    assert_eq!(reader.records().count(), 20);

    let r = read_json(report.to_str().unwrap());
    assert_eq!(r["shape"]["kind"], "asymmetric");
    assert_eq!(r["segments"].as_array().unwrap().len(), 2);
    assert_eq!(
        r["cyclicity"]["krylov_rank"],
        r["cyclicity"]["distinct_values"]
    );
}

#[test]
fn triples_from_forms_and_from_triple_files() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 2.0]);
    let h2 = diag_form(dir.path(), "b.json", &[3.0, 1.0]);
    let o = run(&["triples", "--h1", &h1, "--h2", &h2]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["compatible"], true);
    assert_eq!(r["split"]["d_plus"], 4);
    assert!(r["recursion_identity"].as_f64().unwrap() < 1e-10);

    // J2 = +J1 on the first complex coordinate, -J1 on the second
    let j2 = write(
        dir.path(),
        "j2.json",
        r#"{"n": 4, "matrix": [[0,0,-1,0],[0,0,0,1],[1,0,0,0],[0,-1,0,0]]}"#,
    );
    let o = run(&["triples", "--h1", &h1, "--h2", &h2, "--j2", &j2]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["split"]["d_plus"], 2);
    assert_eq!(r["split"]["d_minus"], 2);
    assert!(
        r["split"]["sesquilinearity"]["mixed_failure_witness"]
            .as_f64()
            .unwrap()
            > 0.1
    );

    let t = write(
        dir.path(),
        "t.json",
        r#"{"g": [[1,0],[0,1]], "j": [[0,-1],[1,0]]}"#,
    );
    let squeezed = write(
        dir.path(),
        "s.json",
        r#"{"g": [[0.25,0],[0,4]], "j": [[0,-0.25],[4,0]]}"#,
    );
    let o = run(&["triples", "--t1", &t, "--t2", &squeezed]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["compatible"], false);
    assert!(r["split"].is_null());
}

#[test]
fn biunitary_samples_verify() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 1.0, 1.0]);
    let h2 = diag_form(dir.path(), "b.json", &[2.0, 2.0, 5.0]);
    let o = run(&[
        "biunitary-sample",
        "--h1",
        &h1,
        "--h2",
        &h2,
        "--samples",
        "5",
        "--seed",
        "3",
    ]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let samples = r["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 5);
    for s in samples {
        assert_eq!(s["is_biunitary"], true);
        assert!(s["off_block"].as_f64().unwrap() < 1e-10);
        let m = &s["matrix"];
        assert_eq!(m[0][2], serde_json::json!([0.0, 0.0]));
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = diag_form(dir.path(), "a.json", &[1.0, 2.0, 3.0]);
    let h2 = write(
        dir.path(),
        "b.json",
        r#"{"n": 3, "matrix": [[[2,0],[0.5,0.5],[0,0]], [[0.5,-0.5],[3,0],[0,0]], [[0,0],[0,0],[1,0]]]}"#,
    );
    let mut bodies = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("r{k}.json")).display().to_string();
        let o = run(&[
            "analyze", "--h1", &h1, "--h2", &h2, "--seed", "17", "--out", &out,
        ]);
        assert!(o.status.success());
        bodies.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    let a = run(&[
        "biunitary-sample",
        "--h1",
        &h1,
        "--h2",
        &h2,
        "--samples",
        "2",
        "--seed",
        "5",
    ])
    .stdout;
    let b = run(&[
        "biunitary-sample",
        "--h1",
        &h1,
        "--h2",
        &h2,
        "--samples",
        "2",
        "--seed",
        "5",
    ])
    .stdout;
    assert_eq!(a, b);
    let c = run(&[
        "biunitary-sample",
        "--h1",
        &h1,
        "--h2",
        &h2,
        "--samples",
        "2",
        "--seed",
        "6",
    ])
    .stdout;
    assert_ne!(a, c);
}
