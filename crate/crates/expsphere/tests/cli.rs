//! End-to-end checks of the command-line binary: flag surface, exit
//! codes, output formats, and the data-on-stdout contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use expsphere::io::write_matrix;
use expsphere::{random_hermitian, Complex64, ComplexMatrix, HermitianMatrix};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_expsphere"));
    c.env_remove("THREADS");
    c
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("the binary should be runnable")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout should be utf-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr should be utf-8")
}

fn write_diag(dir: &Path, name: &str, diag: &[f64]) -> PathBuf {
    let path = dir.join(name);
    let m = HermitianMatrix::from_real_diagonal(diag);
    write_matrix(&path, m.as_matrix()).unwrap();
    path
}

fn value_matrix(v: &Value) -> ComplexMatrix {
    serde_json::from_value(v.clone()).expect("embedded matrix should deserialize")
}

#[test]
fn zero_matrix_exponential_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_diag(dir.path(), "zero.json", &[0.0, 0.0, 0.0]);
    let out = run(bin().args([
        "exp",
        "--input",
        path.to_str().unwrap(),
        "--samples",
        "2000",
        "--seed",
        "3",
    ]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));

    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "exp");
    assert_eq!(v["dim"], 3);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 3);
    let identity = ComplexMatrix::identity(3);
    for r in results {
        let m = value_matrix(&r["report"]["value"]);
        let dev = m.max_abs_diff(&identity);
        match r["backend"].as_str().unwrap() {
            "mc" => {
                let se = r["report"]["abs_error_estimate"].as_f64().unwrap();
                assert!(dev <= 4.0 * se, "mc deviation {dev} vs reported se {se}");
            }
            "series" => assert_eq!(dev, 0.0, "series on the zero matrix is exact"),
            "oracle" => assert!(dev <= 1e-15),
            other => panic!("unexpected backend {other}"),
        }
    }
    assert_eq!(v["pairwise"].as_array().unwrap().len(), 3);
}

#[test]
fn single_sample_scalar_run_reproduces_the_exponential() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_diag(dir.path(), "scalar.json", &[0.7]);
    let out = run(bin().args([
        "exp",
        "--input",
        path.to_str().unwrap(),
        "--backend",
        "mc",
        "--samples",
        "1",
    ]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));

    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 1);
    let m = value_matrix(&results[0]["report"]["value"]);
    let err = (m.get(0, 0) - Complex64::new(0.7f64.exp(), 0.0)).norm();
    assert!(err <= 1e-13, "one-sample scalar estimate off by {err}");
    assert_eq!(results[0]["report"]["samples_or_terms"], 1);
}

#[test]
fn non_hermitian_input_exits_3_with_clean_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shift.json");
    std::fs::write(
        &path,
        r#"{"dim":2,"re":[[0.0,1.0],[0.0,0.0]],"im":[[0.0,0.0],[0.0,0.0]]}"#,
    )
    .unwrap();
    let out = run(bin().args(["exp", "--input", path.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty(), "errors must leave stdout empty");
    assert!(!out.stderr.is_empty(), "the cause belongs on stderr");
}

#[test]
fn unreadable_or_missing_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "not a matrix").unwrap();
    let out = run(bin().args(["exp", "--input", garbled.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());

    let missing = dir.path().join("missing.json");
    let out = run(bin().args(["exp", "--input", missing.to_str().unwrap()]));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_norm_exits_4_from_the_series_backend() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_diag(dir.path(), "huge.json", &[300.0]);
    let out = run(bin().args([
        "exp",
        "--input",
        path.to_str().unwrap(),
        "--backend",
        "series",
    ]));
    assert_eq!(out.status.code(), Some(4), "stderr: {}", stderr_str(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn diagnose_exits_0_when_every_row_passes() {
    let out = run(bin().args(["diagnose", "--samples", "200000", "--seed", "2024"]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let rows: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 8);
    for row in rows {
        assert_eq!(
            row["passed"], true,
            "diagnostic {} failed: {}",
            row["name"], row["detail"]
        );
    }
}

#[test]
fn fourier_emits_a_unitarity_column() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rot.json");
    let a = random_hermitian(2, 5, 1.0);
    write_matrix(&path, a.as_matrix()).unwrap();
    let out = run(bin().args([
        "fourier",
        "--input",
        path.to_str().unwrap(),
        "--backend",
        "series",
    ]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "fourier");
    let dev = v["results"][0]["unitarity_deviation"].as_f64().unwrap();
    assert!(dev <= 1e-9, "rotation drifted from unitary by {dev}");
}

#[test]
fn converge_series_on_zero_matrix_reports_zero_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_diag(dir.path(), "zero2.json", &[0.0, 0.0]);
    let out = run(bin().args([
        "converge",
        "--input",
        path.to_str().unwrap(),
        "--backend",
        "series",
        "--format",
        "csv",
    ]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    let mut data_rows = 0;
    for line in text.lines().skip(1) {
        let residual: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(residual, 0.0, "zero matrix must have zero residual: {line}");
        data_rows += 1;
    }
    assert!(data_rows >= 10, "expected a ladder, got {data_rows} rows");
}

#[test]
fn converge_csv_emits_both_ladders() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("conv.json");
    let a = random_hermitian(2, 8, 1.0);
    write_matrix(&path, a.as_matrix()).unwrap();
    let out = run(bin().args([
        "converge",
        "--input",
        path.to_str().unwrap(),
        "--samples",
        "4000",
        "--seed",
        "9",
        "--format",
        "csv",
    ]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    let text = stdout_str(&out);
    assert!(text.contains("samples,max_abs_error,predicted_standard_error"));
    assert!(text.contains("kmax,max_abs_residual"));
    let mc_counts: Vec<&str> = text
        .lines()
        .filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit()))
        .take(3)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(mc_counts, ["1000", "2000", "4000"]);
    let last_residual: f64 = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(
        last_residual <= 1e-9,
        "series ladder should bottom out, got {last_residual}"
    );
}

#[test]
fn bench_rows_are_reproducible_and_accurate() {
    let args = [
        "bench",
        "--samples",
        "2000",
        "--seed",
        "5",
        "--format",
        "csv",
    ];
    let first = run(bin().args(args));
    let second = run(bin().args(args));
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr_str(&first));
    assert_eq!(second.status.code(), Some(0));

    // Drop the wall-time column; everything else must repeat bitwise.
    let strip = |out: &Output| -> Vec<String> {
        stdout_str(out)
            .lines()
            .map(|l| {
                let cols: Vec<&str> = l.split(',').collect();
                format!("{},{},{},{}", cols[0], cols[1], cols[3], cols[4])
            })
            .collect()
    };
    assert_eq!(strip(&first), strip(&second));

    let text = stdout_str(&first);
    let mut dims = Vec::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let error: f64 = cols[3].parse().unwrap();
        match cols[1] {
            "series" => assert!(error <= 1e-9, "series bench row too loose: {line}"),
            "oracle" => assert_eq!(error, 0.0, "oracle must match itself: {line}"),
            "mc" => {}
            other => panic!("unexpected backend {other}"),
        }
        if cols[1] == "mc" {
            dims.push(cols[0].to_string());
        }
    }
    assert_eq!(dims, ["2", "4", "8", "16"]);
}

#[test]
fn threads_env_caps_workers_without_changing_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mc.json");
    let a = random_hermitian(2, 13, 1.0);
    write_matrix(&path, a.as_matrix()).unwrap();
    let args = [
        "exp",
        "--input",
        path.to_str().unwrap(),
        "--backend",
        "mc",
        "--samples",
        "20000",
        "--streams",
        "4",
    ];
    let single = run(bin().args(args).env("THREADS", "1"));
    let triple = run(bin().args(args).env("THREADS", "3"));
    assert_eq!(single.status.code(), Some(0), "stderr: {}", stderr_str(&single));
    assert_eq!(triple.status.code(), Some(0));
    let v1: Value = serde_json::from_slice(&single.stdout).unwrap();
    let v3: Value = serde_json::from_slice(&triple.stdout).unwrap();
    assert_eq!(
        v1["results"][0]["report"]["value"], v3["results"][0]["report"]["value"],
        "thread count must not change the estimate"
    );
    assert_eq!(
        v1["results"][0]["report"]["abs_error_estimate"],
        v3["results"][0]["report"]["abs_error_estimate"]
    );

    let bad = run(bin().args(args).env("THREADS", "soup"));
    assert_eq!(bad.status.code(), Some(1));
    assert!(stderr_str(&bad).contains("THREADS"));
}

#[test]
fn output_flag_writes_the_payload_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_diag(dir.path(), "in.json", &[0.5, -0.25]);
    let target = dir.path().join("result.json");
    let out = run(bin().args([
        "exp",
        "--input",
        input.to_str().unwrap(),
        "--backend",
        "oracle",
        "--output",
        target.to_str().unwrap(),
    ]));
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr_str(&out));
    assert!(out.stdout.is_empty(), "--output should silence stdout");
    let text = std::fs::read_to_string(&target).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["results"][0]["backend"], "oracle");
}
