//! End-to-end tests of the `symquant` binary: report contents, formats,
//! determinism, exit codes and file output.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symquant"))
}

fn run_ok(args: &[&str]) -> String {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn satake_group_a1_json() {
    let out = run_ok(&["satake", "--diagram", "group:A1"]);
    assert!(out.contains("\"l\":1"), "{out}");
    assert!(out.contains("\"mult\":2"), "{out}");
    assert!(out.contains("\"n_a\":1"), "{out}");
    assert!(out.contains("\"invocation\":\"symquant satake --diagram group:A1"));
    assert!(out.contains("\"version\":\"0.1.0\""));
}

#[test]
fn cfun_table_values() {
    let out = run_ok(&[
        "cfun",
        "--diagram",
        "AI:A1",
        "--max-weight",
        "8",
        "--format",
        "csv",
    ]);
    let mut rows = Vec::new();
    for line in out.lines() {
        if line.starts_with('#') || line.starts_with("lambda") {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let c: f64 = cols[2].parse().unwrap();
        rows.push(c);
    }
    let expect = [1.0, 0.5, 0.375, 0.3125, 0.2734375];
    assert_eq!(rows.len(), expect.len());
    for (got, want) in rows.iter().zip(expect) {
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }
}

#[test]
fn spherical_even_weights() {
    let out = run_ok(&[
        "spherical",
        "--diagram",
        "AI:A1",
        "--bound",
        "6",
        "--format",
        "csv",
    ]);
    let weights: Vec<&str> = out
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("lambda") && !l.is_empty())
        .collect();
    assert_eq!(weights, vec!["0", "2", "4", "6"]);
}

#[test]
fn norms_report_flags() {
    let out = run_ok(&[
        "norms",
        "--diagram",
        "AI:A1",
        "--max-weight",
        "4",
        "--h",
        "0.5*q",
        "--t",
        "1,5",
        "--tol",
        "1e-8",
    ]);
    assert!(out.contains("\"nonunitary_witness\":true"), "{out}");
    assert!(out.contains("\"raw\""));
    assert!(out.contains("\"targets\""));
}

#[test]
fn reports_are_byte_identical() {
    let args = [
        "norms",
        "--diagram",
        "AI:A1",
        "--max-weight",
        "2",
        "--t",
        "1,2",
        "--tol",
        "1e-8",
        "--format",
        "csv",
    ];
    let a = run_ok(&args);
    let b = run_ok(&args);
    assert_eq!(a, b);
}

#[test]
fn reduce_table() {
    let out = run_ok(&[
        "reduce",
        "--diagram",
        "AI:A1",
        "--max-weight",
        "4",
        "--format",
        "csv",
    ]);
    assert!(out.contains("# total_dim: 9"), "{out}");
    assert!(out.contains("2,3,true,3"), "{out}");
}

#[test]
fn harmonics_residuals_small() {
    let out = run_ok(&[
        "harmonics",
        "--diagram",
        "AI:A1",
        "--max-weight",
        "2",
        "--points",
        "1",
        "--format",
        "csv",
    ]);
    for line in out.lines() {
        if line.starts_with('#') || line.starts_with("lambda") {
            continue;
        }
        let res: f64 = line.split(',').next_back().unwrap().parse().unwrap();
        assert!(res < 1e-8, "{line}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("symquant-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("satake.json");
    let out = bin()
        .args([
            "satake",
            "--diagram",
            "AI:A1",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.contains("\"l\":1"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_2_with_json() {
    let out = bin().arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"kind\":\"usage\""), "{err}");

    let out = bin()
        .args(["satake", "--diagram", "E8:huh"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("\"kind\":\"unsupported-diagram\""), "{err}");

    let out = bin()
        .args(["norms", "--diagram", "AI:A1", "--t", "5,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn precision_env_is_validated() {
    let out = bin()
        .args(["cfun", "--diagram", "AI:A1", "--max-weight", "2"])
        .env("SYMQUANT_PRECISION", "quadruple")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["cfun", "--diagram", "AI:A1", "--max-weight", "2"])
        .env("SYMQUANT_PRECISION", "high")
        .output()
        .unwrap();
    assert!(out.status.success());
}
