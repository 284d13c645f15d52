//! End-to-end runs of the `qudit-wigner` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qudit-wigner"));
    c.env_remove("QUDIT_WIGNER_OUTPUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qudit-wigner-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn momentum_state_sits_on_n_zero() {
    let o = run(&["wigner", "--d", "3", "--state", "p0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let values: Vec<f64> = serde_json::from_value(v["values"].clone()).unwrap();
    for m in 0..3 {
        for n in 0..3 {
            let want = if n == 0 { 1.0 / 3.0 } else { 0.0 };
            assert!((values[m * 3 + n] - want).abs() < 1e-12);
        }
    }
    assert!(v["negativity"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn evolved_qutrit_table() {
    let o = run(&[
        "wigner",
        "--d",
        "3",
        "--state",
        "p0",
        "--evolve",
        "diag012",
        "--chi-t",
        "3.14159265",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let values: Vec<f64> = serde_json::from_value(v["values"].clone()).unwrap();
    let ninths = [-1.0, 2.0, 2.0, 3.0, 0.0, 0.0, -1.0, 2.0, 2.0];
    for (got, want) in values.iter().zip(ninths) {
        // χt is quoted to 1e-8
        assert!((got - want / 9.0).abs() < 1e-7, "{got} vs {want}/9");
    }
    assert!((v["negativity"].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-7);
}

#[test]
fn even_dimension_is_rejected() {
    let o = run(&["wigner", "--d", "4", "--state", "p0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported"));
}

#[test]
fn bad_state_is_rejected() {
    assert_eq!(run(&["wigner", "--d", "3", "--state", "q7"]).status.code(), Some(2));
    assert_eq!(run(&["propagate", "--d", "3", "--chi-t", "1"]).status.code(), Some(2));
}

#[test]
fn path_integral_matches_exact_kernel() {
    let o = run(&[
        "path-integral",
        "--d",
        "3",
        "--preset",
        "diag012",
        "--chi-t",
        "3.14159",
        "--N",
        "4",
        "--compare-exact",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let records: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(records.len(), 81);
    for r in &records {
        assert!(r["abs_error"].as_f64().unwrap() < 1e-10);
        assert_eq!(r["N"], 4);
    }
}

#[test]
fn enumerated_path_sum_single_entry() {
    let o = run(&[
        "path-integral",
        "--d",
        "3",
        "--preset",
        "diag012",
        "--chi-t",
        "1.0",
        "--N",
        "2",
        "--enumerate",
        "--mu0",
        "1,1",
        "--muN",
        "1,0",
        "--compare-exact",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("N,t,mu0,muN,value,exact_value,abs_error\n"));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn path_budget_is_enforced() {
    let o = run(&[
        "path-integral",
        "--d",
        "3",
        "--preset",
        "xx",
        "--chi-t",
        "0.3",
        "--N",
        "3",
        "--enumerate",
        "--mu0",
        "0,0,0,0",
        "--muN",
        "0,0,0,0",
        "--budget",
        "1000",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
// χt values are quoted as typed on the command line
#[allow(clippy::approx_constant)]
fn entanglement_table_to_three_decimals() {
    let o = run(&[
        "entanglement",
        "--chi-t-list",
        "0.25,0.5,1.5708,2.0944,3.1416,4.1888,6.2832",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        [
            "chi_t",
            "source",
            "purity",
            "linear_entropy",
            "closed_form",
            "abs_error",
            "negativity"
        ]
    );
    let table = [0.053, 0.185, 0.593, 0.667, 0.395, 0.667, 0.0];
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 7 * 4);
    for row in rows {
        let t: f64 = row[0].parse().unwrap();
        let i = [0.25, 0.5, 1.5708, 2.0944, 3.1416, 4.1888, 6.2832]
            .iter()
            .position(|x| *x == t)
            .unwrap();
        let s: f64 = row[3].parse().unwrap();
        assert!((s - table[i]).abs() < 1e-3, "{t}: {s}");
    }
}

#[test]
fn commensurability_example() {
    let o = run(&[
        "commensurability",
        "--d",
        "3",
        "--a",
        "1",
        "--b",
        "0",
        "--tau",
        "2.0944",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "strict");
    assert_eq!(v["predicted_shift"][0], serde_json::json!([0, -1]));
    assert_eq!(v["kernel_is_permutation"], true);
}

#[test]
fn odd_k_is_weak() {
    let o = run(&[
        "commensurability",
        "--d",
        "3",
        "--a",
        "0.5",
        "--b",
        "0",
        "--tau",
        "2.0944",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "weak_odd");
    assert_eq!(v["kernel_is_permutation"], false);
}

#[test]
fn verify_single_check() {
    let o = run(&["verify", "--only", "kernel-reality", "--d", "7", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.contains("kernel-reality,PASS"));
}

#[test]
fn perturbed_phase_fails_reality_check() {
    let o = run(&[
        "verify",
        "--only",
        "kernel-reality",
        "--d",
        "3",
        "--perturb-omega",
        "1e-3",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL") && text.contains("kernel-reality"));
}

#[test]
fn unknown_check_is_invalid() {
    assert_eq!(run(&["verify", "--only", "nope"]).status.code(), Some(2));
}

#[test]
fn csv_and_json_are_deterministic() {
    for args in [
        &[
            "propagate",
            "--d",
            "5",
            "--preset",
            "xplusp",
            "--chi-t",
            "0.3",
            "--format",
            "csv",
        ][..],
        &["entanglement", "--chi-t-list", "0.5,1", "--format", "json"][..],
        &["verify", "--only", "golden-table,xi-zero", "--format", "json"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = scratch("env");
    let o = bin()
        .env("QUDIT_WIGNER_OUTPUT_DIR", &dir)
        .args([
            "wigner", "--d", "5", "--state", "x2", "--format", "csv", "--output", "w.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.join("w.csv")).unwrap();
    assert_eq!(text.lines().count(), 26);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn matrix_file_hamiltonian() {
    let dir = scratch("matrix");
    let path = dir.join("h.json");
    // x̂ on a qutrit
    std::fs::write(
        &path,
        r#"{"dim": 3, "entries": [[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[2,0]]}"#,
    )
    .unwrap();
    let from_file = run(&[
        "propagate",
        "--d",
        "3",
        "--matrix-file",
        path.to_str().unwrap(),
        "--chi-t",
        "0.9",
        "--compare",
        "--format",
        "json",
    ]);
    let from_preset = run(&[
        "propagate",
        "--d",
        "3",
        "--preset",
        "diag012",
        "--chi-t",
        "0.9",
        "--compare",
        "--format",
        "json",
    ]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_preset.stdout);
    std::fs::remove_dir_all(dir).unwrap();
}
