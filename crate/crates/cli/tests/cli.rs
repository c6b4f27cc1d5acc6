use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn symlcu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symlcu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symlcu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn dims_six_qubits() {
    let v = json_of(&symlcu(&["dims", "--n", "6", "--d", "2"]));
    let rows = v["rows"].as_array().unwrap();
    let pairs: Vec<(u64, u64)> = rows
        .iter()
        .map(|r| (r["dim_sud"].as_u64().unwrap(), r["dim_sn"].as_u64().unwrap()))
        .collect();
    assert_eq!(pairs, vec![(7, 1), (5, 5), (3, 9), (1, 5)]);
    assert_eq!(v["total"], 64);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn dims_single_qudit() {
    let v = json_of(&symlcu(&["dims", "--n", "1", "--d", "2"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["rows"][0]["dim_sud"], 2);
}

#[test]
fn dims_reports_square_shape_values() {
    let v = json_of(&symlcu(&["dims", "--n", "8"]));
    let sq = &v["square_shapes"][0];
    assert_eq!(sq["m"], 4);
    assert_eq!(sq["dim_sn"], 14);
    assert_eq!(sq["dim_below"], false);
}

#[test]
fn irrep_three_cycle() {
    let v = json_of(&symlcu(&["irrep", "--lambda", "3+1", "--perm", "(1 2 3)"]));
    let m = v["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 3);
    let trace: f64 = (0..3).map(|i| m[i][i].as_f64().unwrap()).sum();
    assert!(trace.abs() < 1e-15);
}

#[test]
fn fft_of_delta_is_identity_blocks() {
    let f = scratch("delta.json", r#"{"n": 4, "terms": [{"perm": "()", "re": 1.0, "im": 0.0}]}"#);
    let v = json_of(&symlcu(&["fft", "--f", f.to_str().unwrap()]));
    for block in v["blocks"].as_array().unwrap() {
        let dim = block["dim"].as_u64().unwrap() as usize;
        for i in 0..dim {
            for j in 0..dim {
                let want = if i == j { 1.0 } else { 0.0 };
                assert_eq!(block["re"][i][j].as_f64().unwrap(), want);
            }
        }
    }
}

#[test]
fn fft_dense_counters() {
    let v = json_of(&symlcu(&["fft", "--n", "5", "--seed", "3"]));
    assert!(v["naive_fft_max_abs_diff"].as_f64().unwrap() <= 1e-9);
    let v = json_of(&symlcu(&["fft", "--n", "7", "--seed", "3"]));
    assert!(v["fft_ops"].as_u64().unwrap() < v["naive_ops"].as_u64().unwrap());
}

#[test]
fn convolve_transpositions() {
    let f = scratch("t12.json", r#"{"n": 3, "terms": [{"perm": "(1 2)", "re": 1.0, "im": 0.0}]}"#);
    let g = scratch("t23.json", r#"{"n": 3, "terms": [{"perm": "(2 3)", "re": 2.0, "im": 0.0}]}"#);
    let v = json_of(&symlcu(&["convolve", "--f", f.to_str().unwrap(), "--g", g.to_str().unwrap()]));
    let terms = v["terms"].as_array().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms[0]["re"], 2.0);
    assert_eq!(terms[0]["perm"], "(1 2 3)");
}

#[test]
fn young_basis_single_label() {
    let v = json_of(&symlcu(&["young-basis", "--n", "2", "--label", "(1+1,0,0)"]));
    let amps = v["vectors"][0]["amplitudes"].as_array().unwrap();
    let a1 = amps[1][0].as_f64().unwrap();
    let a2 = amps[2][0].as_f64().unwrap();
    assert!((a1 + a2).abs() < 1e-12 && (a1.abs() - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn matelem_exact_at_time_zero_is_kronecker() {
    let base = ["matelem", "--n", "4", "--method", "exact", "--t", "0"];
    let same = json_of(&symlcu(&[&base[..], &["--u", "(3+1,1,0)", "--v", "(3+1,1,0)"]].concat()));
    assert!((same["value_re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let other = json_of(&symlcu(&[&base[..], &["--u", "(3+1,1,0)", "--v", "(3+1,2,0)"]].concat()));
    assert!(other["value_re"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn matelem_lcu_paths_agree_with_oracle() {
    let eps = 1e-3;
    let common = ["matelem", "--n", "5", "--k", "3", "--seed", "4", "--t", "1", "--eps", "1e-3", "--u", "(3+2,0,0)", "--v", "(3+2,4,0)"];
    let swap = json_of(&symlcu(&[&common[..], &["--method", "lcu-swap"]].concat()));
    assert!(swap["abs_err"].as_f64().unwrap() <= eps);
    assert!(swap["swap_count"].as_u64().unwrap() <= swap["k2mk_bound"].as_u64().unwrap());
    assert!(swap["closed_form_estimate"].as_f64().unwrap() > 0.0);
    let pauli = json_of(&symlcu(&[&common[..], &["--method", "lcu-pauli"]].concat()));
    let dre = swap["value_re"].as_f64().unwrap() - pauli["value_re"].as_f64().unwrap();
    let dim = swap["value_im"].as_f64().unwrap() - pauli["value_im"].as_f64().unwrap();
    assert!(dre.hypot(dim) <= 2.0 * eps);
}

#[test]
fn bench_is_deterministic_and_monotone() {
    let args = ["bench", "--n-min", "4", "--n-max", "6", "--no-timing"];
    let a = symlcu(&args);
    let b = symlcu(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("n,classical_fft_ops,classical_wall_time,lcu_swap_gates,closed_form_estimate"));
    assert!(text.contains("ratio_increasing true"));
}

#[test]
fn bench_json_with_out_file() {
    let dir = std::env::temp_dir().join(format!("symlcu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("bench.json");
    let o = symlcu(&["bench", "--n-min", "4", "--n-max", "4", "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn verify_suites() {
    let o = symlcu(&["verify", "schur-weyl"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS schur-weyl::")));
    assert!(!text.contains("FAIL"));
    assert!(symlcu(&["verify", "lcu-e2e"]).status.success());
}

#[test]
fn exit_codes() {
    assert_eq!(symlcu(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(symlcu(&["dims"]).status.code(), Some(2));
    assert_eq!(symlcu(&["irrep", "--lambda", "3+x", "--perm", "()"]).status.code(), Some(2));
    assert_eq!(symlcu(&["young-basis", "--n", "20"]).status.code(), Some(3));
    assert_eq!(symlcu(&["fft", "--n", "7", "--cap-factorial", "6"]).status.code(), Some(3));
    assert_eq!(symlcu(&["bench", "--n-min", "4", "--n-max", "9"]).status.code(), Some(3));
}

#[test]
fn identical_config_gives_identical_json() {
    let args = ["matelem", "--n", "4", "--seed", "11", "--u", "(2+2,0,0)", "--v", "(2+2,1,0)"];
    assert_eq!(symlcu(&args).stdout, symlcu(&args).stdout);
    let a = json_of(&symlcu(&["fft", "--n", "4", "--seed", "2"]));
    let b = json_of(&symlcu(&["fft", "--n", "4", "--seed", "2"]));
    assert_eq!(a["blocks"], b["blocks"]);
    assert_eq!(a["fft_ops"], b["fft_ops"]);
}
