use std::process::Command;

fn tencards(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tencards")).args(args).env_remove("RUST_BACKTRACE").output().unwrap();
    (out.status.success(), String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr))
}

#[test]
fn simulate_is_reproducible_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("run.csv");
    let args = ["simulate", "--a-sq", "0.3", "--p", "0.6", "--q", "0.2", "--trials", "5000", "--seed", "4", "--backend", "cards"];
    let (ok, first) = tencards(&[&args[..], &["--out", csv.to_str().unwrap()]].concat());
    assert!(ok, "{first}");
    assert_eq!(tencards(&args).1, first);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("axis_value,count_oo,count_ot,count_to,count_tt,empirical_a"));
    let counts: u64 = lines.next().unwrap().split(',').skip(1).take(4).map(|c| c.parse::<u64>().unwrap()).sum();
    assert_eq!(counts, 5000);
}

#[test]
fn sweep_accepts_lists_and_ranges() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("sweep.json");
    let (ok, out) = tencards(&["sweep", "--axis", "p", "--values", "0:1:0.25", "--trials", "1000", "--out", json.to_str().unwrap()]);
    assert!(ok, "{out}");
    let table: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let values: Vec<f64> = table["rows"].as_array().unwrap().iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert_eq!(values, [0.0, 0.25, 0.5, 0.75, 1.0]);
    let (ok, _) = tencards(&["sweep", "--values", "0.1, 0.9", "--trials", "100"]);
    assert!(ok);
    let (ok, _) = tencards(&["sweep", "--values", "1:0:0.1", "--trials", "100"]);
    assert!(!ok);
}

#[test]
fn analyze_reports_equilibria_and_grid_check() {
    let (ok, out) = tencards(&["analyze", "--alpha", "5", "--beta", "3", "--gamma", "1", "--a-sq", "1", "--grid-check", "0.01"]);
    assert!(ok, "{out}");
    assert!(out.contains("mixed      0.666667"));
    assert!(out.contains("agree within one grid step"));
    let (ok, out) = tencards(&["analyze", "--a-sq", "1.5"]);
    assert!(!ok && out.contains("a_sq"));
}
