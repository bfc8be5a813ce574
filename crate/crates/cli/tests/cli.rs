use std::fs;
use std::process::{Command, Output};

fn cube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cube"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn analyze_dictator_bundle() {
    let o = cube(&["analyze", "--family", "dictator:i=1", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["influences"], serde_json::json!([1.0, 0.0, 0.0, 0.0]));
    let kkl = v["reports"].as_array().unwrap().iter().find(|r| r["name"] == "kkl").unwrap();
    assert!(kkl["ratio"].is_number());
}

#[test]
fn analyze_tribes_has_pair_matrix() {
    let o = cube(&["analyze", "--family", "tribes:k=2,m=2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let m = v["pair_influences"].as_array().unwrap();
    assert_eq!(m.len(), 4);
    assert_eq!(m[0][2], 0.125);
    assert_eq!(m[0][1], 0.375);
}

#[test]
fn analyze_from_table_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("and.table");
    fs::write(&path, "n=2\n0001\n").unwrap();
    let o = cube(&["analyze", "--table", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("name,n,param_s0,lhs,rhs,ratio\n"));
    assert_eq!(text.lines().count(), 5);

    fs::write(&path, "n=2\n0021\n").unwrap();
    let o = cube(&["analyze", "--table", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 3"), "{}", stderr(&o));
}

#[test]
fn parse_and_capacity_exit_codes() {
    let o = cube(&["analyze", "--family", "tribes:k="]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 10"));
    assert_eq!(cube(&["analyze", "--family", "majority", "--n", "25"]).status.code(), Some(3));
    assert_eq!(cube(&["search", "--inequality", "poincare", "--n", "13"]).status.code(), Some(3));
    assert_eq!(cube(&["sweep", "--metric", "kkl", "--n-min", "2", "--n-max", "30"]).status.code(), Some(3));
    assert_eq!(cube(&["sweep", "--metric", "bogus", "--n-min", "2", "--n-max", "3"]).status.code(), Some(2));
    assert_eq!(cube(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn sweep_columns() {
    let o = cube(&["sweep", "--metric", "tribes-closed-form", "--n-min", "16", "--n-max", "1048576", "--geometric"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,n,param_s0,lhs,rhs,ratio,family,k,m"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 17);
    for row in rows {
        let ratio: f64 = row.split(',').nth(5).unwrap().parse().unwrap();
        assert!((0.3..=3.0).contains(&ratio), "{row}");
    }

    let o = cube(&["sweep", "--metric", "kkl", "--family", "majority", "--n-min", "3", "--n-max", "15", "--step", "2"]);
    let lhs: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|r| r.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(lhs.len(), 7);
    assert!(lhs.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn verify_fault_injection_fails() {
    let o = cube(&["verify", "--suite", "inequalities", "--n-max", "5", "--inject-fault", "corrupt-table"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL inequalities/influence-vs-enumeration"));
    assert!(text.contains("reproduce: cube verify --suite inequalities --n-max 5 --seed 1 --inject-fault corrupt-table"));
}

#[test]
fn verify_prints_constants() {
    let o = cube(&["verify", "--suite", "identities", "--n-max", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("kappa_max = 0.5"), "{text}");
    let o = cube(&["verify", "--suite", "gaussian"]);
    assert!(stdout(&o).contains("PASS gaussian/variance-taylor"));
}

#[test]
fn config_defaults_and_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cube.cfg");
    fs::write(&cfg, "# defaults\ninequality = talagrand1\nn = 6\nbudget = 10000\nseed = 42\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = cube(&["--config", c, "search"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["best_ratio"].as_f64().unwrap() >= 0.25);
    assert_eq!(v["seed"], 42);
    let o = cube(&["search", "--config", c, "--seed", "7", "--budget", "50"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["seed"].as_u64(), v["budget"].as_u64()), (Some(7), Some(50)));

    fs::write(&cfg, "seed = 1\ncolour = blue\n").unwrap();
    let o = cube(&["--config", c, "verify"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 1"));
}

#[test]
fn search_writes_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("search.json");
    let o = cube(&[
        "search", "--inequality", "poincare", "--n", "4", "--budget", "500", "--seed", "2",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["best_ratio"].as_f64().unwrap() <= 1.0 + 1e-12);
    let table = fs::read_to_string(dir.path().join("search.table")).unwrap();
    assert!(table.starts_with("n=4\n"));
    assert_eq!(table.lines().nth(1).unwrap(), v["best_table"].as_str().unwrap());
}
