use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_landau-coulomb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn zc_prints_constants() {
    let o = run(&["zc"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c0,c1,zc"));
    let values: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((values[2] - 0.378_016_6).abs() < 1e-7);
    assert!((values[0] * values[1] - 16.0).abs() < 1e-12);
    assert!(!text.contains('\r'));
}

#[test]
fn json_has_records_and_meta() {
    let o = run(&[
        "spectrum", "--m", "-1", "--Z", "0.2", "--nmax", "12", "--k", "3", "--format", "json",
        "--seed", "7",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    assert_eq!(v["meta"]["seed"], 7);
    assert_eq!(v["meta"]["config"]["command"], "spectrum");
    assert_eq!(v["meta"]["config"]["m"], -1);
    assert!(v["meta"]["version"].is_string());
}

#[test]
fn output_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut contents = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("scan{i}.csv"));
        let p = path.to_str().unwrap();
        let o = run(&[
            "scan",
            "--m",
            "-2,0,2",
            "--Z-min",
            "0",
            "--Z-max",
            "0.35",
            "--Z-steps",
            "3",
            "--nmax",
            "20,10",
            "--k",
            "2",
            "--out",
            p,
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        contents.push(fs::read(&path).unwrap());
    }
    assert_eq!(contents[0], contents[1]);
    let text = String::from_utf8(contents.remove(0)).unwrap();
    assert_eq!(text.lines().next(), Some("m,n_max,Z,index,eigenvalue"));
    // 3 sectors x 2 truncations x 3 couplings x 2 eigenvalues
    assert_eq!(text.lines().count(), 1 + 36);
}

#[test]
fn verify_gautschi_passes() {
    let o = run(&["verify", "gautschi"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("suite,checks,failures"));
}

#[test]
fn verify_suite_flag() {
    let o = run(&["verify", "--suite", "lemma-pre", "--m", "4", "--nmax", "12"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("lemma-pre"));
}

#[test]
fn trial_reports_slope() {
    let o = run(&[
        "trial", "--Z", "0.756", "--Nmax", "20000", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let slope = v["meta"]["slope"].as_f64().unwrap();
    assert!((slope + 2.0).abs() < 0.1, "slope {slope}");
    assert_eq!(v["records"].as_array().unwrap().len(), 4);
}

#[test]
fn trial_without_enough_decades_fails() {
    let o = run(&["trial", "--Nmax", "500"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec!["spectrum", "--Z", "-0.5"],
        vec!["spectrum", "--Z", "0.1", "--format", "xml"],
        vec!["scan", "--Z-min", "0.3", "--Z-max", "0.1"],
        vec!["scan", "--Z-min", "0", "--Z-max", "0.1", "--Z-steps", "0"],
        vec!["verify"],
        vec!["spectrum", "--Z", "0.1", "--nmax", "3", "--k", "9"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}
