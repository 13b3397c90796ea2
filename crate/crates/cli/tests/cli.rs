use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn breakup(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_breakup"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stderr_record(o: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&o.stderr);
    serde_json::from_str(text.trim()).expect("stderr is one JSON record")
}

#[test]
fn profile_writes_one_csv_per_zeta() {
    let dir = tempfile::tempdir().unwrap();
    let o = breakup(&["profile", "--zeta", "0.01,20"], dir.path());
    assert!(o.status.success());
    let a = fs::read_to_string(dir.path().join("profile_zeta_0.01.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("profile_zeta_20.csv")).unwrap();
    assert!(a.starts_with("rho,zeta,density\n"));
    assert_eq!(a.lines().count(), 1302);
    assert_eq!(b.lines().count(), 1302);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run_manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 2);
    assert_eq!(manifest["tool"], "breakup-cli");
}

#[test]
fn entanglement_grid_from_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = breakup(
        &["entanglement", "--mass-ratio", "1e-4", "--eta-grid", "log:1e-8:1e8:200"],
        dir.path(),
    );
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("entanglement.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 200);
    for row in rows {
        let r: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!(r >= 1.0);
    }
}

#[test]
fn json_format() {
    let dir = tempfile::tempdir().unwrap();
    let o = breakup(&["--format", "json", "widths", "--eta-grid", "0.5,1"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("widths.json")).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = breakup(&["oracle", "--suite", "all"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run_manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["oracle"]["passed"], true);
    assert_eq!(manifest["oracle"]["failed"], 0);
}

#[test]
fn oracle_failure_exits_3_with_cases() {
    let dir = tempfile::tempdir().unwrap();
    let o = breakup(&["oracle", "--suite", "entanglement", "--tolerance", "1e-300"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let rec = stderr_record(&o);
    assert_eq!(rec["error"]["kind"], "oracle_failure");
    assert!(!rec["error"]["detail"].as_array().unwrap().is_empty());
    // manifest still records the run
    assert!(dir.path().join("run_manifest.json").exists());
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "m1 = 1\nm2 = 1836\nomega = 1\ne0 = -0.5\ngamma = 1e-4\ndr_cm0 = 1\nbogus = 3\n").unwrap();
    let o = breakup(&["widths", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_record(&o)["error"]["kind"], "config");

    let o = breakup(&["widths", "--config", "/nonexistent/x.cfg"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = breakup(&["figure", "--id", "fig9"], dir.path());
    assert_eq!(o.status.code(), Some(2));

    let o = breakup(&["entanglement", "--eta-grid", "log:1:0:5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = breakup(&["profile", "--zeta", "0"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_record(&o)["error"]["kind"], "numeric");
}

#[test]
fn manifest_reproduces_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("h.cfg");
    fs::write(&cfg, "m1 = 1\nm2 = 9\nomega = 1.5\ne0 = -0.5\ngamma = 1e-3\ndr_cm0 = 2\n").unwrap();
    let first = dir.path().join("first");
    let o = breakup(&["evolve", "--config", cfg.to_str().unwrap(), "--points", "50"], &first);
    assert!(o.status.success());
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(first.join("run_manifest.json")).unwrap()).unwrap();

    // rebuild the config and arguments from the manifest alone
    let cfg2 = dir.path().join("from_manifest.cfg");
    fs::write(&cfg2, manifest["params_config"].as_str().unwrap()).unwrap();
    let argv: Vec<String> = manifest["argv"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let mut args = Vec::new();
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        match a.as_str() {
            "--out" => {
                it.next();
            }
            "--config" => {
                it.next();
                args.push("--config".to_string());
                args.push(cfg2.to_str().unwrap().to_string());
            }
            _ => args.push(a.clone()),
        }
    }
    let second = dir.path().join("second");
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert!(breakup(&args, &second).status.success());
    assert_eq!(
        fs::read(first.join("evolve.csv")).unwrap(),
        fs::read(second.join("evolve.csv")).unwrap()
    );
}
