use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hyperwind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperwind"))
        .args(args)
        .env_remove("HYPERWIND_THREADS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    assert!(!text.contains('\r'));
    text.lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn catalogue_sine_is_constant_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hyperwind(&["catalogue", "hhm-sine", "--k", "1", "--v", "2", "--out", out]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let path = dir.path().join("hhm-sine.csv");
    let table = rows(&path);
    assert_eq!(table[0], ["xi", "p", "dp", "phase_rate"]);
    assert_eq!(table.len(), 202);
    for r in &table[1..] {
        assert_eq!(r[1].parse::<f64>().unwrap(), -2.0);
    }
    let m = manifest(dir.path());
    assert_eq!(m["command"], "catalogue");
    assert_eq!(m["exit_code"], 0);
    let first = fs::read(&path).unwrap();
    hyperwind(&["catalogue", "hhm-sine", "--k", "1", "--v", "2", "--out", out]);
    assert_eq!(fs::read(&path).unwrap(), first);
}

#[test]
fn catalogue_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hyperwind(&["catalogue", "hsm-elliptic", "--q", "-2", "--rho", "0.1", "--out", out]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("2q > -(8rho^2+1)"), "{}", stderr(&o));
    assert_eq!(code(&hyperwind(&["catalogue", "hhm-nothing", "--out", out])), 2);
    assert_eq!(code(&hyperwind(&["catalogue", "hhm-sine", "--out", out])), 2);
    assert_eq!(code(&hyperwind(&["frobnicate"])), 2);
}

#[test]
fn hamiltonian_profile_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hyperwind(&[
        "catalogue", "hhm-hamiltonian-profile", "--xmin", "-10", "--xmax", "10", "--n", "1001", "--out", out,
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let csv = dir.path().join("hhm-hamiltonian-profile.csv");
    let table = rows(&csv);
    assert_eq!(table[0], ["x", "value", "asymptote"]);
    let values: Vec<f64> = table[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    for i in 0..values.len() {
        // sample points are symmetric only to rounding
        assert!((values[i] - values[values.len() - 1 - i]).abs() < 1e-12);
    }
    assert!((table[1][2].parse::<f64>().unwrap() - 0.485868).abs() < 1e-6);

    let plot_dir = dir.path().join("plot");
    let o = hyperwind(&["plot", csv.to_str().unwrap(), "--x", "x", "--y", "value,asymptote", "--out", plot_dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let script = fs::read_to_string(plot_dir.join("plot.gp")).unwrap();
    assert!(script.contains("using 1:2") && script.contains("using 1:3"));
    assert!(!script.contains(&table[1][1]));
    assert!(plot_dir.join("manifest.json").is_file());

    let o = hyperwind(&["plot", csv.to_str().unwrap(), "--x", "x", "--y", "energy", "--out", out]);
    assert_eq!(code(&o), 2);
    let o = hyperwind(&["plot", "no/such/file.csv", "--x", "x", "--y", "value", "--out", out]);
    assert_eq!(code(&o), 2);
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("config.json");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn blowup_run_exits_three_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model": "hsm", "grid": {"points": 32}, "dt": 1e-4, "t_end": 3.0, "cadence": 10,
            "seed": {"family": "hsm-blowup", "winding": 1, "rho": 2.0}}"#,
    );
    let out = dir.path().join("run");
    let o = hyperwind(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let table = rows(&out.join("diagnostics.csv"));
    assert_eq!(table[0], ["t", "energy", "constraint_residual", "winding", "theta_max"]);
    let last: f64 = table.last().unwrap()[0].parse().unwrap();
    // K(0.75)/2
    assert!((last - 1.078_257_8).abs() < 0.02 * 1.078_257_8, "{last}");
    assert!(out.join("final_state.csv").is_file());
    assert_eq!(manifest(&out)["exit_code"], 3);
}

#[test]
fn sine_seed_keeps_winding_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model": "hhm", "grid": {"points": 64, "scheme": "spectral"}, "dt": 1e-3, "t_end": 5.0,
            "cadence": 50, "seed": {"family": "hhm-sine", "k": 1.2, "v": 0.5}, "probes": [0.0]}"#,
    );
    let out = dir.path().join("run");
    let o = hyperwind(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = rows(&out.join("diagnostics.csv"));
    assert_eq!(table.len(), 102);
    assert!(table[1..].iter().all(|r| r[3] == "1"));
    let probes = rows(&out.join("probes.csv"));
    assert_eq!(probes[0], ["t", "energy_half", "theta_min", "turns", "theta_0", "phi_0"]);
    assert_eq!(manifest(&out)["seed_family"], "hhm-sine");
}

#[test]
fn invalid_configs_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let cases = [
        (r#"{"model": "hhm", "grid": {"points": 0}, "dt": 1e-3, "t_end": 1, "seed": {"family": "static-winding"}}"#, "/grid/points"),
        (r#"{"model": "hhm", "grid": {"points": 64}, "dt": -1, "t_end": 1, "seed": {"family": "static-winding"}}"#, "/dt"),
        (r#"{"model": "hhm", "grid": {"points": 64}, "dt": 1e-3, "t_end": 1, "seed": {"family": "nope"}}"#, "/seed/family"),
        (r#"{"model": "hhm", "grid": {"points": 64}, "dt": 1e-3, "t_end": 1, "seed": {"family": "static-winding"}, "extra": 1}"#, "/extra"),
        ("{not json", "/"),
    ];
    for (text, pointer) in cases {
        let cfg = write_config(dir.path(), text);
        let o = hyperwind(&["simulate", "--config", &cfg, "--out", out]);
        assert_eq!(code(&o), 2, "{text}");
        assert!(stderr(&o).contains(&format!("{pointer}:")), "{text}: {}", stderr(&o));
    }
    let o = hyperwind(&["simulate", "--config", "missing.json", "--out", out]);
    assert_eq!(code(&o), 1);
}

#[test]
fn seed_family_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"model": "hhm", "grid": {"points": 32}, "dt": 1e-3, "t_end": 0.01,
            "seed": {"family": "hhm-sine", "p3": 0.5}}"#,
    );
    let out = dir.path().join("run");
    let o = hyperwind(&["simulate", "--config", &cfg, "--seed-family", "static-winding", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(manifest(&out)["seed_family"], "static-winding");
}

#[test]
fn scans() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("default");
    let o = hyperwind(&["scan", "--out", out.to_str().unwrap(), "--threads", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("feasible_on_R: 0\n"));
    assert!(fs::read_to_string(out.join("summary.txt")).unwrap().contains("tuples: 10000\n"));
    let report = fs::read(out.join("scan_hhm.csv")).unwrap();
    let again = dir.path().join("again");
    hyperwind(&["scan", "--out", again.to_str().unwrap(), "--threads", "1"]);
    assert_eq!(fs::read(again.join("scan_hhm.csv")).unwrap(), report);

    let cfg = write_config(dir.path(), r#"{"k": {"n": 1}, "v": {"n": 1}, "c": {"n": 1}, "q": {"n": 1}}"#);
    let single = dir.path().join("single");
    let o = hyperwind(&["scan", "--config", &cfg, "--out", single.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&single.join("scan_hhm.csv")).len(), 2);

    let cfg = write_config(dir.path(), r#"{"k": {"n": 101}, "v": {"n": 100}, "c": {"n": 100}, "q": {"n": 100}}"#);
    let o = hyperwind(&["scan", "--config", &cfg, "--out", single.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("refused"));

    let cfg = write_config(dir.path(), r#"{"model": "hsm"}"#);
    let hsm = dir.path().join("hsm");
    let o = hyperwind(&["scan", "--config", &cfg, "--out", hsm.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("mismatches: 0\n"));
}

#[test]
fn thread_env_fallback_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hyperwind"))
        .args(["scan", "--out", dir.path().to_str().unwrap()])
        .env("HYPERWIND_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("HYPERWIND_THREADS"));
}
