//! End-to-end runs of the `kapitza` binary against the bundled scenarios.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/scenarios").join(name)
}

fn kapitza(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kapitza")).args(args).output().expect("binary runs")
}

fn with_config(sub: &str, config: &str, extra: &[&str]) -> Output {
    let path = scenario(config);
    let mut args = vec![sub, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    kapitza(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn rows(csv: &str) -> Vec<(i64, f64)> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("order,amplitude_re,amplitude_im,intensity"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn plan_passes_for_reference_scenario() {
    let o = with_config("plan", "plan_5A.toml", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn plan_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("plan.json");
    let o = with_config("plan", "plan_5A.toml", &["--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v.is_object());
}

#[test]
fn failing_flags_exit_2() {
    assert_eq!(with_config("plan", "plan_dark.toml", &[]).status.code(), Some(2));
    let weak = with_config("plan", "plan_weak_atom.toml", &[]);
    assert_eq!(weak.status.code(), Some(2));
    assert!(stdout(&weak).contains("FAIL"));
}

#[test]
fn malformed_config_exits_1_naming_the_key() {
    let o = with_config("plan", "malformed.toml", &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("wavelength_m"), "{}", stderr(&o));
}

#[test]
fn missing_config_exits_1() {
    assert_eq!(kapitza(&["plan", "--config", "/nonexistent/plan.toml"]).status.code(), Some(1));
    assert_eq!(kapitza(&["pattern"]).status.code(), Some(1));
    assert_eq!(kapitza(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn dipole_pattern_csv() {
    let o = with_config("pattern", "pattern_dipole.toml", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    let zero = r.iter().find(|(q, _)| *q == 0).unwrap().1;
    // J_0(1)^2
    assert!((zero - 0.585_527_499_513_664).abs() < 1e-12, "{zero}");
    let total: f64 = r.iter().map(|(_, i)| i).sum();
    assert!((total - 1.0).abs() < 1e-10);
    for (q, i) in &r {
        let mirror = r.iter().find(|(p, _)| p == &-q).unwrap().1;
        assert!((i - mirror).abs() < 1e-15);
    }
}

#[test]
fn zero_phase_gives_single_order() {
    let o = with_config("pattern", "pattern_empty.toml", &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].0, 0);
    assert!((r[0].1 - 1.0).abs() < 1e-15);
}

#[test]
fn quadrupole_pattern_has_even_orders_only() {
    for cfg in ["pattern_quadrupole.toml", "pattern_atom.toml"] {
        let o = with_config("pattern", cfg, &[]);
        assert_eq!(o.status.code(), Some(0), "{cfg}: {}", stderr(&o));
        let r = rows(&stdout(&o));
        assert!(r.len() > 3);
        assert!(r.iter().all(|(q, _)| q % 2 == 0));
    }
}

#[test]
fn pattern_output_is_byte_stable_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let oa = with_config("pattern", "pattern_quadrupole.toml", &["--out", a.to_str().unwrap(), "--plot"]);
    let ob = with_config("pattern", "pattern_quadrupole.toml", &["--out", b.to_str().unwrap()]);
    assert_eq!((oa.status.code(), ob.status.code()), (Some(0), Some(0)));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let svg = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    assert!(!dir.path().join("b.svg").exists());
}

#[test]
fn plot_without_out_is_invalid() {
    assert_eq!(with_config("pattern", "pattern_dipole.toml", &["--plot"]).status.code(), Some(1));
}

#[test]
fn fits_bundled_observations() {
    let d = with_config("fit", "fit_dipole.toml", &[]);
    assert_eq!(d.status.code(), Some(0), "{}", stderr(&d));
    let v: serde_json::Value = serde_json::from_str(&stdout(&d)).unwrap();
    assert!((v["fit"]["theta0_hat"].as_f64().unwrap() - 1.3).abs() < 1e-8);

    let q = with_config("fit", "fit_quadrupole.toml", &[]);
    assert_eq!(q.status.code(), Some(0), "{}", stderr(&q));
    let v: serde_json::Value = serde_json::from_str(&stdout(&q)).unwrap();
    let pol = &v["polarizability"];
    assert!((pol["alpha"].as_f64().unwrap() / 1e-29 - 1.0).abs() < 1e-6, "{pol}");
    assert!((pol["dipole_quadrupole"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((pol["quadrupole_quadrupole"].as_f64().unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn verify_default_seed_passes_and_is_deterministic() {
    let a = kapitza(&["verify"]);
    let b = kapitza(&["verify", "--seed", "0"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("result: PASS\n"));
}

#[test]
fn verify_rejects_bad_tolerance() {
    assert_eq!(kapitza(&["verify", "--tolerance", "-1"]).status.code(), Some(1));
}
