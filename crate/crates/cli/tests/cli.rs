use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use obscat_cli::config::{CurveConfig, ImpedanceConfig};
use obscat_cli::output::parse_grid;
use obscat_cli::{presets, RunConfig};

fn obscat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obscat")).args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn preset(name: &str) -> RunConfig {
    RunConfig::from_toml(presets::source(name).unwrap()).unwrap()
}

#[test]
fn presets_are_frozen() {
    let p1 = preset("example1");
    assert_eq!((p1.scene.omega, p1.scene.theta, p1.scene.phi), (1.0, PI / 3.0, 0.0));
    assert_eq!((p1.scene.eps0, p1.scene.mu0, p1.scene.eps1, p1.scene.mu1), (1.0, 1.0, 3.0, 2.0));
    assert_eq!(p1.scene.impedance, ImpedanceConfig::Constant { value: 2.0 });
    assert_eq!(p1.scene.outer, CurveConfig::Circle { center: [0.0, 0.0], radius: 0.5 });
    assert_eq!(p1.scene.inner, CurveConfig::Kite { a: 0.2, b: 0.1, c: 0.2, center: [-0.2, 0.1] });
    assert_eq!(p1.sources.unwrap().z, [[-0.1, 0.35], [0.1, 0.3], [-0.3, 0.55], [0.15, 0.6]]);
    assert_eq!(p1.numeric.n, vec![8, 16, 32, 64]);
    assert_eq!(p1.numeric.t, 0.0);

    let p2 = preset("example2");
    assert_eq!((p2.scene.omega, p2.scene.theta), (2.0, PI / 4.0));
    assert_eq!((p2.scene.eps0, p2.scene.mu0, p2.scene.eps1, p2.scene.mu1), (2.0, 1.0, 4.0, 2.0));
    assert_eq!(p2.scene.impedance, ImpedanceConfig::ReciprocalCosine { offset: 1.0, amplitude: 0.2 });
    assert_eq!(p2.scene.outer, CurveConfig::Peanut { p: 0.5, q: 0.1, offset: [0.0, 0.0] });
    assert_eq!(
        p2.scene.inner,
        CurveConfig::Apple { a: 0.18, b: 0.12, c: -0.04, d: 0.7, offset: [-0.25, 0.05] }
    );
    assert_eq!(p2.sources.unwrap().z, [[0.2, 0.2], [-0.5, -0.2], [0.4, 0.55], [-0.3, -0.6]]);
    assert_eq!(p2.numeric.t, PI / 4.0);

    let p3 = preset("example3");
    assert_eq!((p3.scene.omega, p3.scene.theta, p3.scene.phi), (6.0, PI / 4.0, PI / 2.0));
    assert_eq!((p3.scene.outer, p3.scene.inner), (p1.scene.outer, p1.scene.inner));
    assert_eq!((p3.scene.eps1, p3.scene.mu1, p3.scene.impedance), (3.0, 2.0, p1.scene.impedance));
    assert_eq!((p3.numeric.grid_c, p3.numeric.grid_m), (0.8, 128));
    assert!(p3.sources.is_none());

    let p4 = preset("example4");
    assert_eq!((p4.scene.omega, p4.scene.theta, p4.scene.phi), (1.0, PI / 6.0, PI / 6.0));
    assert_eq!((p4.scene.eps0, p4.scene.mu0, p4.scene.eps1, p4.scene.mu1), (1.0, 1.0, 6.0, 4.0));
    assert_eq!(p4.scene.impedance, p2.scene.impedance);
    assert_eq!(
        p4.scene.inner,
        CurveConfig::Apple { a: 0.18, b: 0.12, c: -0.04, d: 0.7, offset: [0.25, -0.05] }
    );
    assert_eq!((p4.numeric.grid_c, p4.numeric.grid_m), (1.0, 128));

    for name in presets::NAMES {
        preset(name).build_scene().unwrap().derive().unwrap();
    }
}

#[test]
fn verify_error_drops_tenfold() {
    let dir = tempfile::tempdir().unwrap();
    let o = obscat(&["verify", "--preset", "example2", "--n", "16,32", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("exact"));
    let rows = csv_rows(&dir.path().join("example2_verify.csv"));
    assert_eq!(rows.len(), 2);
    let (l2_16, l2_32) = (rows[0][14], rows[1][14]);
    assert!(l2_32 < l2_16 / 10.0, "{l2_16} {l2_32}");
}

#[test]
fn converge_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = obscat(&["converge", "--preset", "example1", "--out", out]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = csv_rows(&dir.path().join("example1_converge.csv"));
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![8.0, 16.0, 32.0, 64.0]);
    assert!(rows[3][1] <= 1e-8 && rows[3][2] <= 1e-8);
    for w in rows.windows(2) {
        assert!(w[1][1] < w[0][1] && w[1][2] < w[0][2]);
    }
    let o = obscat(&["converge", "--preset", "example1", "--n", "12", "--out", out]);
    assert!(o.status.success());
    assert_eq!(csv_rows(&dir.path().join("example1_converge.csv")).len(), 1);
}

#[test]
fn scatter_writes_one_row_per_direction() {
    let dir = tempfile::tempdir().unwrap();
    let o = obscat(&["scatter", "--preset", "example3", "--n", "16", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let path = dir.path().join("example3_farfield_n16.csv");
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("t,re_e,im_e,re_h,im_h\n"));
    let rows = csv_rows(&path);
    assert_eq!(rows.len(), 64);
    assert!(rows.iter().all(|r| r.len() == 5 && r.iter().all(|v| v.is_finite())));
    // Twelve significant digits.
    let cell = text.lines().nth(2).unwrap().split(',').nth(1).unwrap();
    assert_eq!(cell.split('e').next().unwrap().trim_start_matches('-').len(), 13, "{cell}");
}

const SMALL_GRID: &str = r#"
[scene]
omega = 1.0
theta = "pi/3"
eps0 = 1.0
mu0 = 1.0
eps1 = 3.0
mu1 = 2.0
impedance = { kind = "constant", value = 2.0 }
outer = { kind = "circle", center = [0.0, 0.0], radius = 0.5 }
inner = { kind = "kite", a = 0.2, b = 0.1, c = 0.2, center = [-0.2, 0.1] }

[numeric]
n = [12, 16]
grid_c = 0.8
grid_m = 10
clearance = 0.02

[output]
prefix = "small"
"#;

#[test]
fn nearfield_grid_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(&cfg, SMALL_GRID).unwrap();
    let o = obscat(&["nearfield", "--config", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    for file in ["small_e_total.csv", "small_e_scattered.csv", "small_h.csv"] {
        let text = fs::read_to_string(dir.path().join(file)).unwrap();
        assert!(text.contains("# c = 0.8\n# m = 10\n# clearance = 0.02\n"));
        assert!(text.contains("# mask: nan"));
        let rows = parse_grid(&text);
        assert_eq!(rows.len(), 20);
        assert!(rows.iter().all(|r| r.len() == 20));
        // The hole sits around (-0.2, 0.1); grid points near it are masked.
        let d: f64 = 1.6 / 19.0;
        let k = ((-0.2 + 0.8) / d).round() as usize;
        let j = ((0.1 + 0.8) / d).round() as usize;
        assert!(rows[j][k].is_nan());
        // The corner is outside everything.
        assert!(rows[0][0].is_finite());
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("small_nearfield_manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["numeric"]["n"], serde_json::json!([12, 16]));
    assert!(manifest["timings"]["grid"].as_f64().unwrap() >= 0.0);
    assert!(manifest["derived"]["kappa1"].as_f64().unwrap() > 0.0);
}

#[test]
fn echoed_config_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = obscat(&["verify", "--preset", "example2", "--n", "8,12", "--out", out]);
    assert!(o.status.success());
    let first = fs::read(dir.path().join("example2_verify.csv")).unwrap();
    let echoed = dir.path().join("example2_verify_config.toml");
    let copy = dir.path().join("echo.toml");
    fs::copy(&echoed, &copy).unwrap();
    fs::remove_file(dir.path().join("example2_verify.csv")).unwrap();
    let o = obscat(&["verify", "--config", copy.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(dir.path().join("example2_verify.csv")).unwrap(), first);
    assert_eq!(fs::read_to_string(&echoed).unwrap(), fs::read_to_string(&copy).unwrap());
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("c.toml");
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();

    let cfg = write_config(dir.path(), &SMALL_GRID.replace("grid_m = 10", "grid_m = 10\ngrid_k = 3"));
    let o = obscat(&["nearfield", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("grid_k") && err.contains("line"), "{err}");

    let o = obscat(&["converge", "--preset", "example4", "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("[sources]"));

    let cfg = write_config(dir.path(), &SMALL_GRID.replace("eps1 = 3.0", "eps1 = 0.25\n").replace("mu1 = 2.0", "mu1 = 1.0").replace("\"pi/3\"", "0.1"));
    let o = obscat(&["scatter", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("infeasible"));

    let cfg = write_config(dir.path(), &SMALL_GRID.replace("radius = 0.5", "radius = 0.3"));
    let o = obscat(&["scatter", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));

    let cfg = write_config(dir.path(), &format!("{SMALL_GRID}\n[sources]\nz = [[0.45, 0.0], [0.0, 0.45], [0.1, 0.1], [0.9, 0.0]]\n"));
    let o = obscat(&["verify", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("z3"));

    let cfg = write_config(dir.path(), &SMALL_GRID.replace("value = 2.0", "value = -1.0"));
    let o = obscat(&["scatter", "--config", &cfg, "--out", out]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(obscat(&["scatter", "--config", "/nonexistent/x.toml"]).status.code(), Some(2));
    assert_eq!(obscat(&["scatter", "--preset", "example9"]).status.code(), Some(2));
    assert_eq!(obscat(&["explode", "--preset", "example1"]).status.code(), Some(2));
    assert_eq!(obscat(&["scatter"]).status.code(), Some(2));
    assert_eq!(obscat(&["scatter", "--preset", "example1", "--n", "x"]).status.code(), Some(2));
    assert_eq!(obscat(&["scatter", "--preset", "example1", "--n", "1", "--out", out]).status.code(), Some(2));
    assert_eq!(obscat(&["--help"]).status.code(), Some(0));
}
