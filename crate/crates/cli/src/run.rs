//! The four run modes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::ValueEnum;
use num_complex::Complex64;
use obscat::exec::Exec;
use obscat::fields::{computed_farfield, directions, exact_farfield_samples, farfield_error_l2, near_field, Sources};
use obscat::system::{Densities, DerivedParams, Discretization, Scene};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{complex_fixed, csv_row, grid_csv, num};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Manufactured solution: far field at one direction and L² errors.
    Verify,
    /// Manufactured solution: L² far-field errors per n.
    Converge,
    /// Plane-wave incidence: far field over all directions.
    Scatter,
    /// Plane-wave incidence: field moduli on a square grid.
    Nearfield,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Verify => "verify",
            Mode::Converge => "converge",
            Mode::Scatter => "scatter",
            Mode::Nearfield => "nearfield",
        }
    }
}

/// Files written (in order) and the text printed on stdout.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub report: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    version: &'static str,
    mode: Mode,
    config: &'a RunConfig,
    derived: DerivedParams,
    files: Vec<String>,
    /// Wall-clock seconds per phase, summed over all n.
    timings: BTreeMap<&'static str, f64>,
}

#[derive(Default)]
struct Clock(BTreeMap<&'static str, f64>);

impl Clock {
    fn time<T>(&mut self, phase: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.0.entry(phase).or_default() += start.elapsed().as_secs_f64();
        out
    }
}

struct Writer {
    dir: PathBuf,
    prefix: String,
    files: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: &Path, prefix: &str) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            prefix: prefix.to_string(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, suffix: &str, text: &str) -> Result<(), CliError> {
        let path = self.dir.join(format!("{}_{suffix}", self.prefix));
        fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }
}

fn solve(disc: &Discretization, rhs: &[Complex64], exec: Exec, clock: &mut Clock) -> Result<Densities, CliError> {
    let sys = clock.time("assemble", || disc.assemble(exec))?;
    let x = clock.time("solve", || sys.solve(rhs))?;
    Ok(disc.densities(&x)?)
}

fn manufactured_sources(mode: Mode, config: &RunConfig) -> Result<Sources, CliError> {
    config.sources().ok_or_else(|| {
        CliError::Config(format!(
            "mode {} needs a [sources] section: without manufactured sources there is no exact reference",
            mode.name()
        ))
    })
}

struct ErrorRow {
    n: usize,
    e: Complex64,
    h: Complex64,
    e_exact: Complex64,
    h_exact: Complex64,
    l2_e: f64,
    l2_h: f64,
}

fn manufactured_rows(
    scene: &Scene,
    config: &RunConfig,
    sources: &Sources,
    exec: Exec,
    clock: &mut Clock,
) -> Result<Vec<ErrorRow>, CliError> {
    let t = directions(config.numeric.directions);
    let t0 = [config.numeric.t];
    let mut rows = Vec::new();
    for &n in &config.numeric.n {
        let disc = Discretization::new(scene, n, n)?;
        sources.validate(&disc)?;
        let rhs = disc.rhs_manufactured(sources)?;
        let dens = solve(&disc, &rhs, exec, clock)?;
        let (all, at) = clock.time("farfield", || {
            (computed_farfield(&disc, &dens, &t, exec), computed_farfield(&disc, &dens, &t0, exec))
        });
        let exact = exact_farfield_samples(&disc.params, sources, &t);
        let exact0 = exact_farfield_samples(&disc.params, sources, &t0);
        rows.push(ErrorRow {
            n,
            e: at.e[0],
            h: at.h[0],
            e_exact: exact0.e[0],
            h_exact: exact0.h[0],
            l2_e: farfield_error_l2(&all.e, &exact.e)?,
            l2_h: farfield_error_l2(&all.h, &exact.h)?,
        });
    }
    Ok(rows)
}

fn verify_outputs(rows: &[ErrorRow], t: f64, w: &mut Writer) -> Result<String, CliError> {
    let mut csv = csv_row(
        &[
            "n", "t", "re_e", "im_e", "re_h", "im_h", "re_e_exact", "im_e_exact", "re_h_exact", "im_h_exact", "re_e_diff",
            "im_e_diff", "re_h_diff", "im_h_diff", "l2_e", "l2_h",
        ]
        .map(String::from),
    );
    let mut table = format!("far field at t = {t}\n{:>6}  {:<36}{:<36}{:>10}{:>10}\n", "n", "e", "h", "L2(e)", "L2(h)");
    for r in rows {
        let de = r.e - r.e_exact;
        let dh = r.h - r.h_exact;
        let mut cells = vec![r.n.to_string(), num(t)];
        for v in [r.e, r.h, r.e_exact, r.h_exact, de, dh] {
            cells.push(num(v.re));
            cells.push(num(v.im));
        }
        cells.push(num(r.l2_e));
        cells.push(num(r.l2_h));
        csv.push_str(&csv_row(&cells));
        table.push_str(&format!(
            "{:>6}  {:<36}{:<36}{:>10.2e}{:>10.2e}\n",
            r.n,
            complex_fixed(r.e),
            complex_fixed(r.h),
            r.l2_e,
            r.l2_h
        ));
    }
    if let Some(r) = rows.last() {
        table.push_str(&format!("{:>6}  {:<36}{:<36}\n", "exact", complex_fixed(r.e_exact), complex_fixed(r.h_exact)));
    }
    w.write("verify.csv", &csv)?;
    Ok(table)
}

fn converge_outputs(rows: &[ErrorRow], w: &mut Writer) -> Result<String, CliError> {
    let mut csv = csv_row(&["n", "l2_e", "l2_h"].map(String::from));
    let mut report = format!("{:>6}{:>14}{:>14}\n", "n", "L2(e)", "L2(h)");
    for r in rows {
        csv.push_str(&csv_row(&[r.n.to_string(), num(r.l2_e), num(r.l2_h)]));
        report.push_str(&format!("{:>6}{:>14.4e}{:>14.4e}\n", r.n, r.l2_e, r.l2_h));
    }
    w.write("converge.csv", &csv)?;
    Ok(report)
}

fn scatter(scene: &Scene, config: &RunConfig, exec: Exec, clock: &mut Clock, w: &mut Writer) -> Result<String, CliError> {
    let t = directions(config.numeric.directions);
    let mut report = String::new();
    for &n in &config.numeric.n {
        let disc = Discretization::new(scene, n, n)?;
        let dens = solve(&disc, &disc.rhs_incident(), exec, clock)?;
        let ff = clock.time("farfield", || computed_farfield(&disc, &dens, &t, exec));
        let mut csv = csv_row(&["t", "re_e", "im_e", "re_h", "im_h"].map(String::from));
        for ((t, e), h) in t.iter().zip(&ff.e).zip(&ff.h) {
            csv.push_str(&csv_row(&[num(*t), num(e.re), num(e.im), num(h.re), num(h.im)]));
        }
        w.write(&format!("farfield_n{n}.csv"), &csv)?;
        report.push_str(&format!("n = {n}: {} directions\n", t.len()));
    }
    Ok(report)
}

fn nearfield(scene: &Scene, config: &RunConfig, exec: Exec, clock: &mut Clock, w: &mut Writer) -> Result<String, CliError> {
    let n = *config.numeric.n.iter().max().expect("n list is non-empty");
    let disc = Discretization::new(scene, n, n)?;
    let dens = solve(&disc, &disc.rhs_incident(), exec, clock)?;
    let grid = clock.time("grid", || near_field(&disc, &dens, config.grid(), exec))?;
    let text = clock.time("format", || {
        [
            (
                "e_total.csv",
                grid_csv(&grid, &grid.e_total, "|e| total: incident plus scattered in the exterior, interior field in the annulus"),
            ),
            (
                "e_scattered.csv",
                grid_csv(&grid, &grid.e, "|e| scattered in the exterior, interior field in the annulus"),
            ),
            (
                "h.csv",
                grid_csv(&grid, &grid.h, "|h| scattered (the incident h vanishes) in the exterior, interior field in the annulus"),
            ),
        ]
    });
    for (suffix, body) in &text {
        w.write(suffix, body)?;
    }
    let masked = grid.e.iter().filter(|v| v.is_none()).count();
    Ok(format!("n = {n}: {0}x{0} grid, {masked} masked cells\n", config.grid().side()))
}

/// Runs `mode`, writes every artifact plus the resolved config and the
/// manifest into the output directory.
pub fn run(mode: Mode, config: &RunConfig, exec: Exec) -> Result<Outcome, CliError> {
    let scene = config.build_scene()?;
    let derived = scene.derive()?;
    let mut clock = Clock::default();
    let mut w = Writer::new(&config.output.dir, &config.output.prefix)?;
    let report = match mode {
        Mode::Verify | Mode::Converge => {
            let sources = manufactured_sources(mode, config)?;
            let rows = manufactured_rows(&scene, config, &sources, exec, &mut clock)?;
            if mode == Mode::Verify {
                verify_outputs(&rows, config.numeric.t, &mut w)?
            } else {
                converge_outputs(&rows, &mut w)?
            }
        }
        Mode::Scatter => scatter(&scene, config, exec, &mut clock, &mut w)?,
        Mode::Nearfield => nearfield(&scene, config, exec, &mut clock, &mut w)?,
    };
    w.write(&format!("{}_config.toml", mode.name()), &config.to_toml())?;
    let files = w
        .files
        .iter()
        .map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned())
        .collect();
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION"),
        mode,
        config,
        derived,
        files,
        timings: clock.0,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    w.write(&format!("{}_manifest.json", mode.name()), &(json + "\n"))?;
    let mut report = report;
    for f in &w.files {
        report.push_str(&format!("wrote {}\n", f.display()));
    }
    Ok(Outcome { files: w.files, report })
}
