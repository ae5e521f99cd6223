//! The `diatomic` command-line tool: `simulate`, `compare`, `sweep` and `plot`.
//!
//! Every output is byte-deterministic for a given set of flags and is written
//! atomically (temporary file, then rename).

pub mod args;
pub mod error;
pub mod output;
pub mod svg;
pub mod table;

use std::path::Path;

use diatomic_core::analysis::{compare_with, regime_sweep, solve_grid};
use diatomic_core::rotation::regime_warning;
use diatomic_core::{LatticeParams, Method};
use serde::Serialize;

use crate::args::{parse_guides, Cli, Command, CompareArgs, PlotArgs, SimulateArgs, SweepArgs};
use crate::error::{CliError, Result};

/// Runs one parsed command; regime warnings go to stderr.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(&a),
        Command::Compare(a) => compare(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Plot(a) => plot(&a),
    }
}

fn warn_regime(method: Method, params: &LatticeParams) {
    if method == Method::Rotation {
        if let Some(w) = regime_warning(params) {
            eprintln!("warning: {w}");
        }
    }
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let run = a.run.validate()?;
    let method = a.method.resolve(a.run.rs_order)?;
    warn_regime(method, &run.params);
    let fields = solve_grid(method, &run.params, run.m, &run.z_grid, run.window, &run.settings)?;
    output::emit(a.output.as_deref(), &table::render(&fields))
}

fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("reports serialize");
    bytes.push(b'\n');
    bytes
}

pub fn compare(a: &CompareArgs) -> Result<()> {
    let run = a.run.validate()?;
    let method_a = a.method_a.resolve(a.run.rs_order)?;
    let method_b = a.method_b.resolve(a.run.rs_order)?;
    let report = compare_with(method_a, method_b, &run.params, run.m, &run.z_grid, run.window, &run.settings)?;
    for w in &report.regime_warnings {
        eprintln!("warning: {w}");
    }
    output::emit(a.output.as_deref(), &to_json(&report))
}

#[derive(Serialize)]
struct SweepPoint {
    alpha: f64,
    global_max_intensity_error: f64,
}

#[derive(Serialize)]
struct SweepReport {
    method_a: Method,
    method_b: Method,
    omega: f64,
    m: i64,
    window: usize,
    z_grid: Vec<f64>,
    errors: Vec<SweepPoint>,
}

pub fn sweep(a: &SweepArgs) -> Result<()> {
    let base = LatticeParams::new(a.omega, 0.0)?;
    if a.alphas.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err(CliError::config("--alphas must be finite and > 0"));
    }
    let probe = args::RunConfig {
        omega: a.omega,
        alpha: 0.0,
        m: 0,
        z_max: a.z_max,
        z_steps: a.z_steps,
        window: a.window,
        rs_order: 0,
    };
    let run = probe.validate()?;
    let points = regime_sweep(&a.alphas, &base, &run.z_grid, run.window)?;
    let report = SweepReport {
        method_a: Method::Exact,
        method_b: Method::Rotation,
        omega: a.omega,
        m: 0,
        window: run.window,
        z_grid: run.z_grid,
        errors: points
            .into_iter()
            .map(|(alpha, global_max_intensity_error)| SweepPoint { alpha, global_max_intensity_error })
            .collect(),
    };
    output::emit(a.output.as_deref(), &to_json(&report))
}

fn load(path: &Path) -> Result<svg::Dataset> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let rows = table::parse(path, &bytes)?;
    if rows.is_empty() {
        return Err(CliError::Parse { path: path.to_path_buf(), line: 2, message: "no data rows".into() });
    }
    let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok(svg::Dataset { label, traces: table::traces(&rows) })
}

pub fn plot(a: &PlotArgs) -> Result<()> {
    let primary = load(&a.input)?;
    let overlay = a.overlay.as_deref().map(load).transpose()?;
    let guides = match &a.guides {
        Some(spec) => parse_guides(spec)?,
        None => {
            let nonneg: Vec<i64> = primary.traces.keys().copied().filter(|n| *n >= 0).collect();
            if nonneg.is_empty() {
                primary.traces.keys().copied().collect()
            } else {
                nonneg
            }
        }
    };
    for n in &guides {
        for d in std::iter::once(&primary).chain(overlay.as_ref()) {
            if !d.traces.contains_key(n) {
                return Err(CliError::config(format!("guide {n} not present in '{}'", d.label)));
            }
        }
    }
    let doc = svg::render(&svg::Plot { title: a.title.clone(), guides, primary, overlay });
    output::write_atomic(&a.output, doc.as_bytes())
}
