//! Command-line flags. Defaults: omega = 1, alpha = 0.3,
//! centre guide excited, z in [0, 100], guides -10..=10.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diatomic_core::{make_initial_state, uniform_grid, LatticeParams, Method, RsOrderConfig, SolverSettings};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "diatomic", version, about = "Field propagation in diatomic waveguide arrays")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one method on a z-grid and write `z,n,re,im,intensity` CSV.
    Simulate(SimulateArgs),
    /// Compare two methods and write a JSON error report.
    Compare(CompareArgs),
    /// Rotation-vs-exact worst intensity error for a list of couplings, as JSON.
    Sweep(SweepArgs),
    /// Plot intensity traces from simulate CSV output as SVG.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Rotation,
    Rs,
    Ode,
}

impl MethodArg {
    pub fn resolve(self, rs_order: usize) -> Result<Method> {
        Ok(match self {
            MethodArg::Exact => Method::Exact,
            MethodArg::Rotation => Method::Rotation,
            MethodArg::Ode => Method::Ode,
            MethodArg::Rs => Method::Rs { order: RsOrderConfig::new(rs_order)?.max_order },
        })
    }
}

/// Lattice, source and grid flags shared by `simulate` and `compare`.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// On-site detuning.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    /// Nearest-neighbour coupling.
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Index of the initially excited guide.
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub m: i64,
    /// Largest propagation distance.
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub z_max: f64,
    /// Number of z intervals; the grid has z_steps + 1 points (0 means z = 0 only).
    #[arg(long, default_value_t = 1000)]
    pub z_steps: usize,
    /// Half-width N of the reported window n = -N..=N.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    /// Order of the perturbation series used by `rs`.
    #[arg(long, default_value_t = 3)]
    pub rs_order: usize,
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub params: LatticeParams,
    pub m: i64,
    pub z_grid: Vec<f64>,
    pub window: usize,
    pub settings: SolverSettings,
}

impl RunConfig {
    /// Checks every flag before any computation starts.
    pub fn validate(&self) -> Result<Run> {
        let params = LatticeParams::new(self.omega, self.alpha)?;
        make_initial_state(self.window, self.m)?;
        RsOrderConfig::new(self.rs_order)?;
        if !self.z_max.is_finite() || self.z_max < 0.0 {
            return Err(CliError::config(format!("--z-max must be finite and >= 0, got {}", self.z_max)));
        }
        let z_grid = if self.z_steps == 0 {
            vec![0.0]
        } else if self.z_max > 0.0 {
            uniform_grid(self.z_max, self.z_steps + 1)
        } else {
            return Err(CliError::config("--z-max must be > 0 when --z-steps > 0"));
        };
        Ok(Run { params, m: self.m, z_grid, window: self.window, settings: SolverSettings::default() })
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    #[command(flatten)]
    pub run: RunConfig,
    /// Output CSV path; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method_a: MethodArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Ode)]
    pub method_b: MethodArg,
    #[command(flatten)]
    pub run: RunConfig,
    /// Output JSON path; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Strictly ascending couplings, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.2, 0.3])]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub z_max: f64,
    #[arg(long, default_value_t = 1000)]
    pub z_steps: usize,
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    /// Output JSON path; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// CSV written by `simulate`, drawn solid.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Second CSV drawn dashed on top.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
    /// Guides to draw, e.g. `0..10` or `-2,0,2`; default: every guide n >= 0 in the input.
    #[arg(long, allow_hyphen_values = true)]
    pub guides: Option<String>,
    #[arg(long)]
    pub title: Option<String>,
    /// Output SVG path.
    #[arg(long, short)]
    pub output: PathBuf,
}

/// Parses `a..b` ranges and single guides separated by commas, keeping first-seen order.
pub fn parse_guides(spec: &str) -> Result<Vec<i64>> {
    let bad = || CliError::config(format!("invalid guide selection '{spec}'"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim) {
        if part.is_empty() {
            return Err(bad());
        }
        let range = match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?);
                if b < a {
                    return Err(bad());
                }
                a..=b
            }
            None => {
                let n = part.parse::<i64>().map_err(|_| bad())?;
                n..=n
            }
        };
        for n in range {
            if !out.contains(&n) {
                out.push(n);
            }
        }
    }
    Ok(out)
}
