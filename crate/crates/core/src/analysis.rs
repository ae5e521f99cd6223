//! Cross-method comparison over a z-grid.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{exact_field, QuadratureConfig};
use crate::model::{FieldState, LatticeParams};
use crate::ode::{default_window, propagate, OdeConfig};
use crate::rotation::{regime_warning, rotation_field, SeriesTruncation};
use crate::rs::{RsOrderConfig, RsTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Exact,
    Rotation,
    Rs { order: usize },
    Ode,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Exact => f.write_str("exact"),
            Method::Rotation => f.write_str("rotation"),
            Method::Rs { order } => write!(f, "rs@{order}"),
            Method::Ode => f.write_str("ode"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts `exact`, `rotation`, `ode`, `rs` (order 3) and `rs@<order>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Method::Exact),
            "rotation" => Ok(Method::Rotation),
            "ode" => Ok(Method::Ode),
            "rs" => Ok(Method::Rs { order: RsOrderConfig::default().max_order }),
            _ => {
                let order = s
                    .strip_prefix("rs@")
                    .and_then(|o| o.parse::<usize>().ok())
                    .ok_or_else(|| Error::domain(format!("unknown method '{s}'")))?;
                RsOrderConfig::new(order)?;
                Ok(Method::Rs { order })
            }
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Numerical settings for every solver.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolverSettings {
    pub quadrature: QuadratureConfig,
    pub truncation: SeriesTruncation,
    /// Step and tolerances for the RK4 reference; its window is sized per run.
    pub ode: OdeConfig,
}

fn check_grid(z_grid: &[f64]) -> Result<()> {
    if z_grid.is_empty() {
        return Err(Error::domain("z-grid must not be empty"));
    }
    if z_grid.iter().any(|z| !z.is_finite() || *z < 0.0) {
        return Err(Error::domain("z-grid values must be finite and >= 0"));
    }
    if z_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("z-grid must be strictly ascending"));
    }
    Ok(())
}

fn at_z(method: Method, z: f64) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Domain(_) | Error::LengthMismatch { .. } => e,
        other => Error::Solver { method: method.to_string(), z, source: Box::new(other) },
    }
}

/// Fields of one method on every grid point, cropped to `window`.
pub fn solve_grid(
    method: Method,
    params: &LatticeParams,
    m: i64,
    z_grid: &[f64],
    window: usize,
    settings: &SolverSettings,
) -> Result<Vec<FieldState>> {
    params.validate()?;
    check_grid(z_grid)?;
    crate::model::make_initial_state(window, m)?;
    match method {
        Method::Exact => z_grid
            .par_iter()
            .map(|&z| exact_field(params, m, z, window, &settings.quadrature).map_err(at_z(method, z)))
            .collect(),
        Method::Rotation => z_grid
            .par_iter()
            .map(|&z| rotation_field(params, m, z, window, &settings.truncation).map_err(at_z(method, z)))
            .collect(),
        Method::Rs { order } => {
            let table = RsTable::new(&RsOrderConfig::new(order)?)?;
            z_grid
                .par_iter()
                .map(|&z| {
                    let w = window as i64;
                    let amps = (-w..=w).map(|n| table.amplitude(params, n, m, z)).collect::<Result<Vec<_>>>()?;
                    FieldState::new(window, m, z, amps)
                })
                .collect()
        }
        Method::Ode => {
            let z_max = *z_grid.last().expect("non-empty grid");
            let cfg = OdeConfig { window: default_window(params, m, z_max).max(window), ..settings.ode };
            let states = propagate(params, m, z_grid, &cfg).map_err(|e| match e {
                Error::WindowTooSmall { z, .. } | Error::NormDrift { z, .. } => at_z(method, z)(e),
                other => other,
            })?;
            states.iter().map(|s| s.crop(window)).collect()
        }
    }
}

fn serialize_sites<S: Serializer>(map: &BTreeMap<i64, f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(map.iter().map(|(n, v)| (n.to_string(), v)))
}

/// Error metrics between two methods; intensity error is `| |u^A_n|^2 - |u^B_n|^2 |`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub method_a: Method,
    pub method_b: Method,
    pub params: LatticeParams,
    pub z_grid: Vec<f64>,
    /// Worst intensity error of each guide over the grid.
    #[serde(serialize_with = "serialize_sites")]
    pub per_guide_max_intensity_error: BTreeMap<i64, f64>,
    pub global_max_intensity_error: f64,
    /// `sqrt( (1/N_z) sum_z sum_n err_{n}(z)^2 )`.
    pub global_l2_error: f64,
    /// Worst complex-amplitude deviation `|u^A_n - u^B_n|`.
    pub global_max_amplitude_error: f64,
    /// Worst `|1 - sum_n |u_n|^2|` over the grid, per method label.
    pub norm_deficit_by_method: BTreeMap<String, f64>,
    pub regime_warnings: Vec<String>,
    /// Largest intensity error at each grid point, in grid order.
    #[serde(skip)]
    pub max_intensity_error_by_z: Vec<f64>,
}

impl ComparisonReport {
    /// Builds the report from two sets of fields on the same grid.
    pub fn from_fields(
        method_a: Method,
        method_b: Method,
        params: LatticeParams,
        a: &[FieldState],
        b: &[FieldState],
    ) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::LengthMismatch { expected: a.len(), found: b.len() });
        }
        let mut per_guide = BTreeMap::new();
        let mut by_z = Vec::with_capacity(a.len());
        let mut global_max = 0.0_f64;
        let mut amp_max = 0.0_f64;
        let mut sq_sum = 0.0_f64;
        for (fa, fb) in a.iter().zip(b) {
            if fa.window != fb.window || fa.z != fb.z {
                return Err(Error::domain("fields are not on matching grids"));
            }
            let mut row_max = 0.0_f64;
            for (n, (ua, ub)) in fa.sites().zip(fa.amplitudes.iter().zip(&fb.amplitudes)) {
                let err = (ua.norm_sqr() - ub.norm_sqr()).abs();
                let entry = per_guide.entry(n).or_insert(0.0_f64);
                *entry = entry.max(err);
                row_max = row_max.max(err);
                sq_sum += err * err;
                amp_max = amp_max.max((ua - ub).norm());
            }
            global_max = global_max.max(row_max);
            by_z.push(row_max);
        }
        let deficit = |fields: &[FieldState]| fields.iter().map(|f| (1.0 - f.norm_sqr()).abs()).fold(0.0, f64::max);
        let mut norm_deficit_by_method = BTreeMap::new();
        norm_deficit_by_method.insert(method_a.to_string(), deficit(a));
        norm_deficit_by_method.insert(method_b.to_string(), deficit(b));
        let mut regime_warnings = Vec::new();
        if method_a == Method::Rotation || method_b == Method::Rotation {
            regime_warnings.extend(regime_warning(&params));
        }
        Ok(Self {
            method_a,
            method_b,
            params,
            z_grid: a.iter().map(|f| f.z).collect(),
            per_guide_max_intensity_error: per_guide,
            global_max_intensity_error: global_max,
            global_l2_error: if a.is_empty() { 0.0 } else { (sq_sum / a.len() as f64).sqrt() },
            global_max_amplitude_error: amp_max,
            norm_deficit_by_method,
            regime_warnings,
            max_intensity_error_by_z: by_z,
        })
    }
}

/// Compares two methods with default solver settings.
pub fn compare(
    method_a: Method,
    method_b: Method,
    params: &LatticeParams,
    m: i64,
    z_grid: &[f64],
    window: usize,
) -> Result<ComparisonReport> {
    compare_with(method_a, method_b, params, m, z_grid, window, &SolverSettings::default())
}

pub fn compare_with(
    method_a: Method,
    method_b: Method,
    params: &LatticeParams,
    m: i64,
    z_grid: &[f64],
    window: usize,
    settings: &SolverSettings,
) -> Result<ComparisonReport> {
    let a = solve_grid(method_a, params, m, z_grid, window, settings)?;
    let b = if method_b == method_a { a.clone() } else { solve_grid(method_b, params, m, z_grid, window, settings)? };
    ComparisonReport::from_fields(method_a, method_b, *params, &a, &b)
}

/// Worst rotation-vs-exact intensity error for each coupling, centre guide excited.
pub fn regime_sweep(
    alphas: &[f64],
    params_base: &LatticeParams,
    z_grid: &[f64],
    window: usize,
) -> Result<Vec<(f64, f64)>> {
    if alphas.is_empty() {
        return Err(Error::domain("alpha list must not be empty"));
    }
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("alphas must be strictly ascending"));
    }
    alphas
        .iter()
        .map(|&alpha| {
            let params = LatticeParams::new(params_base.omega, alpha)?;
            let report = compare(Method::Exact, Method::Rotation, &params, 0, z_grid, window)?;
            Ok((alpha, report.global_max_intensity_error))
        })
        .collect()
}

/// `points` evenly spaced values on `[0, z_max]`.
pub fn uniform_grid(z_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..points).map(|i| z_max * i as f64 / (points - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> LatticeParams {
        LatticeParams::new(1.0, 0.3).unwrap()
    }

    #[test]
    fn method_labels_round_trip() {
        for m in [Method::Exact, Method::Rotation, Method::Ode, Method::Rs { order: 5 }] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert_eq!("rs".parse::<Method>().unwrap(), Method::Rs { order: 3 });
        assert!("rs@13".parse::<Method>().is_err());
        assert!("spline".parse::<Method>().is_err());
    }

    #[test]
    fn self_comparison_is_zero() {
        let grid = uniform_grid(20.0, 11);
        let r = compare(Method::Exact, Method::Exact, &params(), 0, &grid, 10).unwrap();
        assert_eq!(r.global_max_intensity_error, 0.0);
        assert_eq!(r.global_l2_error, 0.0);
        assert!(r.per_guide_max_intensity_error.values().all(|v| *v == 0.0));
        assert_eq!(r.norm_deficit_by_method.len(), 1);
    }

    #[test]
    fn comparison_is_symmetric() {
        let grid = uniform_grid(30.0, 16);
        let ab = compare(Method::Exact, Method::Rotation, &params(), 0, &grid, 8).unwrap();
        let ba = compare(Method::Rotation, Method::Exact, &params(), 0, &grid, 8).unwrap();
        assert_eq!(ab.per_guide_max_intensity_error, ba.per_guide_max_intensity_error);
        assert_eq!(ab.global_max_intensity_error, ba.global_max_intensity_error);
        assert_eq!(ab.global_l2_error, ba.global_l2_error);
        assert_eq!(ab.max_intensity_error_by_z, ba.max_intensity_error_by_z);
        let max = ab.per_guide_max_intensity_error.values().cloned().fold(0.0, f64::max);
        assert_eq!(max, ab.global_max_intensity_error);
    }

    #[test]
    fn grid_validation() {
        let p = params();
        assert!(compare(Method::Exact, Method::Ode, &p, 0, &[], 5).is_err());
        assert!(compare(Method::Exact, Method::Ode, &p, 0, &[1.0, 0.5], 5).is_err());
        assert!(regime_sweep(&[0.2, 0.1], &p, &[0.0, 1.0], 5).is_err());
    }

    #[test]
    fn warnings_only_for_rotation_outside_regime() {
        let p = LatticeParams::new(1.0, 0.7).unwrap();
        let grid = uniform_grid(2.0, 3);
        let r = compare(Method::Exact, Method::Rotation, &p, 0, &grid, 6).unwrap();
        assert_eq!(r.regime_warnings.len(), 1);
        let r = compare(Method::Exact, Method::Ode, &p, 0, &grid, 6).unwrap();
        assert!(r.regime_warnings.is_empty());
    }

    #[test]
    fn uniform_grid_endpoints() {
        let g = uniform_grid(100.0, 1001);
        assert_eq!(g.len(), 1001);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1000], 100.0);
        assert_eq!(g[10], 1.0);
    }
}
