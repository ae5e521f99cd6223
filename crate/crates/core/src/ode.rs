//! Fixed-step classical RK4 integration of the truncated coupled-mode system
//! `i du_n/dz = omega (-1)^n u_n + alpha (u_{n+1} + u_{n-1})`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{apply_hamiltonian_into, make_initial_state, FieldState, LatticeParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub step: f64,
    /// Half-width `N` of the integration window.
    pub window: usize,
    /// Maximum allowed `|u_{+-N}|^2` at any target.
    pub edge_mass_tolerance: f64,
    /// Maximum allowed `|sum |u_n|^2 - 1|` at any target.
    pub norm_drift_tolerance: f64,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self { step: 1e-3, window: 20, edge_mass_tolerance: 1e-10, norm_drift_tolerance: 1e-8 }
    }
}

impl OdeConfig {
    /// Default settings with the window sized to the light cone: `ceil(4 alpha z_max) + 20`
    /// sites beyond the source.
    pub fn for_run(params: &LatticeParams, m: i64, z_max: f64) -> Self {
        Self { window: default_window(params, m, z_max), ..Self::default() }
    }
}

pub fn default_window(params: &LatticeParams, m: i64, z_max: f64) -> usize {
    (4.0 * params.alpha * z_max).ceil() as usize + 20 + m.unsigned_abs() as usize
}

/// Reusable stage buffers for [`rk4_step`].
#[derive(Debug, Clone)]
pub struct Rk4Workspace {
    k: [Vec<C64>; 4],
    tmp: Vec<C64>,
    hv: Vec<C64>,
}

impl Rk4Workspace {
    pub fn new(len: usize) -> Self {
        let zero = vec![C64::new(0.0, 0.0); len];
        Self { k: [zero.clone(), zero.clone(), zero.clone(), zero.clone()], tmp: zero.clone(), hv: zero }
    }
}

/// One RK4 step of `du/dz = -i A u`, where `apply(v, out)` writes `A v`.
pub fn rk4_step<F>(apply: &F, u: &mut [C64], h: f64, ws: &mut Rk4Workspace)
where
    F: Fn(&[C64], &mut [C64]),
{
    let minus_i = C64::new(0.0, -1.0);
    let Rk4Workspace { k, tmp, hv } = ws;
    let coeffs = [0.5 * h, 0.5 * h, h];
    apply(u, hv);
    for (kv, h) in k[0].iter_mut().zip(hv.iter()) {
        *kv = minus_i * h;
    }
    for stage in 1..4 {
        let c = coeffs[stage - 1];
        for ((t, x), kv) in tmp.iter_mut().zip(u.iter()).zip(&k[stage - 1]) {
            *t = x + kv * c;
        }
        apply(tmp, hv);
        for (kv, h) in k[stage].iter_mut().zip(hv.iter()) {
            *kv = minus_i * h;
        }
    }
    let sixth = h / 6.0;
    for (i, x) in u.iter_mut().enumerate() {
        *x += (k[0][i] + (k[1][i] + k[2][i]) * 2.0 + k[3][i]) * sixth;
    }
}

/// Integrates `du/dz = -i A u` over `distance` in `steps` equal steps.
pub fn rk4_evolve<F>(apply: F, u: &mut [C64], distance: f64, steps: usize)
where
    F: Fn(&[C64], &mut [C64]),
{
    if steps == 0 {
        return;
    }
    let h = distance / steps as f64;
    let mut ws = Rk4Workspace::new(u.len());
    for _ in 0..steps {
        rk4_step(&apply, u, h, &mut ws);
    }
}

/// Propagates the single-guide excitation `delta_{n,m}` and records the field
/// at each target distance.
///
/// Each interval between targets is split into the smallest number of equal
/// steps not exceeding `cfg.step`, so every target lies on the grid.
pub fn propagate(params: &LatticeParams, m: i64, z_targets: &[f64], cfg: &OdeConfig) -> Result<Vec<FieldState>> {
    params.validate()?;
    if !cfg.step.is_finite() || cfg.step <= 0.0 {
        return Err(Error::domain(format!("step must be finite and > 0, got {}", cfg.step)));
    }
    if let Some(bad) = z_targets.iter().find(|z| !z.is_finite() || **z < 0.0) {
        return Err(Error::domain(format!("target distance {bad} must be finite and >= 0")));
    }
    if z_targets.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("target distances must be ascending"));
    }
    let initial = make_initial_state(cfg.window, m)?;
    let mut u = initial.amplitudes;
    let apply = |v: &[C64], out: &mut [C64]| {
        apply_hamiltonian_into(params, v, out).expect("window length is odd");
    };
    let mut ws = Rk4Workspace::new(u.len());
    let mut z = 0.0;
    let mut states = Vec::with_capacity(z_targets.len());
    for &target in z_targets {
        let span = target - z;
        if span > 0.0 {
            let steps = (span / cfg.step).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                rk4_step(&apply, &mut u, h, &mut ws);
            }
        }
        z = target;
        let state = FieldState::new(cfg.window, m, target, u.clone())?;
        let edge_mass = state.edge_mass();
        if edge_mass > cfg.edge_mass_tolerance {
            return Err(Error::WindowTooSmall { z: target, edge_mass });
        }
        let drift = (state.norm_sqr() - 1.0).abs();
        if drift > cfg.norm_drift_tolerance {
            return Err(Error::NormDrift { z: target, drift });
        }
        states.push(state);
    }
    Ok(states)
}
