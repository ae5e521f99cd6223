//! Small-rotation propagator.
//!
//! Conjugating `H` with `R = exp[(alpha/2 omega)(-1)^n (V + V^dagger)]` and
//! keeping terms to second order in `alpha/omega` leaves
//! `H_R = (omega + alpha^2/omega)(-1)^n + (alpha^2/2 omega)(-1)^n (V^2 + V^dagger^2)`,
//! whose two pieces commute. Expanding `R`, `R^dagger` and the hopping
//! exponential with the Bessel generating function gives the amplitude as a
//! double sum
//!
//! ```text
//! u_n(z) = (-1)^{[m(m-1) - n(n-1)]/2} sum_{k,j} (-1)^{k(m-j)} i^k e^{-i (-1)^{m-j} c z}
//!          J_k(alpha^2 z / omega) J_j(alpha/omega) J_{n-m+2k+j}(alpha/omega),
//! ```
//!
//! with `c = (omega^2 + alpha^2)/omega`. All sign exponents are integers and
//! are reduced mod 2 exactly.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{
    make_initial_state, parity_sign, signed_shift_power, site_sign, slot, window_of, FieldState, LatticeParams,
};
use crate::specfun::{bessel_j_row, decay_cutoff, BesselEvalConfig};

/// Past this ratio `alpha/omega` the second-order cut is outside its intended regime.
pub const REGIME_RATIO_LIMIT: f64 = 0.5;

/// Extra orders kept beyond the decay-bound cutoff.
const CUTOFF_MARGIN: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub tail_tolerance: f64,
    /// Cutoff for the slow index `k` (used when `auto` is off).
    pub k_max: usize,
    /// Cutoff for the rotation index `j` (used when `auto` is off).
    pub j_max: usize,
    /// Derive both cutoffs from `tail_tolerance`.
    pub auto: bool,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        Self { tail_tolerance: 1e-12, k_max: 1, j_max: 1, auto: true }
    }
}

impl SeriesTruncation {
    pub fn fixed(k_max: usize, j_max: usize) -> Self {
        Self { tail_tolerance: 1e-12, k_max, j_max, auto: false }
    }

    /// The `(k_max, j_max)` pair used for these parameters and distance.
    pub fn cutoffs(&self, params: &LatticeParams, z: f64) -> Result<(usize, usize)> {
        if self.auto {
            if self.tail_tolerance.is_nan() || self.tail_tolerance <= 0.0 {
                return Err(Error::domain("tail_tolerance must be > 0"));
            }
            let (slow, rot) = arguments(params, z);
            Ok((
                decay_cutoff(slow, self.tail_tolerance).max(1) + CUTOFF_MARGIN,
                decay_cutoff(rot, self.tail_tolerance).max(1) + CUTOFF_MARGIN,
            ))
        } else {
            if self.k_max < 1 || self.j_max < 1 {
                return Err(Error::domain("k_max and j_max must be >= 1"));
            }
            Ok((self.k_max, self.j_max))
        }
    }
}

/// `(alpha^2 z / omega, alpha / omega)`, the two Bessel arguments.
fn arguments(params: &LatticeParams, z: f64) -> (f64, f64) {
    let r = params.ratio();
    (params.alpha * r * z, r)
}

/// Warning text when `alpha/omega` exceeds [`REGIME_RATIO_LIMIT`].
pub fn regime_warning(params: &LatticeParams) -> Option<String> {
    let r = params.ratio();
    (r > REGIME_RATIO_LIMIT).then(|| {
        format!(
            "alpha/omega = {r} exceeds {REGIME_RATIO_LIMIT}; the small-rotation series is outside its alpha << omega regime"
        )
    })
}

/// `i^k` for any integer `k`.
fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// `0, 1, -1, 2, -2, ..., max, -max`.
fn symmetric_order(max: usize) -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..=max as i64).flat_map(|k| [k, -k]))
}

/// `m(m-1)/2`, the exponent that absorbs the signs of `[(-1)^n V]^j`.
fn triangular(m: i64) -> i64 {
    m * (m - 1) / 2
}

/// Bessel tables and phases for one `(params, z)`; evaluates any `(n, m)`.
struct Kernel {
    k_max: i64,
    j_max: i64,
    slow: Vec<f64>,
    rot: Vec<f64>,
    /// `e^{-i c z}` for even `m - j`, `e^{+i c z}` for odd.
    phase: [C64; 2],
}

impl Kernel {
    fn new(params: &LatticeParams, z: f64, trunc: &SeriesTruncation, max_offset: usize) -> Result<Self> {
        params.validate()?;
        if !z.is_finite() || z < 0.0 {
            return Err(Error::domain(format!("propagation distance must be finite and >= 0, got {z}")));
        }
        let (k_max, j_max) = trunc.cutoffs(params, z)?;
        let (slow_arg, rot_arg) = arguments(params, z);
        let cfg = BesselEvalConfig::default();
        let slow = bessel_j_row(k_max, slow_arg, &cfg)?;
        let rot = bessel_j_row(max_offset + 2 * k_max + j_max, rot_arg, &cfg)?;
        let c = (params.omega * params.omega + params.alpha * params.alpha) / params.omega;
        let phase = [C64::from_polar(1.0, -c * z), C64::from_polar(1.0, c * z)];
        Ok(Self { k_max: k_max as i64, j_max: j_max as i64, slow, rot, phase })
    }

    fn j_slow(&self, k: i64) -> f64 {
        signed_lookup(&self.slow, k)
    }

    fn j_rot(&self, k: i64) -> f64 {
        signed_lookup(&self.rot, k)
    }

    /// General-source double sum.
    fn amplitude(&self, n: i64, m: i64) -> C64 {
        let mut sum = C64::new(0.0, 0.0);
        for k in symmetric_order(self.k_max as usize) {
            let jk = self.j_slow(k);
            if jk == 0.0 {
                continue;
            }
            let ik = i_pow(k) * jk;
            let mut inner = C64::new(0.0, 0.0);
            for j in symmetric_order(self.j_max as usize) {
                let weight = parity_sign(k * (m - j)) * self.j_rot(j) * self.j_rot(n - m + 2 * k + j);
                inner += self.phase[(m - j).rem_euclid(2) as usize] * weight;
            }
            sum += ik * inner;
        }
        sum * parity_sign(triangular(m) - triangular(n))
    }

    /// Centred-source form, `m = 0`, with global sign `(-1)^{n(n-1)/2}`.
    fn amplitude_centered(&self, n: i64) -> C64 {
        let mut sum = C64::new(0.0, 0.0);
        for k in symmetric_order(self.k_max as usize) {
            let mut inner = C64::new(0.0, 0.0);
            for j in symmetric_order(self.j_max as usize) {
                let weight = parity_sign(j * k) * self.j_rot(j) * self.j_rot(n + 2 * k + j);
                inner += self.phase[j.rem_euclid(2) as usize] * weight;
            }
            sum += i_pow(k) * self.j_slow(k) * inner;
        }
        sum * parity_sign(n * (n - 1) / 2)
    }
}

/// Row lookup with `J_{-k} = (-1)^k J_k`; orders beyond the table are zero.
fn signed_lookup(row: &[f64], k: i64) -> f64 {
    let idx = k.unsigned_abs() as usize;
    match row.get(idx) {
        Some(v) if k < 0 => parity_sign(k) * v,
        Some(v) => *v,
        None => 0.0,
    }
}

/// Small-rotation approximation to `u_n(z)` for source guide `m`.
pub fn rotation_amplitude(params: &LatticeParams, n: i64, m: i64, z: f64, trunc: &SeriesTruncation) -> Result<C64> {
    let kernel = Kernel::new(params, z, trunc, n.abs_diff(m) as usize)?;
    Ok(kernel.amplitude(n, m))
}

/// The `m = 0` specialisation; agrees with [`rotation_amplitude`] to rounding.
pub fn rotation_amplitude_centered(params: &LatticeParams, n: i64, z: f64, trunc: &SeriesTruncation) -> Result<C64> {
    let kernel = Kernel::new(params, z, trunc, n.unsigned_abs() as usize)?;
    Ok(kernel.amplitude_centered(n))
}

/// All small-rotation amplitudes on `-window..=window`.
pub fn rotation_field(
    params: &LatticeParams,
    m: i64,
    z: f64,
    window: usize,
    trunc: &SeriesTruncation,
) -> Result<FieldState> {
    make_initial_state(window, m)?;
    let kernel = Kernel::new(params, z, trunc, window + m.unsigned_abs() as usize)?;
    let w = window as i64;
    let amplitudes = (-w..=w).map(|n| kernel.amplitude(n, m)).collect();
    FieldState::new(window, m, z, amplitudes)
}

/// `(H_R v)_n = (-1)^n [(omega + alpha^2/omega) v_n + (alpha^2/2 omega)(v_{n+2} + v_{n-2})]`.
pub fn rotation_effective_hamiltonian_apply(params: &LatticeParams, v: &[C64]) -> Result<Vec<C64>> {
    let window = window_of(v.len())? as i64;
    let shift = params.alpha * params.ratio();
    let diag = params.omega + shift;
    let hop = shift / 2.0;
    let at = |n: i64| slot(window as usize, n).map_or(C64::new(0.0, 0.0), |i| v[i]);
    Ok((-window..=window).map(|n| (at(n) * diag + (at(n + 2) + at(n - 2)) * hop) * site_sign(n)).collect())
}

/// Applies `R` (`sign = +1`) or `R^dagger` (`sign = -1`) through its Bessel
/// expansion `sum_j J_j(+-alpha/omega) [(-1)^n V]^j`.
pub fn rotation_operator_apply(params: &LatticeParams, sign: i8, v: &[C64]) -> Result<Vec<C64>> {
    params.validate()?;
    if sign != 1 && sign != -1 {
        return Err(Error::domain(format!("rotation sign must be +1 or -1, got {sign}")));
    }
    let window = window_of(v.len())?;
    let w = window as i64;
    let arg = params.ratio();
    let j_max = decay_cutoff(arg, SeriesTruncation::default().tail_tolerance).max(1) + CUTOFF_MARGIN;
    let row = bessel_j_row(j_max, arg, &BesselEvalConfig::default())?;
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for j in symmetric_order(j_max) {
        // J_j(-x) = (-1)^j J_j(x)
        let mut coeff = signed_lookup(&row, j);
        if sign < 0 {
            coeff *= parity_sign(j);
        }
        if coeff == 0.0 {
            continue;
        }
        for (i, &c) in v.iter().enumerate() {
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let (target, s) = signed_shift_power(j, i as i64 - w);
            if let Some(t) = slot(window, target) {
                out[t] += c * (coeff * s);
            }
        }
    }
    Ok(out)
}
