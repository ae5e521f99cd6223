//! Lattice parameters, truncated field states and the lattice operators.
//!
//! Amplitudes are stored in increasing site order: slot `i` holds site
//! `n = i - N` for a window of half-width `N`. Sites outside the window are
//! treated as zero (hard truncation).

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(-1)^e` from the integer parity of `e`.
#[inline]
pub fn parity_sign(e: i64) -> f64 {
    if e.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Site energy sign `(-1)^n`; even sites carry `+omega`.
#[inline]
pub(crate) fn site_sign(n: i64) -> f64 {
    parity_sign(n)
}

/// On-site detuning `omega` and nearest-neighbour coupling `alpha`, both per unit z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeParams {
    pub omega: f64,
    pub alpha: f64,
}

impl LatticeParams {
    pub fn new(omega: f64, alpha: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::domain(format!("omega must be finite and > 0, got {omega}")));
        }
        if !alpha.is_finite() || alpha < 0.0 {
            return Err(Error::domain(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        Ok(Self { omega, alpha })
    }

    pub(crate) fn validate(&self) -> Result<()> {
        Self::new(self.omega, self.alpha).map(|_| ())
    }

    /// The coupling ratio `alpha / omega`, the small parameter of the rotation method.
    pub fn ratio(&self) -> f64 {
        self.alpha / self.omega
    }
}

/// Complex amplitudes `u_n(z)` on the window `n = -N..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub window: usize,
    pub source: i64,
    pub z: f64,
    pub amplitudes: Vec<C64>,
}

impl FieldState {
    pub fn new(window: usize, source: i64, z: f64, amplitudes: Vec<C64>) -> Result<Self> {
        let expected = 2 * window + 1;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch { expected, found: amplitudes.len() });
        }
        check_source(window, source)?;
        Ok(Self { window, source, z, amplitudes })
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Site labels in storage order.
    pub fn sites(&self) -> impl Iterator<Item = i64> + '_ {
        let n = self.window as i64;
        -n..=n
    }

    pub fn amplitude(&self, n: i64) -> Option<C64> {
        slot(self.window, n).map(|i| self.amplitudes[i])
    }

    pub fn intensity(&self, n: i64) -> Option<f64> {
        self.amplitude(n).map(|u| u.norm_sqr())
    }

    /// Total power `sum |u_n|^2`, accumulated in storage order.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|u| u.norm_sqr()).sum()
    }

    /// Intensity on the two boundary sites, the largest of `|u_{-N}|^2` and `|u_N|^2`.
    pub fn edge_mass(&self) -> f64 {
        let first = self.amplitudes.first().map_or(0.0, |u| u.norm_sqr());
        let last = self.amplitudes.last().map_or(0.0, |u| u.norm_sqr());
        first.max(last)
    }

    /// Restricts the state to a smaller window centred on site 0.
    pub fn crop(&self, window: usize) -> Result<FieldState> {
        if window > self.window {
            return Err(Error::domain(format!("cannot crop window {} to larger window {window}", self.window)));
        }
        let offset = self.window - window;
        let amplitudes = self.amplitudes[offset..offset + 2 * window + 1].to_vec();
        FieldState::new(window, self.source, self.z, amplitudes)
    }
}

/// Storage slot of site `n` in a window of half-width `window`.
#[inline]
pub fn slot(window: usize, n: i64) -> Option<usize> {
    let w = window as i64;
    if (-w..=w).contains(&n) {
        Some((n + w) as usize)
    } else {
        None
    }
}

/// Half-width `N` of a vector of length `2N + 1`.
pub fn window_of(len: usize) -> Result<usize> {
    if len == 0 || len.is_multiple_of(2) {
        return Err(Error::LengthMismatch { expected: 2 * (len / 2) + 1, found: len });
    }
    Ok((len - 1) / 2)
}

fn check_source(window: usize, source: i64) -> Result<()> {
    if source.unsigned_abs() > window as u64 {
        return Err(Error::domain(format!("source guide {source} lies outside the window -{window}..={window}")));
    }
    Ok(())
}

/// Plane wave `e^{i n phi}` sampled on a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneWaveProbe {
    pub phi: f64,
    pub window: usize,
    pub values: Vec<C64>,
}

impl PlaneWaveProbe {
    pub fn new(phi: f64, window: usize) -> Self {
        let n = window as i64;
        let values = (-n..=n).map(|k| C64::from_polar(1.0, k as f64 * phi)).collect();
        Self { phi, window, values }
    }
}

/// The excited-guide initial condition `u_n(0) = delta_{n,source}`.
pub fn make_initial_state(window: usize, source: i64) -> Result<FieldState> {
    if window < 1 {
        return Err(Error::domain("window must be at least 1"));
    }
    check_source(window, source)?;
    let mut amplitudes = vec![C64::new(0.0, 0.0); 2 * window + 1];
    amplitudes[(source + window as i64) as usize] = C64::new(1.0, 0.0);
    FieldState::new(window, source, 0.0, amplitudes)
}

/// `(H v)_n = omega (-1)^n v_n + alpha (v_{n+1} + v_{n-1})`.
pub fn apply_hamiltonian(params: &LatticeParams, v: &[C64]) -> Result<Vec<C64>> {
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    apply_hamiltonian_into(params, v, &mut out)?;
    Ok(out)
}

/// In-place variant of [`apply_hamiltonian`] writing into `out`.
pub fn apply_hamiltonian_into(params: &LatticeParams, v: &[C64], out: &mut [C64]) -> Result<()> {
    let window = window_of(v.len())?;
    if out.len() != v.len() {
        return Err(Error::LengthMismatch { expected: v.len(), found: out.len() });
    }
    let last = v.len() - 1;
    for (i, o) in out.iter_mut().enumerate() {
        let n = i as i64 - window as i64;
        let mut hop = C64::new(0.0, 0.0);
        if i > 0 {
            hop += v[i - 1];
        }
        if i < last {
            hop += v[i + 1];
        }
        *o = v[i] * (params.omega * site_sign(n)) + hop * params.alpha;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// `V|n> = |n-1>`.
    Down,
    /// `V^dagger|n> = |n+1>`.
    Up,
}

/// Applies `V` or `V^dagger` to a truncated vector; the component pushed
/// past the window edge is dropped.
pub fn apply_shift(direction: ShiftDirection, v: &[C64]) -> Result<Vec<C64>> {
    window_of(v.len())?;
    let len = v.len();
    let mut out = vec![C64::new(0.0, 0.0); len];
    match direction {
        // coefficient of |n> moves to |n-1>
        ShiftDirection::Down => out[..len - 1].copy_from_slice(&v[1..]),
        ShiftDirection::Up => out[1..].copy_from_slice(&v[..len - 1]),
    }
    Ok(out)
}

/// `[(-1)^n V]^j |m> = sign |m - j>` with `sign = (-1)^{jm - j(j+1)/2}`.
///
/// Valid for negative `j` as well, where the power is taken of the inverse
/// `V^dagger (-1)^n`.
pub fn signed_shift_power(j: i64, m: i64) -> (i64, f64) {
    let exponent = j * m - j * (j + 1) / 2;
    (m - j, parity_sign(exponent))
}
