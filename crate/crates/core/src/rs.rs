//! Rayleigh-Schroedinger series in the coupling `alpha`, with the on-site
//! detuning `omega (-1)^n` as the unperturbed part.
//!
//! Every path of `k` hops from guide `m` alternates parity, so all paths
//! carry the same phase integral and order `k` factorises into a binomial
//! path count times a universal amplitude:
//!
//! ```text
//! u_n^{(k)}(z) = alpha^k (-1)^{mk} / (2^k floor(k/2)! omega^k)
//!                { e^{-i z omega s} P_k(2 i z omega s) + e^{i z omega s} Q_k(2 i z omega s) } C(k, j),
//! ```
//!
//! with `s = (-1)^{m+k}` and `n = m + k - 2j`. `P_k`, `Q_k` are integer
//! polynomials generated from `P_0 = 1, P_1 = -1, Q_0 = 0, Q_1 = 1` by
//!
//! ```text
//! R_{2j}   = (2j - 1) R_{2j-1} - xi R_{2j-2}
//! R_{2j+1} = -2 R_{2j} + xi R_{2j-1}
//! ```
//!
//! The odd-order rule is sometimes quoted as `R_{2j+1} = (xi - 2) R_{2j-1}`;
//! that form is available as [`Recurrence::Alternate`] but disagrees with the
//! Dyson series from order 3 on (`P_3 = 2 - xi` instead of `2 + xi`).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{apply_hamiltonian_into, parity_sign, site_sign, slot, LatticeParams};
use crate::ode::rk4_evolve;

/// Highest supported order; coefficients stay well inside `i64` up to here.
pub const MAX_ORDER: usize = 12;

/// Integer coefficients in ascending degree.
pub type IntPoly = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialPair {
    pub order: usize,
    pub p_coeffs: IntPoly,
    pub q_coeffs: IntPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Recurrence {
    /// `R_{2j+1} = -2 R_{2j} + xi R_{2j-1}`, consistent with the Dyson series.
    #[default]
    Canonical,
    /// `R_{2j+1} = (xi - 2) R_{2j-1}`.
    Alternate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RsOrderConfig {
    pub max_order: usize,
}

impl Default for RsOrderConfig {
    fn default() -> Self {
        Self { max_order: 3 }
    }
}

impl RsOrderConfig {
    pub fn new(max_order: usize) -> Result<Self> {
        check_order(max_order)?;
        Ok(Self { max_order })
    }
}

fn check_order(k: usize) -> Result<()> {
    if k > MAX_ORDER {
        return Err(Error::domain(format!("perturbation order {k} exceeds the cap of {MAX_ORDER}")));
    }
    Ok(())
}

fn overflow() -> Error {
    Error::domain("polynomial coefficient overflow")
}

/// `a * p + b * xi * q`, exact.
fn combine(a: i64, p: &[i64], b: i64, q: &[i64]) -> Result<IntPoly> {
    let len = p.len().max(q.len() + 1);
    let mut out = vec![0i64; len];
    for (i, c) in p.iter().enumerate() {
        out[i] = c.checked_mul(a).ok_or_else(overflow)?;
    }
    for (i, c) in q.iter().enumerate() {
        let t = c.checked_mul(b).ok_or_else(overflow)?;
        out[i + 1] = out[i + 1].checked_add(t).ok_or_else(overflow)?;
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    Ok(out)
}

fn family(k: usize, seeds: [i64; 2], rule: Recurrence) -> Result<IntPoly> {
    let mut r: Vec<IntPoly> = vec![vec![seeds[0]], vec![seeds[1]]];
    for order in 2..=k {
        let next = if order % 2 == 0 {
            let j = (order / 2) as i64;
            combine(2 * j - 1, &r[order - 1], -1, &r[order - 2])?
        } else {
            match rule {
                Recurrence::Canonical => combine(-2, &r[order - 1], 1, &r[order - 2])?,
                Recurrence::Alternate => combine(-2, &r[order - 2], 1, &r[order - 2])?,
            }
        };
        r.push(next);
    }
    Ok(r.swap_remove(k))
}

/// `P_k`, `Q_k` from the given recurrence.
pub fn rs_polynomials_with(k: usize, rule: Recurrence) -> Result<PolynomialPair> {
    check_order(k)?;
    Ok(PolynomialPair { order: k, p_coeffs: family(k, [1, -1], rule)?, q_coeffs: family(k, [0, 1], rule)? })
}

/// `P_k`, `Q_k` from the canonical recurrence.
pub fn rs_polynomials(k: usize) -> Result<PolynomialPair> {
    rs_polynomials_with(k, Recurrence::Canonical)
}

/// Horner evaluation of an integer polynomial at a complex point.
pub fn eval_poly(coeffs: &[i64], x: C64) -> C64 {
    coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * x + c as f64)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

fn check_z(z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::domain(format!("propagation distance must be finite and >= 0, got {z}")));
    }
    Ok(())
}

fn term_from(params: &LatticeParams, pair: &PolynomialPair, n: i64, m: i64, z: f64) -> C64 {
    let k = pair.order;
    let d = n - m;
    if k == 0 {
        return if d == 0 { C64::from_polar(1.0, -site_sign(m) * params.omega * z) } else { C64::new(0.0, 0.0) };
    }
    // selection rule: n = m + k - 2j with 0 <= j <= k
    if d.unsigned_abs() as usize > k || (k as i64 - d).rem_euclid(2) != 0 {
        return C64::new(0.0, 0.0);
    }
    let j = ((k as i64 - d) / 2) as usize;
    let s = site_sign(m + k as i64);
    let scale = parity_sign(m * k as i64) * params.ratio().powi(k as i32) / (2f64.powi(k as i32) * factorial(k / 2))
        * binomial(k, j);
    let xi = C64::new(0.0, 2.0 * z * params.omega * s);
    let e = C64::from_polar(1.0, -z * params.omega * s);
    let braces = e * eval_poly(&pair.p_coeffs, xi) + e.conj() * eval_poly(&pair.q_coeffs, xi);
    braces * scale
}

/// Order-`k` contribution to `u_n(z)` (including the `k = 0` unperturbed term).
pub fn rs_term(params: &LatticeParams, n: i64, m: i64, z: f64, k: usize) -> Result<C64> {
    rs_term_with(params, n, m, z, k, Recurrence::Canonical)
}

pub fn rs_term_with(params: &LatticeParams, n: i64, m: i64, z: f64, k: usize, rule: Recurrence) -> Result<C64> {
    params.validate()?;
    check_z(z)?;
    let pair = rs_polynomials_with(k, rule)?;
    Ok(term_from(params, &pair, n, m, z))
}

/// Series truncated after order `cfg.max_order`.
pub fn rs_amplitude(params: &LatticeParams, n: i64, m: i64, z: f64, cfg: &RsOrderConfig) -> Result<C64> {
    let table = RsTable::new(cfg)?;
    table.amplitude(params, n, m, z)
}

/// Precomputed polynomial table, shared read-only across evaluations.
#[derive(Debug, Clone)]
pub struct RsTable {
    pairs: Vec<PolynomialPair>,
}

impl RsTable {
    pub fn new(cfg: &RsOrderConfig) -> Result<Self> {
        check_order(cfg.max_order)?;
        let pairs = (0..=cfg.max_order).map(rs_polynomials).collect::<Result<_>>()?;
        Ok(Self { pairs })
    }

    pub fn max_order(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn amplitude(&self, params: &LatticeParams, n: i64, m: i64, z: f64) -> Result<C64> {
        params.validate()?;
        check_z(z)?;
        Ok(self.pairs.iter().map(|pair| term_from(params, pair, n, m, z)).sum())
    }
}

/// Step used for the Dyson hierarchy integration.
const DYSON_STEP: f64 = 2.5e-4;

/// Highest order the Dyson oracle integrates.
pub const DYSON_MAX_ORDER: usize = 4;

/// Order-by-order perturbation series of the truncated lattice, computed by
/// integrating the interaction hierarchy
/// `v_0' = -i H_0 v_0`, `v_k' = -i H_0 v_k - i alpha (V + V^dagger) v_{k-1}`, `v_k(0) = 0`.
///
/// Equivalent to the iterated Dyson integrals; independent of the
/// polynomial closed form. Returns one vector per order on the window
/// `|n| <= |m| + max_order + 1`, wide enough that no order reaches the edge.
pub fn dyson_series_terms(params: &LatticeParams, m: i64, z: f64, max_order: usize) -> Result<(usize, Vec<Vec<C64>>)> {
    params.validate()?;
    check_z(z)?;
    if max_order > DYSON_MAX_ORDER {
        return Err(Error::domain(format!("Dyson oracle supports orders up to {DYSON_MAX_ORDER}")));
    }
    let window = m.unsigned_abs() as usize + max_order + 1;
    let len = 2 * window + 1;
    let orders = max_order + 1;
    let mut stacked = vec![C64::new(0.0, 0.0); len * orders];
    stacked[slot(window, m).expect("source inside window")] = C64::new(1.0, 0.0);

    let unperturbed = LatticeParams { omega: params.omega, alpha: 0.0 };
    let hopping = LatticeParams { omega: 0.0, alpha: params.alpha };
    let apply = |v: &[C64], out: &mut [C64]| {
        let mut hop = vec![C64::new(0.0, 0.0); len];
        for k in 0..orders {
            let block = k * len..(k + 1) * len;
            apply_hamiltonian_into(&unperturbed, &v[block.clone()], &mut out[block.clone()]).expect("odd window");
            if k > 0 {
                let prev = (k - 1) * len..k * len;
                apply_hamiltonian_into(&hopping, &v[prev], &mut hop).expect("odd window");
                for (o, h) in out[block].iter_mut().zip(&hop) {
                    *o += h;
                }
            }
        }
    };
    let steps = (z / DYSON_STEP).ceil() as usize;
    rk4_evolve(apply, &mut stacked, z, steps);
    Ok((window, stacked.chunks(len).map(|c| c.to_vec()).collect()))
}

/// Sum of the Dyson series terms through `order` at guide `n`.
pub fn dyson_series_oracle(params: &LatticeParams, n: i64, m: i64, z: f64, order: usize) -> Result<C64> {
    let (window, terms) = dyson_series_terms(params, m, z, order)?;
    Ok(slot(window, n).map_or(C64::new(0.0, 0.0), |i| terms.iter().map(|t| t[i]).sum()))
}
