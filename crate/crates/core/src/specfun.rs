//! Integer-order Bessel functions of the first kind.
//!
//! Small arguments use the ascending series; everything else goes through
//! Miller's backward recurrence normalised with `J_0 + 2 sum J_{2k} = 1`.

use crate::error::{Error, Result};
use crate::model::parity_sign;

/// Below this argument the ascending series loses less than one ulp-scale
/// unit to cancellation (its largest term is bounded by `I_0(2) < 2.3`).
const SERIES_LIMIT: f64 = 2.0;

/// Rescaling threshold for the unnormalised backward recurrence.
const RESCALE_ABOVE: f64 = 1e250;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEvalConfig {
    pub abs_tolerance: f64,
    /// Upper bound on series length and recurrence start order.
    pub max_terms: usize,
}

impl Default for BesselEvalConfig {
    fn default() -> Self {
        Self { abs_tolerance: 1e-14, max_terms: 50_000 }
    }
}

impl BesselEvalConfig {
    fn validate(&self) -> Result<()> {
        if self.abs_tolerance.is_nan() || self.abs_tolerance <= 0.0 {
            return Err(Error::domain("abs_tolerance must be > 0"));
        }
        if self.max_terms < 64 {
            return Err(Error::domain("max_terms must be at least 64"));
        }
        Ok(())
    }
}

/// Smallest `K >= 0` with `(|x|/2)^K / K! < tolerance / 10`.
///
/// For `k >= K` this bounds `|J_k(x)|` (and the whole tail, which decays
/// faster than geometrically beyond `|x|/2`).
pub fn decay_cutoff(x: f64, tolerance: f64) -> usize {
    // log space: the terms peak near e^{|x|/2} and overflow for |x| > ~1400
    let log_half = (x.abs() / 2.0).ln();
    let log_target = (tolerance / 10.0).ln();
    let mut log_term = 0.0_f64;
    let mut k = 0usize;
    while log_term >= log_target {
        k += 1;
        log_term += log_half - (k as f64).ln();
    }
    k
}

/// `J_order(x)`.
pub fn bessel_j(order: i64, x: f64, cfg: &BesselEvalConfig) -> Result<f64> {
    cfg.validate()?;
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j argument must be finite, got {x}")));
    }
    let n = order.unsigned_abs() as usize;
    // J_{-k}(x) = (-1)^k J_k(x) and J_k(-x) = (-1)^k J_k(x)
    let mut sign = 1.0;
    if order < 0 {
        sign *= parity_sign(n as i64);
    }
    if x < 0.0 {
        sign *= parity_sign(n as i64);
    }
    let ax = x.abs();
    let value = if ax == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else if ax < SERIES_LIMIT {
        ascending_series(n, ax, cfg)?
    } else {
        miller_row(n, ax, cfg)?[n]
    };
    Ok(sign * value)
}

/// `[J_0(x), ..., J_max_order(x)]` from a single backward recurrence.
pub fn bessel_j_row(max_order: usize, x: f64, cfg: &BesselEvalConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if !x.is_finite() {
        return Err(Error::domain(format!("bessel_j argument must be finite, got {x}")));
    }
    if x == 0.0 {
        let mut row = vec![0.0; max_order + 1];
        row[0] = 1.0;
        return Ok(row);
    }
    let mut row = miller_row(max_order, x.abs(), cfg)?;
    if x < 0.0 {
        for (k, v) in row.iter_mut().enumerate().skip(1).step_by(2) {
            debug_assert!(k % 2 == 1);
            *v = -*v;
        }
    }
    Ok(row)
}

fn ascending_series(n: usize, x: f64, cfg: &BesselEvalConfig) -> Result<f64> {
    let half = x / 2.0;
    // leading term (x/2)^n / n!, built as a product so it underflows gracefully
    let mut lead = 1.0;
    for k in 1..=n {
        lead *= half / k as f64;
    }
    if lead == 0.0 {
        return Ok(0.0);
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    for s in 1..cfg.max_terms {
        term *= -q / (s as f64 * (n + s) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::domain(format!("ascending series for J_{n}({x}) did not converge in {} terms", cfg.max_terms)))
}

/// Backward recurrence for `x > 0`, normalised to `J_0 + 2 sum_k J_{2k} = 1`.
fn miller_row(max_order: usize, x: f64, cfg: &BesselEvalConfig) -> Result<Vec<f64>> {
    debug_assert!(x > 0.0);
    let mut start = decay_cutoff(x, 1e-17).max(max_order) + 16;
    start += start % 2;
    if start > cfg.max_terms {
        return Err(Error::domain(format!(
            "recurrence start order {start} for x = {x} exceeds max_terms = {}",
            cfg.max_terms
        )));
    }
    let mut vals = vec![0.0_f64; start + 1];
    let mut next = 0.0; // j_{k+1}
    let mut cur = 1e-30; // j_k
    vals[start] = cur;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        vals[k - 1] = cur;
        if cur.abs() > RESCALE_ABOVE {
            let scale = 1.0 / RESCALE_ABOVE;
            for v in &mut vals[k - 1..] {
                *v *= scale;
            }
            cur *= scale;
            next *= scale;
        }
    }
    let mut norm = vals[0];
    for v in vals.iter().skip(2).step_by(2) {
        norm += 2.0 * v;
    }
    let inv = 1.0 / norm;
    vals.truncate(max_order + 1);
    for v in &mut vals {
        *v *= inv;
    }
    Ok(vals)
}
