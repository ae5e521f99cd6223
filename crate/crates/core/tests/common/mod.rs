//! Independent oracles shared by the integration and acceptance tests.
//! None of these call into the solver code paths they are used to check.
#![allow(dead_code)]

use std::f64::consts::PI;

use diatomic_core::Complex64 as C64;

/// Ascending power series `sum_s (-1)^s (x/2)^{n+2s} / (s! (n+s)!)`, summed
/// with Kahan compensation until the terms stop contributing.
pub fn bessel_power_series(n: u32, x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = 0.0;
    let mut carry = 0.0;
    let mut s = 0u32;
    loop {
        let y = term - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
        s += 1;
        term *= -(half * half) / (s as f64 * (n + s) as f64);
        if term.abs() < 1e-20 * sum.abs().max(1e-300) && s as f64 > half {
            break;
        }
        if s > 500 {
            break;
        }
    }
    sum
}

/// Bessel's integral `J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt`,
/// by the trapezoid rule on the full period (spectrally accurate).
pub fn bessel_integral(n: i64, x: f64, nodes: usize) -> f64 {
    let h = 2.0 * PI / nodes as f64;
    let sum: f64 = (0..nodes)
        .map(|i| {
            let t = i as f64 * h;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum();
    sum / nodes as f64
}

/// `exp(t A) v` by a Taylor series with sub-stepping, where `apply(v)` returns `A v`
/// and `norm_bound >= ||A||`.
pub fn expm_apply(apply: impl Fn(&[C64]) -> Vec<C64>, v: &[C64], t: C64, norm_bound: f64) -> Vec<C64> {
    let substeps = ((t.norm() * norm_bound) / 0.5).ceil().max(1.0) as usize;
    let dt = t / substeps as f64;
    let mut out = v.to_vec();
    for _ in 0..substeps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..60 {
            term = apply(&term).into_iter().map(|c| c * dt / k as f64).collect();
            let size = term.iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (a, b) in acc.iter_mut().zip(&term) {
                *a += b;
            }
            if size < 1e-20 {
                break;
            }
        }
        out = acc;
    }
    out
}

pub fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Site sign computed from the index directly.
pub fn alternating(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Dense `(-1)^n (V + V^dagger)` action on a window, written out site by site.
pub fn parity_hop(v: &[C64]) -> Vec<C64> {
    let w = ((v.len() - 1) / 2) as i64;
    let get = |n: i64| if n.abs() <= w { v[(n + w) as usize] } else { C64::new(0.0, 0.0) };
    (-w..=w).map(|n| (get(n + 1) + get(n - 1)) * alternating(n)).collect()
}

/// Dense `(-1)^n (V^2 + V^dagger^2)` action.
pub fn parity_hop2(v: &[C64]) -> Vec<C64> {
    let w = ((v.len() - 1) / 2) as i64;
    let get = |n: i64| if n.abs() <= w { v[(n + w) as usize] } else { C64::new(0.0, 0.0) };
    (-w..=w).map(|n| (get(n + 2) + get(n - 2)) * alternating(n)).collect()
}

/// The small-rotation propagator `R^dagger exp(-iz c (-1)^n) exp(-i (alpha^2/2 omega) z (-1)^n [V^2 + V^dagger^2]) R`
/// applied to `delta_m`, each factor built numerically on the truncated lattice.
pub fn composed_rotation_propagator(omega: f64, alpha: f64, m: i64, z: f64, window: usize) -> Vec<C64> {
    let w = window as i64;
    let mut v = vec![C64::new(0.0, 0.0); 2 * window + 1];
    v[(m + w) as usize] = C64::new(1.0, 0.0);
    let gen = alpha / (2.0 * omega);
    // R
    v = expm_apply(parity_hop, &v, C64::new(gen, 0.0), 2.0);
    // slow hopping factor
    let slow = alpha * alpha / (2.0 * omega) * z;
    v = expm_apply(parity_hop2, &v, C64::new(0.0, -slow), 2.0);
    // diagonal factor
    let c = omega + alpha * alpha / omega;
    for (i, x) in v.iter_mut().enumerate() {
        let n = i as i64 - w;
        *x *= C64::from_polar(1.0, -z * c * alternating(n));
    }
    // R^dagger
    expm_apply(parity_hop, &v, C64::new(-gen, 0.0), 2.0)
}
