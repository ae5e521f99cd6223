//! Exact lattice propagator evaluated as a Fourier integral over the
//! Brillouin zone.
//!
//! In the plane-wave basis `H^2` is diagonal with eigenvalue `Omega(phi)^2`,
//! so `exp(-izH)` acting on a plane wave is `cos(Omega z) - i H sin(Omega z)/Omega`.
//! Projecting back onto site `n` gives
//!
//! ```text
//! u_n(z) = 1/(2 pi) int e^{i(n-m)phi} [cos(Omega z) - i (2 alpha cos phi + (-1)^n omega) sin(Omega z)/Omega] dphi
//! ```
//!
//! The integrand is smooth and `2 pi`-periodic, so the composite trapezoid
//! rule on `[-pi, pi)` converges spectrally. Convergence is controlled by
//! node doubling.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::{make_initial_state, site_sign, FieldState, LatticeParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Initial number of trapezoid nodes on the period.
    pub nodes: usize,
    /// Accept once successive doublings differ by at most this much (max over sites).
    pub tolerance: f64,
    pub max_doublings: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { nodes: 256, tolerance: 1e-10, max_doublings: 8 }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if self.nodes < 16 || !self.nodes.is_multiple_of(2) {
            return Err(Error::domain(format!("quadrature nodes must be even and >= 16, got {}", self.nodes)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::domain("quadrature tolerance must be > 0"));
        }
        Ok(())
    }
}

/// Band dispersion `Omega(phi) = sqrt(omega^2 + 4 alpha^2 cos^2 phi)`.
pub fn omega_phi(params: &LatticeParams, phi: f64) -> f64 {
    let c = 2.0 * params.alpha * phi.cos();
    (params.omega * params.omega + c * c).sqrt()
}

/// Integrand pieces sampled on one trapezoid grid, shared by every site.
struct Grid {
    nodes: usize,
    /// `e^{2 pi i t / nodes}` for `t = 0..nodes`.
    roots: Vec<C64>,
    cos_part: Vec<f64>,
    /// `2 alpha cos(phi) sin(Omega z) / Omega`
    hop_part: Vec<f64>,
    /// `omega sin(Omega z) / Omega`
    site_part: Vec<f64>,
}

impl Grid {
    fn new(params: &LatticeParams, z: f64, nodes: usize) -> Self {
        let step = 2.0 * PI / nodes as f64;
        let mut roots = Vec::with_capacity(nodes);
        let mut cos_part = Vec::with_capacity(nodes);
        let mut hop_part = Vec::with_capacity(nodes);
        let mut site_part = Vec::with_capacity(nodes);
        for t in 0..nodes {
            let theta = step * t as f64;
            let (s, c) = theta.sin_cos();
            roots.push(C64::new(c, s));
            let phi = -PI + theta;
            let cos_phi = phi.cos();
            let big_omega = omega_phi(params, phi);
            let (sin_oz, cos_oz) = (big_omega * z).sin_cos();
            let sinc = sin_oz / big_omega;
            cos_part.push(cos_oz);
            hop_part.push(2.0 * params.alpha * cos_phi * sinc);
            site_part.push(params.omega * sinc);
        }
        Self { nodes, roots, cos_part, hop_part, site_part }
    }

    /// Trapezoid estimate of `u_n` for source `m`.
    fn amplitude(&self, n: i64, m: i64) -> C64 {
        let k = n - m;
        let nodes = self.nodes as i64;
        let mut a = C64::new(0.0, 0.0);
        let mut b = C64::new(0.0, 0.0);
        let mut c = C64::new(0.0, 0.0);
        // e^{ik phi_t} = (-1)^k e^{2 pi i k t / nodes} with phi_t = -pi + 2 pi t / nodes
        let stride = k.rem_euclid(nodes) as usize;
        let mut idx = 0usize;
        for t in 0..self.nodes {
            let w = self.roots[idx];
            a += w * self.cos_part[t];
            b += w * self.hop_part[t];
            c += w * self.site_part[t];
            idx += stride;
            if idx >= self.nodes {
                idx -= self.nodes;
            }
        }
        let sin_term = b + c * site_sign(n);
        let sum = a - C64::i() * sin_term;
        sum * (site_sign(k) / self.nodes as f64)
    }
}

fn check_z(z: f64) -> Result<()> {
    if !z.is_finite() || z < 0.0 {
        return Err(Error::domain(format!("propagation distance must be finite and >= 0, got {z}")));
    }
    Ok(())
}

/// Runs node doubling until successive estimates of all requested sites agree.
fn converge(
    params: &LatticeParams,
    z: f64,
    cfg: &QuadratureConfig,
    eval: impl Fn(&Grid) -> Vec<C64>,
) -> Result<Vec<C64>> {
    cfg.validate()?;
    params.validate()?;
    check_z(z)?;
    let mut nodes = cfg.nodes;
    let mut prev = eval(&Grid::new(params, z, nodes));
    let mut estimate = f64::INFINITY;
    for _ in 0..cfg.max_doublings {
        nodes *= 2;
        let cur = eval(&Grid::new(params, z, nodes));
        estimate = prev.iter().zip(&cur).map(|(p, c)| (p - c).norm()).fold(0.0, f64::max);
        if estimate <= cfg.tolerance {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Convergence { z, estimate, nodes })
}

/// `u_n(z)` for light launched into guide `m`.
pub fn exact_amplitude(params: &LatticeParams, n: i64, m: i64, z: f64, cfg: &QuadratureConfig) -> Result<C64> {
    converge(params, z, cfg, |g| vec![g.amplitude(n, m)]).map(|v| v[0])
}

/// All amplitudes on `-window..=window`, sharing one set of quadrature nodes.
pub fn exact_field(
    params: &LatticeParams,
    m: i64,
    z: f64,
    window: usize,
    cfg: &QuadratureConfig,
) -> Result<FieldState> {
    make_initial_state(window, m)?;
    let w = window as i64;
    let amplitudes = converge(params, z, cfg, |g| (-w..=w).map(|n| g.amplitude(n, m)).collect())?;
    FieldState::new(window, m, z, amplitudes)
}

/// Centred-source form on the half period:
/// `u_n = 1/pi int_0^pi cos(n phi) {cos(Omega z) - i [2 alpha cos phi + (-1)^n omega] sin(Omega z)/Omega} dphi`,
/// evaluated with a fixed-node trapezoid rule (endpoints half-weighted).
///
/// Kept as an independent consistency check of [`exact_amplitude`] at `m = 0`.
pub fn exact_amplitude_centered(params: &LatticeParams, n: i64, z: f64, intervals: usize) -> C64 {
    let h = PI / intervals as f64;
    let mut sum = C64::new(0.0, 0.0);
    for t in 0..=intervals {
        let phi = h * t as f64;
        let big_omega = omega_phi(params, phi);
        let (s, c) = (big_omega * z).sin_cos();
        let coupling = 2.0 * params.alpha * phi.cos() + site_sign(n) * params.omega;
        let f = C64::new(c, -coupling * s / big_omega) * (n as f64 * phi).cos();
        let weight = if t == 0 || t == intervals { 0.5 } else { 1.0 };
        sum += f * weight;
    }
    sum * (h / PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(omega: f64, alpha: f64) -> LatticeParams {
        LatticeParams::new(omega, alpha).unwrap()
    }

    #[test]
    fn dispersion_values() {
        let p = params(1.0, 0.3);
        assert!((omega_phi(&p, PI / 2.0) - 1.0).abs() < 1e-15);
        assert!((omega_phi(&p, 0.0) - 1.36f64.sqrt()).abs() < 1e-15);
        let p = params(2.0, 0.0);
        for phi in [-3.0, -1.0, 0.0, 0.4, 2.9] {
            assert_eq!(omega_phi(&p, phi), 2.0);
        }
    }

    #[test]
    fn delta_at_origin() {
        let p = params(1.0, 0.3);
        let cfg = QuadratureConfig::default();
        for m in -3..=3 {
            for n in -5..=5 {
                let u = exact_amplitude(&p, n, m, 0.0, &cfg).unwrap();
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((u - C64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn uncoupled_guides_only_rotate_phase() {
        let p = params(1.0, 0.0);
        let u = exact_amplitude(&p, 0, 0, 2.5, &QuadratureConfig::default()).unwrap();
        assert!((u - C64::from_polar(1.0, -2.5)).norm() < 1e-14);
        let u = exact_amplitude(&p, 1, 1, 2.5, &QuadratureConfig::default()).unwrap();
        assert!((u - C64::from_polar(1.0, 2.5)).norm() < 1e-14);
    }

    #[test]
    fn half_period_form_agrees_at_centre() {
        let p = params(1.0, 0.3);
        let cfg = QuadratureConfig::default();
        for n in 0..=8 {
            let a = exact_amplitude(&p, n, 0, 17.0, &cfg).unwrap();
            let b = exact_amplitude_centered(&p, n, 17.0, 512);
            assert!((a - b).norm() < 1e-10, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn mirror_symmetry_for_centre_source() {
        let p = params(1.0, 0.3);
        let f = exact_field(&p, 0, 63.0, 20, &QuadratureConfig::default()).unwrap();
        for n in 1..=20 {
            let d = (f.amplitude(n).unwrap() - f.amplitude(-n).unwrap()).norm();
            assert!(d <= 1e-13, "n={n}: {d}");
        }
    }

    #[test]
    fn field_rejects_source_outside_window() {
        let p = params(1.0, 0.3);
        assert!(exact_field(&p, 11, 1.0, 10, &QuadratureConfig::default()).is_err());
        assert!(exact_amplitude(&p, 0, 0, -1.0, &QuadratureConfig::default()).is_err());
    }

    #[test]
    fn reports_convergence_failure() {
        let p = params(1.0, 3.0);
        let cfg = QuadratureConfig { nodes: 16, tolerance: 1e-14, max_doublings: 1 };
        match exact_amplitude(&p, 0, 0, 400.0, &cfg) {
            Err(Error::Convergence { estimate, nodes, .. }) => {
                assert!(estimate > 1e-14);
                assert_eq!(nodes, 32);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn nearly_uncoupled_limit_is_continuous() {
        let p = params(1.0, 1e-8);
        let u = exact_amplitude(&p, 0, 0, 7.0, &QuadratureConfig::default()).unwrap();
        assert!((u - C64::from_polar(1.0, -7.0)).norm() < 1e-6);
        let u = exact_amplitude(&p, 3, 0, 7.0, &QuadratureConfig::default()).unwrap();
        assert!(u.norm() < 1e-6);
    }
}
