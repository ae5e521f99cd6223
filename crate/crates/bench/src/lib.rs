//! Shared fixtures for the solver benchmarks.

use diatomic_core::{uniform_grid, LatticeParams};

/// The default lattice: omega = 1, alpha = 0.3.
pub fn default_params() -> LatticeParams {
    LatticeParams::new(1.0, 0.3).expect("valid parameters")
}

/// Weak coupling, where the rotation method is accurate.
pub fn weak_params() -> LatticeParams {
    LatticeParams::new(1.0, 0.1).expect("valid parameters")
}

/// `points` evenly spaced distances on `[0, z_max]`.
pub fn grid(z_max: f64, points: usize) -> Vec<f64> {
    uniform_grid(z_max, points)
}
