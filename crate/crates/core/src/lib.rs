//! Light propagation in diatomic waveguide arrays,
//! `i du_n/dz = omega (-1)^n u_n + alpha (u_{n+1} + u_{n-1})`.
//!
//! Four independent solvers:
//!
//! - [`exact`]: the exact propagator as a periodic Fourier integral (trapezoid rule).
//! - [`rotation`]: the small-rotation approximation, a double Bessel series.
//! - [`rs`]: the Rayleigh-Schroedinger series in `alpha`, plus a Dyson-hierarchy oracle.
//! - [`ode`]: fixed-step RK4 on the truncated lattice.
//!
//! [`analysis`] compares any two of them over a z-grid.

pub mod analysis;
pub mod error;
pub mod exact;
pub mod model;
pub mod ode;
pub mod rotation;
pub mod rs;
pub mod specfun;

pub use num_complex::Complex64;

pub use analysis::{
    compare, compare_with, regime_sweep, solve_grid, uniform_grid, ComparisonReport, Method, SolverSettings,
};
pub use error::{Error, Result};
pub use exact::{exact_amplitude, exact_field, omega_phi, QuadratureConfig};
pub use model::{
    apply_hamiltonian, apply_shift, make_initial_state, signed_shift_power, FieldState, LatticeParams, PlaneWaveProbe,
    ShiftDirection,
};
pub use ode::{propagate, OdeConfig};
pub use rotation::{
    rotation_amplitude, rotation_effective_hamiltonian_apply, rotation_field, rotation_operator_apply, SeriesTruncation,
};
pub use rs::{dyson_series_oracle, rs_amplitude, rs_polynomials, PolynomialPair, RsOrderConfig};
pub use specfun::{bessel_j, bessel_j_row, BesselEvalConfig};
