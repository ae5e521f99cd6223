use diatomic_core::exact::{exact_amplitude, exact_field, QuadratureConfig};
use diatomic_core::model::LatticeParams;
use diatomic_core::ode::{propagate, OdeConfig};

fn params(alpha: f64) -> LatticeParams {
    LatticeParams::new(1.0, alpha).unwrap()
}

fn loose(step: f64, window: usize) -> OdeConfig {
    OdeConfig { step, window, edge_mass_tolerance: 1e-10, norm_drift_tolerance: 1.0 }
}

#[test]
fn quadrature_matches_rk4_single_amplitude() {
    let p = params(0.3);
    let exact = exact_amplitude(&p, 1, 0, 10.0, &QuadratureConfig::default()).unwrap();
    let cfg = OdeConfig { window: 100, ..OdeConfig::default() };
    let ode = propagate(&p, 0, &[10.0], &cfg).unwrap()[0].amplitude(1).unwrap();
    assert!((exact.norm() - ode.norm()).abs() < 1e-6);
    assert!((exact.arg() - ode.arg()).abs() < 1e-6);
}

#[test]
fn quadrature_matches_rk4_off_centre_source() {
    let p = params(0.25);
    let cfg = OdeConfig { window: 60, ..OdeConfig::default() };
    let states = propagate(&p, -3, &[7.5, 31.0], &cfg).unwrap();
    for st in &states {
        let ex = exact_field(&p, -3, st.z, 60, &QuadratureConfig::default()).unwrap();
        let dev = ex.amplitudes.iter().zip(&st.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(dev < 1e-8, "z={}: {dev:e}", st.z);
    }
}

#[test]
fn exact_solution_is_unitary() {
    let p = params(0.3);
    for z in [0.0, 12.5, 50.0, 77.7, 100.0] {
        let f = exact_field(&p, 0, z, 40, &QuadratureConfig::default()).unwrap();
        assert!((f.norm_sqr() - 1.0).abs() <= 1e-8, "z={z}: {}", f.norm_sqr());
    }
}

#[test]
fn mirror_symmetry_on_the_default_grid() {
    let p = params(0.3);
    for z in [3.0, 48.0, 100.0] {
        let f = exact_field(&p, 0, z, 20, &QuadratureConfig::default()).unwrap();
        for n in 1..=20 {
            assert!((f.amplitude(n).unwrap() - f.amplitude(-n).unwrap()).norm() <= 1e-13);
        }
    }
}

#[test]
fn rk4_norm_drift_is_at_least_fourth_order() {
    let p = params(0.3);
    let drift = |step: f64| {
        let s = propagate(&p, 0, &[10.0], &loose(step, 30)).unwrap();
        (s[0].norm_sqr() - 1.0).abs()
    };
    let coarse = drift(0.2);
    let fine = drift(0.1);
    let ratio = coarse / fine;
    // the amplification factor of RK4 on an anti-Hermitian generator is
    // 1 - (h lambda)^6 / 72, so the global drift is in fact fifth order (ratio ~ 32)
    assert!(ratio >= 16.0, "ratio {ratio}");
}

#[test]
fn rk4_global_error_is_fourth_order() {
    let p = params(0.3);
    let exact = exact_field(&p, 0, 10.0, 30, &QuadratureConfig::default()).unwrap();
    let err = |step: f64| {
        let s = &propagate(&p, 0, &[10.0], &loose(step, 30)).unwrap()[0];
        s.amplitudes.iter().zip(&exact.amplitudes).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    };
    let (e1, e2, e3) = (err(0.1), err(0.05), err(0.025));
    let order1 = (e1 / e2).log2();
    let order2 = (e2 / e3).log2();
    assert!((order1 - 4.0).abs() < 0.3, "observed order {order1}");
    assert!((order2 - 4.0).abs() < 0.3, "observed order {order2}");
}

#[test]
fn enlarging_the_window_leaves_interior_unchanged() {
    let p = params(0.3);
    let small = OdeConfig { window: 40, ..OdeConfig::default() };
    let large = OdeConfig { window: 60, ..OdeConfig::default() };
    let a = propagate(&p, 0, &[30.0], &small).unwrap();
    let b = propagate(&p, 0, &[30.0], &large).unwrap();
    for n in -10..=10 {
        let d = (a[0].amplitude(n).unwrap() - b[0].amplitude(n).unwrap()).norm();
        assert!(d <= 1e-10, "n={n}: {d:e}");
    }
}

#[test]
fn target_grid_is_hit_exactly() {
    let p = params(0.3);
    let targets = [0.0, 0.0007, 0.3333, 1.0];
    let s = propagate(&p, 0, &targets, &OdeConfig::default()).unwrap();
    let zs: Vec<f64> = s.iter().map(|st| st.z).collect();
    assert_eq!(zs, targets);
    let u = s[1].amplitude(0).unwrap();
    let expected = exact_amplitude(&p, 0, 0, 0.0007, &QuadratureConfig::default()).unwrap();
    assert!((u - expected).norm() < 1e-14);
}
