use diatomic_core::analysis::{compare, uniform_grid, Method};
use diatomic_core::model::{slot, LatticeParams};
use diatomic_core::rs::{
    dyson_series_oracle, dyson_series_terms, rs_amplitude, rs_polynomials, rs_polynomials_with, rs_term, rs_term_with,
    Recurrence, RsOrderConfig, MAX_ORDER,
};
use diatomic_core::Complex64 as C64;
use proptest::prelude::*;

fn dyson_term(p: &LatticeParams, n: i64, m: i64, z: f64, k: usize) -> C64 {
    let (window, terms) = dyson_series_terms(p, m, z, k).unwrap();
    slot(window, n).map_or(C64::new(0.0, 0.0), |i| terms[k][i])
}

#[test]
fn closed_form_matches_dyson_series_order_by_order() {
    let cases = [LatticeParams::new(1.0, 0.3).unwrap(), LatticeParams::new(1.7, 0.45).unwrap()];
    let mut worst = 0.0_f64;
    for p in &cases {
        for m in -2..=2 {
            for &z in &[0.7, 2.3, 5.0] {
                let (window, terms) = dyson_series_terms(p, m, z, 4).unwrap();
                for (k, term) in terms.iter().enumerate() {
                    for d in -4..=4i64 {
                        let n = m + d;
                        let oracle = term[slot(window, n).unwrap()];
                        let closed = rs_term(p, n, m, z, k).unwrap();
                        let dev = (oracle - closed).norm();
                        worst = worst.max(dev);
                        assert!(dev <= 1e-10, "k={k} m={m} n={n} z={z}: {closed} vs {oracle}");
                    }
                }
            }
        }
    }
    println!("worst order-by-order deviation: {worst:e}");
}

#[test]
fn alternate_odd_recurrence_fails_at_third_order() {
    let p = LatticeParams::new(1.0, 0.3).unwrap();
    let z = 2.3;
    for n in [-3i64, -1, 1, 3] {
        let oracle = dyson_term(&p, n, 0, z, 3);
        let canonical = rs_term_with(&p, n, 0, z, 3, Recurrence::Canonical).unwrap();
        let alternate = rs_term_with(&p, n, 0, z, 3, Recurrence::Alternate).unwrap();
        assert!((canonical - oracle).norm() <= 1e-10);
        assert!((alternate - oracle).norm() > 1e-4, "n={n}");
    }
    // orders 1 and 2 never use the odd rule beyond its seeds
    for k in 0..=2 {
        assert_eq!(rs_polynomials_with(k, Recurrence::Alternate).unwrap(), rs_polynomials(k).unwrap());
    }
}

#[test]
fn dyson_first_order_closed_form() {
    let p = LatticeParams::new(1.0, 0.3).unwrap();
    let z = 3.1;
    let expected = (C64::from_polar(1.0, -z) - C64::from_polar(1.0, z)) * 0.15;
    for n in [-1, 1] {
        assert!((dyson_term(&p, n, 0, z, 1) - expected).norm() < 1e-12);
    }
    let zeroth = dyson_series_oracle(&p, 1, 1, z, 0).unwrap();
    assert!((zeroth - C64::from_polar(1.0, z)).norm() < 1e-12);
}

/// Coefficients of `p(-xi)`.
fn reflect(p: &[i64]) -> Vec<i128> {
    p.iter().enumerate().map(|(i, c)| if i % 2 == 0 { *c as i128 } else { -(*c as i128) }).collect()
}

fn derivative(p: &[i64]) -> Vec<i128> {
    p.iter().enumerate().skip(1).map(|(i, c)| i as i128 * *c as i128).collect()
}

fn same(a: &[i128], b: &[i128]) -> bool {
    let len = a.len().max(b.len());
    (0..len).all(|i| a.get(i).copied().unwrap_or(0) == b.get(i).copied().unwrap_or(0))
}

#[test]
fn polynomials_solve_the_order_hierarchy_exactly() {
    // Substituting the closed form into g_k' = -i omega s_k g_k - i alpha g_{k-1}
    // gives, with r_k = floor(k/2)! / floor((k-1)/2)! and sigma = -(-1)^k r_k:
    //   P_k'(xi) = sigma Q_{k-1}(-xi),  Q_k(xi) + Q_k'(xi) = sigma P_{k-1}(-xi),
    //   P_k(0) + Q_k(0) = 0.
    for k in 1..=MAX_ORDER {
        let cur = rs_polynomials(k).unwrap();
        let prev = rs_polynomials(k - 1).unwrap();
        let r: i128 = if k % 2 == 0 { (k / 2) as i128 } else { 1 };
        let sigma = if k % 2 == 0 { -r } else { r };
        let scale = |v: Vec<i128>| v.into_iter().map(|c| c * sigma).collect::<Vec<_>>();

        assert!(same(&derivative(&cur.p_coeffs), &scale(reflect(&prev.q_coeffs))), "P_{k}'");
        let q = &cur.q_coeffs;
        let dq = derivative(q);
        let lhs: Vec<i128> = (0..q.len()).map(|i| q[i] as i128 + dq.get(i).copied().unwrap_or(0)).collect();
        assert!(same(&lhs, &scale(reflect(&prev.p_coeffs))), "Q_{k} + Q_{k}'");
        assert_eq!(cur.p_coeffs[0] + cur.q_coeffs[0], 0, "k={k} initial value");
    }
}

#[test]
fn third_order_series_diverges_from_exact() {
    let p = LatticeParams::new(1.0, 0.3).unwrap();
    let grid = uniform_grid(100.0, 1001);
    let r = compare(Method::Exact, Method::Rs { order: 3 }, &p, 0, &grid, 5).unwrap();
    let e = &r.max_intensity_error_by_z;
    assert!(e[500] > e[50]);
    assert!(e[..=20].iter().all(|v| *v <= 5e-2));
    assert!(r.global_max_intensity_error > 0.2);
}

proptest! {
    #[test]
    fn guides_light_up_at_their_distance(
        m in -3i64..=3, d in -8i64..=8, order in 0usize..=6, z in 0.1f64..20.0
    ) {
        let p = LatticeParams::new(1.0, 0.3).unwrap();
        let n = m + d;
        for k in 0..=order {
            let t = rs_term(&p, n, m, z, k).unwrap();
            let allowed = d.unsigned_abs() as usize <= k && (k as i64 - d) % 2 == 0;
            if !allowed {
                prop_assert_eq!(t, C64::new(0.0, 0.0));
            }
        }
        let u = rs_amplitude(&p, n, m, z, &RsOrderConfig::new(order).unwrap()).unwrap();
        if d.unsigned_abs() as usize > order {
            prop_assert_eq!(u, C64::new(0.0, 0.0));
        }
    }
}
