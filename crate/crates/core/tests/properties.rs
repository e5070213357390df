use std::f64::consts::PI;

use proptest::prelude::*;

use lattice_casimir::lattice::{
    phi_tilde_1d, reduce_displacement, ChainPairConfig, Lattice2DPairConfig, TruncationSpec,
};
use lattice_casimir::limits::{
    casimir_polder_closed, casimir_polder_two_point, lifshitz_delta_planes, pairwise_energy_chain,
    pairwise_energy_lattice2d,
};
use lattice_casimir::numerics::{dilog, integrate_semiinfinite, QuadratureSpec};
use lattice_casimir::tgtg::{kernel_h_1d, kernel_h_2d, richardson_in_inverse_n};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn trunc() -> TruncationSpec {
    TruncationSpec {
        tail_tol: 1e-12,
        ..Default::default()
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn two_point_quadrature_matches_dilog(d in 0.05f64..20.0, x in 0.001f64..0.5) {
        let g = 4.0 * PI * d * x;
        let quad = QuadratureSpec::default().with_orders(64, 8).with_tol(1e-12);
        let q = casimir_polder_two_point(g, d, &quad).unwrap();
        prop_assert!(close(q, casimir_polder_closed(g, d).unwrap(), 1e-8));
    }

    #[test]
    fn dilog_reflection(x in 0.001f64..0.999) {
        let lhs = dilog(x).unwrap() + dilog(1.0 - x).unwrap();
        let rhs = PI * PI / 6.0 - x.ln() * (1.0 - x).ln();
        prop_assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn displacement_folds_into_the_cell(a in 0.1f64..10.0, c in -100.0f64..100.0) {
        let cfg = ChainPairConfig::new(a, 1.0, c, 0.1).unwrap();
        prop_assert!(cfg.c >= 0.0 && cfg.c < a);
        prop_assert_eq!(reduce_displacement(cfg), cfg);
    }

    #[test]
    fn chain_kernel_is_contractive_and_mirror_symmetric(
        b in 0.05f64..3.0, c in 0.0f64..1.0, g in 0.01f64..1.0, xi in 1e-3f64..20.0, q in -PI..PI,
    ) {
        let t = trunc();
        let h = kernel_h_1d(xi, q, &ChainPairConfig::new(1.0, b, c, g).unwrap(), &t).unwrap();
        let m = kernel_h_1d(xi, q, &ChainPairConfig::new(1.0, b, 1.0 - c, g).unwrap(), &t).unwrap();
        prop_assert!(h.norm() < 1.0);
        prop_assert!(close(h.norm(), m.norm(), 1e-9));
    }

    #[test]
    fn chain_kernel_is_periodic_and_even(
        b in 0.1f64..3.0, c in 0.0f64..1.0, xi in 1e-2f64..10.0, q in 0.0f64..PI, n in -3i32..3,
    ) {
        let cfg = ChainPairConfig::new(1.0, b, c, 0.1).unwrap();
        let t = trunc();
        let h = kernel_h_1d(xi, q, &cfg, &t).unwrap().norm();
        let shifted = kernel_h_1d(xi, q + 2.0 * PI * n as f64, &cfg, &t).unwrap().norm();
        let mirrored = kernel_h_1d(xi, -q, &cfg, &t).unwrap().norm();
        prop_assert!(close(h, shifted, 1e-9));
        prop_assert!(close(h, mirrored, 1e-9));
        let phi = phi_tilde_1d(xi, q, &cfg).unwrap();
        prop_assert!(close(phi, phi_tilde_1d(xi, -q, &cfg).unwrap(), 1e-14));
    }

    #[test]
    fn lattice_kernel_symmetries(
        b in 0.1f64..2.0, c1 in 0.0f64..1.0, c2 in 0.0f64..1.0,
        xi in 1e-2f64..10.0, q1 in -PI..PI, q2 in -PI..PI,
    ) {
        let t = trunc();
        let mk = |c: [f64; 2]| Lattice2DPairConfig::new(1.0, b, c, 0.1).unwrap();
        let h = kernel_h_2d(xi, [q1, q2], &mk([c1, c2]), &t).unwrap();
        prop_assert!(h.norm() < 1.0);
        // conjugation: (q, c) -> (-q, -c)
        let conj = kernel_h_2d(xi, [-q1, -q2], &mk([1.0 - c1, 1.0 - c2]), &t).unwrap();
        prop_assert!(close(h.norm(), conj.norm(), 1e-9));
        // axis exchange
        let swapped = kernel_h_2d(xi, [q2, q1], &mk([c2, c1]), &t).unwrap();
        prop_assert!(close(h.norm(), swapped.norm(), 1e-9));
    }

    #[test]
    fn pairwise_sums_are_mirror_symmetric(b in 0.05f64..3.0, c in 0.0f64..1.0) {
        let e = |c: f64| pairwise_energy_chain(&ChainPairConfig { a: 1.0, b, c, g: 0.1 }, 50).unwrap();
        prop_assert!(close(e(c), e(-c), 1e-13));
        let l = |c: [f64; 2]| pairwise_energy_lattice2d(&Lattice2DPairConfig { a: 1.0, b, c, g: 0.1 }, 8).unwrap();
        prop_assert!(close(l([c, 0.3]), l([-c, -0.3]), 1e-13));
    }

    #[test]
    fn planes_attract_more_with_stronger_coupling(g in 0.01f64..10.0, b in 0.1f64..10.0) {
        let quad = QuadratureSpec::default().with_orders(32, 8).with_tol(1e-10);
        let weak = lifshitz_delta_planes(g, b, &quad).unwrap();
        let strong = lifshitz_delta_planes(2.0 * g, b, &quad).unwrap();
        prop_assert!(strong < weak && weak < 0.0);
    }

    #[test]
    fn richardson_is_exact_for_quadratics(e0 in -1.0f64..1.0, c1 in -1.0f64..1.0, c2 in -1.0f64..1.0) {
        let pts: Vec<(usize, f64)> = [10usize, 20, 40]
            .iter()
            .map(|&n| {
                let x = 1.0 / n as f64;
                (n, e0 + c1 * x + c2 * x * x)
            })
            .collect();
        prop_assert!((richardson_in_inverse_n(&pts) - e0).abs() < 1e-12);
    }

    #[test]
    fn semiinfinite_exponential_moments(k in 0u32..6, s in 0.1f64..10.0) {
        // int_0^inf x^k e^{-s x} dx = k! / s^{k+1}
        let quad = QuadratureSpec::default().with_orders(32, 8).with_tol(1e-12);
        let (v, _) = integrate_semiinfinite(|x: f64| Ok(x.powi(k as i32) * (-s * x).exp()), &quad).unwrap();
        let exact = (1..=k).map(f64::from).product::<f64>() / s.powi(k as i32 + 1);
        prop_assert!(close(v, exact, 1e-9));
    }
}
