//! Property tests for the quadrature and root-finding kernels.

use pelastica::numerics::{find_root_monotone, integrate, QuadSpec, RootSpec};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integration_is_additive_across_interior_points(
        c0 in -2.0f64..2.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        a in -3.0f64..0.0,
        len in 0.1f64..4.0,
        t in 0.05f64..0.95,
    ) {
        let spec = QuadSpec::default();
        let f = |x: f64| c0 + c1 * x + c2 * (1.3 * x).sin();
        let b = a + len;
        let c = a + t * len;
        let whole = integrate(f, a, b, &spec).unwrap();
        let left = integrate(f, a, c, &spec).unwrap();
        let right = integrate(f, c, b, &spec).unwrap();
        prop_assert!((left + right - whole).abs() <= 2.0 * spec.abs_tol.max(1e-12 * whole.abs()));
    }

    #[test]
    fn odd_integrand_over_symmetric_interval_vanishes(
        c1 in -3.0f64..3.0,
        c3 in -3.0f64..3.0,
        half in 0.1f64..3.0,
    ) {
        let spec = QuadSpec::default();
        let f = |x: f64| c1 * x + c3 * x.powi(3) + x.sin();
        let v = integrate(f, -half, half, &spec).unwrap();
        prop_assert!(v.abs() <= spec.abs_tol.max(1e-12 * half.powi(4)));
    }

    #[test]
    fn root_residual_bounded_by_bracket_ends(
        shift in -0.9f64..0.9,
        steep in 0.2f64..5.0,
    ) {
        let f = move |x: f64| steep * (x - shift) + (x - shift).powi(3);
        let spec = RootSpec::default();
        let root = find_root_monotone(f, -1.0, 1.0, &spec).unwrap();
        prop_assert!((root - shift).abs() <= 1e-10);
        let fr = f(root).abs();
        prop_assert!(fr <= f(root - spec.tol).abs().max(f(root + spec.tol).abs()));
    }
}
