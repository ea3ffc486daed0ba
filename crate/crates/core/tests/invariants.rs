//! Property-based checks of the series and operator layers.

use num_complex::Complex64;
use proptest::prelude::*;

use compdiff::operators::build_dphi;
use compdiff::series::{compose, PowerSeries, SymbolMap};
use compdiff::space::{inner_product, norm, WeightedSpace};

fn series_strategy(max_len: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..=max_len)
        .prop_map(|v| PowerSeries::new(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn product_rule_for_derivatives(f in series_strategy(10), g in series_strategy(10)) {
        // (fg)' = f'g + fg'.  Coefficient n of either side needs both
        // factors through index n+1, so the identity holds through
        // min(order f, order g) - 1 and no further on truncated series.
        let common = f.truncation_order().min(g.truncation_order());
        prop_assume!(common >= 1);
        let lhs = f.multiply(&g).derivative();
        let rhs = f.derivative().multiply(&g).add(&f.multiply(&g.derivative()));
        for n in 0..common {
            prop_assert!((lhs.coeff(n) - rhs.coeff(n)).norm() < 1e-9);
        }
    }

    #[test]
    fn multiplication_matches_pointwise_evaluation(
        f in series_strategy(8),
        g in series_strategy(8),
        r in 0.0f64..0.45,
        t in 0.0f64..6.28,
    ) {
        // evaluation of the truncated product differs from the product of
        // evaluations only by the dropped tail, bounded geometrically
        let z = Complex64::from_polar(r, t);
        let fg = f.multiply(&g);
        let order = fg.truncation_order();
        let max_coeff = 4.0 * 8.0 * 8.0; // coefficient bound of the full product
        let tail = max_coeff * r.powi(order as i32 + 1) / (1.0 - r);
        prop_assert!((fg.eval(z) - f.eval(z) * g.eval(z)).norm() <= tail + 1e-9);
    }

    #[test]
    fn composition_matches_pointwise_evaluation(
        f in series_strategy(8),
        a_abs in 0.05f64..0.6,
        a_arg in 0.0f64..6.28,
        degree in 1u32..4,
        r in 0.0f64..0.9,
        t in 0.0f64..6.28,
    ) {
        let phi = SymbolMap::monomial(Complex64::from_polar(a_abs, a_arg), degree).unwrap();
        let comp = compose(&f, &phi, 64).unwrap();
        let z = Complex64::from_polar(r, t);
        // |phi(z)| <= 0.6 so the dropped tail is at most
        // sum_(n>64) max|coeff| * 0.6^n with coefficients bounded by 4*8
        let tail = 32.0 * 0.6f64.powi(65) / 0.4;
        prop_assert!((comp.eval(z) - f.eval(phi.eval(z))).norm() <= tail + 1e-10);
    }

    #[test]
    fn linear_fractional_taylor_matches_direct_evaluation(
        a in -0.3f64..0.3,
        b in -0.3f64..0.3,
        c in -0.2f64..0.2,
        r in 0.0f64..0.5,
        t in 0.0f64..6.28,
    ) {
        let phi = match SymbolMap::linear_fractional(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(1.0, 0.0),
        ) {
            Ok(p) => p,
            Err(_) => return Ok(()), // degenerate or non-contractive draw
        };
        let taylor = phi.taylor(96).unwrap();
        let z = Complex64::from_polar(r, t);
        prop_assert!((taylor.eval(z) - phi.eval(z)).norm() < 1e-10);
    }

    #[test]
    fn cauchy_schwarz_in_each_space(f in series_strategy(10), g in series_strategy(10)) {
        for sp in [WeightedSpace::Dirichlet, WeightedSpace::Hardy, WeightedSpace::Bergman] {
            let ip = inner_product(&f, &g, sp).norm();
            prop_assert!(ip <= norm(&f, sp) * norm(&g, sp) + 1e-9);
        }
    }

    #[test]
    fn operator_application_agrees_with_composition(
        a_abs in 0.05f64..0.7,
        degree in 1u32..4,
    ) {
        // matrix route vs series route for D_phi on a fixed test function
        let phi = SymbolMap::monomial(Complex64::new(a_abs, 0.0), degree).unwrap();
        let n = 96;
        let mut coeffs = vec![Complex64::default(); n + 1];
        coeffs[1] = Complex64::new(1.0, 0.0);
        coeffs[2] = Complex64::new(-0.5, 0.25);
        coeffs[5] = Complex64::new(0.1, 0.0);
        let f = PowerSeries::new(coeffs);
        let m = build_dphi(&phi, WeightedSpace::Dirichlet, n).unwrap();
        let via_matrix = m.apply(&f).unwrap();
        let via_series = compose(&f.derivative(), &phi, n).unwrap();
        for k in 0..=n / 2 {
            prop_assert!((via_matrix.coeff(k) - via_series.coeff(k)).norm() < 1e-10);
        }
    }
}
