use std::f64::consts::PI;

use gapprob::asymptotics::{dyson_expansion, widom_expansion};
use gapprob::fredholm::{kernel, log_det_gap, GapSpec, NystromConfig};
use gapprob::numerics::{gauss_legendre, Mat2C, PrecisionConfig};
use gapprob::rh::{f_eval, map_lambda_z, map_z_lambda, model_solution, BoundarySide};
use gapprob::toeplitz::{log_det, ratio_next, symbol_entry, ArcEnsemble};
use num_complex::Complex64;
use proptest::prelude::*;

fn unit_matrix(v: [f64; 8]) -> Mat2C {
    let m = Mat2C::new(
        Complex64::new(v[0], v[1]),
        Complex64::new(v[2], v[3]),
        Complex64::new(v[4], v[5]),
        Complex64::new(v[6], v[7]),
    );
    let n = m.norm();
    m.scale(Complex64::new(1.0 / n, 0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_legendre_exactness(m in 1usize..48) {
        let r = gauss_legendre(m, PrecisionConfig::NATIVE).unwrap();
        let eps = f64::EPSILON;
        prop_assert!((r.weights.iter().sum::<f64>() - 2.0).abs() <= 10.0 * eps);
        for w in r.nodes.windows(2) {
            prop_assert!(w[0] < w[1]);
        }
        for (a, b) in r.nodes.iter().zip(r.nodes.iter().rev()) {
            prop_assert!((a + b).abs() <= 4.0 * eps);
        }
        for j in 0..2 * m {
            let exact = if j % 2 == 1 { 0.0 } else { 2.0 / (j as f64 + 1.0) };
            let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(j as i32)).sum();
            prop_assert!((q - exact).abs() <= 100.0 * eps, "m {} j {} err {}", m, j, q - exact);
        }
    }

    #[test]
    fn determinant_is_multiplicative(a in prop::array::uniform8(-1.0f64..1.0), b in prop::array::uniform8(-1.0f64..1.0)) {
        prop_assume!(a.iter().any(|x| x.abs() > 1e-3) && b.iter().any(|x| x.abs() > 1e-3));
        let (a, b) = (unit_matrix(a), unit_matrix(b));
        prop_assert!(((a * b).det() - a.det() * b.det()).norm() <= 50.0 * f64::EPSILON);
    }

    #[test]
    fn symbol_is_even_in_k(k in -500i64..500, alpha in 0.01f64..PI) {
        prop_assert_eq!(symbol_entry(k, alpha), symbol_entry(-k, alpha));
    }

    #[test]
    fn kernel_is_symmetric(x in -20.0f64..20.0, y in -20.0f64..20.0) {
        prop_assert_eq!(kernel(x, y), kernel(y, x));
    }

    #[test]
    fn z_lambda_round_trip(re in -3.0f64..3.0, im in -3.0f64..3.0, alpha in 0.05f64..3.1) {
        let z = Complex64::new(re, im);
        prop_assume!((z + 1.0).norm() > 0.05);
        let l = map_z_lambda(z, alpha).unwrap();
        prop_assume!(l.norm() < 1e6);
        let back = map_lambda_z(l, alpha).unwrap();
        prop_assert!((back - z).norm() <= 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn model_solution_is_unimodular(re in -5.0f64..5.0, im in -5.0f64..5.0) {
        let l = Complex64::new(re, im);
        prop_assume!(im.abs() > 1e-6 && (l - 1.0).norm() > 1e-3 && (l + 1.0).norm() > 1e-3);
        let n = model_solution(l, BoundarySide::OffCut).unwrap();
        prop_assert!((n.det() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn f_boundary_values_are_reciprocal(x in -0.999f64..0.999, alpha in 0.01f64..PI) {
        let x = Complex64::new(x, 0.0);
        let p = f_eval(x, alpha, BoundarySide::Plus).unwrap();
        let m = f_eval(x, alpha, BoundarySide::Minus).unwrap();
        prop_assert!((p * m - 1.0).norm() < 1e-12);
    }

    #[test]
    fn arc_ratios_are_probability_ratios(n in 1usize..16, alpha in 0.1f64..2.6) {
        let e = ArcEnsemble::new(n, alpha).unwrap();
        let p = e.suggested_precision();
        let r = ratio_next(&e, p).unwrap();
        prop_assert!(r > 0.0 && r < 1.0);
        let ld = log_det(&e, p).unwrap();
        prop_assert!(ld.precision_ok);
        prop_assert!(ld.log_pivots.iter().all(|l| l.is_finite()));
        prop_assert!((ld.log_det - ld.log_pivots.iter().sum::<f64>()).abs() < 1e-10 * (1.0 + ld.log_det.abs()));
    }

    #[test]
    fn gap_probability_is_monotone(s in 0.05f64..4.0, ds in 0.01f64..1.0, g in 0.05f64..0.95, dg in 0.01f64..0.05) {
        let cfg = NystromConfig::default_for(s + ds);
        let at = |s: f64, g: f64| log_det_gap(&GapSpec::new(s, g).unwrap(), &cfg).unwrap();
        let base = at(s, g);
        prop_assert!(base < 0.0 && base.exp() > 0.0);
        prop_assert!(at(s + ds, g) < base);
        prop_assert!(at(s, g + dg) < base);
    }

    #[test]
    fn expansions_are_plain_sums(n in 1usize..1000, alpha in 0.01f64..3.1, s in 0.01f64..50.0, c0 in -1.0f64..1.0) {
        let w = widom_expansion(n, alpha, c0).unwrap();
        prop_assert_eq!(w.eval().to_bits(), w.eval().to_bits());
        prop_assert_eq!(w.eval(), w.terms.iter().map(|t| t.1).sum::<f64>());
        let d = dyson_expansion(s, c0).unwrap();
        prop_assert_eq!(d.eval(), d.terms.iter().map(|t| t.1).sum::<f64>());
    }

    #[test]
    fn epsilon_matches_digits(d in 15u32..400) {
        let p = PrecisionConfig::new(d).unwrap();
        prop_assert!(p.ln_epsilon() <= (1.0 - d as f64) * 10f64.ln());
        prop_assert_eq!(p.is_native(), d == 15);
    }
}
