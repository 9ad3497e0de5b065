//! Quick invariant checks across all routes. Each check yields a defect and
//! the tolerance it must stay under.

use std::f64::consts::PI;

use gapprob::constants::{default_precision, widom_dyson_c0, zeta_prime_minus1_default};
use gapprob::fredholm::{scaling_limit_gap, trace_identity_residual, GapSpec, NystromConfig};
use gapprob::numerics::PrecisionConfig;
use gapprob::painleve::sigma_pvi_residual;
use gapprob::rh::{f_eval, model_solution, parametrix_mismatch, BoundarySide, DEFAULT_DELTA};
use gapprob::toeplitz::{
    a_n_asymptotic_residual, log_det, multiple_integral_oracle, small_beta_logdet, ArcEnsemble,
};
use gapprob::Result;
use num_complex::Complex64;

use crate::report::{Record, Route};

const ZETA_PRIME_MINUS1: f64 = -0.165_421_143_700_450_93;

type Check = (&'static str, Route, f64, fn() -> Result<f64>);

fn zeta() -> Result<f64> {
    Ok((zeta_prime_minus1_default().value - ZETA_PRIME_MINUS1).abs())
}

fn c0() -> Result<f64> {
    let exact = 2f64.ln() / 12.0 + 3.0 * ZETA_PRIME_MINUS1;
    Ok((widom_dyson_c0(default_precision()) - exact).abs())
}

fn single_site() -> Result<f64> {
    let a = 1.3;
    let r = log_det(&ArcEnsemble::new(1, a)?, PrecisionConfig::NATIVE)?;
    Ok((r.log_det - (1.0 - a / PI).ln()).abs())
}

fn oracle() -> Result<f64> {
    let (n, a) = (3, 2.0);
    let r = log_det(&ArcEnsemble::new(n, a)?, PrecisionConfig::new(30)?)?;
    Ok((multiple_integral_oracle(n, a, 40)? - r.log_det.exp()).abs())
}

fn small_beta() -> Result<f64> {
    let b = 0.3;
    let r = log_det(&ArcEnsemble::from_beta(1, b)?, PrecisionConfig::NATIVE)?;
    Ok((small_beta_logdet(1, b)? - r.log_det).abs())
}

fn trace_identity() -> Result<f64> {
    let r = trace_identity_residual(&GapSpec::new(1.0, 0.5)?, &NystromConfig::new(40)?, 20)?;
    Ok(r.abs())
}

fn universality() -> Result<f64> {
    let n = 200;
    let prec = ArcEnsemble::new(n, 2.0 / n as f64)?.suggested_precision();
    Ok(scaling_limit_gap(1.0, n, prec)?.abs())
}

fn model_problem() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for k in 0..20 {
        let x = -0.95 + 0.1 * k as f64;
        let l = Complex64::new(x, 0.0);
        let fp = f_eval(l, 1.1, BoundarySide::Plus)?;
        let fm = f_eval(l, 1.1, BoundarySide::Minus)?;
        worst = worst.max((fp * fm - 1.0).norm());
        let off = Complex64::new(x, 0.3 + 0.1 * k as f64);
        worst = worst.max((model_solution(off, BoundarySide::OffCut)?.det() - 1.0).norm());
    }
    Ok(worst)
}

fn parametrix() -> Result<f64> {
    let m = |n| parametrix_mismatch(PI / 2.0, n, PI / 2.0, DEFAULT_DELTA).map(|r| r.norm());
    Ok((m(10)? / m(20)? - 8.0).abs())
}

fn sigma_form() -> Result<f64> {
    sigma_pvi_residual(2, 2.5, 1e-3)
}

fn a_n() -> Result<f64> {
    Ok(a_n_asymptotic_residual(50, PrecisionConfig::new(30)?)?.abs())
}

const CHECKS: [Check; 11] = [
    ("zeta_prime_minus1", Route::Constants, 1e-12, zeta),
    ("c0_identity", Route::Constants, 1e-9, c0),
    ("single_site_determinant", Route::Toeplitz, 1e-14, single_site),
    ("multiple_integral_oracle", Route::Toeplitz, 1e-7, oracle),
    ("small_beta_single_site", Route::Toeplitz, 1e-14, small_beta),
    ("a_n_asymptotics", Route::Toeplitz, 0.02, a_n),
    ("trace_identity", Route::Fredholm, 1e-8, trace_identity),
    ("toeplitz_to_sine_kernel", Route::Fredholm, 0.02, universality),
    ("model_problem_identities", Route::RhModel, 1e-12, model_problem),
    ("parametrix_order", Route::RhModel, 2.0, parametrix),
    ("sigma_form", Route::Painleve, 1e-4, sigma_form),
];

/// Runs every check; the flag is false if any defect exceeds its tolerance.
pub fn run() -> Result<(Vec<Record>, bool)> {
    let mut all_pass = true;
    let mut out = Vec::with_capacity(CHECKS.len());
    for (name, route, tol, f) in CHECKS {
        let defect = f()?;
        let pass = defect <= tol;
        all_pass &= pass;
        out.push(
            Record::new("selftest")
                .input("check", name)
                .output("defect", defect, route)
                .output("tolerance", tol, route)
                .output("pass", pass, route),
        );
    }
    Ok((out, all_pass))
}
