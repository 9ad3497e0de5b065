//! One record per computation. Every function validates its inputs through
//! the library constructors before doing any work.

use std::f64::consts::PI;

use gapprob::asymptotics::{dinteg_sides, extract_c0_dyson, extract_c0_widom};
use gapprob::constants::{default_precision, widom_dyson_c0, zeta_prime_minus1, DEFAULT_TERMS};
use gapprob::fredholm::{log_det_gap, GapSpec, NystromConfig};
use gapprob::numerics::PrecisionConfig;
use gapprob::painleve::{delta_from_eta, eta_expansion, eta_from_determinant, sigma_pvi_normalized};
use gapprob::rh::{delta_asymptotic, delta_from_determinant, theta_from_determinant};
use gapprob::toeplitz::{log_det, ArcEnsemble};
use gapprob::{GapError, Result};

use crate::report::{Record, Route};

/// The arc as given on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Arc {
    Alpha(f64),
    Beta(f64),
}

impl Arc {
    pub fn ensemble(self, n: usize) -> Result<ArcEnsemble> {
        match self {
            Arc::Alpha(a) => ArcEnsemble::new(n, a),
            Arc::Beta(b) => ArcEnsemble::from_beta(n, b),
        }
    }

    pub fn alpha(self) -> f64 {
        match self {
            Arc::Alpha(a) => a,
            Arc::Beta(b) => PI - b,
        }
    }

    fn tag(self, r: Record) -> Record {
        match self {
            Arc::Alpha(a) => r.input("alpha", a),
            Arc::Beta(b) => r.input("beta", b),
        }
    }
}

fn precision(digits: Option<u32>) -> Result<Option<PrecisionConfig>> {
    digits.map(PrecisionConfig::new).transpose()
}

pub fn constants(digits: Option<u32>) -> Result<Record> {
    let prec = precision(digits)?.unwrap_or_else(default_precision);
    let z = zeta_prime_minus1(DEFAULT_TERMS, prec)?;
    Ok(Record::new("constants")
        .input("digits", prec.decimal_digits())
        .input("terms", z.terms_used)
        .output("zeta_prime_minus1", z.value, Route::Constants)
        .output("zeta_tail_bound", z.tail_bound, Route::Constants)
        .output("c0", widom_dyson_c0(prec), Route::Constants))
}

pub fn toeplitz(n: usize, arc: Arc, digits: Option<u32>, log: bool) -> Result<Record> {
    let ens = arc.ensemble(n)?;
    let prec = precision(digits)?.unwrap_or_else(|| ens.suggested_precision());
    let r = log_det(&ens, prec)?;
    if !r.precision_ok {
        return Err(GapError::PrecisionFault(format!(
            "{} digits are not enough for n = {n} at alpha = {}",
            prec.decimal_digits(),
            ens.alpha
        )));
    }
    let rec = arc.tag(Record::new("toeplitz").input("n", n)).input("digits", prec.decimal_digits());
    let rec = if log {
        rec.output("log_det", r.log_det, Route::Toeplitz)
    } else {
        rec.output("det", r.log_det.exp(), Route::Toeplitz)
    };
    let log_min_pivot = r.log_pivots.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(rec.output("log_min_pivot", log_min_pivot, Route::Toeplitz))
}

pub fn fredholm(s: f64, gamma: f64, quad_order: Option<usize>) -> Result<Record> {
    let spec = GapSpec::new(s, gamma)?;
    let cfg = match quad_order {
        Some(m) => NystromConfig::new(m)?,
        None => NystromConfig::default_for(s),
    };
    let ld = log_det_gap(&spec, &cfg)?;
    Ok(Record::new("fredholm")
        .input("s", s)
        .input("gamma", gamma)
        .input("quad_order", cfg.m)
        .output("log_det", ld, Route::Fredholm)
        .output("det", ld.exp(), Route::Fredholm))
}

pub fn delta(n: usize, arc: Arc, fd_step: Option<f64>) -> Result<Record> {
    arc.ensemble(n)?;
    let a = arc.alpha();
    let d = delta_from_determinant(n, a, fd_step)?;
    let mut rec = arc.tag(Record::new("delta").input("n", n));
    if let Some(h) = fd_step {
        rec = rec.input("fd_step", h);
    }
    Ok(rec.output("delta", d.value, Route::Toeplitz).output("delta_error", d.error, Route::Toeplitz).output(
        "delta_asymptotic",
        delta_asymptotic(n, a)?,
        Route::RhModel,
    ))
}

pub fn theta(n: usize, arc: Arc) -> Result<Record> {
    arc.ensemble(n)?;
    let a = arc.alpha();
    let t = theta_from_determinant(n, a)?;
    Ok(arc.tag(Record::new("theta").input("n", n)).output("theta", t, Route::Toeplitz).output(
        "theta_asymptotic",
        (0.5 * a).cos(),
        Route::RhModel,
    ))
}

pub fn painleve(n: usize, arc: Arc, fd_step: f64) -> Result<Record> {
    arc.ensemble(n)?;
    let a = arc.alpha();
    let v = eta_from_determinant(n, a, fd_step)?;
    let (d, d_err) = delta_from_eta(n, &v);
    let e = eta_expansion(n, a);
    Ok(arc
        .tag(Record::new("painleve").input("n", n))
        .input("fd_step", fd_step)
        .output("eta_re", v.eta.re, Route::Painleve)
        .output("eta_im", v.eta.im, Route::Painleve)
        .output("sigma_residual", sigma_pvi_normalized(n, &v), Route::Painleve)
        .output("delta", d, Route::Painleve)
        .output("delta_error", d_err, Route::Painleve)
        .output("eta_expansion_re", e.re, Route::RhModel)
        .output("eta_expansion_im", e.im, Route::RhModel))
}

pub fn widom_fit(ns: &[usize], alpha: f64) -> Result<Record> {
    let pairs: Vec<(usize, f64)> = ns.iter().map(|&n| (n, alpha)).collect();
    let f = extract_c0_widom(&pairs)?;
    let reference = widom_dyson_c0(default_precision());
    Ok(Record::new("widom-fit")
        .input("n", ns.to_vec())
        .input("alpha", alpha)
        .output("c0", f.estimate, Route::Toeplitz)
        .output("spread", f.spread(), Route::Toeplitz)
        .output("c0_reference", reference, Route::Constants))
}

pub fn dyson_fit(s: &[f64], quad_order: Option<usize>) -> Result<Record> {
    let top = s.iter().copied().fold(0.0, f64::max);
    let cfg = match quad_order {
        Some(m) => NystromConfig::new(m)?,
        None => NystromConfig::default_for(top),
    };
    let f = extract_c0_dyson(s, &cfg)?;
    Ok(Record::new("dyson-fit")
        .input("s", s.to_vec())
        .input("quad_order", cfg.m)
        .output("c0", f.estimate, Route::Fredholm)
        .output("spread", f.spread(), Route::Fredholm)
        .output("c0_reference", widom_dyson_c0(default_precision()), Route::Constants))
}

pub fn dinteg(n: usize, arc: Arc, alpha0: f64, grid: usize) -> Result<Record> {
    arc.ensemble(n)?;
    let d = dinteg_sides(n, arc.alpha(), alpha0, grid)?;
    Ok(arc
        .tag(Record::new("dinteg").input("n", n))
        .input("alpha0", alpha0)
        .input("quad_order", grid)
        .output("lhs", d.lhs, Route::Toeplitz)
        .output("rhs", d.rhs, Route::Toeplitz)
        .output("residual", d.residual, Route::Toeplitz))
}
