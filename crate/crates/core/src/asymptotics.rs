//! Large-gap expansions of `ln D_n(alpha)` and `ln P_s`, extraction of their
//! common constant from data, the first-derivative law and the integrated
//! identity relating `ln D_n` to `Delta`.

use std::f64::consts::PI;

use crate::error::{GapError, Result};
use crate::fredholm::{log_det_gap, GapSpec, NystromConfig};
use crate::numerics::{default_step, gauss_legendre_in, MpReal, Real};
use crate::rh::delta::DEFAULT_LEVELS;
use crate::toeplitz::{
    fd_epsilon, fd_precision, log_det_auto, log_det_derivative, log_det_derivative_in, log_det_in,
    stencil_reach, ArcAngle, ArcEnsemble,
};

/// Labelled terms of a truncated expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub terms: Vec<(&'static str, f64)>,
    pub remainder_order: &'static str,
}

impl Expansion {
    pub fn eval(&self) -> f64 {
        self.terms.iter().map(|(_, v)| v).sum()
    }
}

/// `n^2 ln cos(alpha/2) - (1/4) ln(n sin(alpha/2)) + c0`.
pub fn widom_expansion(n: usize, alpha: f64, c0: f64) -> Result<Expansion> {
    let ens = ArcEnsemble::new(n, alpha)?;
    if alpha >= PI {
        return Err(GapError::domain("the expansion needs alpha < pi"));
    }
    let nf = n as f64;
    Ok(Expansion {
        terms: vec![
            ("n^2 ln cos(alpha/2)", nf * nf * (0.5 * alpha).cos().ln()),
            ("-(1/4) ln(n sin(alpha/2))", -0.25 * ens.rho().ln()),
            ("c0", c0),
        ],
        remainder_order: "1/(n sin(alpha/2))",
    })
}

/// `-s^2/2 - (1/4) ln s + c0`. Meaningless as `s -> 0`, but still defined.
pub fn dyson_expansion(s: f64, c0: f64) -> Result<Expansion> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(GapError::domain(format!("s must be positive, got {s}")));
    }
    Ok(Expansion {
        terms: vec![("-s^2/2", -0.5 * s * s), ("-(1/4) ln s", -0.25 * s.ln()), ("c0", c0)],
        remainder_order: "1/s",
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantFit {
    pub estimate: f64,
    /// `(scale, residual)` in increasing scale.
    pub samples: Vec<(f64, f64)>,
    /// Richardson extrapolants of consecutive samples.
    pub extrapolants: Vec<f64>,
    pub extrapolation_order: u32,
}

impl ConstantFit {
    /// Distance between the last two extrapolants, or `None` with fewer than
    /// three samples.
    pub fn spread(&self) -> Option<f64> {
        match self.extrapolants.as_slice() {
            [.., a, b] => Some((a - b).abs()),
            _ => None,
        }
    }
}

/// One-step Richardson in `1/scale` over samples sorted by scale.
fn richardson_fit(mut samples: Vec<(f64, f64)>) -> Result<ConstantFit> {
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    if samples.len() < 2 {
        return Err(GapError::InsufficientSpread { ratio: 1.0 });
    }
    let ratio = samples[samples.len() - 1].0 / samples[0].0;
    if !(ratio >= 2.0) {
        return Err(GapError::InsufficientSpread { ratio });
    }
    let extrapolants: Vec<f64> = samples
        .windows(2)
        .map(|w| {
            let ((x1, r1), (x2, r2)) = (w[0], w[1]);
            (x2 * r2 - x1 * r1) / (x2 - x1)
        })
        .collect();
    Ok(ConstantFit {
        estimate: *extrapolants.last().expect("at least one window"),
        samples,
        extrapolants,
        extrapolation_order: 1,
    })
}

/// `ln D_n - n^2 ln cos(alpha/2) + (1/4) ln(n sin(alpha/2))`, with the
/// determinant at the precision its conditioning asks for.
pub fn widom_residual(n: usize, alpha: f64) -> Result<(f64, f64)> {
    let ens = ArcEnsemble::new(n, alpha)?;
    let r = log_det_auto(&ens)?;
    if !r.precision_ok {
        return Err(GapError::PrecisionFault(format!("D_{n}({alpha}) is not resolved")));
    }
    let rho = ens.rho();
    let nf = n as f64;
    Ok((rho, r.log_det - nf * nf * (0.5 * alpha).cos().ln() + 0.25 * rho.ln()))
}

/// The constant term of the Toeplitz expansion from `(n, alpha)` pairs.
pub fn extract_c0_widom(pairs: &[(usize, f64)]) -> Result<ConstantFit> {
    let samples = pairs.iter().map(|&(n, a)| widom_residual(n, a)).collect::<Result<Vec<_>>>()?;
    richardson_fit(samples)
}

/// `ln P_s + s^2/2 + (1/4) ln s` on an `m`-node discretization.
pub fn dyson_residual(s: f64, m: &NystromConfig) -> Result<f64> {
    let lp = log_det_gap(&GapSpec::new(s, 1.0)?, m)?;
    Ok(lp + 0.5 * s * s + 0.25 * s.ln())
}

/// The constant term of the sine-kernel expansion from a list of `s`.
pub fn extract_c0_dyson(s_values: &[f64], m: &NystromConfig) -> Result<ConstantFit> {
    let samples = s_values.iter().map(|&s| Ok((s, dyson_residual(s, m)?))).collect::<Result<Vec<_>>>()?;
    richardson_fit(samples)
}

/// `|d/d alpha ln D_n + (n^2/2) tan(alpha/2) + (1/8) cot(alpha/2)|`.
pub fn first_derivative_law_residual(n: usize, alpha: f64) -> Result<f64> {
    let d = log_det_derivative(n, alpha, 1, None, DEFAULT_LEVELS)?;
    let nf = n as f64;
    let tan = (0.5 * alpha).tan();
    Ok((d.value + 0.5 * nf * nf * tan + 0.125 / tan).abs())
}

/// Both sides of the integrated identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DintegSides {
    /// `(alpha0 - alpha) L'(alpha0) - L(alpha0) + L(alpha)`.
    pub lhs: f64,
    /// `-n^2 int_alpha^alpha0 int_theta^alpha0 Delta(phi)/sin^2(phi) dphi dtheta`.
    pub rhs: f64,
    /// `|lhs - rhs|`, formed before rounding either side to `f64`.
    pub residual: f64,
}

/// The identity is exact, so the difference is quadrature and
/// finite-difference error only; everything runs in MPFR at the
/// finite-difference precision so the quadrature error is not masked by
/// double rounding.
pub fn dinteg_sides(n: usize, alpha: f64, alpha0: f64, grid: usize) -> Result<DintegSides> {
    ArcEnsemble::new(n, alpha)?;
    if !(alpha <= alpha0 && alpha0 < PI) {
        return Err(GapError::domain(format!("need alpha <= alpha0 < pi, got {alpha}, {alpha0}")));
    }
    if grid < 16 {
        return Err(GapError::domain(format!("grid must be >= 16, got {grid}")));
    }
    let probe = stencil_reach(2, 1e-3, DEFAULT_LEVELS);
    let prec = fd_precision(n, (alpha0 + probe).min(PI));
    let bits = prec.bits();
    let eps = fd_epsilon();
    let step = |order: u32, x: f64| -> Result<MpReal> {
        let h = default_step(order, x, eps);
        if !(x - stencil_reach(order, h, DEFAULT_LEVELS) > 0.0
            && x + stencil_reach(order, h, DEFAULT_LEVELS) < PI)
        {
            return Err(GapError::domain(format!("stencil leaves (0, pi) at {x}")));
        }
        Ok(MpReal::new(bits, h))
    };
    let mp = |x: f64| MpReal::new(bits, x);
    let a = mp(alpha);
    let a0 = mp(alpha0);
    let l = |x: &MpReal| log_det_in(n, &ArcAngle::Alpha(x.clone()));

    let d1 = log_det_derivative_in(n, &a0, 1, &step(1, alpha0)?, DEFAULT_LEVELS)?.value;
    let lhs = (a0.clone() - &a) * &d1 - l(&a0)? + l(&a)?;

    let n2 = MpReal::from_i64(bits, (n * n) as i64);
    let integrand = |phi: &MpReal| -> Result<MpReal> {
        let h = step(2, phi.to_f64())?;
        let d2 = log_det_derivative_in(n, phi, 2, &h, DEFAULT_LEVELS)?.value;
        let s2 = phi.sin().powi(2);
        let delta = -(s2.clone() * &d2) / &n2;
        Ok(delta / &s2)
    };
    let rule = gauss_legendre_in::<MpReal>(grid, bits)?;
    let (thetas, wt) = rule.on_interval(&a, &a0);
    let mut outer = MpReal::zero(bits);
    for (theta, w) in thetas.iter().zip(wt) {
        let (phis, wp) = rule.on_interval(theta, &a0);
        let mut inner = MpReal::zero(bits);
        for (phi, v) in phis.iter().zip(wp) {
            inner += v * integrand(phi)?;
        }
        outer += w * inner;
    }
    let rhs = -(n2 * outer);
    let residual = (lhs.clone() - &rhs).abs().to_f64();
    Ok(DintegSides { lhs: lhs.to_f64(), rhs: rhs.to_f64(), residual })
}

/// `|LHS - RHS|` of the integrated identity on a `grid`-point nested rule.
pub fn dinteg_residual(n: usize, alpha: f64, alpha0: f64, grid: usize) -> Result<f64> {
    Ok(dinteg_sides(n, alpha, alpha0, grid)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansions_are_sums_of_terms() {
        let e = widom_expansion(50, 0.8, -0.4).unwrap();
        assert_eq!(e.eval(), e.terms.iter().map(|t| t.1).sum::<f64>());
        assert_eq!(e.eval(), e.eval());
        let d = dyson_expansion(4.0, 0.0).unwrap();
        assert_eq!(d.eval(), -8.0 - 0.25 * 4f64.ln());
        assert!(dyson_expansion(0.0, 0.0).is_err());
    }

    #[test]
    fn widom_first_term_vanishes_as_alpha_shrinks() {
        let e = widom_expansion(1, 1e-8, 0.0).unwrap();
        assert!(e.terms[0].1.abs() < 1e-16);
    }

    #[test]
    fn fit_needs_spread() {
        assert!(matches!(richardson_fit(vec![(1.0, 0.0)]), Err(GapError::InsufficientSpread { .. })));
        assert!(matches!(
            richardson_fit(vec![(1.0, 0.0), (1.5, 0.0)]),
            Err(GapError::InsufficientSpread { .. })
        ));
    }

    #[test]
    fn richardson_is_exact_on_first_order_data() {
        let f = richardson_fit(vec![(4.0, 1.0 + 3.0 / 4.0), (1.0, 4.0), (2.0, 2.5)]).unwrap();
        assert!((f.estimate - 1.0).abs() < 1e-14);
        assert_eq!(f.samples[0].0, 1.0);
        assert!(f.spread().unwrap() < 1e-14);
    }

    #[test]
    fn dinteg_degenerate_interval() {
        let s = dinteg_sides(4, 2.0, 2.0, 16).unwrap();
        assert!(s.lhs.abs() < 1e-30 && s.rhs.abs() < 1e-30);
    }
}
