//! Hankel parametrix at the right endpoint and its mismatch with the jump
//! expansion `I + Lambda_1 + Lambda_2` on the circle `|lambda - 1| = delta`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::{hankel, HankelKind};
use super::functions::{beta_fn, model_from_beta, omega, BoundarySide};
use crate::error::{GapError, Result};
use crate::numerics::Mat2C;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default radius of the endpoint disk.
pub const DEFAULT_DELTA: f64 = 0.2;

/// `sqrt(zeta) = -i n omega(lambda)` for `zeta = e^{-i pi} n^2 omega^2`.
pub fn sqrt_zeta(lambda: Complex64, n: usize, alpha: f64) -> Result<Complex64> {
    Ok(-I * n as f64 * omega(lambda, alpha, BoundarySide::OffCut)?)
}

/// `Lambda_1 + Lambda_2` at `lambda` on the circle around `+1`.
pub fn jump_expansion(beta: Complex64, sz: Complex64) -> (Mat2C, Mat2C) {
    let b2 = beta * beta;
    let bm2 = ONE / b2;
    let d = 3.0 * b2 - bm2;
    let s = 3.0 * b2 + bm2;
    let l1 = Mat2C::new(d, I * s, I * s, -d).scale(I / (16.0 * sz));
    let l2 = Mat2C::new(ONE, -4.0 * I, 4.0 * I, ONE).scale(3.0 / (128.0 * sz * sz));
    (l1, l2)
}

/// Everything the mismatch computation produces at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametrixPoint {
    pub lambda: Complex64,
    pub sqrt_zeta: Complex64,
    /// `P N^{-1} - (I + Lambda_1 + Lambda_2)`.
    pub residual: Mat2C,
    pub lambda1: Mat2C,
    pub lambda2: Mat2C,
    /// A Hankel evaluation fell in the crossover band with disagreeing methods.
    pub degraded: bool,
}

/// Evaluate the parametrix at `lambda = 1 + delta e^{i theta}` and compare
/// `P N^{-1}` with its two-term expansion.
pub fn parametrix_point(theta: f64, n: usize, alpha: f64, delta: f64) -> Result<ParametrixPoint> {
    if n == 0 {
        return Err(GapError::domain("n must be >= 1"));
    }
    if !(alpha > 0.0 && alpha < PI) {
        return Err(GapError::domain(format!("alpha must lie in (0, pi), got {alpha}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GapError::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    let lambda = ONE + Complex64::from_polar(delta, theta);
    if lambda.im == 0.0 && lambda.re.abs() <= 1.0 {
        return Err(GapError::BranchAmbiguity);
    }
    let sz = sqrt_zeta(lambda, n, alpha)?;
    let arg = sz.arg();
    if arg.abs() > 0.75 * PI {
        return Err(GapError::SectorViolation { arg });
    }
    let beta = beta_fn(lambda, BoundarySide::OffCut)?;
    let nm = model_from_beta(beta);
    let zeta_quarter = sz.sqrt();

    // exp(-n omega) = exp(-i sqrt(zeta)) is absorbed into the scaled Hankel
    // functions, so no large exponentials are formed
    let h1 = hankel(HankelKind::First, sz, true)?;
    let h2 = hankel(HankelKind::Second, sz, true)?;
    let hat = Mat2C::new(h1.h0, h2.h0, sz * h1.h0_prime(), sz * h2.h0_prime());

    let phase = Mat2C::diag(Complex64::from_polar(1.0, PI / 4.0), Complex64::from_polar(1.0, -PI / 4.0));
    let mix = Mat2C::new(ONE, -I, ONE, I).scale(Complex64::new(PI.sqrt() / 2f64.powf(1.5), 0.0));
    let quarter = Mat2C::diag(zeta_quarter, ONE / zeta_quarter);
    let p = nm * phase * mix * quarter * hat;
    let ninv = nm.inv().ok_or(GapError::PoleInput)?;
    let (l1, l2) = jump_expansion(beta, sz);
    let residual = p * ninv - (Mat2C::identity() + l1 + l2);
    Ok(ParametrixPoint {
        lambda,
        sqrt_zeta: sz,
        residual,
        lambda1: l1,
        lambda2: l2,
        degraded: h1.degraded || h2.degraded,
    })
}

/// `P(lambda) N(lambda)^{-1} - (I + Lambda_1 + Lambda_2)` on the circle
/// `|lambda - 1| = delta`.
pub fn parametrix_mismatch(theta: f64, n: usize, alpha: f64, delta: f64) -> Result<Mat2C> {
    Ok(parametrix_point(theta, n, alpha, delta)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mismatch_is_small_and_finite() {
        let r = parametrix_mismatch(PI / 2.0, 40, PI / 2.0, DEFAULT_DELTA).unwrap();
        assert!(r.is_finite());
        assert!(r.norm() < 1e-3, "{}", r.norm());
    }

    #[test]
    fn bad_inputs() {
        assert!(parametrix_mismatch(0.5, 10, 1.0, 1.5).is_err());
        assert!(parametrix_mismatch(0.5, 0, 1.0, 0.2).is_err());
    }
}
