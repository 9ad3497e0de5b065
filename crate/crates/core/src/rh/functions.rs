//! Scalar and matrix functions of the Riemann-Hilbert problem in the
//! `lambda` plane: the map from `z`, the g-function, `f`, `beta`, the model
//! solution `N` and the corrections `R_1`, `R_2`.
//!
//! Branches: `sqrt(lambda^2 - 1) = sqrt(lambda - 1) sqrt(lambda + 1)` with
//! principal roots, which behaves like `lambda` at infinity and is cut on
//! `[-1, 1]`; `beta = (lambda - 1)^{1/4} / (lambda + 1)^{1/4}` likewise. The
//! `+` side of the cut is the upper half plane.

use num_complex::Complex64;

use crate::error::{GapError, Result};
use crate::numerics::Mat2C;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundarySide {
    Plus,
    Minus,
    #[default]
    OffCut,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) {
        return Err(GapError::domain(format!("alpha must lie in (0, pi), got {alpha}")));
    }
    Ok(())
}

fn near_zero(z: Complex64) -> bool {
    z.norm() <= 8.0 * f64::EPSILON
}

/// `lambda = -i cot(alpha/2) (z - 1)/(z + 1)`.
pub fn map_z_lambda(z: Complex64, alpha: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    if near_zero(z + ONE) {
        return Err(GapError::PoleInput);
    }
    let cot = 1.0 / (0.5 * alpha).tan();
    Ok(-I * cot * (z - ONE) / (z + ONE))
}

/// Inverse of [`map_z_lambda`]: `z = (1 + i lambda tan(alpha/2)) / (1 - i lambda tan(alpha/2))`.
pub fn map_lambda_z(lambda: Complex64, alpha: f64) -> Result<Complex64> {
    check_alpha(alpha)?;
    let it = I * lambda * (0.5 * alpha).tan();
    if near_zero(ONE - it) {
        return Err(GapError::PoleInput);
    }
    Ok((ONE + it) / (ONE - it))
}

fn on_cut(lambda: Complex64) -> bool {
    lambda.im == 0.0 && lambda.re.abs() <= 1.0
}

/// `(lambda^2 - 1)^{1/2}`, with the boundary value from `side` on the cut.
pub fn sqrt_lambda2_minus_1(lambda: Complex64, side: BoundarySide) -> Result<Complex64> {
    if on_cut(lambda) {
        let r = (1.0 - lambda.re * lambda.re).max(0.0).sqrt();
        return match side {
            BoundarySide::Plus => Ok(I * r),
            BoundarySide::Minus => Ok(-I * r),
            BoundarySide::OffCut if r == 0.0 => Ok(Complex64::new(0.0, 0.0)),
            BoundarySide::OffCut => Err(GapError::BranchAmbiguity),
        };
    }
    Ok((lambda - ONE).sqrt() * (lambda + ONE).sqrt())
}

/// `g(lambda) = (1 + i sqrt(lambda^2 - 1) sin(alpha/2)) / (1 + i lambda tan(alpha/2))`.
pub fn g_eval(lambda: Complex64, alpha: f64, side: BoundarySide) -> Result<Complex64> {
    check_alpha(alpha)?;
    let w = sqrt_lambda2_minus_1(lambda, side)?;
    let (s, c) = (0.5 * alpha).sin_cos();
    let d1 = ONE + I * lambda * (s / c);
    // multiplying through by (1 - i s w) gives cos(a/2)(cos(a/2) - i s lambda)/(1 - i s w),
    // regular at lambda = +i cot(a/2) where the first form is 0/0
    let d2 = ONE - I * s * w;
    if d1.norm() >= d2.norm() {
        Ok((ONE + I * s * w) / d1)
    } else {
        Ok(c * (c - I * s * lambda) / d2)
    }
}

/// `f(lambda) = (1 + i sqrt(lambda^2 - 1) sin(alpha/2)) / (1 - i sqrt(lambda^2 - 1) sin(alpha/2))`.
pub fn f_eval(lambda: Complex64, alpha: f64, side: BoundarySide) -> Result<Complex64> {
    if !(alpha > 0.0 && alpha <= std::f64::consts::PI) {
        return Err(GapError::domain(format!("alpha must lie in (0, pi], got {alpha}")));
    }
    let w = sqrt_lambda2_minus_1(lambda, side)?;
    let s = (0.5 * alpha).sin();
    let den = ONE - I * s * w;
    if near_zero(den) {
        return Err(GapError::PoleInput);
    }
    Ok((ONE + I * s * w) / den)
}

/// `omega = (1/2) ln f = i atan(sin(alpha/2) sqrt(lambda^2 - 1))`.
pub fn omega(lambda: Complex64, alpha: f64, side: BoundarySide) -> Result<Complex64> {
    let w = sqrt_lambda2_minus_1(lambda, side)?;
    Ok(I * ((0.5 * alpha).sin() * w).atan())
}

/// Leading terms of `omega^2` at `u = lambda - 1`:
/// `-2u sin^2(alpha/2) (1 + u/2 - (4/3) u sin^2(alpha/2))`.
pub fn omega_squared_series(u: Complex64, alpha: f64) -> Complex64 {
    let s2 = (0.5 * alpha).sin().powi(2);
    -2.0 * u * s2 * (ONE + u / 2.0 - 4.0 / 3.0 * u * s2)
}

/// `beta(lambda) = ((lambda - 1)/(lambda + 1))^{1/4}`, `beta(inf) = 1`.
pub fn beta_fn(lambda: Complex64, side: BoundarySide) -> Result<Complex64> {
    if on_cut(lambda) {
        let x = lambda.re;
        if x == -1.0 {
            return Err(GapError::PoleInput);
        }
        let m = ((1.0 - x) / (1.0 + x)).powf(0.25);
        let phase = std::f64::consts::FRAC_PI_4;
        return match side {
            BoundarySide::Plus => Ok(Complex64::from_polar(m, phase)),
            BoundarySide::Minus => Ok(Complex64::from_polar(m, -phase)),
            BoundarySide::OffCut if x == 1.0 => Ok(Complex64::new(0.0, 0.0)),
            BoundarySide::OffCut => Err(GapError::BranchAmbiguity),
        };
    }
    let num = (lambda - ONE).sqrt().sqrt();
    let den = (lambda + ONE).sqrt().sqrt();
    Ok(num / den)
}

/// Model solution `N` built from `beta`.
pub fn model_solution(lambda: Complex64, side: BoundarySide) -> Result<Mat2C> {
    let b = beta_fn(lambda, side)?;
    if near_zero(b) {
        return Err(GapError::PoleInput);
    }
    Ok(model_from_beta(b))
}

pub(crate) fn model_from_beta(b: Complex64) -> Mat2C {
    let bi = ONE / b;
    let p = (b + bi) / 2.0;
    let q = (b - bi) / (2.0 * I);
    Mat2C::new(p, q, -q, p)
}

/// Correction `R_1` (`j = 1`) or `R_2` (`j = 2`) outside the endpoint disks.
pub fn correction(j: u8, lambda: Complex64, n: usize, alpha: f64) -> Result<Mat2C> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(GapError::domain("n must be >= 1"));
    }
    if near_zero(lambda - ONE) || near_zero(lambda + ONE) {
        return Err(GapError::PoleInput);
    }
    let rho = n as f64 * (0.5 * alpha).sin();
    let a = ONE / (ONE - lambda);
    let b = ONE / (ONE + lambda);
    match j {
        1 => {
            let m1 = Mat2C::new(-ONE, I, I, ONE);
            let m2 = Mat2C::new(ONE, I, I, -ONE);
            Ok((m1.scale(a) + m2.scale(b)).scale(ONE / (16.0 * I * rho)))
        }
        2 => {
            let e = 8.0 * I;
            let m1 = Mat2C::new(ONE, e, -e, ONE);
            let m2 = Mat2C::new(ONE, -e, e, ONE);
            Ok((m1.scale(a) + m2.scale(b)).scale(Complex64::new(1.0 / (256.0 * rho * rho), 0.0)))
        }
        _ => Err(GapError::domain(format!("correction index must be 1 or 2, got {j}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn map_fixed_points() {
        let a = 1.1;
        assert!(map_z_lambda(ONE, a).unwrap().norm() < 1e-15);
        let l1 = map_z_lambda(Complex64::from_polar(1.0, a), a).unwrap();
        assert!((l1 - ONE).norm() < 1e-14);
        let lm = map_z_lambda(Complex64::from_polar(1.0, -a), a).unwrap();
        assert!((lm + ONE).norm() < 1e-14);
        let l0 = map_z_lambda(Complex64::new(0.0, 0.0), a).unwrap();
        assert!((l0 - I / (a / 2.0).tan()).norm() < 1e-14);
        assert_eq!(map_z_lambda(-ONE, a), Err(GapError::PoleInput));
        assert_eq!(map_lambda_z(-I / (a / 2.0).tan(), a), Err(GapError::PoleInput));
    }

    #[test]
    fn g_special_values() {
        for &a in &[0.3, 1.0, PI / 2.0, 2.9] {
            let cot = 1.0 / (a / 2.0).tan();
            let g1 = g_eval(-I * cot, a, BoundarySide::OffCut).unwrap();
            assert!((g1 - ONE).norm() < 1e-13, "{a} {g1}");
            let gk = g_eval(I * cot, a, BoundarySide::OffCut).unwrap();
            assert!((gk - (a / 2.0).cos().powi(2)).norm() < 1e-13, "{a} {gk}");
        }
        let ginf = g_eval(Complex64::new(1e6, 0.0), 1.0, BoundarySide::OffCut).unwrap();
        assert!((ginf - (0.5f64).cos()).norm() < 1e-5);
    }

    #[test]
    fn cut_needs_a_side() {
        let x = Complex64::new(0.3, 0.0);
        assert_eq!(g_eval(x, 1.0, BoundarySide::OffCut), Err(GapError::BranchAmbiguity));
        assert_eq!(model_solution(x, BoundarySide::OffCut), Err(GapError::BranchAmbiguity));
    }

    #[test]
    fn f_at_endpoints_and_center() {
        let fp = f_eval(Complex64::new(0.0, 0.0), PI, BoundarySide::Plus).unwrap();
        assert!(fp.norm() < 1e-15);
        for x in [-1.0, 1.0] {
            let v = f_eval(Complex64::new(x, 0.0), 1.3, BoundarySide::Plus).unwrap();
            assert!((v - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn r1_is_traceless() {
        let r = correction(1, Complex64::new(0.4, 2.0), 10, 1.0).unwrap();
        assert!(r.trace().norm() < 1e-16);
        assert!(correction(3, Complex64::new(0.4, 2.0), 10, 1.0).is_err());
    }
}
