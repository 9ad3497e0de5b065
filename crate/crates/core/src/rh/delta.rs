//! `Delta(n, alpha) = -(sin^2 alpha / n^2) d^2/d alpha^2 ln D_n(alpha)` and
//! `Theta(n, alpha) = (D_{n+1}/D_n) / cos^{2n}(alpha/2)` from the determinant,
//! next to their large-`rho` forms.

use std::f64::consts::PI;

use crate::error::{GapError, Result};
use crate::toeplitz::{log_det_derivative, log_ratio_next, ArcEnsemble};

/// Richardson depth used for the angle derivatives of `ln D_n`.
pub const DEFAULT_LEVELS: usize = 2;

/// `sin^2(alpha/2) - cos^2(alpha/2) / (4 n^2)`.
pub fn delta_asymptotic(n: usize, alpha: f64) -> Result<f64> {
    ArcEnsemble::new(n, alpha)?;
    let (s, c) = (0.5 * alpha).sin_cos();
    let nf = n as f64;
    Ok(s * s - c * c / (4.0 * nf * nf))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    pub value: f64,
    /// Finite-difference error indicator carried through the prefactor.
    pub error: f64,
}

/// `Delta` from a central second difference of `ln D_n`.
pub fn delta_from_determinant(n: usize, alpha: f64, h: Option<f64>) -> Result<DeltaEstimate> {
    ArcEnsemble::new(n, alpha)?;
    if alpha >= PI {
        return Err(GapError::domain("the stencil needs alpha < pi"));
    }
    let d2 = log_det_derivative(n, alpha, 2, h, DEFAULT_LEVELS)?;
    let nf = n as f64;
    let pre = alpha.sin().powi(2) / (nf * nf);
    Ok(DeltaEstimate { value: -pre * d2.value, error: pre * d2.error.unwrap_or(0.0) })
}

/// `Theta(n, alpha)`, with the ratio taken at the precision suggested for
/// dimension `n + 1`.
pub fn theta_from_determinant(n: usize, alpha: f64) -> Result<f64> {
    let ens = ArcEnsemble::new(n, alpha)?;
    let prec = ens.with_n(n + 1).suggested_precision();
    let lr = log_ratio_next(&ens, prec)?;
    Ok((lr - 2.0 * n as f64 * (0.5 * alpha).cos().ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_values() {
        assert_eq!(delta_asymptotic(7, PI).unwrap(), 1.0);
        assert!((delta_asymptotic(5, PI / 2.0).unwrap() - 0.495).abs() < 1e-15);
        assert!(delta_asymptotic(0, 1.0).is_err());
    }

    #[test]
    fn determinant_delta_tracks_asymptotics() {
        let d = delta_from_determinant(20, 1.5, Some(1e-3)).unwrap();
        let a = delta_asymptotic(20, 1.5).unwrap();
        assert!((d.value - a).abs() < 1e-3, "{} {}", d.value, a);
    }
}
