use crate::error::{GapError, Result};

/// Working precision of a computation, in significant decimal digits.
///
/// Exactly 15 digits selects native `f64`; anything larger selects the MPFR
/// backend with `bits()` of mantissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionConfig {
    decimal_digits: u32,
}

/// Which scalar type a [`PrecisionConfig`] resolves to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Native,
    Extended { bits: u32 },
}

impl PrecisionConfig {
    pub const NATIVE: PrecisionConfig = PrecisionConfig { decimal_digits: 15 };

    pub fn new(decimal_digits: u32) -> Result<Self> {
        if decimal_digits < 15 {
            return Err(GapError::domain(format!("decimal_digits must be >= 15, got {decimal_digits}")));
        }
        Ok(PrecisionConfig { decimal_digits })
    }

    pub fn decimal_digits(&self) -> u32 {
        self.decimal_digits
    }

    /// Mantissa bits of the extended backend (53 for native).
    pub fn bits(&self) -> u32 {
        if self.is_native() {
            53
        } else {
            (self.decimal_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 4
        }
    }

    pub fn is_native(&self) -> bool {
        self.decimal_digits == 15
    }

    pub fn backend(&self) -> Backend {
        if self.is_native() {
            Backend::Native
        } else {
            Backend::Extended { bits: self.bits() }
        }
    }

    /// Unit roundoff bound; always `<= 10^(1 - decimal_digits)`.
    pub fn epsilon(&self) -> f64 {
        match self.backend() {
            Backend::Native => f64::EPSILON / 2.0,
            Backend::Extended { bits } => 2f64.powi(-(bits as i32)),
        }
    }

    /// `ln(epsilon())`, finite even where `epsilon()` underflows.
    pub fn ln_epsilon(&self) -> f64 {
        match self.backend() {
            Backend::Native => (f64::EPSILON / 2.0).ln(),
            Backend::Extended { bits } => -(bits as f64) * std::f64::consts::LN_2,
        }
    }

    /// Enough digits to factor the `n x n` arc Toeplitz matrix at half-gap
    /// `alpha` and keep about 30 significant digits in every pivot.
    ///
    /// The smallest eigenvalue of that matrix behaves like
    /// `((1 - sin(alpha/2)) / cos(alpha/2))^(2n)`, and each Cholesky pivot
    /// loses that many digits to rounding. When the loss is small the
    /// native backend is returned.
    pub fn for_arc(n: usize, alpha: f64) -> Self {
        Self::for_conditioning(conditioning_digits(n, alpha))
    }

    /// As [`for_arc`](Self::for_arc) with the arc given through
    /// `beta = pi - alpha`, which stays accurate as `beta -> 0`.
    pub fn for_arc_beta(n: usize, beta: f64) -> Self {
        Self::for_conditioning(conditioning_digits_beta(n, beta))
    }

    fn for_conditioning(cond: f64) -> Self {
        if cond <= 6.0 {
            Self::NATIVE
        } else {
            PrecisionConfig { decimal_digits: (cond.ceil() as u32 + 32).max(32) }
        }
    }
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        Self::NATIVE
    }
}

/// Decimal digits lost to the smallest eigenvalue of the `n x n` arc
/// Toeplitz matrix.
pub fn conditioning_digits(n: usize, alpha: f64) -> f64 {
    conditioning_digits_beta(n, std::f64::consts::PI - alpha)
}

pub fn conditioning_digits_beta(n: usize, beta: f64) -> f64 {
    // cos(alpha/2) = sin(beta/2), sin(alpha/2) = cos(beta/2)
    let c = (0.5 * beta).sin();
    if c <= 0.0 {
        return f64::INFINITY;
    }
    let s = (0.5 * beta).cos();
    2.0 * n as f64 * ((1.0 + s) / c).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_bound_holds() {
        for d in [15, 16, 20, 50, 120, 300] {
            let p = PrecisionConfig::new(d).unwrap();
            assert!(p.epsilon() <= 10f64.powi(1 - d as i32), "digits {d}");
        }
    }

    #[test]
    fn rejects_low_digits() {
        assert!(PrecisionConfig::new(14).is_err());
    }

    #[test]
    fn arc_precision_grows_with_n_and_alpha() {
        assert!(PrecisionConfig::for_arc(3, 0.8).is_native());
        // scaling limit: alpha = 2/n stays well conditioned
        assert!(PrecisionConfig::for_arc(400, 2.0 / 400.0).is_native());
        let a = PrecisionConfig::for_arc(100, 1.2).decimal_digits();
        let b = PrecisionConfig::for_arc(400, 1.2).decimal_digits();
        assert!(b > a && b > 250, "{a} {b}");
        assert!(PrecisionConfig::for_arc(40, 2.5).decimal_digits() > 60);
    }
}
