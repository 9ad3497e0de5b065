//! `zeta'(-1)` from the Euler-Maclaurin expansion of `sum k ln k`, and the
//! gap-probability constant `c0 = ln(2)/12 + 3 zeta'(-1)` built from it.
//!
//! For `S_N = sum_{k=1}^N k ln k`,
//!
//! ```text
//! S_N = (N^2/2 + N/2 + 1/12) ln N - N^2/4 + 1/12 - zeta'(-1) + r(N),
//! r(N) = sum_{j>=2} B_{2j} / (2j)! * (-(2j-3)!) / N^(2j-2)
//!      = 1/(720 N^2) - 1/(5040 N^4) + ...
//! ```
//!
//! so `zeta'(-1)` follows from one finite sum and a few Bernoulli terms.

use rug::Rational;

use crate::error::{GapError, Result};
use crate::numerics::{Backend, MpReal, PrecisionConfig, Real};

pub const DEFAULT_TERMS: usize = 10_000;
/// Bernoulli corrections through `B_6`.
pub const DEFAULT_DEPTH: usize = 3;
pub const DEFAULT_DIGITS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaPrimeResult {
    pub value: f64,
    pub terms_used: usize,
    /// First omitted Euler-Maclaurin term plus a rounding bound for the sum.
    pub tail_bound: f64,
}

/// `B_2, B_4, ..., B_20`.
const BERNOULLI_EVEN: [(i64, i64); 10] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
];

fn factorial(n: u32) -> rug::Integer {
    rug::Integer::from(rug::Integer::factorial(n))
}

/// Coefficient of `N^-(2j-2)` in `r(N)`, for `j >= 2`.
fn correction_coefficient(j: usize) -> Rational {
    let (p, q) = BERNOULLI_EVEN[j - 1];
    let b = Rational::from((p, q));
    let num = -factorial(2 * j as u32 - 3);
    b * Rational::from(num) / Rational::from(factorial(2 * j as u32))
}

fn sum_k_ln_k<R: Real>(n: usize, ctx: R::Ctx) -> R {
    let mut acc = R::zero(ctx);
    for k in 2..=n {
        let kr = R::from_i64(ctx, k as i64);
        acc += kr.ln() * &kr;
    }
    acc
}

/// `(N^2/2 + N/2 + 1/12) ln N - N^2/4 + 1/12`.
fn smooth_part<R: Real>(n: usize, ctx: R::Ctx) -> R {
    let nn = R::from_i64(ctx, n as i64);
    let n2 = nn.clone() * &nn;
    let coeff = n2.clone() * R::ratio(ctx, 1, 2) + nn.clone() * R::ratio(ctx, 1, 2) + R::ratio(ctx, 1, 12);
    coeff * nn.ln() - n2 * R::ratio(ctx, 1, 4) + R::ratio(ctx, 1, 12)
}

fn zeta_in<R: Real>(n: usize, depth: usize, ctx: R::Ctx) -> (R, f64) {
    let s = sum_k_ln_k::<R>(n, ctx);
    let mut z = smooth_part::<R>(n, ctx) - s.clone();
    let nn = R::from_i64(ctx, n as i64);
    for j in 2..=depth {
        let c = R::from_rational(ctx, &correction_coefficient(j));
        z += c / nn.powi(2 * j as i32 - 2);
    }
    let omitted = correction_coefficient(depth + 1).to_f64().abs() / (n as f64).powi(2 * depth as i32);
    let rounding = 4.0 * n as f64 * R::epsilon(ctx) * s.to_f64().abs();
    (z, omitted + rounding)
}

/// `zeta'(-1)` from `n_terms` terms of `sum k ln k` with Bernoulli corrections
/// through `B_{2 depth}` (`2 <= depth <= 9`).
pub fn zeta_prime_minus1_with_depth(
    n_terms: usize,
    depth: usize,
    prec: PrecisionConfig,
) -> Result<ZetaPrimeResult> {
    if n_terms < 10 {
        return Err(GapError::domain(format!("n_terms must be >= 10, got {n_terms}")));
    }
    if !(2..BERNOULLI_EVEN.len()).contains(&depth) {
        return Err(GapError::domain(format!("Euler-Maclaurin depth {depth} out of range")));
    }
    let (value, tail_bound) = match prec.backend() {
        Backend::Native => zeta_in::<f64>(n_terms, depth, ()),
        Backend::Extended { bits } => {
            let (v, t) = zeta_in::<MpReal>(n_terms, depth, bits);
            (v.to_f64(), t)
        }
    };
    Ok(ZetaPrimeResult { value, terms_used: n_terms, tail_bound })
}

pub fn zeta_prime_minus1(n_terms: usize, prec: PrecisionConfig) -> Result<ZetaPrimeResult> {
    zeta_prime_minus1_with_depth(n_terms, DEFAULT_DEPTH, prec)
}

/// Precision used when the caller has no preference.
pub fn default_precision() -> PrecisionConfig {
    PrecisionConfig::new(DEFAULT_DIGITS).expect("valid digit count")
}

pub fn zeta_prime_minus1_default() -> ZetaPrimeResult {
    zeta_prime_minus1(DEFAULT_TERMS, default_precision()).expect("default configuration is valid")
}

/// `c0 = ln(2)/12 + 3 zeta'(-1)`.
///
/// A native configuration is promoted to the default digit count: the `f64`
/// sum of `10^4` terms near `5e8` keeps only about seven digits.
pub fn widom_dyson_c0(prec: PrecisionConfig) -> f64 {
    let prec = if prec.is_native() { default_precision() } else { prec };
    let z = zeta_prime_minus1(DEFAULT_TERMS, prec).expect("default configuration is valid").value;
    std::f64::consts::LN_2 / 12.0 + 3.0 * z
}

/// `r(N) = S_N - [(N^2/2 + N/2 + 1/12) ln N - N^2/4 + 1/12 - zeta'(-1)]`.
pub fn k_ln_k_residual(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(GapError::domain(format!("N must be >= 2, got {n}")));
    }
    let prec = default_precision();
    let bits = prec.bits();
    let z = MpReal::new(bits, zeta_prime_minus1_default().value);
    let s = sum_k_ln_k::<MpReal>(n, bits);
    Ok((s - smooth_part::<MpReal>(n, bits) + z).to_f64())
}
