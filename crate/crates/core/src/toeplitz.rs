//! The arc Toeplitz determinant
//!
//! ```text
//! D_n(alpha) = det(M_{j-k}),  M_k = (1/2pi) int_alpha^{2pi-alpha} e^{-ik theta} d theta,
//! ```
//!
//! which is the probability that an `n x n` CUE matrix has no eigenangle in
//! `(-alpha, alpha)`. The determinant is accumulated from Cholesky pivots
//! `d_k = D_{k+1}/D_k`; these stay representable long after `D_n` itself
//! underflows. Near `alpha = pi` the exact Legendre-norm product `A_n` takes
//! over.

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::{Float, Integer, Rational};

use crate::constants::widom_dyson_c0;
use crate::error::{GapError, Result};
use crate::numerics::{
    conditioning_digits_beta, default_step, derivative, gauss_legendre, Backend, Derivative, MpReal,
    PrecisionConfig, Real,
};

/// Dimension `n` and half-gap `alpha` of an arc determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcEnsemble {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Built from `beta`; entries are then evaluated from `beta` directly,
    /// which keeps full relative accuracy as `beta -> 0`.
    beta_exact: bool,
}

impl ArcEnsemble {
    pub fn new(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 {
            return Err(GapError::domain("n must be >= 1"));
        }
        if !(alpha > 0.0 && alpha <= PI) {
            return Err(GapError::domain(format!("alpha must lie in (0, pi], got {alpha}")));
        }
        Ok(ArcEnsemble { n, alpha, beta: PI - alpha, beta_exact: false })
    }

    pub fn from_beta(n: usize, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(GapError::domain("n must be >= 1"));
        }
        if !(0.0..PI).contains(&beta) {
            return Err(GapError::domain(format!("beta must lie in [0, pi), got {beta}")));
        }
        Ok(ArcEnsemble { n, alpha: PI - beta, beta, beta_exact: true })
    }

    pub fn with_n(&self, n: usize) -> Self {
        ArcEnsemble { n, ..*self }
    }

    /// `n sin(alpha/2)`
    pub fn rho(&self) -> f64 {
        self.n as f64 * self.half_sin()
    }

    /// `cos^2(alpha/2)`
    pub fn kappa(&self) -> f64 {
        let c = self.half_cos();
        c * c
    }

    /// `exp(-2i alpha)`
    pub fn t(&self) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * self.alpha)
    }

    fn half_sin(&self) -> f64 {
        if self.beta_exact {
            (0.5 * self.beta).cos()
        } else {
            (0.5 * self.alpha).sin()
        }
    }

    fn half_cos(&self) -> f64 {
        if self.beta_exact {
            (0.5 * self.beta).sin()
        } else {
            (0.5 * self.alpha).cos()
        }
    }

    /// Precision that factors this determinant with ample margin.
    pub fn suggested_precision(&self) -> PrecisionConfig {
        PrecisionConfig::for_arc_beta(self.n, self.beta)
    }

    fn conditioning_digits(&self) -> f64 {
        conditioning_digits_beta(self.n, self.beta)
    }
}

/// `M_k` for the arc symbol: `1 - alpha/pi` at `k = 0`, else
/// `-sin(k alpha)/(pi k)`; even in `k`.
pub fn symbol_entry(k: i64, alpha: f64) -> f64 {
    if k == 0 {
        1.0 - alpha / PI
    } else {
        let k = k.abs() as f64;
        -(k * alpha).sin() / (PI * k)
    }
}

/// Angle of the arc in the scalar type used for the factorization.
#[derive(Debug, Clone)]
pub enum ArcAngle<R> {
    Alpha(R),
    Beta(R),
}

fn symbol_row<R: Real>(n: usize, angle: &ArcAngle<R>) -> Vec<R> {
    let (ctx, x) = match angle {
        ArcAngle::Alpha(a) | ArcAngle::Beta(a) => (a.ctx(), a),
    };
    let pi = R::pi(ctx);
    let mut row = Vec::with_capacity(n);
    match angle {
        ArcAngle::Alpha(a) => {
            row.push(R::one(ctx) - a.clone() / &pi);
            for k in 1..n {
                let kr = R::from_i64(ctx, k as i64);
                row.push(-(kr.clone() * x).sin() / (pi.clone() * kr));
            }
        }
        ArcAngle::Beta(b) => {
            row.push(b.clone() / &pi);
            for k in 1..n {
                let kr = R::from_i64(ctx, k as i64);
                let v = (kr.clone() * x).sin() / (pi.clone() * kr);
                row.push(if k % 2 == 0 { v } else { -v });
            }
        }
    }
    row
}

/// Cholesky pivots `D_{k+1}/D_k`, `k = 0..n`, of the arc Toeplitz matrix.
pub fn pivots_in<R: Real>(n: usize, angle: &ArcAngle<R>) -> Result<Vec<R>> {
    let m = symbol_row(n, angle);
    // rows of the lower factor, row i holding columns 0..=i
    let mut l: Vec<Vec<R>> = Vec::with_capacity(n);
    let mut pivots = Vec::with_capacity(n);
    for i in 0..n {
        let mut row: Vec<R> = Vec::with_capacity(i + 1);
        for j in 0..i {
            let mut v = m[i - j].clone();
            let lj = &l[j];
            for k in 0..j {
                v.sub_mul_assign(&row[k], &lj[k]);
            }
            let v = v / &lj[j];
            row.push(v);
        }
        let mut d = m[0].clone();
        for x in &row {
            d.sub_mul_assign(x, x);
        }
        if !d.is_positive() {
            return Err(GapError::NonPositivePivot { index: i, value: d.to_f64() });
        }
        row.push(d.sqrt());
        pivots.push(d);
        l.push(row);
    }
    Ok(pivots)
}

/// `ln D_n` at the angle given in the working type `R`.
pub fn log_det_in<R: Real>(n: usize, angle: &ArcAngle<R>) -> Result<R> {
    let piv = pivots_in(n, angle)?;
    let ctx = piv[0].ctx();
    let mut acc = R::zero(ctx);
    for p in &piv {
        acc += p.ln();
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogDetResult {
    pub log_det: f64,
    /// `D_{k+1}/D_k`; entries below the `f64` range read as zero, see
    /// `log_pivots`.
    pub pivots: Vec<f64>,
    pub log_pivots: Vec<f64>,
    pub min_pivot: f64,
    pub precision_ok: bool,
    pub precision: PrecisionConfig,
}

fn summarize<R: Real>(ens: &ArcEnsemble, piv: Vec<R>, prec: PrecisionConfig) -> LogDetResult {
    let ctx = piv[0].ctx();
    let mut log_det = R::zero(ctx);
    let mut log_pivots = Vec::with_capacity(piv.len());
    for p in &piv {
        let lp = p.ln();
        log_pivots.push(lp.to_f64());
        log_det += lp;
    }
    let min_log = log_pivots.iter().copied().fold(f64::INFINITY, f64::min);
    let max_entry = ens.beta / PI;
    // compared in logs: both sides leave the f64 range at high precision
    let min_ok = min_log >= (1e3 * max_entry).ln() + prec.ln_epsilon();
    // the pivot floor alone misses the loss from the smallest eigenvalue,
    // which sits far below the smallest pivot

    let cond_ok = ens.conditioning_digits() + 6.0 <= prec.decimal_digits() as f64;
    LogDetResult {
        log_det: log_det.to_f64(),
        pivots: piv.iter().map(Real::to_f64).collect(),
        log_pivots,
        min_pivot: min_log.exp(),
        precision_ok: min_ok && cond_ok,
        precision: prec,
    }
}

fn angle_for<R: Real>(ens: &ArcEnsemble, ctx: R::Ctx) -> ArcAngle<R> {
    if ens.beta_exact {
        ArcAngle::Beta(R::from_f64(ctx, ens.beta))
    } else {
        ArcAngle::Alpha(R::from_f64(ctx, ens.alpha))
    }
}

fn factor(ens: &ArcEnsemble, n: usize, prec: PrecisionConfig) -> Result<LogDetResult> {
    if ens.beta == 0.0 || ens.alpha >= PI {
        return Err(GapError::domain("D_n(pi) = 0; use small_beta_logdet near alpha = pi"));
    }
    let ens = ens.with_n(n);
    match prec.backend() {
        Backend::Native => {
            let piv = pivots_in::<f64>(n, &angle_for(&ens, ()))?;
            Ok(summarize(&ens, piv, prec))
        }
        Backend::Extended { bits } => {
            let piv = pivots_in::<MpReal>(n, &angle_for(&ens, bits))?;
            Ok(summarize(&ens, piv, prec))
        }
    }
}

/// `ln D_n(alpha)` with its pivot trail.
///
/// Runs at the precision given; when that is too low for the conditioning
/// of the matrix the result comes back with `precision_ok = false`.
pub fn log_det(ens: &ArcEnsemble, prec: PrecisionConfig) -> Result<LogDetResult> {
    factor(ens, ens.n, prec)
}

/// `log_det` at [`ArcEnsemble::suggested_precision`].
pub fn log_det_auto(ens: &ArcEnsemble) -> Result<LogDetResult> {
    log_det(ens, ens.suggested_precision())
}

/// `D_{n+1}/D_n`, the last pivot of the `(n+1)`-dimensional factorization.
pub fn ratio_next(ens: &ArcEnsemble, prec: PrecisionConfig) -> Result<f64> {
    Ok(log_ratio_next(ens, prec)?.exp())
}

pub fn log_ratio_next(ens: &ArcEnsemble, prec: PrecisionConfig) -> Result<f64> {
    let r = factor(ens, ens.n + 1, prec)?;
    Ok(*r.log_pivots.last().expect("n + 1 >= 2 pivots"))
}

/// `(2pi)^-n / n! int ... int prod_{j<k} |e^{i theta_j} - e^{i theta_k}|^2`
/// over `[alpha, 2pi - alpha]^n`, by a tensor Gauss-Legendre rule of order
/// `m`.
pub fn multiple_integral_oracle(n: usize, alpha: f64, m: usize) -> Result<f64> {
    if !(1..=3).contains(&n) {
        return Err(GapError::domain(format!("oracle supports n in 1..=3, got {n}")));
    }
    if !(alpha > 0.0 && alpha <= PI) {
        return Err(GapError::domain(format!("alpha must lie in (0, pi], got {alpha}")));
    }
    let rule = gauss_legendre(m, PrecisionConfig::NATIVE)?;
    let (a, b) = (alpha, 2.0 * PI - alpha);
    let mid = 0.5 * (a + b);
    let rad = 0.5 * (b - a);
    let pts: Vec<(f64, f64)> =
        rule.nodes.iter().zip(&rule.weights).map(|(x, w)| (mid + rad * x, rad * w)).collect();
    let chord2 = |u: f64, v: f64| {
        let s = (0.5 * (u - v)).sin();
        4.0 * s * s
    };
    let total: f64 = match n {
        1 => pts.iter().map(|p| p.1).sum(),
        2 => pts.iter().map(|&(x, wx)| wx * pts.iter().map(|&(y, wy)| wy * chord2(x, y)).sum::<f64>()).sum(),
        _ => pts
            .iter()
            .map(|&(x, wx)| {
                wx * pts
                    .iter()
                    .map(|&(y, wy)| {
                        let cxy = chord2(x, y);
                        wy * pts.iter().map(|&(z, wz)| wz * cxy * chord2(x, z) * chord2(y, z)).sum::<f64>()
                    })
                    .sum::<f64>()
            })
            .sum(),
    };
    let fact = [1.0, 1.0, 2.0, 6.0][n];
    Ok(total / ((2.0 * PI).powi(n as i32) * fact))
}

/// Exact rational in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalValue(Rational);

impl RationalValue {
    pub fn numerator(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denominator(&self) -> &Integer {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Natural log, taken separately on mantissa and binary exponent of
    /// numerator and denominator so that huge factorial powers never
    /// overflow.
    pub fn ln(&self) -> f64 {
        fn ln_int(z: &Integer) -> f64 {
            let (m, e) = z.to_f64_exp();
            m.ln() + e as f64 * std::f64::consts::LN_2
        }
        ln_int(self.numerator()) - ln_int(self.denominator())
    }

    /// Natural log at `bits` of precision.
    pub fn ln_mp(&self, bits: u32) -> MpReal {
        MpReal::from_float(Float::with_val(bits, self.numerator()).ln())
            - MpReal::from_float(Float::with_val(bits, self.denominator()).ln())
    }
}

impl std::fmt::Display for RationalValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Squared norm of the monic Legendre polynomial of degree `k` on `(-1, 1)`:
/// `2^{2k} (k!)^4 / ((2k)!)^2 * 2/(2k+1)`.
pub fn legendre_norm(k: u32) -> RationalValue {
    use rug::ops::Pow;
    let kf = Integer::from(Integer::factorial(k));
    let k2f = Integer::from(Integer::factorial(2 * k));
    let num: Integer = (Integer::from(1) << (2 * k)) * kf.clone().pow(4) * 2u32;
    let den: Integer = k2f.clone() * &k2f * (2 * k + 1);
    RationalValue(Rational::from((num, den)))
}

/// `A_n = h_0 h_1 ... h_{n-1}`.
pub fn a_n(n: u32) -> RationalValue {
    let mut acc = Rational::from(1);
    for k in 0..n {
        acc *= legendre_norm(k).0;
    }
    RationalValue(acc)
}

/// `n^2 ln(beta) - n ln(2pi) + ln(A_n)`, the small-`beta` form of
/// `ln D_n(pi - beta)` without its `O(beta^2)` correction.
pub fn small_beta_logdet(n: u32, beta: f64) -> Result<f64> {
    if n == 0 {
        return Err(GapError::domain("n must be >= 1"));
    }
    if !(beta > 0.0 && beta < PI) {
        return Err(GapError::domain(format!("beta must lie in (0, pi), got {beta}")));
    }
    let nf = n as f64;
    Ok(nf * nf * beta.ln() - nf * (2.0 * PI).ln() + a_n(n).ln())
}

/// `ln A_n - [c0 - ln(n)/4 + n ln(2pi) - n^2 ln 2]`.
pub fn a_n_asymptotic_residual(n: u32, prec: PrecisionConfig) -> Result<f64> {
    if n == 0 {
        return Err(GapError::domain("n must be >= 1"));
    }
    let c0 = widom_dyson_c0(prec);
    let bits = prec.bits().max(128);
    let ln_a = a_n(n).ln_mp(bits);
    let nn = MpReal::from_i64(bits, n as i64);
    let two_pi = MpReal::pi(bits) * MpReal::from_i64(bits, 2);
    let ln2 = MpReal::from_i64(bits, 2).ln();
    let model = MpReal::new(bits, c0) - nn.ln() * MpReal::ratio(bits, 1, 4) + nn.clone() * two_pi.ln()
        - nn.clone() * &nn * &ln2;
    Ok((ln_a - model).to_f64())
}

/// Extra digits carried by the finite-difference routines on top of the
/// conditioning loss, so that differences of `ln D_n` at nearby angles keep
/// far more accuracy than any comparison downstream needs.
pub const FD_GUARD_DIGITS: u32 = 60;

/// Accuracy of `ln D_n` at [`fd_precision`]: the guard digits survive the
/// conditioning loss, the working epsilon does not. Default steps are sized
/// from this.
pub fn fd_epsilon() -> f64 {
    10f64.powi(-(FD_GUARD_DIGITS as i32))
}

/// Half-width of the central-difference stencil for `derivative`.
pub fn stencil_reach(order: u32, h: f64, levels: usize) -> f64 {
    let span = if order == 3 { 2.0 } else { 1.0 };
    span * h * 2f64.powi(levels as i32)
}

/// Working precision for derivatives of `ln D_n` on angles up to `alpha_max`.
pub fn fd_precision(n: usize, alpha_max: f64) -> PrecisionConfig {
    let cond = conditioning_digits_beta(n, PI - alpha_max).max(0.0);
    PrecisionConfig::new(cond.ceil() as u32 + FD_GUARD_DIGITS).expect("at least 60 digits")
}

/// `d^order/d alpha^order ln D_n(alpha)` at an angle given in MPFR.
pub fn log_det_derivative_in(
    n: usize,
    alpha: &MpReal,
    order: u32,
    h: &MpReal,
    levels: usize,
) -> Result<Derivative<MpReal>> {
    derivative(|a: &MpReal| log_det_in(n, &ArcAngle::Alpha(a.clone())), alpha, order, h, levels)
}

/// Derivative of `ln D_n` in `alpha` by Richardson-extrapolated central
/// differences, run at [`fd_precision`]. `h = None` takes the default step
/// for the working precision.
pub fn log_det_derivative(
    n: usize,
    alpha: f64,
    order: u32,
    h: Option<f64>,
    levels: usize,
) -> Result<Derivative<f64>> {
    if n == 0 {
        return Err(GapError::domain("n must be >= 1"));
    }
    let probe = h.unwrap_or(1e-3);
    let prec = fd_precision(n, (alpha + stencil_reach(order, probe, levels)).min(PI));
    let h = h.unwrap_or_else(|| default_step(order, alpha, fd_epsilon()));
    let reach = stencil_reach(order, h, levels);
    if !(alpha - reach > 0.0 && alpha + reach < PI) {
        return Err(GapError::domain(format!(
            "stencil alpha +- {reach:.3e} leaves (0, pi) at alpha = {alpha}"
        )));
    }
    let bits = prec.bits();
    let d = log_det_derivative_in(n, &MpReal::new(bits, alpha), order, &MpReal::new(bits, h), levels)?;
    Ok(Derivative { value: d.value.to_f64(), error: d.error })
}
