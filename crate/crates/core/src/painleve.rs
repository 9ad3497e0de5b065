//! `eta(t) = t(t - 1) d/dt ln D_n` with `t = e^{-2i alpha}`, the sigma form of
//! Painleve VI it satisfies, and its large-`n` expansion.
//!
//! Only real `alpha` is available, so every `t`-derivative is assembled from
//! `alpha`-derivatives of `ln D_n` by the chain rule `dt/d alpha = -2i t`.
//! The branch `sqrt(t) = e^{-i alpha}` is used throughout.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{GapError, Result};
use crate::rh::delta::DEFAULT_LEVELS;
use crate::toeplitz::log_det_derivative;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Values returned as `f64` carry at least this relative rounding.
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaValue {
    pub t: Complex64,
    pub eta: Complex64,
    pub d_eta_dt: Complex64,
    pub d2_eta_dt2: Complex64,
    /// Finite-difference error bounds for `eta`, `d_eta_dt`, `d2_eta_dt2`.
    pub errors: [f64; 3],
}

/// Coefficients of `eta`, `eta'` and `eta''` on `(L', L'', L''')`, where
/// `L = ln D_n` and primes on `L` are `alpha`-derivatives.
fn chain_coefficients(t: Complex64) -> [[Complex64; 3]; 3] {
    let z = Complex64::new(0.0, 0.0);
    let half_i = 0.5 * I;
    let dt = -2.0 * I * t;
    let tm1 = t - ONE;
    let eta = [half_i * tm1, z, z];
    let deta = [half_i * dt, half_i * tm1, z];
    let d2eta = [half_i * (-2.0 * I * dt), half_i * 2.0 * dt, half_i * tm1];
    let to_t = half_i / t;
    let d1: [Complex64; 3] = std::array::from_fn(|k| to_t * deta[k]);
    // d(eta')/d alpha = (i/2)(-dt/t^2 d eta/d alpha + d^2 eta/d alpha^2 / t)
    let dd1: [Complex64; 3] = std::array::from_fn(|k| half_i * (-dt / (t * t) * deta[k] + d2eta[k] / t));
    let d2: [Complex64; 3] = std::array::from_fn(|k| to_t * dd1[k]);
    [eta, d1, d2]
}

fn combine(c: &[Complex64; 3], v: &[f64; 3]) -> Complex64 {
    c.iter().zip(v).map(|(c, v)| c * v).sum()
}

fn bound(c: &[Complex64; 3], v: &[f64; 3], e: &[f64; 3]) -> f64 {
    let fd: f64 = c.iter().zip(e).map(|(c, e)| c.norm() * e).sum();
    let round: f64 = c.iter().zip(v).map(|(c, v)| c.norm() * v.abs()).sum::<f64>() * ROUNDING_FLOOR;
    fd + round
}

/// `eta` and its first two `t`-derivatives from central differences of
/// `ln D_n` with base step `h`.
pub fn eta_from_determinant(n: usize, alpha: f64, h: f64) -> Result<EtaValue> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(GapError::domain(format!("alpha must lie in (0, pi), got {alpha}")));
    }
    let mut vals = [0.0; 3];
    let mut errs = [0.0; 3];
    for order in 1..=3u32 {
        let d = log_det_derivative(n, alpha, order, Some(h), DEFAULT_LEVELS)?;
        vals[order as usize - 1] = d.value;
        errs[order as usize - 1] = d.error.unwrap_or(0.0);
    }
    let t = Complex64::from_polar(1.0, -2.0 * alpha);
    let c = chain_coefficients(t);
    Ok(EtaValue {
        t,
        eta: combine(&c[0], &vals),
        d_eta_dt: combine(&c[1], &vals),
        d2_eta_dt2: combine(&c[2], &vals),
        errors: std::array::from_fn(|k| bound(&c[k], &vals, &errs)),
    })
}

fn sqrt_t(alpha: f64) -> Complex64 {
    Complex64::from_polar(1.0, -alpha)
}

/// `eta_0 = (1 - sqrt t)^2 / 4`.
pub fn eta0(alpha: f64) -> Complex64 {
    let q = sqrt_t(alpha);
    (ONE - q) * (ONE - q) / 4.0
}

/// `eta_2 = -(1 + sqrt t)^2 / 16`.
pub fn eta2(alpha: f64) -> Complex64 {
    let q = sqrt_t(alpha);
    -(ONE + q) * (ONE + q) / 16.0
}

/// `d eta_0 / dt = -(1 - sqrt t) / (4 sqrt t)`.
pub fn eta0_dt(alpha: f64) -> Complex64 {
    let q = sqrt_t(alpha);
    -(ONE - q) / (4.0 * q)
}

/// `d eta_2 / dt = -(1 + sqrt t) / (16 sqrt t)`.
pub fn eta2_dt(alpha: f64) -> Complex64 {
    let q = sqrt_t(alpha);
    -(ONE + q) / (16.0 * q)
}

/// `n^2 eta_0 + eta_2`; the `n^1` term vanishes.
pub fn eta_expansion(n: usize, alpha: f64) -> Complex64 {
    let nf = n as f64;
    nf * nf * eta0(alpha) + eta2(alpha)
}

/// The expansion with its first two `t`-derivatives, for substitution into
/// the sigma form.
pub fn eta_expansion_value(n: usize, alpha: f64) -> EtaValue {
    let q = sqrt_t(alpha);
    let n2 = (n * n) as f64;
    let q3 = q * q * q;
    EtaValue {
        t: q * q,
        eta: eta_expansion(n, alpha),
        d_eta_dt: n2 * eta0_dt(alpha) + eta2_dt(alpha),
        d2_eta_dt2: n2 / (8.0 * q3) + ONE / (32.0 * q3),
        errors: [0.0; 3],
    }
}

/// `|LHS - eta'^4|` of the sigma form with `theta_inf = -theta_0 = n`,
/// `theta_1 = theta_t = 0`, before normalization.
pub fn sigma_pvi_defect(n: usize, v: &EtaValue) -> f64 {
    let n2q = (n * n) as f64 / 4.0;
    let (t, e, e1, e2) = (v.t, v.eta, v.d_eta_dt, v.d2_eta_dt2);
    let a = e1 - n2q;
    let b = t * (t - ONE) * e2;
    let c = 2.0 * a * (t * e1 - e) - e1 * e1 + 2.0 * n2q * e1;
    let lhs = a * b * b + c * c;
    (lhs - e1.powi(4)).norm()
}

/// Sigma-form defect normalized by `1 + |d eta/dt|^4`.
pub fn sigma_pvi_normalized(n: usize, v: &EtaValue) -> f64 {
    sigma_pvi_defect(n, v) / (1.0 + v.d_eta_dt.norm().powi(4))
}

/// Normalized sigma-form residual of the measured `eta`.
pub fn sigma_pvi_residual(n: usize, alpha: f64, h: f64) -> Result<f64> {
    let v = eta_from_determinant(n, alpha, h)?;
    Ok(sigma_pvi_normalized(n, &v))
}

/// `(1 - t)/n^2 d eta/dt + eta/n^2` with its error bound.
pub fn delta_from_eta(n: usize, v: &EtaValue) -> (f64, f64) {
    let n2 = (n * n) as f64;
    let w = ONE - v.t;
    let d = (w * v.d_eta_dt + v.eta) / n2;
    let err = (w.norm() * v.errors[1] + v.errors[0]) / n2;
    // Delta is real; the imaginary part is rounding
    (d.re, err + d.im.abs())
}

/// Coefficients of `eta = a n^2 + b n + c + d/n` fitted exactly through
/// four values of `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaOrderFit {
    pub alpha: f64,
    pub ns: [usize; 4],
    pub coefficients: [Complex64; 4],
}

impl EtaOrderFit {
    pub fn eta0(&self) -> Complex64 {
        self.coefficients[0]
    }

    pub fn eta1(&self) -> Complex64 {
        self.coefficients[1]
    }

    pub fn eta2(&self) -> Complex64 {
        self.coefficients[2]
    }
}

fn solve4(mut a: [[Complex64; 4]; 4], mut b: [Complex64; 4]) -> Result<[Complex64; 4]> {
    for c in 0..4 {
        let p = (c..4).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).expect("non-empty");
        a.swap(c, p);
        b.swap(c, p);
        if a[c][c].norm() == 0.0 {
            return Err(GapError::domain("fit nodes must be distinct"));
        }
        for r in c + 1..4 {
            let f = a[r][c] / a[c][c];
            for k in c..4 {
                let v = a[c][k];
                a[r][k] -= f * v;
            }
            let v = b[c];
            b[r] -= f * v;
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for r in (0..4).rev() {
        let s: Complex64 = (r + 1..4).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}

/// Fit `eta(n, alpha)` measured at `ns` in powers `n^2, n, 1, 1/n`.
pub fn fit_eta_orders(alpha: f64, ns: [usize; 4], h: f64) -> Result<EtaOrderFit> {
    let mut a = [[Complex64::new(0.0, 0.0); 4]; 4];
    let mut b = [Complex64::new(0.0, 0.0); 4];
    for (row, &n) in ns.iter().enumerate() {
        let nf = n as f64;
        a[row] = [nf * nf, nf, 1.0, 1.0 / nf].map(|x| Complex64::new(x, 0.0));
        b[row] = eta_from_determinant(n, alpha, h)?.eta;
    }
    Ok(EtaOrderFit { alpha, ns, coefficients: solve4(a, b)? })
}
