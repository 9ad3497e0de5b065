use crate::error::{GapError, Result};

use super::precision::{Backend, PrecisionConfig};
use super::real::{MpReal, Real};

pub const NEWTON_CAP: usize = 100;

/// Gauss-Legendre rule on (-1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<R = f64> {
    pub nodes: Vec<R>,
    pub weights: Vec<R>,
}

impl<R: Real> QuadratureRule<R> {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped affinely onto `(a, b)`.
    pub fn on_interval(&self, a: &R, b: &R) -> (Vec<R>, Vec<R>) {
        let ctx = a.ctx();
        let half = R::ratio(ctx, 1, 2);
        let mid = (a.clone() + b) * &half;
        let rad = (b.clone() - a) * &half;
        let xs = self.nodes.iter().map(|x| mid.clone() + rad.clone() * x).collect();
        let ws = self.weights.iter().map(|w| rad.clone() * w).collect();
        (xs, ws)
    }

    /// Sum of `w_i f(x_i)` over `(a, b)`.
    pub fn integrate<F: FnMut(&R) -> R>(&self, a: &R, b: &R, mut f: F) -> R {
        let (xs, ws) = self.on_interval(a, b);
        let mut acc = R::zero(a.ctx());
        for (x, w) in xs.iter().zip(ws) {
            acc += w * f(x);
        }
        acc
    }
}

impl QuadratureRule<f64> {
    pub fn integrate_f64<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let rad = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| rad * w * f(mid + rad * x)).sum()
    }
}

/// `P_m(x)` and `P_m'(x)` by the three-term recurrence.
fn legendre_with_derivative<R: Real>(m: usize, x: &R) -> (R, R) {
    let ctx = x.ctx();
    let one = R::one(ctx);
    let mut p0 = one.clone();
    let mut p1 = x.clone();
    for k in 2..=m {
        // k P_k = (2k-1) x P_{k-1} - (k-1) P_{k-2}
        let a = R::from_i64(ctx, 2 * k as i64 - 1);
        let b = R::from_i64(ctx, k as i64 - 1);
        let pk = (a * x * &p1 - b * &p0) / R::from_i64(ctx, k as i64);
        p0 = p1;
        p1 = pk;
    }
    if m == 0 {
        return (one, R::zero(ctx));
    }
    // (1 - x^2) P_m' = m (P_{m-1} - x P_m)
    let dp = R::from_i64(ctx, m as i64) * (p0 - x.clone() * &p1) / (one - x.clone() * x);
    (p1, dp)
}

/// Gauss-Legendre rule of order `m` in the scalar type `R`.
///
/// Roots in the upper half are polished by Newton's method and mirrored, so
/// the node set is exactly symmetric.
pub fn gauss_legendre_in<R: Real>(m: usize, ctx: R::Ctx) -> Result<QuadratureRule<R>> {
    if m == 0 {
        return Err(GapError::domain("quadrature order must be >= 1"));
    }
    let eps = R::epsilon(ctx);
    let tol = R::from_f64(ctx, 10.0 * eps);
    let two = R::from_i64(ctx, 2);
    let pi = R::pi(ctx);
    let half = m / 2;
    let mut upper: Vec<(R, R)> = Vec::with_capacity(half + 1);

    for i in 0..m.div_ceil(2) {
        // i-th largest root; guess cos(pi (i + 3/4) / (m + 1/2))
        let mut x = (pi.clone() * R::ratio(ctx, 4 * i as i64 + 3, 4 * m as i64 + 2)).cos();
        if m % 2 == 1 && i == m / 2 {
            x = R::zero(ctx);
        }
        let mut converged = false;
        let mut dp = R::one(ctx);
        for _ in 0..NEWTON_CAP {
            let (p, d) = legendre_with_derivative(m, &x);
            let dx = p / &d;
            x -= dx.clone();
            dp = d;
            if dx.abs() < tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(GapError::NonConvergence { order: m, index: i });
        }
        let (_, d) = legendre_with_derivative(m, &x);
        if d.to_f64().is_finite() {
            dp = d;
        }
        let one = R::one(ctx);
        let w = two.clone() / ((one - x.clone() * &x) * dp.clone() * &dp);
        upper.push((x, w));
    }

    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for (x, w) in upper.iter().take(half) {
        nodes.push(-x.clone());
        weights.push(w.clone());
    }
    if m % 2 == 1 {
        let (_, w) = &upper[half];
        nodes.push(R::zero(ctx));
        weights.push(w.clone());
    }
    for (x, w) in upper.iter().take(half).rev() {
        nodes.push(x.clone());
        weights.push(w.clone());
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Gauss-Legendre rule computed at the working precision of `prec` and
/// rounded to `f64`.
pub fn gauss_legendre(m: usize, prec: PrecisionConfig) -> Result<QuadratureRule> {
    match prec.backend() {
        Backend::Native => gauss_legendre_in::<f64>(m, ()),
        Backend::Extended { bits } => {
            let r = gauss_legendre_in::<MpReal>(m, bits)?;
            Ok(QuadratureRule {
                nodes: r.nodes.iter().map(Real::to_f64).collect(),
                weights: r.weights.iter().map(Real::to_f64).collect(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn low_orders_match_closed_forms() {
        let r1 = gauss_legendre(1, PrecisionConfig::NATIVE).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert_abs_diff_eq!(r1.weights[0], 2.0, epsilon = 1e-15);

        let r2 = gauss_legendre(2, PrecisionConfig::NATIVE).unwrap();
        let a = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(r2.nodes[0], -a, epsilon = 1e-15);
        assert_abs_diff_eq!(r2.nodes[1], a, epsilon = 1e-15);
        for w in &r2.weights {
            assert_abs_diff_eq!(*w, 1.0, epsilon = 1e-15);
        }

        let r3 = gauss_legendre(3, PrecisionConfig::NATIVE).unwrap();
        let b = (3.0f64 / 5.0).sqrt();
        assert_abs_diff_eq!(r3.nodes[0], -b, epsilon = 1e-15);
        assert_eq!(r3.nodes[1], 0.0);
        assert_abs_diff_eq!(r3.weights[0], 5.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r3.weights[1], 8.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn extended_rule_is_exact_far_below_double() {
        let bits = 256;
        let r = gauss_legendre_in::<MpReal>(20, bits).unwrap();
        let mut sum = MpReal::zero(bits);
        for w in &r.weights {
            sum += w.clone();
        }
        let err = (sum - MpReal::from_i64(bits, 2)).abs().to_f64();
        assert!(err < 1e-70, "{err}");
        // x^38 integrates to 2/39
        let mut acc = MpReal::zero(bits);
        for (x, w) in r.nodes.iter().zip(&r.weights) {
            acc += w.clone() * x.powi(38);
        }
        let err = (acc - MpReal::ratio(bits, 2, 39)).abs().to_f64();
        assert!(err < 1e-70, "{err}");
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(gauss_legendre(0, PrecisionConfig::NATIVE), Err(GapError::Domain(_))));
    }
}
