//! `det(I - gamma K_s)` for the sine kernel on `L^2(0, 2s)` by the Nystrom
//! method, and its link to the Toeplitz side.

use std::f64::consts::PI;

use crate::error::{GapError, Result};
use crate::numerics::{gauss_legendre, PrecisionConfig, QuadratureRule};
use crate::toeplitz::{log_det, ArcEnsemble};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSpec {
    pub s: f64,
    pub gamma: f64,
}

impl GapSpec {
    pub fn new(s: f64, gamma: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(GapError::domain(format!("s must be positive, got {s}")));
        }
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(GapError::domain(format!("gamma must lie in (0, 1], got {gamma}")));
        }
        Ok(GapSpec { s, gamma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NystromConfig {
    pub m: usize,
}

impl NystromConfig {
    pub fn new(m: usize) -> Result<Self> {
        if m < 4 {
            return Err(GapError::domain(format!("quadrature order must be >= 4, got {m}")));
        }
        Ok(NystromConfig { m })
    }

    /// `max(40, ceil(8s) + 20)` nodes.
    pub fn default_for(s: f64) -> Self {
        NystromConfig { m: 40.max((8.0 * s).ceil() as usize + 20) }
    }
}

/// `sin(x - y) / (pi (x - y))`.
pub fn kernel(x: f64, y: f64) -> f64 {
    let d = x - y;
    let a = d.abs();
    if a < f64::EPSILON.sqrt() {
        1.0 / PI
    } else if a < 1e-6 {
        let d2 = d * d;
        (1.0 - d2 / 6.0 + d2 * d2 / 120.0) / PI
    } else {
        d.sin() / (PI * d)
    }
}

/// Symmetrized `sqrt(w_i) K(x_i, x_j) sqrt(w_j)` on `(0, 2s)`.
fn kernel_matrix(s: f64, rule: &QuadratureRule) -> Vec<Vec<f64>> {
    let (xs, ws): (Vec<f64>, Vec<f64>) =
        rule.nodes.iter().zip(&rule.weights).map(|(x, w)| (s * (1.0 + x), (s * w).sqrt())).unzip();
    let m = xs.len();
    let mut k = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..=i {
            let v = ws[i] * kernel(xs[i], xs[j]) * ws[j];
            k[i][j] = v;
            k[j][i] = v;
        }
    }
    k
}

/// Packed LU factors with partial pivoting.
struct Lu {
    a: Vec<Vec<f64>>,
    perm: Vec<usize>,
    log_abs_det: f64,
    sign: f64,
    min_abs_pivot: f64,
}

fn lu(mut a: Vec<Vec<f64>>) -> Lu {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut log_abs_det = 0.0;
    let mut min_abs_pivot = f64::INFINITY;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).expect("non-empty column");
        if p != c {
            a.swap(p, c);
            perm.swap(p, c);
            sign = -sign;
        }
        let piv = a[c][c];
        min_abs_pivot = min_abs_pivot.min(piv.abs());
        if piv == 0.0 {
            log_abs_det = f64::NEG_INFINITY;
            sign = 0.0;
            continue;
        }
        if piv < 0.0 {
            sign = -sign;
        }
        log_abs_det += piv.abs().ln();
        let (top, bottom) = a.split_at_mut(c + 1);
        let prow = &top[c];
        for row in bottom.iter_mut() {
            let f = row[c] / piv;
            row[c] = f;
            for k in c + 1..n {
                row[k] -= f * prow[k];
            }
        }
    }
    Lu { a, perm, log_abs_det, sign, min_abs_pivot }
}

impl Lu {
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.a.len();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut v = x[i];
            for k in 0..i {
                v -= self.a[i][k] * x[k];
            }
            x[i] = v;
        }
        for i in (0..n).rev() {
            let mut v = x[i];
            for k in i + 1..n {
                v -= self.a[i][k] * x[k];
            }
            x[i] = v / self.a[i][i];
        }
        x
    }
}

fn identity_minus(k: &[Vec<f64>], eta: f64) -> Vec<Vec<f64>> {
    k.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().enumerate().map(|(j, v)| if i == j { 1.0 - eta * v } else { -eta * v }).collect()
        })
        .collect()
}

/// `ln det(I - gamma K_s)` on an `m`-point Gauss-Legendre discretization.
pub fn log_det_gap(spec: &GapSpec, cfg: &NystromConfig) -> Result<f64> {
    let rule = gauss_legendre(cfg.m, PrecisionConfig::NATIVE)?;
    let k = kernel_matrix(spec.s, &rule);
    let f = lu(identity_minus(&k, spec.gamma));
    if f.sign <= 0.0 {
        return Err(GapError::SignFlip { s: spec.s, m: cfg.m });
    }
    // 0 <= gamma K <= I, so the determinant cannot exceed 1
    if f.log_abs_det > 1e-12 {
        return Err(GapError::PrecisionFault(format!(
            "det(I - gamma K) = {:.3e} > 1: quadrature order {} too small for s = {}",
            f.log_abs_det.exp(),
            cfg.m,
            spec.s
        )));
    }
    Ok(f.log_abs_det)
}

/// `ln P_s = ln det(I - K_s)` at the default node count.
pub fn log_gap_probability(s: f64) -> Result<f64> {
    let spec = GapSpec::new(s, 1.0)?;
    log_det_gap(&spec, &NystromConfig::default_for(s))
}

/// `-int_0^gamma tr((I - eta K)^{-1} K) d eta - ln det(I - gamma K)`, both
/// on the same discretized kernel, with `steps` Gauss-Legendre nodes in
/// `eta`.
pub fn trace_identity_residual(spec: &GapSpec, cfg: &NystromConfig, steps: usize) -> Result<f64> {
    if spec.gamma >= 1.0 {
        return Err(GapError::domain("trace identity needs gamma < 1"));
    }
    let rule = gauss_legendre(cfg.m, PrecisionConfig::NATIVE)?;
    let k = kernel_matrix(spec.s, &rule);
    let m = k.len();
    let eta_rule = gauss_legendre(steps, PrecisionConfig::NATIVE)?;
    let mut integral = 0.0;
    for (x, w) in eta_rule.nodes.iter().zip(&eta_rule.weights) {
        let eta = 0.5 * spec.gamma * (1.0 + x);
        let f = lu(identity_minus(&k, eta));
        if f.sign == 0.0 || f.min_abs_pivot < 1e3 * f64::EPSILON {
            return Err(GapError::SingularResolvent { eta });
        }
        let mut tr = 0.0;
        for j in 0..m {
            let col: Vec<f64> = k.iter().map(|row| row[j]).collect();
            tr += f.solve(&col)[j];
        }
        integral += 0.5 * spec.gamma * w * tr;
    }
    let direct = lu(identity_minus(&k, spec.gamma));
    if direct.sign <= 0.0 {
        return Err(GapError::SignFlip { s: spec.s, m: cfg.m });
    }
    Ok(-integral - direct.log_abs_det)
}

/// `ln D_n(2s/n) - ln P_s`.
pub fn scaling_limit_gap(s: f64, n: usize, prec: PrecisionConfig) -> Result<f64> {
    if n == 0 {
        return Err(GapError::domain("n must be >= 1"));
    }
    let alpha = 2.0 * s / n as f64;
    if !(s > 0.0) || alpha >= PI {
        return Err(GapError::domain(format!("need 0 < 2s/n < pi, got {alpha}")));
    }
    let toep = log_det(&ArcEnsemble::new(n, alpha)?, prec)?;
    if !toep.precision_ok {
        return Err(GapError::PrecisionFault(format!(
            "D_{n}({alpha}) needs more than {} digits",
            prec.decimal_digits()
        )));
    }
    Ok(toep.log_det - log_gap_probability(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_limits() {
        assert_eq!(kernel(0.3, 0.3), 1.0 / PI);
        assert!(kernel(PI, 0.0).abs() < 1e-16);
        let near = kernel(1.0 + 5e-7, 1.0);
        assert!((near - (5e-7f64).sin() / (PI * 5e-7)).abs() < 1e-16);
    }

    #[test]
    fn validation() {
        assert!(GapSpec::new(0.0, 1.0).is_err());
        assert!(GapSpec::new(1.0, 1.5).is_err());
        assert!(NystromConfig::new(3).is_err());
        assert_eq!(NystromConfig::default_for(1.0).m, 40);
        assert_eq!(NystromConfig::default_for(6.0).m, 68);
        let spec = GapSpec::new(1.0, 1.0).unwrap();
        assert!(trace_identity_residual(&spec, &NystromConfig::new(20).unwrap(), 10).is_err());
    }

    #[test]
    fn under_resolved_rule_is_a_fault() {
        let e = log_det_gap(&GapSpec::new(20.0, 1.0).unwrap(), &NystromConfig::new(4).unwrap()).unwrap_err();
        assert!(e.is_numerical_fault());
    }

    #[test]
    fn lu_solves_small_system() {
        let a = vec![vec![0.0, 2.0], vec![3.0, 1.0]];
        let f = lu(a);
        assert_eq!(f.sign, -1.0);
        assert!((f.log_abs_det - 6f64.ln()).abs() < 1e-15);
        let x = f.solve(&[4.0, 5.0]);
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }
}
