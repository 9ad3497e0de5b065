//! Central differences with Richardson extrapolation.
//!
//! The estimates at steps `H, H/2, ..., H/2^levels` (with `H = 2^levels h`)
//! are combined in a Neville table with factors `4^j`, since every stencil
//! here is symmetric and its error is even in the step.

use crate::error::{GapError, Result};

use super::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Derivative<R = f64> {
    pub value: R,
    /// Size of the last extrapolation increment; `None` when `levels == 0`.
    pub error: Option<f64>,
}

/// Default step for a derivative of the given order at `x`.
pub fn default_step(order: u32, x: f64, eps: f64) -> f64 {
    match order {
        1 => eps.cbrt() * x.abs().max(1.0),
        2 => eps.powf(0.25),
        _ => eps.powf(0.2) * x.abs().max(1.0),
    }
}

fn stencil<R: Real, F>(f: &mut F, x: &R, order: u32, h: &R) -> Result<R>
where
    F: FnMut(&R) -> Result<R>,
{
    let ctx = x.ctx();
    let fp = f(&(x.clone() + h))?;
    let fm = f(&(x.clone() - h))?;
    match order {
        1 => Ok((fp - fm) / (R::from_i64(ctx, 2) * h)),
        2 => {
            let f0 = f(x)?;
            Ok((fp + fm - R::from_i64(ctx, 2) * f0) / (h.clone() * h))
        }
        3 => {
            let two = R::from_i64(ctx, 2);
            let h2 = two.clone() * h;
            let fpp = f(&(x.clone() + &h2))?;
            let fmm = f(&(x.clone() - &h2))?;
            let num = fpp - fmm - two.clone() * (fp - fm);
            Ok(num / (two * h.powi(3)))
        }
        _ => Err(GapError::domain(format!("derivative order {order} not supported"))),
    }
}

/// Derivative of order 1, 2 or 3 of `f` at `x`.
///
/// `f` must be defined on `[x - 2^levels h, x + 2^levels h]` (twice that for
/// order 3). Values are computed in the scalar type of `x`.
pub fn derivative<R, F>(mut f: F, x: &R, order: u32, h: &R, levels: usize) -> Result<Derivative<R>>
where
    R: Real,
    F: FnMut(&R) -> Result<R>,
{
    if !(1..=3).contains(&order) {
        return Err(GapError::domain(format!("derivative order {order} not supported")));
    }
    let ctx = x.ctx();
    let hf = h.to_f64();
    if !(hf > 0.0) || !hf.is_finite() {
        return Err(GapError::domain(format!("step must be positive, got {hf}")));
    }
    let xf = x.to_f64();
    if hf < 100.0 * R::epsilon(ctx) * xf.abs() {
        return Err(GapError::StepUnderflow { step: hf, x: xf });
    }

    let mut step = h.clone() * R::from_f64(ctx, 2f64.powi(levels as i32));
    let half = R::ratio(ctx, 1, 2);
    let mut prev: Vec<R> = Vec::new();
    let mut increment = None;
    for k in 0..=levels {
        let mut row = Vec::with_capacity(k + 1);
        row.push(stencil(&mut f, x, order, &step)?);
        let mut factor = 1i64;
        for j in 1..=k {
            factor *= 4;
            let d = (row[j - 1].clone() - &prev[j - 1]) / R::from_i64(ctx, factor - 1);
            if j == k {
                increment = Some(d.abs().to_f64());
            }
            row.push(row[j - 1].clone() + d);
        }
        prev = row;
        step = step * &half;
    }
    Ok(Derivative { value: prev.pop().expect("table has at least one entry"), error: increment })
}

/// `derivative` for plain `f64` functions that cannot fail.
pub fn derivative_f64<F>(mut f: F, x: f64, order: u32, h: f64, levels: usize) -> Result<Derivative>
where
    F: FnMut(f64) -> f64,
{
    derivative(|t: &f64| Ok(f(*t)), &x, order, &h, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_low_degree_polynomials() {
        let d = derivative_f64(|x| x * x, 3.0, 1, 0.1, 0).unwrap();
        assert!((d.value - 6.0).abs() < 1e-13);
        for h in [0.5, 0.1, 0.01] {
            let d = derivative_f64(|x| x * x * x, 1.0, 2, h, 0).unwrap();
            assert!((d.value - 6.0).abs() < 1e-9, "{h}");
        }
        let d = derivative_f64(|x| x.powi(4), 1.0, 3, 0.01, 2).unwrap();
        assert!((d.value - 24.0).abs() < 1e-6);
    }

    #[test]
    fn exp_first_derivative_extrapolated() {
        let d = derivative_f64(f64::exp, 0.0, 1, 1e-4, 2).unwrap();
        assert!((d.value - 1.0).abs() < 1e-10);
        assert!(d.error.is_some());
    }

    #[test]
    fn step_underflow_detected() {
        let e = derivative_f64(f64::exp, 1e3, 1, 1e-15, 1).unwrap_err();
        assert!(matches!(e, GapError::StepUnderflow { .. }));
        assert!(derivative_f64(f64::exp, 0.0, 1, -1.0, 1).is_err());
        assert!(derivative_f64(f64::exp, 0.0, 4, 0.1, 1).is_err());
    }

    #[test]
    fn halving_step_quarters_error() {
        let x = 0.7f64;
        let exact = x.cos();
        let mut h = 0.1;
        let mut last = (derivative_f64(f64::sin, x, 1, h, 0).unwrap().value - exact).abs();
        for _ in 0..4 {
            h /= 2.0;
            let e = (derivative_f64(f64::sin, x, 1, h, 0).unwrap().value - exact).abs();
            let r = last / e;
            assert!((3.5..=4.5).contains(&r), "ratio {r} at h {h}");
            last = e;
        }
    }
}
