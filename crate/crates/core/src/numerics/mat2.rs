use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2C {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

impl Mat2C {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Mat2C { a11, a12, a21, a22 }
    }

    pub fn from_real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2C::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub fn identity() -> Self {
        Mat2C::from_real(1.0, 0.0, 0.0, 1.0)
    }

    pub fn zero() -> Self {
        Mat2C::from_real(0.0, 0.0, 0.0, 0.0)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        Mat2C::new(d1, z, z, d2)
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    /// Inverse via the adjugate; `None` when the determinant is zero.
    pub fn inv(&self) -> Option<Self> {
        let d = self.det();
        if d == Complex64::new(0.0, 0.0) {
            return None;
        }
        Some(Mat2C::new(self.a22 / d, -self.a12 / d, -self.a21 / d, self.a11 / d))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Mat2C::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.a11.norm().max(self.a12.norm()).max(self.a21.norm()).max(self.a22.norm())
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.is_finite())
    }
}

impl Mul for Mat2C {
    type Output = Mat2C;
    fn mul(self, b: Mat2C) -> Mat2C {
        Mat2C::new(
            self.a11 * b.a11 + self.a12 * b.a21,
            self.a11 * b.a12 + self.a12 * b.a22,
            self.a21 * b.a11 + self.a22 * b.a21,
            self.a21 * b.a12 + self.a22 * b.a22,
        )
    }
}

impl Add for Mat2C {
    type Output = Mat2C;
    fn add(self, b: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 + b.a11, self.a12 + b.a12, self.a21 + b.a21, self.a22 + b.a22)
    }
}

impl Sub for Mat2C {
    type Output = Mat2C;
    fn sub(self, b: Mat2C) -> Mat2C {
        Mat2C::new(self.a11 - b.a11, self.a12 - b.a12, self.a21 - b.a21, self.a22 - b.a22)
    }
}

impl Neg for Mat2C {
    type Output = Mat2C;
    fn neg(self) -> Mat2C {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat2C::new(c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0), c(2.0, -1.0));
        let p = a * a.inv().unwrap();
        assert!((p - Mat2C::identity()).norm() < 1e-14);
        assert!(Mat2C::zero().inv().is_none());
    }

    #[test]
    fn trace_and_det_of_diag() {
        let d = Mat2C::diag(c(2.0, 0.0), c(0.0, 1.0));
        assert_eq!(d.det(), c(0.0, 2.0));
        assert_eq!(d.trace(), c(2.0, 1.0));
    }
}
