//! Scalar abstraction shared by the native and extended-precision backends.
//!
//! Everything that needs more than 53 bits (Toeplitz pivots far below the
//! double-precision floor, finite differences of `ln D_n`, the Euler-Maclaurin
//! sums) is written once against [`Real`] and instantiated for `f64` or for
//! [`MpReal`], an MPFR float whose precision travels with the value.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float, Rational};

pub trait Real:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + for<'a> AddAssign<&'a Self>
{
    /// Whatever is needed to mint new values: nothing for `f64`, the bit
    /// precision for [`MpReal`].
    type Ctx: Copy + Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn from_f64(ctx: Self::Ctx, x: f64) -> Self;
    fn from_i64(ctx: Self::Ctx, x: i64) -> Self;
    fn pi(ctx: Self::Ctx) -> Self;
    fn from_rational(ctx: Self::Ctx, q: &Rational) -> Self;
    /// Unit roundoff of the representation.
    fn epsilon(ctx: Self::Ctx) -> f64;
    fn to_f64(&self) -> f64;

    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn powi(&self, k: i32) -> Self;

    /// `self -= a * b` without an intermediate allocation where possible.
    fn sub_mul_assign(&mut self, a: &Self, b: &Self);

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 0)
    }

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_i64(ctx, 1)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero(self.ctx())
    }

    fn ratio(ctx: Self::Ctx, num: i64, den: i64) -> Self {
        Self::from_i64(ctx, num) / Self::from_i64(ctx, den)
    }
}

impl Real for f64 {
    type Ctx = ();

    fn ctx(&self) {}
    fn from_f64(_: (), x: f64) -> Self {
        x
    }
    fn from_i64(_: (), x: i64) -> Self {
        x as f64
    }
    fn pi(_: ()) -> Self {
        std::f64::consts::PI
    }
    fn from_rational(_: (), q: &Rational) -> Self {
        q.to_f64()
    }
    fn epsilon(_: ()) -> f64 {
        f64::EPSILON / 2.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn powi(&self, k: i32) -> Self {
        f64::powi(*self, k)
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
}

/// MPFR-backed real. Binary operations run at the larger of the two operand
/// precisions.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct MpReal(Float);

impl MpReal {
    pub fn new(bits: u32, x: f64) -> Self {
        MpReal(Float::with_val(bits, x))
    }

    pub fn from_float(x: Float) -> Self {
        MpReal(x)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn prec(&self) -> u32 {
        self.0.prec()
    }

    fn widened(mut self, other: &MpReal) -> Float {
        if self.0.prec() < other.0.prec() {
            self.0.set_prec(other.0.prec());
        }
        self.0
    }
}

macro_rules! mp_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait for MpReal {
            type Output = MpReal;
            fn $method(self, rhs: MpReal) -> MpReal {
                let mut v = self.widened(&rhs);
                v.$assign(rhs.0);
                MpReal(v)
            }
        }

        impl<'a> $trait<&'a MpReal> for MpReal {
            type Output = MpReal;
            fn $method(self, rhs: &'a MpReal) -> MpReal {
                let mut v = self.widened(rhs);
                v.$assign(&rhs.0);
                MpReal(v)
            }
        }

        impl $assign_trait for MpReal {
            fn $assign(&mut self, rhs: MpReal) {
                if self.0.prec() < rhs.0.prec() {
                    self.0.set_prec(rhs.0.prec());
                }
                self.0.$assign(rhs.0);
            }
        }
    };
}

mp_binop!(Add, add, AddAssign, add_assign);
mp_binop!(Sub, sub, SubAssign, sub_assign);
mp_binop!(Mul, mul, MulAssign, mul_assign);
mp_binop!(Div, div, DivAssign, div_assign);

use std::ops::DivAssign;

impl<'a> AddAssign<&'a MpReal> for MpReal {
    fn add_assign(&mut self, rhs: &'a MpReal) {
        if self.0.prec() < rhs.0.prec() {
            self.0.set_prec(rhs.0.prec());
        }
        self.0 += &rhs.0;
    }
}

impl Neg for MpReal {
    type Output = MpReal;
    fn neg(self) -> MpReal {
        MpReal(-self.0)
    }
}

impl Real for MpReal {
    type Ctx = u32;

    fn ctx(&self) -> u32 {
        self.0.prec()
    }
    fn from_f64(bits: u32, x: f64) -> Self {
        MpReal(Float::with_val(bits, x))
    }
    fn from_i64(bits: u32, x: i64) -> Self {
        MpReal(Float::with_val(bits, x))
    }
    fn pi(bits: u32) -> Self {
        MpReal(Float::with_val(bits, Constant::Pi))
    }
    fn from_rational(bits: u32, q: &Rational) -> Self {
        MpReal(Float::with_val(bits, q))
    }
    fn epsilon(bits: u32) -> f64 {
        2f64.powi(-(bits as i32))
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    fn ln(&self) -> Self {
        MpReal(self.0.clone().ln())
    }
    fn exp(&self) -> Self {
        MpReal(self.0.clone().exp())
    }
    fn sin(&self) -> Self {
        MpReal(self.0.clone().sin())
    }
    fn cos(&self) -> Self {
        MpReal(self.0.clone().cos())
    }
    fn tan(&self) -> Self {
        MpReal(self.0.clone().tan())
    }
    fn sqrt(&self) -> Self {
        MpReal(self.0.clone().sqrt())
    }
    fn abs(&self) -> Self {
        MpReal(self.0.clone().abs())
    }
    fn powi(&self, k: i32) -> Self {
        MpReal(self.0.clone().pow(k))
    }
    fn sub_mul_assign(&mut self, a: &Self, b: &Self) {
        self.0 -= &a.0 * &b.0;
    }
    fn zero(bits: u32) -> Self {
        MpReal(Float::new(bits))
    }
    fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }
}

impl MpReal {
    /// Overwrite with another value keeping this value's precision.
    pub fn assign_from(&mut self, other: &MpReal) {
        self.0.assign(&other.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mp_arithmetic_tracks_precision() {
        let a = MpReal::new(200, 1.0);
        let b = MpReal::from_i64(300, 3);
        let c = a / b;
        assert_eq!(c.prec(), 300);
        let third = c.to_f64();
        assert!((third - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn mp_sub_mul_matches_plain() {
        let mut acc = MpReal::from_i64(128, 10);
        acc.sub_mul_assign(&MpReal::from_i64(128, 2), &MpReal::from_i64(128, 3));
        assert_eq!(acc.to_f64(), 4.0);
        let mut x = 10.0f64;
        x.sub_mul_assign(&2.0, &3.0);
        assert_eq!(x, 4.0);
    }

    #[test]
    fn extended_pi_beyond_double() {
        let pi = MpReal::pi(400);
        let s = pi.sin();
        assert!(s.abs().to_f64() < 1e-100);
    }
}
