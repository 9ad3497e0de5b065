//! Precision configuration, scalar backends, quadrature, finite differences
//! and the 2x2 complex matrix type.

pub mod diff;
pub mod mat2;
pub mod precision;
pub mod quadrature;
pub mod real;

pub use diff::{default_step, derivative, derivative_f64, Derivative};
pub use mat2::Mat2C;
pub use precision::{conditioning_digits, conditioning_digits_beta, Backend, PrecisionConfig};
pub use quadrature::{gauss_legendre, gauss_legendre_in, QuadratureRule};
pub use real::{MpReal, Real};
