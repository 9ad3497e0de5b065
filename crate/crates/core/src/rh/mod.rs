//! Explicit objects of the Riemann-Hilbert analysis of the arc determinant.

pub mod bessel;
pub mod delta;
pub mod functions;
pub mod parametrix;

pub use bessel::{hankel, hankel_h0, HankelKind, HankelPair};
pub use delta::{delta_asymptotic, delta_from_determinant, theta_from_determinant, DeltaEstimate};
pub use functions::{
    beta_fn, correction, f_eval, g_eval, map_lambda_z, map_z_lambda, model_solution, omega,
    omega_squared_series, sqrt_lambda2_minus_1, BoundarySide,
};
pub use parametrix::{parametrix_mismatch, parametrix_point, ParametrixPoint, DEFAULT_DELTA};
