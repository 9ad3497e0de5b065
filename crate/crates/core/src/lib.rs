//! Gap probabilities of CUE arcs and of the sine kernel, with the large-gap
//! asymptotics that connect them.

// `!(x > 0.0)` style guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// dense linear algebra reads better with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod asymptotics;
pub mod constants;
pub mod error;
pub mod fredholm;
pub mod numerics;
pub mod painleve;
pub mod rh;
pub mod toeplitz;

pub use error::{GapError, Result};
