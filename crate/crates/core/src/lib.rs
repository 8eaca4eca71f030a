//! High-precision evaluation of the Bessel-series kernels Ω_ρ(x, z) and
//! Λ±(x, z), and numerical verification of the modular-type identities
//! relating them to squares and products of zeta values.

pub mod error;
pub mod identities;
pub mod mellin;
pub mod arith;
pub mod numerics;
pub mod omega;
pub mod special;

pub use error::{Error, Result};
pub use numerics::{set_precision, CScalar, Ctx, Precision, Scalar};
