pub mod bernoulli;
pub mod bessel;
pub mod gamma;
pub mod zeros;
pub mod zeta;

pub use bernoulli::bernoulli;
pub use bessel::{bessel_i, bessel_k};
pub use gamma::{digamma, gamma};
pub use zeros::find_first_nontrivial_zero;
pub use zeta::{zeta, zeta_prime, ZetaEval};
