//! Exact linear algebra over the rationals.

mod matrix;
pub mod rational;
mod subspace;

pub use matrix::RMatrix;
pub use rational::Rational;
pub use subspace::{closure_under, Subspace};
