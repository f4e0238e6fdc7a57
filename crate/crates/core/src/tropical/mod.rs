//! The max-plus semiring, tropical matrices and finite coefficients.

mod coefficient;
mod matrix;
mod scalar;

pub use coefficient::{FiniteCoefficient, FiniteCoefficients};
pub use matrix::TropicalMatrix;
pub use scalar::TropicalScalar;
