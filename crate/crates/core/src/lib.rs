//! Numerical ranges of quadratic operators.
//!
//! Support-function computation of classical and c-numerical ranges,
//! recognition of quadratic matrices with their predicted elliptical ranges,
//! and finite-section models of composition, Hankel and Cauchy singular
//! integral operators with closed-form norm predictors.

pub mod cnumrange;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod numrange;
pub mod operators;
pub mod quadratic;
pub mod random;

pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
