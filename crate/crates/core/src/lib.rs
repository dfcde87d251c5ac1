//! Exact computations on the space of hyperplanes inside a linear subspace:
//! Plücker and incidence relations, the matrices `U`, `V`, `W`, matroids of
//! lines, Dilworth truncations and Bergman fans.

pub mod cli;
pub mod dilworth;
pub mod dot;
pub mod error;
pub mod foundation;
pub mod linespace;
pub mod matroid;
pub mod pipeline;
pub mod polyrel;
pub mod tropical;

pub use error::{Error, Result};
