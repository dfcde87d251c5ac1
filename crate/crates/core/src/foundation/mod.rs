//! Exact rational linear algebra and subset combinatorics.

mod matrix;
mod plucker;
mod rational;
mod subset;

pub use matrix::{primitive_vector, EchelonBasis, QMatrix};
pub use plucker::{parse_plucker_map, PlueckerVector};
pub use rational::{format_rational, parse_rational, rat, ratio, Rational};
pub use subset::{binomial, colex_subsets, plucker_sign, sort_sign, Subset, MAX_ELEMENT};
