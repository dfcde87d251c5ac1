//! Matroids from vector configurations and hyperplane arrangements.

mod core;
mod points;

pub(crate) use self::core::bits;
pub use self::core::{matroid_equal, matroid_equal_by_labels, FlatLattice, Matroid, MAX_GROUND};
pub use points::{line_of, matroid_of_lines, matroid_of_points, matroid_of_vectors};
