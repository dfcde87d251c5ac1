use num_traits::Zero;

use super::core::Matroid;
use crate::error::{Error, Result};
use crate::foundation::{colex_subsets, primitive_vector, EchelonBasis, QMatrix, Rational, Subset};
use crate::linespace::WMatrix;

/// Column matroid of a vector configuration; zero columns are loops.
pub fn matroid_of_points(columns: &QMatrix, labels: Vec<String>) -> Result<Matroid> {
    if labels.len() != columns.cols() {
        return Err(Error::InvalidInput(format!("{} labels for {} columns", labels.len(), columns.cols())));
    }
    let vectors: Vec<Vec<Rational>> = (0..columns.cols()).map(|c| primitive_vector(&columns.column(c))).collect();
    matroid_of_vectors(&vectors, labels)
}

/// Matroid of an explicit list of vectors (all of one length).
pub fn matroid_of_vectors(vectors: &[Vec<Rational>], labels: Vec<String>) -> Result<Matroid> {
    if labels.len() != vectors.len() {
        return Err(Error::InvalidInput("one label per vector is required".into()));
    }
    let rank = if vectors.is_empty() { 0 } else { QMatrix::from_columns(vectors[0].len(), vectors)?.rank() };
    let mut bases = Vec::new();
    let mut echelon = EchelonBasis::new();
    collect_bases(vectors, rank, 0, 0, &mut echelon, &mut bases);
    Matroid::from_bases(labels, bases)
}

fn collect_bases(
    vectors: &[Vec<Rational>],
    rank: usize,
    start: usize,
    chosen: u64,
    echelon: &mut EchelonBasis,
    out: &mut Vec<u64>,
) {
    if echelon.dim() == rank {
        out.push(chosen);
        return;
    }
    let needed = rank - echelon.dim();
    for k in start..vectors.len() {
        if vectors.len() - k < needed {
            break;
        }
        if echelon.try_push(&vectors[k]) {
            collect_bases(vectors, rank, k + 1, chosen | (1 << k), echelon, out);
            echelon.pop();
        }
    }
}

/// `ℓ_J = ∩_{k∈J} {x : w_k · x = 0}` when it is a line, as a primitive spanning vector.
pub fn line_of(w: &WMatrix, j: Subset) -> Option<Vec<Rational>> {
    let cols: Vec<usize> = j.iter().map(|e| e - 1).collect();
    let normals = w.entries.select_columns(&cols).transpose();
    let kernel = normals.kernel_basis();
    (kernel.rows() == 1).then(|| primitive_vector(kernel.row(0)))
}

/// Matroid of the lines `ℓ_J` over all `d`-subsets `J`, in colex order; degenerate `J` are loops.
pub fn matroid_of_lines(w: &WMatrix) -> Result<Matroid> {
    let (n, d) = (w.n(), w.d());
    let subsets = colex_subsets(n, d);
    let vectors: Vec<Vec<Rational>> =
        subsets.iter().map(|&j| line_of(w, j).unwrap_or_else(|| vec![Rational::zero(); d + 1])).collect();
    matroid_of_vectors(&vectors, subsets.iter().map(|s| s.label()).collect())
}
