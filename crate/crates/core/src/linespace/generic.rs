use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::input::SubspaceInput;
use super::matrices::{matrix_v, reduced_w};
use crate::dilworth::tilde_dilworth_uniform;
use crate::error::{Error, Result};
use crate::foundation::{colex_subsets, PlueckerVector, QMatrix, Rational, Subset};
use crate::matroid::{bits, matroid_equal_by_labels, matroid_of_points, Matroid};

/// Bound on the absolute value of sampled basis entries.
pub const SAMPLE_ENTRY_BOUND: i64 = 9;
/// Draws attempted by [`sample_generic`] before giving up.
pub const SAMPLE_RETRY_CAP: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityReport {
    pub is_generic: bool,
    /// Column sets of `V` that are bases of the generic matroid but whose minor vanishes at `X`.
    pub vanishing_minor_columns: Vec<Vec<String>>,
}

type MatroidCache = Mutex<HashMap<(usize, usize), Arc<Matroid>>>;

/// `tilde-Dil_{n−d}(U_{n,n})`, shared across calls.
pub fn generic_line_matroid(n: usize, d: usize) -> Result<Arc<Matroid>> {
    static CACHE: OnceLock<MatroidCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&(n, d)) {
        return Ok(hit.clone());
    }
    let m = Arc::new(tilde_dilworth_uniform(n, n - d)?);
    cache.lock().expect("cache lock").insert((n, d), m.clone());
    Ok(m)
}

/// Column matroid of `V`, labeled by the `d`-subsets.
pub fn matroid_of_v(x: &SubspaceInput) -> Result<Matroid> {
    let v = matrix_v(&reduced_w(x));
    matroid_of_points(&v.entries, v.col_labels.iter().map(|s| s.label()).collect())
}

/// `X` is generic iff the matroid of `V` equals `tilde-Dil_{n−d}(U_{n,n})`.
pub fn genericity_report(x: &SubspaceInput) -> Result<GenericityReport> {
    let actual = matroid_of_v(x)?;
    let generic = generic_line_matroid(x.n(), x.d())?;
    let vanishing_minor_columns = generic
        .bases()
        .iter()
        .filter_map(|&b| {
            let labels = generic.labels_of(b);
            let mask = actual.mask_of(&labels).expect("both grounds are the d-subsets");
            (!actual.is_basis(mask)).then(|| {
                let mut sorted: Vec<Subset> = labels.iter().map(|l| l.parse().expect("subset label")).collect();
                sorted.sort();
                sorted.into_iter().map(Subset::label).collect()
            })
        })
        .collect();
    Ok(GenericityReport { is_generic: matroid_equal_by_labels(&actual, &generic), vanishing_minor_columns })
}

/// `coefficient · q_I · q_J`.
type SignedProduct = (i64, [usize; 3], [usize; 3]);

/// The non-monomial maximal minors of `V` on `Gr(3,6)`, as signed products `q_I · q_J`
/// (with `q_{123}` standing in for the constant 1).
const GR36_MINORS: [[SignedProduct; 2]; 14] = [
    [(-1, [1, 2, 4], [3, 5, 6]), (1, [4, 5, 6], [1, 2, 3])],
    [(-1, [1, 2, 5], [3, 4, 6]), (-1, [4, 5, 6], [1, 2, 3])],
    [(-1, [1, 3, 5], [2, 4, 6]), (1, [4, 5, 6], [1, 2, 3])],
    [(1, [1, 2, 5], [3, 4, 6]), (-1, [1, 3, 4], [2, 5, 6])],
    [(1, [1, 2, 6], [3, 4, 5]), (1, [1, 3, 4], [2, 5, 6])],
    [(1, [1, 2, 4], [3, 5, 6]), (-1, [1, 3, 5], [2, 4, 6])],
    [(1, [1, 2, 4], [3, 5, 6]), (1, [1, 4, 6], [2, 3, 5])],
    [(1, [1, 5, 6], [2, 3, 4]), (-1, [1, 3, 5], [2, 4, 6])],
    [(-1, [1, 3, 4], [2, 5, 6]), (1, [2, 3, 5], [1, 4, 6])],
    [(1, [1, 2, 6], [3, 4, 5]), (-1, [1, 3, 6], [2, 4, 5])],
    [(1, [1, 3, 4], [2, 5, 6]), (-1, [1, 3, 5], [2, 4, 6])],
    [(1, [1, 2, 4], [3, 5, 6]), (-1, [1, 2, 5], [3, 4, 6])],
    [(1, [1, 2, 5], [3, 4, 6]), (-1, [1, 3, 5], [2, 4, 6])],
    [(1, [1, 2, 4], [3, 5, 6]), (-1, [1, 3, 4], [2, 5, 6])],
];

/// The 14 binomial minors evaluated at `q / q_{123}`.
pub fn gr36_minor_values(q: &PlueckerVector) -> Result<Vec<Rational>> {
    if (q.n(), q.k()) != (6, 3) {
        return Err(Error::Dimension(format!("expected a point of Gr(3,6), got n = {}, d+1 = {}", q.n(), q.k())));
    }
    let top = q.get(Subset::of(&[1, 2, 3]));
    if top.is_zero() {
        return Err(Error::Precondition("q_{1,2,3} = 0".into()));
    }
    let q = q.scale(&top.recip());
    Ok(GR36_MINORS
        .iter()
        .map(|terms| {
            terms
                .iter()
                .map(|(c, i, j)| Rational::from_integer((*c).into()) * q.get(Subset::of(i)) * q.get(Subset::of(j)))
                .sum()
        })
        .collect())
}

/// Seeded search for a generic `X`: `(d+1) × n` integer bases with entries in
/// `[−9, 9]`, redrawn until [`genericity_report`] accepts.
pub fn sample_generic(n: usize, d: usize, seed: u64) -> Result<SubspaceInput> {
    if d == 0 || d + 1 >= n {
        return Err(Error::Dimension(format!("need 1 ≤ d and d+1 < n, got n = {n}, d = {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLE_RETRY_CAP {
        let rows: Vec<Vec<Rational>> = (0..=d)
            .map(|_| {
                (0..n)
                    .map(|_| Rational::from_integer(rng.gen_range(-SAMPLE_ENTRY_BOUND..=SAMPLE_ENTRY_BOUND).into()))
                    .collect()
            })
            .collect();
        let basis = QMatrix::from_rows(rows)?;
        if basis.rank() != d + 1 {
            continue;
        }
        let x = SubspaceInput::from_basis(basis)?;
        if genericity_report(&x)?.is_generic {
            return Ok(x);
        }
    }
    Err(Error::RetryCap(SAMPLE_RETRY_CAP))
}

/// Every `(d+1)`-set of columns with nonzero minor, for cross-checking the matroid of `V`.
#[doc(hidden)]
pub fn nonzero_minor_columns(v: &QMatrix) -> Vec<u64> {
    let k = v.rows();
    colex_subsets(v.cols(), k)
        .into_iter()
        .map(Subset::bits)
        .filter(|&m| {
            let cols: Vec<usize> = bits(m).collect();
            !v.select_columns(&cols).det().expect("square").is_zero()
        })
        .collect()
}
