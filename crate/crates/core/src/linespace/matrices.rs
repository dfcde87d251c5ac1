use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use super::input::SubspaceInput;
use crate::error::{Error, Result};
use crate::foundation::{colex_subsets, sort_sign, PlueckerVector, QMatrix, Rational, Subset};
use crate::polyrel::{evaluate_rrel, rrel, LaurentRel};

/// Reduced basis of `X` whose columns on the pivot set form the identity.
///
/// `relabeled` is the same matrix with columns reordered by `permutation`
/// (position `k` holds original column `permutation[k]`), so that its first
/// `d+1` columns are the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WMatrix {
    pub entries: QMatrix,
    pub relabeled: QMatrix,
    pub pivot: Subset,
    pub permutation: Vec<usize>,
}

impl WMatrix {
    pub fn d(&self) -> usize {
        self.entries.rows() - 1
    }

    pub fn n(&self) -> usize {
        self.entries.cols()
    }

    pub fn is_relabeled(&self) -> bool {
        self.permutation.iter().enumerate().any(|(k, &p)| p != k + 1)
    }

    /// Original label of relabeled element `e`.
    pub fn original(&self, e: usize) -> usize {
        self.permutation[e - 1]
    }

    fn original_subset(&self, s: Subset) -> Subset {
        s.iter().map(|e| self.original(e)).fold(Subset::EMPTY, Subset::with)
    }

    /// Sign that turns a relabeled coordinate into the original one.
    fn relabel_sign(&self, s: Subset) -> i32 {
        sort_sign(&s.iter().map(|e| self.original(e)).collect::<Vec<_>>())
    }
}

/// `W` with `w_{ij} = (-1)^{d+1-i} q_{[d+1]\i ∪ j}` after normalizing `q_{[d+1]} = 1`.
///
/// When `q_{[d+1]} = 0` the colex-first `(d+1)`-set `S` with `q_S ≠ 0` is moved to
/// the front (`S` ascending, then the rest ascending).
pub fn reduced_w(x: &SubspaceInput) -> WMatrix {
    let (n, d) = (x.n(), x.d());
    let q = x.plucker();
    let pivot = colex_subsets(n, d + 1).into_iter().find(|s| !q.get(*s).is_zero()).expect("validated input is nonzero");
    let mut permutation = pivot.elements();
    permutation.extend(pivot.complement(n).iter());
    let relabel = |s: Subset| -> Rational {
        let orig: Vec<usize> = s.iter().map(|e| permutation[e - 1]).collect();
        let set = orig.iter().fold(Subset::EMPTY, |acc, &e| acc.with(e));
        q.get(set) * Rational::from_integer(sort_sign(&orig).into())
    };
    let top = Subset::full(d + 1);
    let scale = relabel(top);
    let mut relabeled = QMatrix::zeros(d + 1, n);
    for i in 1..=d + 1 {
        relabeled.set(i - 1, i - 1, Rational::one());
        let sign = if (d + 1 - i) % 2 == 0 { Rational::one() } else { -Rational::one() };
        for j in d + 2..=n {
            relabeled.set(i - 1, j - 1, &sign * relabel(top.without(i).with(j)) / &scale);
        }
    }
    let mut entries = QMatrix::zeros(d + 1, n);
    for (k, &orig) in permutation.iter().enumerate() {
        for r in 0..=d {
            entries.set(r, orig - 1, relabeled.get(r, k).clone());
        }
    }
    WMatrix { entries, relabeled, pivot, permutation }
}

/// Rows `A∪B ⊄ [d+1]` hold the coefficients of the evaluated recursive relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UMatrix {
    pub entries: QMatrix,
    pub row_labels: Vec<Subset>,
    pub col_labels: Vec<Subset>,
    pub pivot: Subset,
}

/// `V_{i,J} = det(W_i^J)`, rows by deleted row `i` increasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VMatrix {
    pub entries: QMatrix,
    pub col_labels: Vec<Subset>,
    pub pivot: Subset,
}

fn check_pivot_normalized(q: &PlueckerVector) -> Result<(usize, usize, Rational)> {
    let (n, k) = (q.n(), q.k());
    if k < 2 || k > n {
        return Err(Error::Dimension(format!("need 2 ≤ d+1 ≤ n, got d+1 = {k}, n = {n}")));
    }
    let top = q.get(Subset::full(k));
    if top.is_zero() {
        return Err(Error::Precondition(format!("q_{{{}}} = 0; relabel coordinates first", Subset::full(k))));
    }
    Ok((n, k - 1, top))
}

/// Symbolic relations for every row of `U` at fixed `(d, n)`.
fn row_relations(n: usize, d: usize) -> Vec<(Subset, LaurentRel)> {
    let top = Subset::full(d + 1);
    let mut cache: HashMap<(Subset, Subset), LaurentRel> = HashMap::new();
    colex_subsets(n, d)
        .into_iter()
        .filter(|r| !r.is_subset_of(top))
        .map(|r| {
            let (a, b) = (r.intersection(top), r.difference(top));
            let rel =
                cache.entry((a, b)).or_insert_with(|| rrel(d, n, a, b).expect("index sets from construction")).clone();
            (r, rel)
        })
        .collect()
}

/// `U` at a Plücker vector with `q_{[d+1]} ≠ 0` (normalized to 1 internally).
pub fn matrix_u(q: &PlueckerVector) -> Result<UMatrix> {
    let (n, d, top) = check_pivot_normalized(q)?;
    let q = q.scale(&top.recip());
    let cols = colex_subsets(n, d);
    let index: BTreeMap<Subset, usize> = cols.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let rows = row_relations(n, d);
    let mut entries = QMatrix::zeros(rows.len(), cols.len());
    for (r, (_, rel)) in rows.iter().enumerate() {
        for (p, c) in evaluate_rrel(rel, &q)? {
            entries.set(r, index[&p], c);
        }
    }
    Ok(UMatrix {
        entries,
        row_labels: rows.into_iter().map(|(r, _)| r).collect(),
        col_labels: cols,
        pivot: Subset::full(d + 1),
    })
}

/// `U` for any `X`, computed in relabeled coordinates and returned in the original ones.
pub fn matrix_u_of(w: &WMatrix) -> Result<UMatrix> {
    let relabeled_q = relabeled_plucker(w)?;
    let u = matrix_u(&relabeled_q)?;
    if !w.is_relabeled() {
        return Ok(u);
    }
    let (n, d) = (w.n(), w.d());
    let cols = colex_subsets(n, d);
    let index: BTreeMap<Subset, usize> = cols.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let mut rows: Vec<(Subset, Vec<Rational>)> = u
        .row_labels
        .iter()
        .enumerate()
        .map(|(r, &label)| {
            let mut row = vec![Rational::zero(); cols.len()];
            for (c, &j) in u.col_labels.iter().enumerate() {
                let v = u.entries.get(r, c);
                if !v.is_zero() {
                    row[index[&w.original_subset(j)]] = v * Rational::from_integer(w.relabel_sign(j).into());
                }
            }
            (w.original_subset(label), row)
        })
        .collect();
    rows.sort_by_key(|(label, _)| *label);
    let row_labels = rows.iter().map(|(l, _)| *l).collect();
    let entries = QMatrix::from_rows(rows.into_iter().map(|(_, r)| r).collect())?;
    Ok(UMatrix { entries, row_labels, col_labels: cols, pivot: w.pivot })
}

fn relabeled_plucker(w: &WMatrix) -> Result<PlueckerVector> {
    super::input::plucker_of_rowspace(&w.relabeled)
}

/// `V` from the reduced `W` in original coordinates.
pub fn matrix_v(w: &WMatrix) -> VMatrix {
    let (n, d) = (w.n(), w.d());
    let cols = colex_subsets(n, d);
    let mut entries = QMatrix::zeros(d + 1, cols.len());
    for i in 0..=d {
        let wi = w.entries.without_row(i);
        for (c, j) in cols.iter().enumerate() {
            let idx: Vec<usize> = j.iter().map(|e| e - 1).collect();
            entries.set(i, c, wi.select_columns(&idx).det().expect("square"));
        }
    }
    VMatrix { entries, col_labels: cols, pivot: w.pivot }
}

/// Which parts of the Gale-duality statement hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaleReport {
    pub product_zero: bool,
    pub rank_u: usize,
    pub rank_v: usize,
    pub expected_rank_u: usize,
    pub expected_rank_v: usize,
    pub coefficient_identity: bool,
}

impl GaleReport {
    pub fn holds(&self) -> bool {
        self.product_zero
            && self.coefficient_identity
            && self.rank_u == self.expected_rank_u
            && self.rank_v == self.expected_rank_v
    }
}

/// `U·Vᵀ = 0`, the ranks, and `u_{R, S\s_i} = -u_{R,R} · V_{i,R}` for every row `R`
/// (with `S` the pivot set; for `S = [d+1]` this reads `u_{A∪B,[d+1]\i} = -det(W_i^{A∪B})`).
pub fn gale_report(u: &UMatrix, v: &VMatrix) -> Result<GaleReport> {
    if u.col_labels != v.col_labels || u.pivot != v.pivot {
        return Err(Error::InvalidInput("U and V have different column labels or pivots".into()));
    }
    let d = v.entries.rows() - 1;
    let product = u.entries.mul(&v.entries.transpose())?;
    let index: BTreeMap<Subset, usize> = u.col_labels.iter().enumerate().map(|(k, s)| (*s, k)).collect();
    let pivot: Vec<usize> = v.pivot.elements();
    let mut coefficient_identity = true;
    'rows: for (r, label) in u.row_labels.iter().enumerate() {
        let diag = u.entries.get(r, index[label]);
        for (i, &s) in pivot.iter().enumerate() {
            let col = index[&v.pivot.without(s)];
            let expected = -(diag * v.entries.get(i, index[label]));
            if *u.entries.get(r, col) != expected {
                coefficient_identity = false;
                break 'rows;
            }
        }
    }
    Ok(GaleReport {
        product_zero: product.is_zero(),
        rank_u: u.entries.rank(),
        rank_v: v.entries.rank(),
        expected_rank_u: u.col_labels.len() - (d + 1),
        expected_rank_v: d + 1,
        coefficient_identity,
    })
}

pub fn gale_check(u: &UMatrix, v: &VMatrix) -> Result<bool> {
    Ok(gale_report(u, v)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{rat, QMatrix};
    use crate::linespace::input::plucker_of_rowspace;

    fn s(e: &[usize]) -> Subset {
        Subset::of(e)
    }

    fn x_of(rows: &[&[i64]]) -> SubspaceInput {
        SubspaceInput::from_basis(QMatrix::from_i64(rows)).unwrap()
    }

    fn gr35() -> SubspaceInput {
        x_of(&[&[1, 0, 0, 2, -1], &[0, 1, 0, 3, 5], &[0, 0, 1, -4, 7]])
    }

    #[test]
    fn w_matches_displayed_form() {
        let x = x_of(&[&[2, 0, 1, 2, -1], &[1, 1, 0, 3, 5], &[0, 3, 1, -4, 7]]);
        let q = x.plucker();
        let q = q.scale(&q.get(s(&[1, 2, 3])).recip());
        let w = reduced_w(&x);
        assert!(!w.is_relabeled());
        let expect = [
            [q.get(s(&[2, 3, 4])), q.get(s(&[2, 3, 5]))],
            [-q.get(s(&[1, 3, 4])), -q.get(s(&[1, 3, 5]))],
            [q.get(s(&[1, 2, 4])), q.get(s(&[1, 2, 5]))],
        ];
        for (i, row) in expect.iter().enumerate() {
            assert_eq!(w.entries.get(i, i), &rat(1));
            assert_eq!(w.entries.get(i, 3), &row[0]);
            assert_eq!(w.entries.get(i, 4), &row[1]);
        }
        assert!(plucker_of_rowspace(&w.entries).unwrap().is_proportional_to(x.plucker()));
    }

    #[test]
    fn w_of_coordinate_subspace() {
        let x = x_of(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let w = reduced_w(&x);
        assert_eq!(w.entries, QMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
    }

    #[test]
    fn relabeling_when_leading_minor_vanishes() {
        let x = x_of(&[&[1, 2, 0, 1, 3], &[2, 4, 1, 0, 1], &[0, 0, 0, 1, 1]]);
        assert!(x.plucker().get(s(&[1, 2, 3])).is_zero());
        let w = reduced_w(&x);
        assert!(w.is_relabeled());
        assert_eq!(w.pivot, s(&[1, 3, 4]));
        assert_eq!(w.permutation, vec![1, 3, 4, 2, 5]);
        assert!(plucker_of_rowspace(&w.entries).unwrap().is_proportional_to(x.plucker()));
        let u = matrix_u_of(&w).unwrap();
        let v = matrix_v(&w);
        assert!(gale_check(&u, &v).unwrap(), "{:?}", gale_report(&u, &v));
    }

    #[test]
    fn u_rows_follow_definition() {
        let x = gr35();
        let q = x.plucker();
        let u = matrix_u(q).unwrap();
        assert_eq!(u.entries.rows(), 7);
        let row = |label: &[usize]| u.row_labels.iter().position(|r| *r == s(label)).unwrap();
        let g = |e: &[usize]| q.get(s(e)) / q.get(s(&[1, 2, 3]));
        let r14 = u.entries.row(row(&[1, 4]));
        assert_eq!(r14[0], g(&[1, 3, 4]));
        assert_eq!(r14[1], -g(&[1, 2, 4]));
        assert_eq!(r14[3], rat(1));
        let r15 = u.entries.row(row(&[1, 5]));
        assert_eq!((&r15[0], &r15[1], &r15[6]), (&g(&[1, 3, 5]), &-g(&[1, 2, 5]), &rat(1)));
        // (3,4): P13 ↦ q234, P23 ↦ -q134
        let r34 = u.entries.row(row(&[3, 4]));
        assert_eq!((&r34[1], &r34[2]), (&g(&[2, 3, 4]), &-g(&[1, 3, 4])));
        // (∅,45): P12 ↦ -q345, P13 ↦ q245, P23 ↦ -q145
        let r45 = u.entries.row(row(&[4, 5]));
        assert_eq!((&r45[0], &r45[1], &r45[2]), (&-g(&[3, 4, 5]), &g(&[2, 4, 5]), &-g(&[1, 4, 5])));
    }

    #[test]
    fn v_column_45_and_pivot_block() {
        let x = gr35();
        let q = x.plucker();
        let g = |e: &[usize]| q.get(s(e)) / q.get(s(&[1, 2, 3]));
        let v = matrix_v(&reduced_w(&x));
        let c45 = v.col_labels.iter().position(|c| *c == s(&[4, 5])).unwrap();
        assert_eq!(v.entries.column(c45), vec![g(&[1, 4, 5]), -g(&[2, 4, 5]), g(&[3, 4, 5])]);
        for i in 1..=3 {
            let c = v.col_labels.iter().position(|c| *c == s(&[1, 2, 3]).without(i)).unwrap();
            for r in 0..3 {
                assert_eq!(v.entries.get(r, c), &rat(i64::from(r + 1 == i)));
            }
        }
    }

    #[test]
    fn v_of_coordinate_subspace_has_zero_columns() {
        let v = matrix_v(&reduced_w(&x_of(&[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0], &[0, 0, 1, 0, 0]])));
        for (c, j) in v.col_labels.iter().enumerate() {
            if !j.is_subset_of(s(&[1, 2, 3])) {
                assert!(v.entries.column(c).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn gale_duality_and_negative_control() {
        let x = gr35();
        let w = reduced_w(&x);
        let mut u = matrix_u_of(&w).unwrap();
        let v = matrix_v(&w);
        let report = gale_report(&u, &v).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.rank_u, 7);
        let bumped = u.entries.get(0, 0) + rat(1);
        u.entries.set(0, 0, bumped);
        assert!(!gale_check(&u, &v).unwrap());
    }

    #[test]
    fn matrix_u_needs_nonzero_leading_minor() {
        let x = x_of(&[&[1, 2, 0, 1, 3], &[2, 4, 1, 0, 1], &[0, 0, 0, 1, 1]]);
        assert!(matrix_u(x.plucker()).is_err());
    }
}
