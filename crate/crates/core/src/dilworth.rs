//! Dilworth truncations, complement relabeling, and the randomized geometric realization.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::foundation::{colex_subsets, QMatrix, Rational, Subset};
use crate::matroid::{bits, matroid_of_points, matroid_of_vectors, Matroid};

/// Bound on the entries of the random matrix cutting out `H`.
pub const GEOMETRIC_ENTRY_BOUND: i64 = 1000;
/// Draws of `H` attempted before giving up.
pub const GEOMETRIC_RETRY_CAP: usize = 64;

/// Label of a flat: member labels joined by `,`, or braced when a member label contains `,`.
pub fn flat_label(m: &Matroid, flat: u64) -> String {
    let members = m.labels_of(flat);
    if members.iter().any(|l| l.contains(',')) {
        members.iter().map(|l| format!("{{{l}}}")).collect()
    } else {
        members.join(",")
    }
}

/// Rank-`k` flats in increasing mask order (colex on the underlying element sets).
fn flats_of_rank(m: &Matroid, k: usize) -> Result<Vec<u64>> {
    if k == 0 || k > m.rank() {
        return Err(Error::InvalidInput(format!("truncation level k = {k} outside 1..={}", m.rank())));
    }
    Ok(m.flats().of_rank(k).collect())
}

/// `Dil_k(M)`: ground set the rank-`k` flats; `{J_1,…,J_m}` independent iff every
/// nonempty subfamily `S` has `rank_M(∪S) ≥ |S| + k − 1`.
pub fn dilworth(m: &Matroid, k: usize) -> Result<Matroid> {
    let flats = flats_of_rank(m, k)?;
    if flats.len() > crate::matroid::MAX_GROUND {
        return Err(Error::Dimension(format!("{} rank-{k} flats exceed the ground-set cap", flats.len())));
    }
    let mut search = Search { m, k, flats: &flats, best: 0, bases: Vec::new() };
    search.extend(&mut Vec::new(), 0, 0);
    let labels = flats.iter().map(|&f| flat_label(m, f)).collect();
    Matroid::from_bases(labels, search.bases)
}

struct Search<'a> {
    m: &'a Matroid,
    k: usize,
    flats: &'a [u64],
    best: usize,
    bases: Vec<u64>,
}

impl Search<'_> {
    /// Every subfamily containing the newest member `chosen.last()` passes the rank test.
    fn newest_is_compatible(&self, chosen: &[usize]) -> bool {
        let (&newest, rest) = chosen.split_last().expect("nonempty");
        (0u64..1 << rest.len()).all(|sub| {
            let union = bits(sub).fold(self.flats[newest], |acc, t| acc | self.flats[rest[t]]);
            self.m.rank_of(union) + 1 >= sub.count_ones() as usize + 1 + self.k
        })
    }

    fn extend(&mut self, chosen: &mut Vec<usize>, mask: u64, start: usize) {
        match chosen.len().cmp(&self.best) {
            std::cmp::Ordering::Greater => {
                self.best = chosen.len();
                self.bases = vec![mask];
            }
            std::cmp::Ordering::Equal => self.bases.push(mask),
            std::cmp::Ordering::Less => {}
        }
        for next in start..self.flats.len() {
            chosen.push(next);
            if self.newest_is_compatible(chosen) {
                self.extend(chosen, mask | (1 << next), next + 1);
            }
            chosen.pop();
        }
    }
}

/// Replaces every label (a subset of `[n]`) by its complement in `[n]`.
pub fn relabel_complements(d: &Matroid, n: usize) -> Result<Matroid> {
    d.relabeled(|label| {
        let s: Subset = label.parse()?;
        if !s.within(n) {
            return Err(Error::InvalidInput(format!("label {label:?} is not a subset of [{n}]")));
        }
        Ok(s.complement(n).label())
    })
}

/// `tilde-Dil_k(U_{n,n})` with ground labels the `(n−k)`-subsets of `[n]`.
pub fn tilde_dilworth_uniform(n: usize, k: usize) -> Result<Matroid> {
    let free = Matroid::uniform(n, (1..=n).map(|e| Subset::singleton(e).label()).collect())?;
    relabel_complements(&dilworth(&free, k)?, n)
}

/// Realizes `Dil_k` of the column matroid of `points` as `{h_F = H ∩ span(F)}` for a
/// seeded random `H` of codimension `k − 1`.
pub fn geometric_dilworth(points: &QMatrix, labels: Vec<String>, k: usize, seed: u64) -> Result<Matroid> {
    let m = matroid_of_points(points, labels)?;
    let flats = flats_of_rank(&m, k)?;
    let e = points.rows();
    let spans: Vec<QMatrix> = flats
        .iter()
        .map(|&f| {
            let basis = m.bases().iter().map(|b| b & f).find(|s| s.count_ones() as usize == k);
            let cols: Vec<usize> = bits(basis.expect("rank-k flat holds k independent points")).collect();
            points.select_columns(&cols)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GEOMETRIC_RETRY_CAP {
        let rows: Vec<Vec<Rational>> = (0..k - 1)
            .map(|_| {
                (0..e)
                    .map(|_| {
                        Rational::from_integer(rng.gen_range(-GEOMETRIC_ENTRY_BOUND..=GEOMETRIC_ENTRY_BOUND).into())
                    })
                    .collect()
            })
            .collect();
        let cut = if rows.is_empty() { QMatrix::zeros(0, e) } else { QMatrix::from_rows(rows)? };
        if cut.rank() != k - 1 {
            continue;
        }
        let points_in_h: Option<Vec<Vec<Rational>>> = spans
            .iter()
            .map(|span| {
                let kernel = cut.mul(span).ok()?.kernel_basis();
                (kernel.rows() == 1).then(|| {
                    let coeffs = QMatrix::from_rows(vec![kernel.row(0).to_vec()]).ok()?.transpose();
                    Some(span.mul(&coeffs).ok()?.column(0))
                })?
            })
            .collect();
        if let Some(vectors) = points_in_h {
            let labels = flats.iter().map(|&f| flat_label(&m, f)).collect();
            return matroid_of_vectors(&vectors, labels);
        }
    }
    Err(Error::RetryCap(GEOMETRIC_RETRY_CAP))
}

/// Closed-form circuits of `tilde-Dil_{n−2}(U_{n,n})` on the pairs of `[n]`: the stars
/// `{{a,a1},{a,a2},{a,a3}}` and the 4-sets of pairs containing no star.
pub fn tilde_dil_nminus2_circuits(n: usize) -> Result<Vec<Vec<String>>> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("need n ≥ 4, got {n}")));
    }
    let pairs = colex_subsets(n, 2);
    let is_star = |t: &[Subset]| {
        let common = t.iter().fold(Subset::full(n), |acc, p| acc.intersection(*p));
        common.len() == 1
    };
    let mut out: Vec<Vec<usize>> = Vec::new();
    let index_sets = |size: usize| colex_subsets(pairs.len(), size);
    for t in index_sets(3) {
        let members: Vec<Subset> = t.iter().map(|k| pairs[k - 1]).collect();
        if is_star(&members) {
            out.push(t.iter().map(|k| k - 1).collect());
        }
    }
    for q in index_sets(4) {
        let members: Vec<Subset> = q.iter().map(|k| pairs[k - 1]).collect();
        let has_star = (0..4).any(|skip| {
            let t: Vec<Subset> = (0..4).filter(|&x| x != skip).map(|x| members[x]).collect();
            is_star(&t)
        });
        if !has_star {
            out.push(q.iter().map(|k| k - 1).collect());
        }
    }
    out.sort();
    Ok(out.into_iter().map(|c| c.into_iter().map(|k| pairs[k].label()).collect()).collect())
}

/// Circuits as order-independent label sets, for comparisons across ground orders.
pub fn circuit_label_sets(circuits: &[Vec<String>]) -> BTreeSet<BTreeSet<String>> {
    circuits.iter().map(|c| c.iter().cloned().collect()).collect()
}
