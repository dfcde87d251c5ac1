//! The two exchange identities behind "incidence relations imply Plücker
//! relations up to saturation", expanded and compared term by term.

use serde::Serialize;

use super::poly::{SparsePoly, VarKind};
use super::relations::{incidence_relation, plucker_relation};
use crate::error::{Error, Result};
use crate::foundation::{colex_subsets, Subset};

/// Outcome of an exact expansion: `residual = LHS - RHS`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    pub residual: SparsePoly,
}

impl IdentityCheck {
    fn of(lhs: SparsePoly, rhs: SparsePoly) -> Self {
        let residual = &lhs - &rhs;
        IdentityCheck { holds: residual.is_zero(), residual }
    }
}

/// Deliberate sign corruptions for negative controls.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// Flips the sign exponent of the first summand on the incidence side.
    FlipFirstPhi,
    /// Adds one to the exponent of the `P_{B\b}` term of the column-moving identity.
    FlipBeta,
}

fn sgn(x: Subset, y: Subset, t: usize) -> i64 {
    (x.count_upto(t) + y.count_upto(t)) as i64
}

fn sign_of(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn poly_p(s: Subset) -> SparsePoly {
    SparsePoly::p(s)
}

fn poly_q(s: Subset) -> SparsePoly {
    SparsePoly::q(s)
}

fn r(a: Subset, b: Subset) -> SparsePoly {
    plucker_relation(a, b, VarKind::P).expect("sizes checked by caller")
}

fn inc(a: Subset, b: Subset) -> SparsePoly {
    incidence_relation(a, b).expect("sizes checked by caller")
}

fn in2pl_pre(a: Subset, b: Subset, c: Subset, elem: usize) -> Result<()> {
    if a.is_empty() || b.len() != a.len() + 2 || c.len() != a.len() + 2 {
        return Err(Error::Precondition(format!(
            "need |A| = d-1 ≥ 0 and |B| = |C| = d+1, got {}, {}, {}",
            a.len(),
            b.len(),
            c.len()
        )));
    }
    if !a.contains(elem) || c.contains(elem) {
        return Err(Error::Precondition(format!("a = {elem} must lie in A \\ C")));
    }
    Ok(())
}

/// `φ_i` of the first exchange identity, `i ∈ B \ (A\a)`.
///
/// The closed form covers `i ∈ B \ A`; the summand `i = a` (present when `a ∈ B`)
/// carries one extra sign flip.
pub fn in2pl_phi(a: Subset, b: Subset, c: Subset, elem: usize, i: usize) -> i64 {
    let phi = sgn(a, b, i) - sgn(a.without(elem).with(i), c.with(elem), elem);
    if i == elem {
        phi + 1
    } else {
        phi
    }
}

/// `ψ_j` of the first exchange identity computed through the auxiliary index `i ∈ B\A`, `i ≠ j`.
pub fn in2pl_psi(a: Subset, b: Subset, c: Subset, elem: usize, j: usize, i: usize) -> i64 {
    let base = a.without(elem);
    in2pl_phi(a, b, c, elem, i) + sgn(base.with(i), c.with(elem), j) - sgn(base.with(j), b, i)
}

/// The canonical `ψ_j`, using the smallest admissible auxiliary index.
fn in2pl_psi_canonical(a: Subset, b: Subset, c: Subset, elem: usize, j: usize) -> i64 {
    let i = b.difference(a).iter().find(|&i| i != j).expect("|B \\ A| ≥ 2");
    in2pl_psi(a, b, c, elem, j, i)
}

/// Expands
/// `Σ_{i∈B\(A\a)} (-1)^{φ_i} P_{B\i} I_{A\a∪i, C∪a} = R_{A,B} Q_C + Σ_{j∈C\A} (-1)^{ψ_j} R_{A\a∪j, B} Q_{C\j∪a}`.
pub fn verify_in2pl(a: Subset, b: Subset, c: Subset, elem: usize) -> Result<IdentityCheck> {
    verify_in2pl_with(a, b, c, elem, Fault::None)
}

#[doc(hidden)]
pub fn verify_in2pl_with(a: Subset, b: Subset, c: Subset, elem: usize, fault: Fault) -> Result<IdentityCheck> {
    in2pl_pre(a, b, c, elem)?;
    let (lhs, rhs) = in2pl_sides(a, b, c, elem, fault);
    Ok(IdentityCheck::of(lhs.into_iter().map(|(s, p, (x, y))| (&poly_p(p) * &inc(x, y)).scale_i(s)).sum(), rhs))
}

/// Incidence-side summands `(sign, P-index, (A', B'))` and the Plücker side as a polynomial.
type IncidenceTerms = Vec<(i32, Subset, (Subset, Subset))>;
/// `(sign, (A, B), Q-index)`: one term moving the Plücker relation toward the pivot.
type Move = (i32, (Subset, Subset), Subset);

fn in2pl_sides(a: Subset, b: Subset, c: Subset, elem: usize, fault: Fault) -> (IncidenceTerms, SparsePoly) {
    let base = a.without(elem);
    let ca = c.with(elem);
    let lhs = b
        .difference(base)
        .iter()
        .enumerate()
        .map(|(k, i)| {
            let mut phi = in2pl_phi(a, b, c, elem, i);
            if k == 0 && fault == Fault::FlipFirstPhi {
                phi += 1;
            }
            (sign_of(phi), b.without(i), (base.with(i), ca))
        })
        .collect();
    let rhs = in2pl_plucker_side(a, b, c, elem);
    (lhs, rhs)
}

/// The `(sign, A', Q-index)` triples of `Σ_j (-1)^{ψ_j} R_{A',B} Q_{C\j∪a}`.
fn in2pl_moves(a: Subset, b: Subset, c: Subset, elem: usize) -> Vec<(i32, Subset, Subset)> {
    c.difference(a)
        .iter()
        .map(|j| (sign_of(in2pl_psi_canonical(a, b, c, elem, j)), a.without(elem).with(j), c.without(j).with(elem)))
        .collect()
}

fn in2pl_plucker_side(a: Subset, b: Subset, c: Subset, elem: usize) -> SparsePoly {
    let mut rhs = &r(a, b) * &poly_q(c);
    for (s, aj, qj) in in2pl_moves(a, b, c, elem) {
        rhs = &rhs + &(&r(aj, b) * &poly_q(qj)).scale_i(s);
    }
    rhs
}

fn move_b_pre(a: Subset, b: Subset, c: Subset, elem: usize) -> Result<()> {
    if b.len() != a.len() + 2 || c.len() != a.len() + 2 {
        return Err(Error::Precondition(format!(
            "need |A| = d-1 and |B| = |C| = d+1, got {}, {}, {}",
            a.len(),
            b.len(),
            c.len()
        )));
    }
    if !a.is_subset_of(c) {
        return Err(Error::Precondition("A must be contained in C".into()));
    }
    if !b.contains(elem) || c.contains(elem) {
        return Err(Error::Precondition(format!("b = {elem} must lie in B \\ C")));
    }
    Ok(())
}

fn move_b_beta(b: Subset, c: Subset, elem: usize) -> i64 {
    sgn(b, c, elem) + 1
}

fn move_b_phi(a: Subset, b: Subset, c: Subset, elem: usize, i: usize) -> i64 {
    sgn(a, b, i) + (b.without(i).count_upto(elem) + c.count_upto(elem)) as i64
}

fn move_b_psi(b: Subset, c: Subset, elem: usize, j: usize) -> i64 {
    sgn(b, c, j) + sgn(b, c, elem)
}

/// Expands
/// `R_{A,B} Q_C + Σ_{j∈C\B} (-1)^{ψ_j} R_{A,B\b∪j} Q_{C∪b\j}
///  = (-1)^β P_{B\b} I_{A,C∪b} + Σ_{i∈B\A, i≠b} (-1)^{φ_i} P_{A∪i} I_{B\i\b, C∪b}`.
pub fn verify_move_b(a: Subset, b: Subset, c: Subset, elem: usize) -> Result<IdentityCheck> {
    verify_move_b_with(a, b, c, elem, Fault::None)
}

#[doc(hidden)]
pub fn verify_move_b_with(a: Subset, b: Subset, c: Subset, elem: usize, fault: Fault) -> Result<IdentityCheck> {
    move_b_pre(a, b, c, elem)?;
    let (incid, plucker) = move_b_sides(a, b, c, elem, fault);
    Ok(IdentityCheck::of(plucker, incid.into_iter().map(|(s, p, (x, y))| (&poly_p(p) * &inc(x, y)).scale_i(s)).sum()))
}

fn move_b_moves(b: Subset, c: Subset, elem: usize) -> Vec<(i32, Subset, Subset)> {
    c.difference(b)
        .iter()
        .map(|j| (sign_of(move_b_psi(b, c, elem, j)), b.without(elem).with(j), c.with(elem).without(j)))
        .collect()
}

fn move_b_sides(a: Subset, b: Subset, c: Subset, elem: usize, fault: Fault) -> (IncidenceTerms, SparsePoly) {
    let cb = c.with(elem);
    let mut beta = move_b_beta(b, c, elem);
    if fault == Fault::FlipBeta {
        beta += 1;
    }
    let mut incid = vec![(sign_of(beta), b.without(elem), (a, cb))];
    for i in b.difference(a).iter().filter(|&i| i != elem) {
        incid.push((sign_of(move_b_phi(a, b, c, elem, i)), a.with(i), (b.without(i).without(elem), cb)));
    }
    let mut plucker = &r(a, b) * &poly_q(c);
    for (s, bj, qj) in move_b_moves(b, c, elem) {
        plucker = &plucker + &(&r(a, bj) * &poly_q(qj)).scale_i(s);
    }
    (incid, plucker)
}

/// All `(A, B, C, a)` with `|A| = d-1`, `|B| = |C| = d+1` in `[n]` and `a ∈ A\C`.
pub fn in2pl_tuples(n: usize, d: usize) -> Vec<(Subset, Subset, Subset, usize)> {
    let mut out = Vec::new();
    if d == 0 || d + 1 > n {
        return out;
    }
    for a in colex_subsets(n, d - 1) {
        for b in colex_subsets(n, d + 1) {
            for c in colex_subsets(n, d + 1) {
                for e in a.difference(c).iter() {
                    out.push((a, b, c, e));
                }
            }
        }
    }
    out
}

/// All `(A, B, C, b)` with `|A| = d-1`, `|B| = |C| = d+1` in `[n]`, `A ⊆ C` and `b ∈ B\C`.
pub fn move_b_tuples(n: usize, d: usize) -> Vec<(Subset, Subset, Subset, usize)> {
    let mut out = Vec::new();
    if d == 0 || d + 1 > n {
        return out;
    }
    for a in colex_subsets(n, d - 1) {
        for b in colex_subsets(n, d + 1) {
            for c in colex_subsets(n, d + 1).into_iter().filter(|c| a.is_subset_of(*c)) {
                for e in b.difference(c).iter() {
                    out.push((a, b, c, e));
                }
            }
        }
    }
    out
}

/// Pieces reused by the certificate builder.
pub(crate) mod steps {
    use super::*;

    /// `Q_C R_{A,B} = Σ incid - Σ sign · Q_{idx} R_{A',B}` via the first identity.
    pub(crate) fn in2pl_step(a: Subset, b: Subset, c: Subset, elem: usize) -> (IncidenceTerms, Vec<Move>) {
        let (incid, _) = in2pl_sides(a, b, c, elem, Fault::None);
        let moves = in2pl_moves(a, b, c, elem).into_iter().map(|(s, aj, q)| (s, (aj, b), q)).collect();
        (incid, moves)
    }

    /// Same shape, via the column-moving identity.
    pub(crate) fn move_b_step(a: Subset, b: Subset, c: Subset, elem: usize) -> (IncidenceTerms, Vec<Move>) {
        let (incid, _) = move_b_sides(a, b, c, elem, Fault::None);
        let moves = move_b_moves(b, c, elem).into_iter().map(|(s, bj, q)| (s, (a, bj), q)).collect();
        (incid, moves)
    }
}
