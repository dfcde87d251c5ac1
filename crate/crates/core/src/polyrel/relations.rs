use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly::{PQVar, SparsePoly, VarKind};
use crate::error::{Error, Result};
use crate::foundation::{plucker_sign, PlueckerVector, Rational, Subset};

/// `R_{A,B} = Σ_{i ∈ B\A} (-1)^{|[i]∩A| + |[i]∩B|} X_{A∪i} X_{B\i}` in the chosen variables.
pub fn plucker_relation(a: Subset, b: Subset, kind: VarKind) -> Result<SparsePoly> {
    if b.len() != a.len() + 2 {
        return Err(Error::Dimension(format!(
            "Plücker relation needs |B| = |A| + 2, got |A| = {}, |B| = {}",
            a.len(),
            b.len()
        )));
    }
    let var = |s| PQVar { kind, index: s };
    Ok(b.difference(a)
        .iter()
        .map(|i| {
            SparsePoly::term(Rational::from_integer(plucker_sign(a, b, i).into()), &[var(a.with(i)), var(b.without(i))])
        })
        .sum())
}

/// `I_{A,B} = Σ_{i ∈ B\A} (-1)^{|[i]∩A| + |[i]∩B|} P_{A∪i} Q_{B\i}`.
pub fn incidence_relation(a: Subset, b: Subset) -> Result<SparsePoly> {
    if b.len() < a.len() + 2 {
        return Err(Error::Dimension(format!(
            "incidence relation needs |B| ≥ |A| + 2, got |A| = {}, |B| = {}",
            a.len(),
            b.len()
        )));
    }
    Ok(b.difference(a)
        .iter()
        .map(|i| {
            SparsePoly::term(
                Rational::from_integer(plucker_sign(a, b, i).into()),
                &[PQVar::p(a.with(i)), PQVar::q(b.without(i))],
            )
        })
        .sum())
}

/// `numerator / Q_{[d+1]}^{denom_power}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentRel {
    pub numerator: SparsePoly,
    pub denom_power: u32,
    /// The inverted variable's index set, `[d+1]`.
    pub pivot: Subset,
}

impl LaurentRel {
    pub fn polynomial(p: SparsePoly, pivot: Subset) -> Self {
        LaurentRel { numerator: p, denom_power: 0, pivot }
    }

    /// Cancels common powers of `Q_pivot` so the denominator power is minimal.
    pub fn normalized(mut self) -> Self {
        if self.numerator.is_zero() {
            self.denom_power = 0;
            return self;
        }
        let v = PQVar::q(self.pivot);
        let k = self.numerator.power_dividing(v).min(self.denom_power);
        if k > 0 {
            self.numerator = self.numerator.divide_by_var_power(v, k).expect("divisible");
            self.denom_power -= k;
        }
        self
    }

    /// Numerator brought to denominator power `k ≥ denom_power`.
    pub fn numerator_at(&self, k: u32) -> SparsePoly {
        assert!(k >= self.denom_power);
        &self.numerator * &SparsePoly::q(self.pivot).pow(k - self.denom_power)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
}

/// The recursive relation `rrel_{A,B}` for `A ⊆ [d+1]`, `B ⊆ [n] \ [d+1]`, `|A ∪ B| = d`.
///
/// `rrel_{A,∅} = 0`; otherwise, with `b = max B`,
/// `rrel_{A,B} = -I_{A∪B\b, [d+1]∪b} + Q_{[d+1]}^{-1} Σ_{i ∈ [d+1]\A} ±Q_{[d+1]\i∪b} rrel_{A∪i, B\b}`.
/// `A = ∅` is accepted.
pub fn rrel(d: usize, n: usize, a: Subset, b: Subset) -> Result<LaurentRel> {
    let top = Subset::full(d + 1);
    if d == 0 || d + 1 > n {
        return Err(Error::Precondition(format!("need 1 ≤ d < n, got d = {d}, n = {n}")));
    }
    if !a.is_subset_of(top) || !b.within(n) || !b.intersection(top).is_empty() {
        return Err(Error::Precondition(format!(
            "rrel needs A ⊆ [{}] and B ⊆ [{n}] \\ [{}], got A = {{{a}}}, B = {{{b}}}",
            d + 1,
            d + 1
        )));
    }
    if a.len() + b.len() != d {
        return Err(Error::Precondition(format!("rrel needs |A| + |B| = {d}, got {}", a.len() + b.len())));
    }
    Ok(rrel_unchecked(d, a, b))
}

fn rrel_unchecked(d: usize, a: Subset, b: Subset) -> LaurentRel {
    let top = Subset::full(d + 1);
    let Some(bmax) = b.max() else {
        return LaurentRel::polynomial(SparsePoly::zero(), top);
    };
    let head = -&incidence_relation(a.union(b).without(bmax), top.with(bmax)).expect("sizes fixed by construction");
    let rest = b.without(bmax);
    let subs: Vec<(i32, Subset, LaurentRel)> = top
        .difference(a)
        .iter()
        .map(|i| {
            let sign = plucker_sign(a, top, i);
            (sign, top.without(i).with(bmax), rrel_unchecked(d, a.with(i), rest))
        })
        .filter(|(_, _, r)| !r.is_zero())
        .collect();
    if subs.is_empty() {
        return LaurentRel::polynomial(head, top).normalized();
    }
    let k = subs.iter().map(|(_, _, r)| r.denom_power).max().unwrap_or(0);
    // head + Q^{-1} Σ sign·Q_J·(num_i / Q^{k_i}) = (head·Q^{k+1} + Σ sign·Q_J·num_i·Q^{k-k_i}) / Q^{k+1}
    let mut num = &head * &SparsePoly::q(top).pow(k + 1);
    for (sign, j, r) in subs {
        num = &num + &(&SparsePoly::q(j) * &r.numerator_at(k)).scale_i(sign);
    }
    LaurentRel { numerator: num, denom_power: k + 1, pivot: top }.normalized()
}

/// Substitutes `Q_J ↦ q_J` in a polynomial.
pub fn evaluate(poly: &SparsePoly, q: &PlueckerVector) -> SparsePoly {
    poly.substitute_q(|j| q.get(j))
}

/// Substitutes `Q_J ↦ q_J` and divides by `q_pivot^{denom_power}`.
pub fn evaluate_laurent(rel: &LaurentRel, q: &PlueckerVector) -> Result<SparsePoly> {
    let pivot = q.get(rel.pivot);
    if rel.denom_power > 0 && pivot.is_zero() {
        return Err(Error::Precondition(format!("q_{{{}}} = 0 cannot be inverted", rel.pivot)));
    }
    let mut factor = Rational::one();
    for _ in 0..rel.denom_power {
        factor /= &pivot;
    }
    Ok(evaluate(&rel.numerator, q).scale(&factor))
}

/// Coefficients of `rrel_{A,B}` at `q` as a linear form in the `P_I`.
pub fn evaluate_rrel(rel: &LaurentRel, q: &PlueckerVector) -> Result<BTreeMap<Subset, Rational>> {
    evaluate_laurent(rel, q)?.linear_form()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{rat, ratio, QMatrix};

    fn s(e: &[usize]) -> Subset {
        Subset::of(e)
    }

    fn pq(c: i64, p: &[usize], q: &[usize]) -> SparsePoly {
        SparsePoly::term(rat(c), &[PQVar::p(s(p)), PQVar::q(s(q))])
    }

    fn pp(c: i64, x: &[usize], y: &[usize]) -> SparsePoly {
        SparsePoly::term(rat(c), &[PQVar::p(s(x)), PQVar::p(s(y))])
    }

    fn sum(v: Vec<SparsePoly>) -> SparsePoly {
        v.into_iter().sum()
    }

    #[test]
    fn plucker_relation_three_term() {
        let r = plucker_relation(s(&[1]), s(&[2, 3, 4]), VarKind::P).unwrap();
        let expected = sum(vec![pp(1, &[1, 2], &[3, 4]), pp(-1, &[1, 3], &[2, 4]), pp(1, &[1, 4], &[2, 3])]);
        assert_eq!(r, expected);
        // i = 2: |[2]∩{1}| + |[2]∩{2,3,4}| = 2, so P12·P34 enters with +1
        assert_eq!(plucker_sign(s(&[1]), s(&[2, 3, 4]), 2), 1);
    }

    #[test]
    fn plucker_relation_degenerate_cancels() {
        let r = plucker_relation(s(&[1]), s(&[1, 2, 3]), VarKind::P).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn plucker_relation_n5() {
        let r = plucker_relation(s(&[5]), s(&[1, 2, 3]), VarKind::P).unwrap();
        let expected = sum(vec![pp(-1, &[1, 5], &[2, 3]), pp(1, &[2, 5], &[1, 3]), pp(-1, &[3, 5], &[1, 2])]);
        assert_eq!(r, expected);
        assert!(plucker_relation(s(&[5]), s(&[1, 2]), VarKind::Q).is_err());
    }

    #[test]
    fn incidence_examples() {
        let r = incidence_relation(s(&[1]), s(&[1, 2, 3, 4])).unwrap();
        let expected = sum(vec![pq(-1, &[1, 2], &[1, 3, 4]), pq(1, &[1, 3], &[1, 2, 4]), pq(-1, &[1, 4], &[1, 2, 3])]);
        assert_eq!(r, expected);

        let r = incidence_relation(s(&[2]), s(&[1, 2, 3, 4])).unwrap();
        let expected = sum(vec![pq(-1, &[1, 2], &[2, 3, 4]), pq(1, &[2, 3], &[1, 2, 4]), pq(-1, &[2, 4], &[1, 2, 3])]);
        assert_eq!(r, expected);

        // B \ A empty: only possible with |B| ≤ |A|, which the size check rejects
        assert!(incidence_relation(s(&[1, 2]), s(&[1, 2])).is_err());
    }

    #[test]
    fn rrel_single_b() {
        let r = rrel(2, 5, s(&[1]), s(&[4])).unwrap();
        assert_eq!(r.denom_power, 0);
        let expected = sum(vec![pq(1, &[1, 2], &[1, 3, 4]), pq(-1, &[1, 3], &[1, 2, 4]), pq(1, &[1, 4], &[1, 2, 3])]);
        assert_eq!(r.numerator, expected);
    }

    #[test]
    fn rrel_base_case_is_zero() {
        let r = rrel(2, 5, s(&[1, 2]), Subset::EMPTY).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn rrel_rejects_bad_index_sets() {
        assert!(rrel(2, 5, s(&[4]), s(&[5])).is_err());
        assert!(rrel(2, 5, s(&[1]), s(&[2])).is_err());
        assert!(rrel(2, 5, s(&[1]), s(&[4, 5])).is_err());
    }

    /// The `A = ∅, B = {4,5}` relation agrees with the closed form
    /// `P45 Q123 - P12 Q345 + P13 Q245 - P23 Q145` modulo the three 3-term
    /// Plücker relations among the `Q`s used to simplify it.
    #[test]
    fn rrel_empty_a_matches_closed_form_modulo_q_relations() {
        let r = rrel(2, 5, Subset::EMPTY, s(&[4, 5])).unwrap();
        let closed = sum(vec![
            pq(1, &[4, 5], &[1, 2, 3]),
            pq(-1, &[1, 2], &[3, 4, 5]),
            pq(1, &[1, 3], &[2, 4, 5]),
            pq(-1, &[2, 3], &[1, 4, 5]),
        ]);
        let top = s(&[1, 2, 3]);
        let diff = &r.numerator - &(&closed * &SparsePoly::q(top).pow(r.denom_power));
        assert!(!diff.is_zero(), "the unreduced recursion is not literally the closed form");

        // Q_{[3]\a_i ∪ 5} Q_{[3]\a_j ∪ 4} - Q_{[3]\a_j ∪ 5} Q_{[3]\a_i ∪ 4} - Q_{[3]} Q_{[3]\{a_i,a_j\} ∪ 45}
        let qq = |x: &[usize], y: &[usize]| SparsePoly::term(rat(1), &[PQVar::q(s(x)), PQVar::q(s(y))]);
        let rel = |ai: usize, aj: usize| {
            let t = |drop: usize, add: usize| top.without(drop).with(add).elements();
            let rest = top.without(ai).without(aj).with(4).with(5).elements();
            &(&qq(&t(ai, 5), &t(aj, 4)) - &qq(&t(aj, 5), &t(ai, 4))) - &qq(&[1, 2, 3], &rest)
        };
        let relations = [rel(1, 2), rel(1, 3), rel(2, 3)];
        for (pmono, coeff) in diff.split_by_p() {
            assert!(
                in_rational_span(&coeff, &relations),
                "coefficient of {pmono:?} not a combination of the stated relations"
            );
        }

        // and numerically on a point of Gr(3,5)
        let m = QMatrix::from_i64(&[&[1, 0, 0, 2, -1], &[0, 1, 0, 3, 5], &[0, 0, 1, -4, 7]]);
        let q = plucker_point(&m);
        let lhs = evaluate_rrel(&r, &q).unwrap();
        let rhs = evaluate(&closed, &q).linear_form().unwrap();
        assert_eq!(lhs, rhs);
    }

    fn in_rational_span(target: &SparsePoly, basis: &[SparsePoly]) -> bool {
        let monos: Vec<_> = basis
            .iter()
            .chain(std::iter::once(target))
            .flat_map(|p| p.terms().map(|(m, _)| m.clone()))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let row = |p: &SparsePoly| monos.iter().map(|m| p.coefficient(m)).collect::<Vec<_>>();
        let b = QMatrix::from_rows(basis.iter().map(row).collect()).unwrap();
        let mut with = basis.iter().map(row).collect::<Vec<_>>();
        with.push(row(target));
        QMatrix::from_rows(with).unwrap().rank() == b.rank()
    }

    fn plucker_point(m: &QMatrix) -> PlueckerVector {
        let mut q = PlueckerVector::zero(m.cols(), m.rows());
        for j in crate::foundation::colex_subsets(m.cols(), m.rows()) {
            let cols: Vec<usize> = j.iter().map(|e| e - 1).collect();
            q.set(j, m.select_columns(&cols).det().unwrap());
        }
        q
    }

    #[test]
    fn evaluate_matches_first_row_of_u() {
        let mut q = PlueckerVector::zero(5, 3);
        q.set(s(&[1, 2, 3]), rat(1));
        q.set(s(&[1, 3, 4]), ratio(7, 2));
        q.set(s(&[1, 2, 4]), rat(-3));
        let lf = evaluate_rrel(&rrel(2, 5, s(&[1]), s(&[4])).unwrap(), &q).unwrap();
        assert_eq!(lf[&s(&[1, 2])], ratio(7, 2));
        assert_eq!(lf[&s(&[1, 3])], rat(3));
        assert_eq!(lf[&s(&[1, 4])], rat(1));
        assert_eq!(lf.len(), 3);
    }

    #[test]
    fn evaluate_at_zero_vanishes() {
        let q = PlueckerVector::zero(5, 3);
        let poly = incidence_relation(s(&[1]), s(&[1, 2, 3, 4])).unwrap();
        assert!(evaluate(&poly, &q).is_zero());
    }

    #[test]
    fn laurent_needs_invertible_pivot() {
        let r = rrel(2, 5, Subset::EMPTY, s(&[4, 5])).unwrap();
        if r.denom_power > 0 {
            assert!(evaluate_laurent(&r, &PlueckerVector::zero(5, 3)).is_err());
        }
    }
}
