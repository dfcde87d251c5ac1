use std::collections::BTreeSet;

use super::value::{max_attained_twice, TropPluecker, TropValue};
use crate::error::{Error, Result};
use crate::foundation::{colex_subsets, Rational, Subset};
use crate::matroid::{bits, Matroid};

/// First `(A, B)` for which `max_{i∈B\A}(p_{A∪i} + q_{B\i})` is finite and attained once.
fn first_failure(p: &TropPluecker, q: &TropPluecker) -> Option<(Subset, Subset)> {
    let n = p.n();
    for a in colex_subsets(n, p.rank() - 1) {
        for b in colex_subsets(n, q.rank() + 1) {
            let terms = b.difference(a).iter().map(|i| p.get(a.with(i)).times(&q.get(b.without(i))));
            if !max_attained_twice(terms) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Tropical Plücker relations of rank `m`.
pub fn trop_plucker_check(p: &TropPluecker) -> bool {
    first_failure(p, p).is_none()
}

/// Tropical incidence relations between `p` of rank `d` and `q` of rank `e ≥ d`.
pub fn trop_incidence_check(p: &TropPluecker, q: &TropPluecker) -> Result<bool> {
    if p.n() != q.n() || p.rank() > q.rank() {
        return Err(Error::Dimension(format!(
            "need equal n and rank(p) ≤ rank(q), got n = {}/{} and ranks {}/{}",
            p.n(),
            q.n(),
            p.rank(),
            q.rank()
        )));
    }
    Ok(first_failure(p, q).is_none())
}

/// `c_B` with `(c_B)_i = p_{B\i}` for `i ∈ B` and `−∞` otherwise, shifted so the maximum is 0;
/// one vector per `(m+1)`-set `B` with finite support, in colex order of `B`.
pub fn valuated_circuits(p: &TropPluecker) -> Vec<Vec<TropValue>> {
    let n = p.n();
    colex_subsets(n, p.rank() + 1)
        .into_iter()
        .filter_map(|b| {
            let c: Vec<TropValue> =
                (1..=n).map(|i| if b.contains(i) { p.get(b.without(i)) } else { TropValue::NegInf }).collect();
            let top = c.iter().max().cloned()?;
            let TropValue::Finite(top) = top else { return None };
            let shift = -top;
            Some(c.iter().map(|v| v.shifted(&shift)).collect())
        })
        .collect()
}

/// `x ∈ L(p)`: for every valuated circuit `c`, `max_i(x_i + c_i)` is attained at least twice.
pub fn in_trop_linear_space(p: &TropPluecker, x: &[TropValue]) -> Result<bool> {
    if x.len() != p.n() {
        return Err(Error::Dimension(format!("point has {} entries, expected {}", x.len(), p.n())));
    }
    let circuits: BTreeSet<Vec<TropValue>> = valuated_circuits(p).into_iter().collect();
    Ok(circuits.iter().all(|c| max_attained_twice(c.iter().zip(x).map(|(ci, xi)| ci.times(xi)))))
}

/// Constant-coefficient valuation of a matroid: `0` on bases, `−∞` elsewhere, with ground
/// element `k` (0-based) as coordinate `k + 1`.
pub fn matroid_plucker(m: &Matroid) -> Result<TropPluecker> {
    let entries = m.bases().iter().map(|&b| (Subset::from_bits(b), TropValue::zero())).collect();
    TropPluecker::new(m.len(), m.rank().max(1), entries)
}

/// Bergman-fan membership: for every circuit `C` of `m`, `max_{i∈C} x_i` is attained twice.
pub fn in_bergman_fan(m: &Matroid, x: &[Rational]) -> bool {
    x.len() == m.len()
        && m.circuit_masks().iter().all(|&c| max_attained_twice(bits(c).map(|k| TropValue::Finite(x[k].clone()))))
}

/// Reinterprets a vector over a ground set of `d`-subset labels as a rank-`d` tropical
/// Plücker vector on `[n]`.
pub fn plucker_from_labeled(labels: &[String], x: &[TropValue], n: usize) -> Result<TropPluecker> {
    if labels.len() != x.len() {
        return Err(Error::Dimension("one value per label is required".into()));
    }
    let subsets = labels.iter().map(|l| l.parse::<Subset>()).collect::<Result<Vec<_>>>()?;
    let rank = subsets.first().map(|s| s.len()).unwrap_or(0);
    TropPluecker::new(n, rank, subsets.into_iter().zip(x.iter().cloned()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{rat, ratio};
    use std::collections::BTreeMap;

    fn s(e: &[usize]) -> Subset {
        Subset::of(e)
    }

    fn with_12(v: i64) -> TropPluecker {
        let mut p: BTreeMap<Subset, TropValue> =
            colex_subsets(4, 2).into_iter().map(|k| (k, TropValue::zero())).collect();
        p.insert(s(&[1, 2]), TropValue::int(v));
        TropPluecker::new(4, 2, p).unwrap()
    }

    #[test]
    fn plucker_relations() {
        assert!(trop_plucker_check(&with_12(-1)));
        assert!(trop_plucker_check(&TropPluecker::constant(4, 2, TropValue::zero()).unwrap()));
        assert!(!trop_plucker_check(&with_12(1)));
        assert_eq!(first_failure(&with_12(1), &with_12(1)), Some((s(&[1]), s(&[2, 3, 4]))));
    }

    #[test]
    fn circuits_of_small_vectors() {
        let zero = TropPluecker::constant(4, 2, TropValue::zero()).unwrap();
        let c = valuated_circuits(&zero);
        assert_eq!(c.len(), 4);
        assert_eq!(c[0], vec![TropValue::zero(), TropValue::zero(), TropValue::zero(), TropValue::NegInf]);
        let c = valuated_circuits(&with_12(-1));
        assert_eq!(c[0], vec![TropValue::zero(), TropValue::zero(), TropValue::int(-1), TropValue::NegInf]);
    }

    #[test]
    fn circuit_supports_are_matroid_circuits() {
        let m = Matroid::from_bases((1..=4).map(|k| k.to_string()).collect(), [0b0011, 0b0101, 0b1001, 0b0110, 0b1010])
            .unwrap();
        let p = matroid_plucker(&m).unwrap();
        let circuits: BTreeSet<u64> = m.circuit_masks().into_iter().collect();
        for c in valuated_circuits(&p) {
            let support = c.iter().enumerate().filter(|(_, v)| v.is_finite()).fold(0u64, |acc, (k, _)| acc | 1 << k);
            assert!(circuits.contains(&support));
        }
    }

    #[test]
    fn membership() {
        let u34 = TropPluecker::constant(4, 3, TropValue::zero()).unwrap();
        let fin = |v: &[Rational]| v.iter().cloned().map(TropValue::Finite).collect::<Vec<_>>();
        assert!(in_trop_linear_space(&u34, &fin(&[rat(-1), rat(0), rat(0), rat(0)])).unwrap());
        assert!(!in_trop_linear_space(&u34, &fin(&[rat(1), ratio(1, 2), rat(0), rat(0)])).unwrap());
        assert!(in_trop_linear_space(&u34, &vec![TropValue::NegInf; 3]).is_err());
    }

    #[test]
    fn incidence_relations() {
        let q = TropPluecker::constant(4, 3, TropValue::zero()).unwrap();
        assert!(trop_incidence_check(&with_12(-1), &q).unwrap());
        assert!(trop_incidence_check(&with_12(0), &q).unwrap());
        assert!(!trop_incidence_check(&with_12(1), &q).unwrap());
        assert!(trop_incidence_check(&q, &with_12(0)).is_err());
    }
}
