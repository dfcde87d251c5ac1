use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::identities::steps::{in2pl_step, move_b_step};
use super::poly::{SparsePoly, VarKind};
use super::relations::{incidence_relation, plucker_relation};
use crate::error::{Error, Result};
use crate::foundation::Subset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPair {
    #[serde(rename = "A")]
    pub a: Subset,
    #[serde(rename = "B")]
    pub b: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationTerm {
    pub coefficient: SparsePoly,
    pub incidence: IndexPair,
}

/// Proof that `Q_C^m · R_{A,B} = Σ coefficient · I_{A',B'}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationCertificate {
    pub target: IndexPair,
    pub pivot: Subset,
    pub exponent: u32,
    pub combination: Vec<CombinationTerm>,
}

type Combo = BTreeMap<(Subset, Subset), SparsePoly>;

fn add_into(acc: &mut Combo, key: (Subset, Subset), p: SparsePoly) {
    let slot = acc.entry(key).or_default();
    *slot = &*slot + &p;
    if slot.is_zero() {
        acc.remove(&key);
    }
}

struct Builder {
    c: Subset,
    memo: HashMap<(Subset, Subset), (u32, Combo)>,
}

impl Builder {
    /// Returns `(m, combo)` with `Σ combo · I = Q_C^m R_{A,B}`.
    fn build(&mut self, a: Subset, b: Subset) -> (u32, Combo) {
        if let Some(hit) = self.memo.get(&(a, b)) {
            return hit.clone();
        }
        let c = self.c;
        let out = if a.is_subset_of(c) && b == c {
            (0, Combo::new())
        } else {
            let (incid, moves) = if let Some(e) = a.difference(c).min() {
                in2pl_step(a, b, c, e)
            } else {
                let e = b.difference(c).min().expect("B ≠ C and |B| = |C|");
                move_b_step(a, b, c, e)
            };
            let subs: Vec<_> = moves.into_iter().map(|(s, (a2, b2), q)| (s, q, self.build(a2, b2))).collect();
            let top = subs.iter().map(|(_, _, (m, _))| *m).max().unwrap_or(0);
            let qc = SparsePoly::q(c);
            let mut combo = Combo::new();
            let lift = qc.pow(top);
            for (s, p, key) in incid {
                add_into(&mut combo, key, (&SparsePoly::p(p) * &lift).scale_i(s));
            }
            for (s, q, (m, sub)) in subs {
                let factor = (&SparsePoly::q(q) * &qc.pow(top - m)).scale_i(-s);
                for (key, coeff) in sub {
                    add_into(&mut combo, key, &factor * &coeff);
                }
            }
            (top + 1, combo)
        };
        self.memo.insert((a, b), out.clone());
        out
    }
}

/// Certificate for `R_{A,B} ∈ I : ⟨Q_C⟩^∞` following the double induction
/// (smallest `a ∈ A\C` first, then smallest `b ∈ B\C`).
pub fn saturation_certificate(a: Subset, b: Subset, c: Subset) -> Result<SaturationCertificate> {
    if a.len() + 2 != b.len() || b.len() != c.len() {
        return Err(Error::Dimension(format!(
            "need |A| = d-1, |B| = |C| = d+1, got {}, {}, {}",
            a.len(),
            b.len(),
            c.len()
        )));
    }
    let mut builder = Builder { c, memo: HashMap::new() };
    let (m, combo) = builder.build(a, b);
    Ok(SaturationCertificate {
        target: IndexPair { a, b },
        pivot: c,
        exponent: m,
        combination: combo
            .into_iter()
            .map(|((x, y), coefficient)| CombinationTerm { coefficient, incidence: IndexPair { a: x, b: y } })
            .collect(),
    })
}

impl SaturationCertificate {
    /// `Σ coefficient · I_{A',B'} - Q_C^m R_{A,B}`; zero iff the certificate is valid.
    pub fn replay_residual(&self) -> Result<SparsePoly> {
        let target = plucker_relation(self.target.a, self.target.b, VarKind::P)?;
        let mut acc = -&(&SparsePoly::q(self.pivot).pow(self.exponent) * &target);
        for t in &self.combination {
            let inc = incidence_relation(t.incidence.a, t.incidence.b)?;
            acc = &acc + &(&t.coefficient * &inc);
        }
        Ok(acc)
    }

    pub fn replay(&self) -> Result<bool> {
        Ok(self.replay_residual()?.is_zero())
    }
}
