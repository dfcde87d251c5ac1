use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::foundation::{format_rational, parse_rational, Rational, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    /// Coordinates of the smaller subspace (size-`d` index sets).
    P,
    /// Coordinates of the ambient subspace (size-`d+1` index sets).
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PQVar {
    pub kind: VarKind,
    pub index: Subset,
}

impl PQVar {
    pub fn p(index: Subset) -> Self {
        PQVar { kind: VarKind::P, index }
    }

    pub fn q(index: Subset) -> Self {
        PQVar { kind: VarKind::Q, index }
    }
}

impl fmt::Display for PQVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            VarKind::P => "P",
            VarKind::Q => "Q",
        };
        write!(f, "{k}:{}", self.index.label())
    }
}

impl FromStr for PQVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (k, idx) = s.split_once(':').ok_or_else(|| Error::InvalidInput(format!("bad variable {s:?}")))?;
        let index: Subset = idx.parse()?;
        match k.trim() {
            "P" => Ok(PQVar::p(index)),
            "Q" => Ok(PQVar::q(index)),
            _ => Err(Error::InvalidInput(format!("bad variable kind in {s:?}"))),
        }
    }
}

/// Product of variables with positive exponents, sorted by variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(PQVar, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: PQVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(PQVar, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: PQVar) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: BTreeMap<PQVar, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            *out.entry(v).or_insert(0) += e;
        }
        Monomial(out.into_iter().collect())
    }

    fn without_power(&self, v: PQVar, k: u32) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut found = k == 0;
        for &(w, e) in &self.0 {
            if w == v {
                if e < k {
                    return None;
                }
                found = true;
                if e > k {
                    out.push((w, e - k));
                }
            } else {
                out.push((w, e));
            }
        }
        found.then_some(Monomial(out))
    }

    /// Each variable repeated by its exponent, as serialized.
    fn expanded(&self) -> Vec<PQVar> {
        self.0.iter().flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize)).collect()
    }
}

impl Ord for Monomial {
    /// Degree first, then the sorted variable lists (variables ordered P before Q,
    /// each kind colex on its index).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.expanded().cmp(&other.expanded()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with rational coefficients in the `P_I`, `Q_J` variables.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: PQVar) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::var(v), Rational::one());
        p
    }

    pub fn p(index: Subset) -> Self {
        Self::var(PQVar::p(index))
    }

    pub fn q(index: Subset) -> Self {
        Self::var(PQVar::q(index))
    }

    /// `c · m` for a product of variables.
    pub fn term(c: Rational, vars: &[PQVar]) -> Self {
        let m = vars.iter().fold(Monomial::one(), |m, &v| m.mul(&Monomial::var(v)));
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> SparsePoly {
        if c.is_zero() {
            return Self::zero();
        }
        SparsePoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn scale_i(&self, sign: i32) -> SparsePoly {
        self.scale(&Rational::from_integer(sign.into()))
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest `k` such that `v^k` divides every term (0 for the zero polynomial).
    pub fn power_dividing(&self, v: PQVar) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).min().unwrap_or(0)
    }

    /// Exact division by `v^k`, or `None` when some term is not divisible.
    pub fn divide_by_var_power(&self, v: PQVar, k: u32) -> Option<SparsePoly> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            out.insert(m.without_power(v, k)?, c.clone());
        }
        Some(SparsePoly { terms: out })
    }

    /// Substitutes every `Q_J` by `q(J)`; `P` variables are left symbolic.
    pub fn substitute_q<F: Fn(Subset) -> Rational>(&self, q: F) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.factors() {
                match v.kind {
                    VarKind::Q => {
                        let val = q(v.index);
                        for _ in 0..e {
                            coeff *= &val;
                        }
                    }
                    VarKind::P => rest.push((v, e)),
                }
            }
            out.add_term(Monomial(rest), coeff);
        }
        out
    }

    /// Coefficients of a polynomial that is linear and homogeneous in the `P` variables.
    pub fn linear_form(&self) -> Result<BTreeMap<Subset, Rational>> {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            match m.factors() {
                [(v, 1)] if v.kind == VarKind::P => {
                    out.insert(v.index, c.clone());
                }
                _ => return Err(Error::Precondition(format!("term {} is not linear in P", fmt_monomial(m)))),
            }
        }
        Ok(out)
    }

    /// Coefficient polynomials indexed by the `P`-part of each monomial.
    pub fn split_by_p(&self) -> BTreeMap<Monomial, SparsePoly> {
        let mut out: BTreeMap<Monomial, SparsePoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (p, q): (Vec<_>, Vec<_>) = m.factors().iter().partition(|(v, _)| v.kind == VarKind::P);
            out.entry(Monomial(p)).or_default().add_term(Monomial(q), c.clone());
        }
        out
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;

    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;

    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;

    fn neg(self) -> SparsePoly {
        SparsePoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;

    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl std::iter::Sum for SparsePoly {
    fn sum<I: Iterator<Item = SparsePoly>>(iter: I) -> SparsePoly {
        iter.fold(SparsePoly::zero(), |acc, p| &acc + &p)
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    if m.0.is_empty() {
        return "1".into();
    }
    m.0.iter()
        .map(|(v, e)| {
            let name = format!("{}{}", if v.kind == VarKind::P { "P" } else { "Q" }, v.index.label().replace(',', ""));
            if *e == 1 {
                name
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(m, c)| format!("({})*{}", format_rational(c), fmt_monomial(m))).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    vars: Vec<String>,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    vars: m.expanded().iter().map(ToString::to_string).collect(),
                    coeff: format_rational(c),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        let mut p = SparsePoly::zero();
        for t in raw.terms {
            let vars = t
                .vars
                .iter()
                .map(|v| v.parse::<PQVar>())
                .collect::<Result<Vec<_>>>()
                .map_err(serde::de::Error::custom)?;
            let c = parse_rational(&t.coeff).map_err(serde::de::Error::custom)?;
            p = &p + &SparsePoly::term(c, &vars);
        }
        Ok(p)
    }
}
