use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, Rational};
use super::subset::{colex_subsets, Subset};
use crate::error::{Error, Result};

/// Coordinates indexed by the `k`-subsets of `[n]`, all of them present (zeros included).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlueckerVector {
    n: usize,
    k: usize,
    coords: BTreeMap<Subset, Rational>,
}

impl PlueckerVector {
    pub fn zero(n: usize, k: usize) -> Self {
        let coords = colex_subsets(n, k).into_iter().map(|s| (s, Rational::zero())).collect();
        PlueckerVector { n, k, coords }
    }

    /// Missing subsets are zero; entries of the wrong size or outside `[n]` are rejected.
    pub fn from_map(n: usize, k: usize, entries: BTreeMap<Subset, Rational>) -> Result<Self> {
        let mut v = Self::zero(n, k);
        for (s, x) in entries {
            if s.len() != k || !s.within(n) {
                return Err(Error::InvalidInput(format!("Plücker index {{{s}}} is not a {k}-subset of [{n}]")));
            }
            v.coords.insert(s, x);
        }
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Zero for index sets outside the support (including wrong sizes).
    pub fn get(&self, s: Subset) -> Rational {
        self.coords.get(&s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn set(&mut self, s: Subset, x: Rational) {
        assert!(s.len() == self.k && s.within(self.n));
        self.coords.insert(s, x);
    }

    /// Entries in colex order.
    pub fn iter(&self) -> impl Iterator<Item = (Subset, &Rational)> {
        self.coords.iter().map(|(s, x)| (*s, x))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.values().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PlueckerVector { n: self.n, k: self.k, coords: self.coords.iter().map(|(s, x)| (*s, x * c)).collect() }
    }

    /// True iff `self = λ·other` for some nonzero `λ`.
    pub fn is_proportional_to(&self, other: &PlueckerVector) -> bool {
        if self.n != other.n || self.k != other.k {
            return false;
        }
        let Some((s, x)) = self.coords.iter().find(|(_, x)| !x.is_zero()) else {
            return other.is_zero();
        };
        let y = other.get(*s);
        if y.is_zero() {
            return false;
        }
        let lambda = x / y;
        self.coords.iter().all(|(t, v)| *v == &lambda * other.get(*t))
    }
}

impl Serialize for PlueckerVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.coords.len()))?;
        for (k, v) in &self.coords {
            map.serialize_entry(&k.label(), &format_rational(v))?;
        }
        map.end()
    }
}

/// Deserializes the bare `{"1,2,3": "1", ...}` map; `n` and `k` are inferred from the keys.
impl<'de> Deserialize<'de> for PlueckerVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        parse_plucker_map(&raw, None).map_err(serde::de::Error::custom)
    }
}

/// Parses label → rational maps; `n` defaults to the largest element seen.
pub fn parse_plucker_map(raw: &BTreeMap<String, String>, n: Option<usize>) -> Result<PlueckerVector> {
    let mut entries = BTreeMap::new();
    let mut k = None;
    let mut max_elem = 0;
    for (label, value) in raw {
        let s: Subset = label.parse()?;
        match k {
            None => k = Some(s.len()),
            Some(k) if k != s.len() => return Err(Error::InvalidInput("Plücker indices of mixed sizes".into())),
            _ => {}
        }
        max_elem = max_elem.max(s.max().unwrap_or(0));
        entries.insert(s, parse_rational(value)?);
    }
    let k = k.ok_or_else(|| Error::InvalidInput("empty Plücker vector".into()))?;
    let n = n.unwrap_or(max_elem);
    PlueckerVector::from_map(n, k, entries)
}
