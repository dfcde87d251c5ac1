use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::foundation::{colex_subsets, format_rational, parse_rational, Rational, Subset};

/// An element of `R ∪ {−∞}`; `NegInf` sorts below every finite value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TropValue {
    NegInf,
    Finite(Rational),
}

impl TropValue {
    pub fn zero() -> Self {
        TropValue::Finite(Rational::zero())
    }

    pub fn int(v: i64) -> Self {
        TropValue::Finite(Rational::from_integer(v.into()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, TropValue::Finite(_))
    }

    /// Tropical product (ordinary sum); `−∞` absorbs.
    pub fn times(&self, other: &TropValue) -> TropValue {
        match (self, other) {
            (TropValue::Finite(a), TropValue::Finite(b)) => TropValue::Finite(a + b),
            _ => TropValue::NegInf,
        }
    }

    pub fn shifted(&self, by: &Rational) -> TropValue {
        match self {
            TropValue::Finite(a) => TropValue::Finite(a + by),
            TropValue::NegInf => TropValue::NegInf,
        }
    }
}

impl fmt::Display for TropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropValue::NegInf => f.write_str("-inf"),
            TropValue::Finite(a) => f.write_str(&format_rational(a)),
        }
    }
}

impl std::str::FromStr for TropValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-inf" => Ok(TropValue::NegInf),
            t => Ok(TropValue::Finite(parse_rational(t)?)),
        }
    }
}

impl Serialize for TropValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TropValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(TropValue::int(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// True iff the maximum of `values` is `−∞` or is attained at least twice.
pub fn max_attained_twice<I: IntoIterator<Item = TropValue>>(values: I) -> bool {
    let mut best = TropValue::NegInf;
    let mut count = 0usize;
    for v in values {
        match v.cmp(&best) {
            std::cmp::Ordering::Greater => {
                best = v;
                count = 1;
            }
            std::cmp::Ordering::Equal => count += 1,
            std::cmp::Ordering::Less => {}
        }
    }
    best == TropValue::NegInf || count >= 2
}

/// Tropical vector on the `rank`-subsets of `[n]`; absent coordinates are `−∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropPluecker {
    n: usize,
    rank: usize,
    entries: BTreeMap<Subset, TropValue>,
}

impl TropPluecker {
    pub fn new(n: usize, rank: usize, entries: BTreeMap<Subset, TropValue>) -> Result<Self> {
        if rank == 0 || rank > n || n > crate::foundation::MAX_ELEMENT {
            return Err(Error::Dimension(format!("need 1 ≤ rank ≤ n ≤ 64, got rank {rank}, n = {n}")));
        }
        if entries.keys().any(|s| s.len() != rank || !s.within(n)) {
            return Err(Error::InvalidInput(format!("every index must be a {rank}-subset of [{n}]")));
        }
        let entries: BTreeMap<Subset, TropValue> = entries.into_iter().filter(|(_, v)| v.is_finite()).collect();
        if entries.is_empty() {
            return Err(Error::InvalidInput("tropical Plücker vector is identically −∞".into()));
        }
        Ok(TropPluecker { n, rank, entries })
    }

    /// Every coordinate set to `value`.
    pub fn constant(n: usize, rank: usize, value: TropValue) -> Result<Self> {
        Self::new(n, rank, colex_subsets(n, rank).into_iter().map(|s| (s, value.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, s: Subset) -> TropValue {
        self.entries.get(&s).cloned().unwrap_or(TropValue::NegInf)
    }

    pub fn finite_entries(&self) -> impl Iterator<Item = (Subset, &TropValue)> {
        self.entries.iter().map(|(s, v)| (*s, v))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TropPlueckerJson {
    n: usize,
    rank: usize,
    entries: BTreeMap<String, TropValue>,
}

impl Serialize for TropPluecker {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = colex_subsets(self.n, self.rank).into_iter().map(|k| (k.label(), self.get(k))).collect();
        TropPlueckerJson { n: self.n, rank: self.rank, entries }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropPluecker {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TropPlueckerJson::deserialize(d)?;
        let entries = raw
            .entries
            .into_iter()
            .map(|(k, v)| Ok((k.parse::<Subset>()?, v)))
            .collect::<Result<BTreeMap<_, _>>>()
            .map_err(D::Error::custom)?;
        TropPluecker::new(raw.n, raw.rank, entries).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::ratio;

    #[test]
    fn order_and_product() {
        assert!(TropValue::NegInf < TropValue::int(-1000));
        assert_eq!(TropValue::int(2).times(&TropValue::NegInf), TropValue::NegInf);
        assert_eq!(TropValue::int(2).times(&TropValue::int(-3)), TropValue::int(-1));
    }

    #[test]
    fn attained_twice() {
        assert!(max_attained_twice([TropValue::int(-1), TropValue::zero(), TropValue::zero()]));
        assert!(!max_attained_twice([TropValue::int(1), TropValue::zero(), TropValue::zero()]));
        assert!(max_attained_twice([TropValue::NegInf, TropValue::NegInf]));
        assert!(max_attained_twice(std::iter::empty()));
    }

    #[test]
    fn json_uses_inf_marker() {
        let mut e = BTreeMap::new();
        e.insert(Subset::of(&[1, 2]), TropValue::Finite(ratio(-1, 2)));
        let p = TropPluecker::new(3, 2, e).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(text, r#"{"n":3,"rank":2,"entries":{"1,2":"-1/2","1,3":"-inf","2,3":"-inf"}}"#);
        assert_eq!(serde_json::from_str::<TropPluecker>(&text).unwrap(), p);
        assert!(serde_json::from_str::<TropPluecker>(r#"{"n":3,"rank":2,"entries":{"1,2":"-inf"}}"#).is_err());
        assert!(serde_json::from_str::<TropPluecker>(r#"{"n":3,"rank":2,"entries":{"1":0}}"#).is_err());
    }
}
