use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ambient size a [`Subset`] can index.
pub const MAX_ELEMENT: usize = 64;

/// A subset of `[n] = {1, ..., n}` stored as a bitmask (bit `i - 1` for element `i`).
///
/// The derived ordering compares bitmasks numerically, which on subsets of equal
/// size is exactly the colexicographic order (compare by the largest element in
/// which the two sets differ).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Builds a subset from 1-indexed elements; duplicates are rejected.
    pub fn from_elements(elements: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > MAX_ELEMENT {
                return Err(Error::InvalidInput(format!("subset element {e} outside 1..={MAX_ELEMENT}")));
            }
            let bit = 1u64 << (e - 1);
            if bits & bit != 0 {
                return Err(Error::InvalidInput(format!("duplicate subset element {e}")));
            }
            bits |= bit;
        }
        Ok(Subset(bits))
    }

    /// Panicking constructor for literal sets in tests and tables.
    pub fn of(elements: &[usize]) -> Self {
        Self::from_elements(elements).expect("valid literal subset")
    }

    /// `[n] = {1, ..., n}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ELEMENT);
        if n == MAX_ELEMENT {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(e: usize) -> Self {
        assert!((1..=MAX_ELEMENT).contains(&e));
        Subset(1u64 << (e - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=MAX_ELEMENT).contains(&e) && self.0 & (1u64 << (e - 1)) != 0
    }

    pub fn with(self, e: usize) -> Self {
        Subset(self.0 | Self::singleton(e).0)
    }

    pub fn without(self, e: usize) -> Self {
        Subset(self.0 & !Self::singleton(e).0)
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside `[n]`.
    pub fn complement(self, n: usize) -> Self {
        Subset(Self::full(n).0 & !self.0)
    }

    /// `|[i] ∩ self|`.
    pub fn count_upto(self, i: usize) -> usize {
        self.intersection(Self::full(i.min(MAX_ELEMENT))).len()
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 64 - self.0.leading_zeros() as usize)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros() as usize + 1;
            bits &= bits - 1;
            Some(e)
        })
    }

    pub fn elements(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All elements lie in `[n]`.
    pub fn within(self, n: usize) -> bool {
        self.is_subset_of(Self::full(n))
    }

    /// Canonical text label, e.g. `"1,4"`; the empty set is `""`. A singleton with a
    /// multi-digit element carries a trailing comma (`"12,"`) so it never reads as `{1,2}`.
    pub fn label(self) -> String {
        match self.elements().as_slice() {
            [e] if *e >= 10 => format!("{e},"),
            elements => elements.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","),
        }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.label())
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Subset {
    type Err = Error;

    /// Accepts comma-separated labels (`"1,4"`), and the compact digit form
    /// (`"14"`) when every element is a single digit.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Subset::EMPTY);
        }
        let parse =
            |t: &str| t.trim().parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad subset label {s:?}")));
        let elements = if s.contains(',') {
            s.strip_suffix(',').unwrap_or(s).split(',').map(parse).collect::<Result<Vec<_>>>()?
        } else if s.chars().all(|c| c.is_ascii_digit()) {
            s.chars().map(|c| parse(&c.to_string())).collect::<Result<Vec<_>>>()?
        } else {
            return Err(Error::InvalidInput(format!("bad subset label {s:?}")));
        };
        Subset::from_elements(&elements)
    }
}

/// JSON form: sorted integer array.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Subset::from_elements(&v).map_err(serde::de::Error::custom)
    }
}

/// All `k`-subsets of `[n]` in colexicographic order.
pub fn colex_subsets(n: usize, k: usize) -> Vec<Subset> {
    assert!(n <= MAX_ELEMENT, "ambient size {n} exceeds {MAX_ELEMENT}");
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Subset::EMPTY];
    }
    let limit = Subset::full(n).0;
    let mut out = Vec::new();
    let mut x: u64 = Subset::full(k).0;
    loop {
        out.push(Subset(x));
        // Gosper's hack: next integer with the same popcount.
        let c = x & x.wrapping_neg();
        let r = x.wrapping_add(c);
        if r == 0 || r > limit {
            break;
        }
        let next = (((r ^ x) >> 2) / c) | r;
        if next > limit {
            break;
        }
        x = next;
    }
    out
}

/// `(-1)^{|[i] ∩ A| + |[i] ∩ B|}`.
pub fn plucker_sign(a: Subset, b: Subset, i: usize) -> i32 {
    if (a.count_upto(i) + b.count_upto(i)).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of the permutation that sorts `values`; `0` if two values coincide.
pub fn sort_sign(values: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return 0;
            }
            if values[i] > values[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[Subset]) -> Vec<String> {
        v.iter().map(|s| s.iter().map(|e| e.to_string()).collect()).collect()
    }

    #[test]
    fn colex_five_two_matches_column_order() {
        assert_eq!(labels(&colex_subsets(5, 2)), ["12", "13", "23", "14", "24", "34", "15", "25", "35", "45"]);
    }

    #[test]
    fn colex_small_cases() {
        assert_eq!(labels(&colex_subsets(3, 3)), ["123"]);
        assert_eq!(labels(&colex_subsets(4, 1)), ["1", "2", "3", "4"]);
        assert_eq!(colex_subsets(4, 0), vec![Subset::EMPTY]);
        assert!(colex_subsets(2, 3).is_empty());
        assert_eq!(colex_subsets(64, 64).len(), 1);
    }

    #[test]
    fn plucker_sign_examples() {
        assert_eq!(plucker_sign(Subset::EMPTY, Subset::of(&[4, 5]), 4), -1);
        assert_eq!(plucker_sign(Subset::of(&[1]), Subset::of(&[1, 2, 3, 4]), 2), -1);
        assert_eq!(plucker_sign(Subset::of(&[1]), Subset::of(&[1, 2, 3, 4]), 3), 1);
    }

    #[test]
    fn parse_and_label() {
        let s: Subset = "1,4".parse().unwrap();
        assert_eq!(s, Subset::of(&[1, 4]));
        assert_eq!("145".parse::<Subset>().unwrap(), Subset::of(&[1, 4, 5]));
        assert_eq!(s.label(), "1,4");
        assert!("1,1".parse::<Subset>().is_err());
        assert!("0".parse::<Subset>().is_err());
        assert!(Subset::from_elements(&[65]).is_err());
        assert_eq!(Subset::of(&[12]).label(), "12,");
        assert_eq!("12,".parse::<Subset>().unwrap(), Subset::of(&[12]));
        assert_eq!("12".parse::<Subset>().unwrap(), Subset::of(&[1, 2]));
        assert_eq!(Subset::of(&[3, 12]).label(), "3,12");
    }

    #[test]
    fn set_algebra() {
        let a = Subset::of(&[1, 3, 5]);
        assert_eq!(a.max(), Some(5));
        assert_eq!(a.min(), Some(1));
        assert_eq!(a.complement(5), Subset::of(&[2, 4]));
        assert_eq!(a.count_upto(4), 2);
        assert_eq!(a.without(3).with(2), Subset::of(&[1, 2, 5]));
        assert_eq!(sort_sign(&[2, 1, 3]), -1);
        assert_eq!(sort_sign(&[3, 1, 2]), 1);
        assert_eq!(binomial(7, 3), 35);
    }
}
