use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{
    colex_subsets, format_rational, parse_plucker_map, parse_rational, plucker_sign, PlueckerVector, QMatrix, Rational,
    Subset,
};

/// A `(d+1)`-dimensional subspace `X ⊆ Q^n`, given by a basis or by its Plücker vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceInput {
    n: usize,
    d: usize,
    basis: Option<QMatrix>,
    plucker: PlueckerVector,
}

impl SubspaceInput {
    /// Rowspace of a `(d+1) × n` matrix of full row rank.
    pub fn from_basis(basis: QMatrix) -> Result<Self> {
        let plucker = plucker_of_rowspace(&basis)?;
        let d = basis
            .rows()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("basis must have at least one row".into()))?;
        let n = basis.cols();
        check_sizes(n, d)?;
        Ok(SubspaceInput { n, d, basis: Some(basis), plucker })
    }

    /// A Plücker vector on `(d+1)`-subsets, checked against every Plücker relation.
    pub fn from_plucker(plucker: PlueckerVector) -> Result<Self> {
        let n = plucker.n();
        let d = plucker
            .k()
            .checked_sub(1)
            .ok_or_else(|| Error::InvalidInput("Plücker vector must be indexed by nonempty subsets".into()))?;
        check_sizes(n, d)?;
        if plucker.is_zero() {
            return Err(Error::InvalidInput("Plücker vector is identically zero".into()));
        }
        if let Some((a, b)) = first_violated_relation(&plucker) {
            return Err(Error::InvalidInput(format!("Plücker relation R_{{{a}}},{{{b}}} does not vanish")));
        }
        Ok(SubspaceInput { n, d, basis: None, plucker })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> Option<&QMatrix> {
        self.basis.as_ref()
    }

    pub fn plucker(&self) -> &PlueckerVector {
        &self.plucker
    }
}

fn check_sizes(n: usize, d: usize) -> Result<()> {
    if d == 0 || d + 1 > n {
        return Err(Error::Dimension(format!("need 1 ≤ d and d+1 ≤ n, got n = {n}, d = {d}")));
    }
    if n > crate::foundation::MAX_ELEMENT {
        return Err(Error::Dimension(format!("n = {n} exceeds {}", crate::foundation::MAX_ELEMENT)));
    }
    Ok(())
}

/// All maximal minors of a full-row-rank matrix, indexed by column sets in colex order.
pub fn plucker_of_rowspace(m: &QMatrix) -> Result<PlueckerVector> {
    let k = m.rows();
    if m.rank() != k || k == 0 {
        return Err(Error::InvalidInput(format!("basis has rank {} but {} rows", m.rank(), k)));
    }
    let mut q = PlueckerVector::zero(m.cols(), k);
    for s in colex_subsets(m.cols(), k) {
        let cols: Vec<usize> = s.iter().map(|e| e - 1).collect();
        q.set(s, m.select_columns(&cols).det()?);
    }
    Ok(q)
}

/// Some `(A, B)` with `|A| = k-1`, `|B| = k+1` whose Plücker relation fails at `q`.
pub fn first_violated_relation(q: &PlueckerVector) -> Option<(Subset, Subset)> {
    let (n, k) = (q.n(), q.k());
    for a in colex_subsets(n, k - 1) {
        for b in colex_subsets(n, k + 1) {
            let mut acc = Rational::zero();
            for i in b.difference(a).iter() {
                let term = q.get(a.with(i)) * q.get(b.without(i));
                if plucker_sign(a, b, i) > 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if !acc.is_zero() {
                return Some((a, b));
            }
        }
    }
    None
}

/// Matrix entries accept JSON integers or `"p/q"` strings.
#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn value(&self) -> Result<Rational> {
        match self {
            Entry::Int(i) => Ok(Rational::from_integer((*i).into())),
            Entry::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    n: Option<usize>,
    d: Option<usize>,
    e: Option<usize>,
    basis: Option<Vec<Vec<Entry>>>,
    plucker: Option<BTreeMap<String, Entry>>,
}

impl SubspaceInput {
    /// Parses `{"n", "d", "basis": [[...]]}` or `{"plucker": {"1,2,3": "1", ...}}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInput =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed subspace JSON: {e}")))?;
        let input = match (raw.basis, raw.plucker) {
            (Some(rows), None) => {
                let rows = rows
                    .iter()
                    .map(|r| r.iter().map(Entry::value).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Self::from_basis(QMatrix::from_rows(rows)?)?
            }
            (None, Some(map)) => {
                let text = map
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), format_rational(&v.value()?))))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Self::from_plucker(parse_plucker_map(&text, raw.n)?)?
            }
            _ => return Err(Error::InvalidInput("exactly one of \"basis\" and \"plucker\" is required".into())),
        };
        if raw.n.is_some_and(|n| n != input.n) {
            return Err(Error::InvalidInput(format!(
                "declared n = {} but the data has n = {}",
                raw.n.unwrap_or(0),
                input.n
            )));
        }
        if raw.d.is_some_and(|d| d != input.d) {
            return Err(Error::InvalidInput(format!(
                "declared d = {} but the data has d = {}",
                raw.d.unwrap_or(0),
                input.d
            )));
        }
        if let Some(e) = raw.e {
            if e != input.d + 1 {
                return Err(Error::InvalidInput(format!("only e = d+1 = {} is supported, got e = {e}", input.d + 1)));
            }
        }
        Ok(input)
    }
}

impl Serialize for SubspaceInput {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(None)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("d", &self.d)?;
        match &self.basis {
            Some(b) => {
                let rows: Vec<Vec<String>> =
                    b.to_rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
                map.serialize_entry("basis", &rows)?;
            }
            None => map.serialize_entry("plucker", &self.plucker)?,
        }
        map.end()
    }
}
