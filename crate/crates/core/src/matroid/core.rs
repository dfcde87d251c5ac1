use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground set a [`Matroid`] can hold (element sets are `u64` masks).
pub const MAX_GROUND: usize = 64;

/// A matroid given by its labeled ground set and explicit basis family.
///
/// Element `k` of the ground set is bit `k` of every mask. Bases are kept sorted.
#[derive(Clone, Debug)]
pub struct Matroid {
    ground: Vec<String>,
    rank: usize,
    bases: Vec<u64>,
    lookup: HashSet<u64>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground && self.bases == other.bases
    }
}

impl Eq for Matroid {}

pub(crate) fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let k = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(k)
        }
    })
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// All `k`-element masks over `n` elements, in increasing numeric order.
pub(crate) fn masks_of_size(n: usize, k: usize) -> Vec<u64> {
    crate::foundation::colex_subsets(n, k).into_iter().map(|s| s.bits()).collect()
}

impl Matroid {
    /// Checks labels are distinct and bases are equicardinal and nonempty as a family.
    ///
    /// The exchange axiom is not checked here; see [`Matroid::satisfies_exchange`].
    pub fn from_bases(ground: Vec<String>, bases: impl IntoIterator<Item = u64>) -> Result<Self> {
        if ground.len() > MAX_GROUND {
            return Err(Error::Dimension(format!("ground set of {} elements exceeds {MAX_GROUND}", ground.len())));
        }
        let distinct: BTreeSet<&String> = ground.iter().collect();
        if distinct.len() != ground.len() {
            return Err(Error::InvalidInput("ground labels must be distinct".into()));
        }
        let mut bases: Vec<u64> = bases.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if bases.is_empty() {
            return Err(Error::InvalidInput("a matroid needs at least one basis".into()));
        }
        let rank = bases[0].count_ones() as usize;
        let universe = full_mask(ground.len());
        if bases.iter().any(|b| b.count_ones() as usize != rank || b & !universe != 0) {
            return Err(Error::InvalidInput("bases must be equicardinal subsets of the ground".into()));
        }
        bases.sort_unstable();
        let lookup = bases.iter().copied().collect();
        Ok(Matroid { ground, rank, bases, lookup })
    }

    /// `U_{r,n}` on the given labels.
    pub fn uniform(rank: usize, ground: Vec<String>) -> Result<Self> {
        let n = ground.len();
        if rank > n {
            return Err(Error::InvalidInput(format!("U_{{{rank},{n}}} needs rank ≤ n")));
        }
        Self::from_bases(ground, masks_of_size(n, rank))
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    pub fn is_basis(&self, mask: u64) -> bool {
        self.lookup.contains(&mask)
    }

    pub fn full(&self) -> u64 {
        full_mask(self.ground.len())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.ground.iter().position(|g| g == label)
    }

    pub fn mask_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<u64> {
        labels.iter().try_fold(0u64, |acc, l| {
            self.index_of(l.as_ref())
                .map(|k| acc | (1 << k))
                .ok_or_else(|| Error::InvalidInput(format!("unknown label {:?}", l.as_ref())))
        })
    }

    pub fn labels_of(&self, mask: u64) -> Vec<String> {
        bits(mask).map(|k| self.ground[k].clone()).collect()
    }

    pub fn rank_of(&self, mask: u64) -> usize {
        self.bases.iter().map(|b| (b & mask).count_ones() as usize).max().unwrap_or(0)
    }

    pub fn is_independent(&self, mask: u64) -> bool {
        self.rank_of(mask) == mask.count_ones() as usize
    }

    pub fn loops(&self) -> u64 {
        let covered = self.bases.iter().fold(0, |acc, b| acc | b);
        self.full() & !covered
    }

    pub fn closure(&self, mask: u64) -> u64 {
        let r = self.rank_of(mask);
        bits(self.full() & !mask).filter(|&e| self.rank_of(mask | (1 << e)) == r).fold(mask, |acc, e| acc | (1 << e))
    }

    pub fn is_flat(&self, mask: u64) -> bool {
        self.closure(mask) == mask
    }

    /// Minimal dependent sets as masks, in lexicographic order of their element lists.
    ///
    /// Every circuit is the fundamental circuit of some basis and outside element.
    pub fn circuit_masks(&self) -> Vec<u64> {
        let mut found = BTreeSet::new();
        for &b in &self.bases {
            for e in bits(self.full() & !b) {
                let c = bits(b)
                    .filter(|&f| self.is_basis((b & !(1 << f)) | (1 << e)))
                    .fold(1u64 << e, |acc, f| acc | (1 << f));
                found.insert(c);
            }
        }
        let mut out: Vec<u64> = found.into_iter().collect();
        out.sort_by_key(|&c| bits(c).collect::<Vec<_>>());
        out
    }

    pub fn circuits(&self) -> Vec<Vec<String>> {
        self.circuit_masks().into_iter().map(|c| self.labels_of(c)).collect()
    }

    /// Spot-check of the basis-exchange axiom over all pairs of bases.
    pub fn satisfies_exchange(&self) -> bool {
        self.bases.iter().all(|&b1| {
            self.bases
                .iter()
                .all(|&b2| bits(b1 & !b2).all(|x| bits(b2 & !b1).any(|y| self.is_basis((b1 & !(1 << x)) | (1 << y)))))
        })
    }

    /// Same matroid with labels replaced through `rename`, keeping element order.
    pub fn relabeled<F: Fn(&str) -> Result<String>>(&self, rename: F) -> Result<Matroid> {
        let ground = self.ground.iter().map(|g| rename(g)).collect::<Result<Vec<_>>>()?;
        Matroid::from_bases(ground, self.bases.iter().copied())
    }

    /// Bases as sorted label lists, sorted lexicographically by element index.
    pub fn basis_labels(&self) -> Vec<Vec<String>> {
        self.bases.iter().map(|&b| self.labels_of(b)).collect()
    }

    /// Basis family as sets of labels (order independent).
    pub fn basis_label_sets(&self) -> BTreeSet<BTreeSet<String>> {
        self.bases.iter().map(|&b| self.labels_of(b).into_iter().collect()).collect()
    }

    pub fn flats(&self) -> FlatLattice {
        FlatLattice::of(self)
    }
}

/// True iff `label_map` is a bijection `ground(m1) → ground(m2)` carrying bases onto bases.
pub fn matroid_equal(m1: &Matroid, m2: &Matroid, label_map: &BTreeMap<String, String>) -> Result<bool> {
    if label_map.len() != m1.len()
        || m1.ground().iter().any(|g| !label_map.contains_key(g))
        || label_map.values().collect::<BTreeSet<_>>().len() != m2.len()
        || label_map.values().any(|v| m2.index_of(v).is_none())
    {
        return Err(Error::InvalidInput("label map is not a bijection between the ground sets".into()));
    }
    if m1.rank() != m2.rank() || m1.bases().len() != m2.bases().len() {
        return Ok(false);
    }
    let image: Vec<usize> = m1.ground().iter().map(|g| m2.index_of(&label_map[g]).expect("checked above")).collect();
    Ok(m1.bases().iter().all(|&b| {
        let mapped = bits(b).fold(0u64, |acc, k| acc | (1 << image[k]));
        m2.is_basis(mapped)
    }))
}

/// Equality under the identity map on labels.
pub fn matroid_equal_by_labels(m1: &Matroid, m2: &Matroid) -> bool {
    let map: BTreeMap<String, String> = m1.ground().iter().map(|g| (g.clone(), g.clone())).collect();
    matroid_equal(m1, m2, &map).unwrap_or(false)
}

/// The lattice of flats, ordered by rank and then by element mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLattice {
    pub flats: Vec<(u64, usize)>,
    /// Index pairs `(lower, upper)` into `flats` with `upper` covering `lower`.
    pub covers: Vec<(usize, usize)>,
}

impl FlatLattice {
    fn of(m: &Matroid) -> Self {
        let bottom = m.closure(0);
        let mut levels: Vec<BTreeSet<u64>> = vec![BTreeSet::from([bottom])];
        let mut cover_pairs = BTreeSet::new();
        for r in 0..m.rank() {
            let mut next = BTreeSet::new();
            for &f in &levels[r] {
                let mut rest = m.full() & !f;
                while rest != 0 {
                    let e = rest.trailing_zeros();
                    let g = m.closure(f | (1 << e));
                    rest &= !g;
                    next.insert(g);
                    cover_pairs.insert((f, g));
                }
            }
            levels.push(next);
        }
        let flats: Vec<(u64, usize)> =
            levels.iter().enumerate().flat_map(|(r, level)| level.iter().map(move |&f| (f, r))).collect();
        let index: BTreeMap<u64, usize> = flats.iter().enumerate().map(|(k, (f, _))| (*f, k)).collect();
        let covers = cover_pairs.into_iter().map(|(a, b)| (index[&a], index[&b])).collect();
        FlatLattice { flats, covers }
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn of_rank(&self, r: usize) -> impl Iterator<Item = u64> + '_ {
        self.flats.iter().filter(move |(_, k)| *k == r).map(|(f, _)| *f)
    }

    /// Flats other than the bottom and the whole ground set.
    pub fn proper_nonempty(&self) -> Vec<(u64, usize)> {
        let top = self.flats.last().map(|(_, r)| *r).unwrap_or(0);
        self.flats.iter().copied().filter(|&(_, r)| r > 0 && r < top).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MatroidJson {
    ground: Vec<String>,
    rank: usize,
    bases: Vec<Vec<String>>,
}

impl Serialize for Matroid {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatroidJson { ground: self.ground.clone(), rank: self.rank, bases: self.basis_labels() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matroid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatroidJson::deserialize(d)?;
        if raw.ground.is_empty() {
            return Err(D::Error::custom("matroid has an empty ground set"));
        }
        let index: BTreeMap<&String, usize> = raw.ground.iter().enumerate().map(|(k, g)| (g, k)).collect();
        let bases = raw
            .bases
            .iter()
            .map(|b| {
                b.iter().try_fold(0u64, |acc, l| {
                    index
                        .get(l)
                        .map(|k| acc | (1 << k))
                        .ok_or_else(|| D::Error::custom(format!("basis label {l:?} not in the ground set")))
                })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let m = Matroid::from_bases(raw.ground, bases).map_err(D::Error::custom)?;
        if m.rank() != raw.rank {
            return Err(D::Error::custom(format!("declared rank {} but bases have size {}", raw.rank, m.rank())));
        }
        if !m.satisfies_exchange() {
            return Err(D::Error::custom("basis family violates the exchange axiom"));
        }
        Ok(m)
    }
}
