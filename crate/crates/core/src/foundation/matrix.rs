use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, parse_rational, rat, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Rows of a ragged input are rejected; zero rows give a `0 × cols` matrix only
    /// through [`QMatrix::zeros`].
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        let nrows = rows.len();
        Ok(QMatrix { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
            .expect("rectangular literal")
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Dimension("column length mismatch".into()));
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> QMatrix {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> QMatrix {
        let mut m = Self::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                m.set(i, c, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn without_row(&self, skip: usize) -> QMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|&r| r != skip).collect();
        self.select_rows(&keep)
    }

    /// Exact determinant by Bareiss elimination on the denominator-cleared integer matrix.
    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Dimension(format!("determinant of non-square {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // Scale each row to integers; det(M) = det(M_int) / prod(scale).
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let l = self.row(r).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.push(self.row(r).iter().map(|x| x.numer() * (&l / x.denom())).collect());
            scale *= l;
        }
        Ok(Rational::new(bareiss(&mut a), scale))
    }

    /// Reduced row echelon form; returns the pivot column of each nonzero row.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in col..m.cols {
                    let v = m.get(r, c) - &f * m.get(row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows spanning `{v : M v = 0}`; the basis is not canonical.
    pub fn kernel_basis(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            k.set(i, f, Rational::one());
            for (pr, &pc) in pivots.iter().enumerate() {
                k.set(i, pc, -r.get(pr, f).clone());
            }
        }
        k
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

fn bareiss(a: &mut [Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct QMatrixJson {
    rows: Vec<Vec<String>>,
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QMatrixJson { rows: (0..self.rows).map(|r| self.row(r).iter().map(format_rational).collect()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = QMatrixJson::deserialize(d)?;
        let rows = raw
            .rows
            .iter()
            .map(|r| r.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Incremental echelon basis used for independence sweeps over vector configurations.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    // (pivot index, vector normalised to 1 at the pivot and 0 at earlier pivots)
    rows: Vec<(usize, Vec<Rational>)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after elimination against the basis.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        w
    }

    /// Adds `v` if it is independent of the current span; returns whether it was.
    pub fn try_push(&mut self, v: &[Rational]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        self.rows.push((p, w));
        true
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }
}

/// Divides a vector by the gcd of its numerators after clearing denominators, with a
/// positive leading entry. Zero vectors are returned unchanged.
pub fn primitive_vector(v: &[Rational]) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let lead_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if lead_negative { -g } else { g };
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::rational::ratio;
    use proptest::prelude::*;

    #[test]
    fn det_examples() {
        assert_eq!(QMatrix::from_i64(&[&[1, 0], &[0, 1]]).det().unwrap(), rat(1));
        assert_eq!(QMatrix::from_i64(&[&[0, 1], &[1, 0]]).det().unwrap(), rat(-1));
        assert_eq!(QMatrix::from_i64(&[&[2, 3], &[5, 7]]).det().unwrap(), rat(-1));
        assert!(QMatrix::zeros(2, 3).det().is_err());
        assert_eq!(QMatrix::zeros(0, 0).det().unwrap(), rat(1));
        let m = QMatrix::from_rows(vec![vec![ratio(1, 2), ratio(1, 3)], vec![ratio(1, 4), ratio(1, 5)]]).unwrap();
        // 1/10 - 1/12 = 1/60
        assert_eq!(m.det().unwrap(), ratio(1, 60));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::zeros(2, 3).rank(), 0);
        assert_eq!(QMatrix::from_i64(&[&[1, 0, -1], &[0, 1, 1]]).rank(), 2);
        assert_eq!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let m = QMatrix::from_i64(&[&[1, 0, -1]]);
        let k = m.kernel_basis();
        assert_eq!(k.rows(), 2);
        assert_eq!(k.rank(), 2);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());

        assert_eq!(QMatrix::zeros(1, 3).kernel_basis().rank(), 3);
        assert_eq!(QMatrix::from_i64(&[&[2, 3], &[5, 7]]).kernel_basis().rows(), 0);
    }

    #[test]
    fn echelon_basis_tracks_rank() {
        let mut b = EchelonBasis::new();
        assert!(b.try_push(&[rat(1), rat(1), rat(0)]));
        assert!(!b.try_push(&[rat(2), rat(2), rat(0)]));
        assert!(b.try_push(&[rat(0), rat(1), rat(0)]));
        assert!(!b.try_push(&[rat(3), rat(-1), rat(0)]));
        assert_eq!(b.dim(), 2);
        b.pop();
        assert!(b.try_push(&[rat(0), rat(0), rat(5)]));
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_vector(&[ratio(-1, 2), ratio(3, 4), rat(0)]);
        assert_eq!(v, vec![rat(2), rat(-3), rat(0)]);
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
        prop::collection::vec((-4i64..=4, 1i64..=3), rows * cols).prop_map(move |entries| {
            let vals: Vec<Rational> = entries.into_iter().map(|(n, d)| ratio(n, d)).collect();
            QMatrix::from_rows(vals.chunks(cols).map(<[Rational]>::to_vec).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn det_is_multiplicative(a in small_matrix(4, 4), b in small_matrix(4, 4)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }

        #[test]
        fn rank_nullity(rows in 1usize..5, cols in 1usize..6, seed in any::<u64>()) {
            let vals: Vec<Rational> = (0..rows * cols)
                .map(|i| rat(((seed >> (i % 60)) as i64 % 3) - 1))
                .collect();
            let m = QMatrix::from_rows(vals.chunks(cols).map(<[Rational]>::to_vec).collect()).unwrap();
            let k = m.kernel_basis();
            prop_assert_eq!(m.rank() + k.rows(), cols);
            prop_assert!(k.rows() == 0 || m.mul(&k.transpose()).unwrap().is_zero());
        }

        #[test]
        fn det_agrees_with_rank(m in small_matrix(3, 3)) {
            prop_assert_eq!(m.det().unwrap().is_zero(), m.rank() < 3);
        }
    }
}
