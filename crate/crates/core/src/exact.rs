//! Exact rational linear algebra.
//!
//! Elimination is fraction-free: rows are cleared of denominators and then
//! reduced with Bareiss updates over `BigInt`, so a `{-1, 0, 1}` input never
//! leaves integer arithmetic.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod rational_string {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Storage {
    Sparse(BTreeMap<(usize, usize), Rational>),
    Dense(Vec<Rational>),
}

/// Matrix over the rationals. Starts sparse and switches to dense storage
/// once more than half of the entries are nonzero.
#[derive(Clone)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl PartialEq for RationalMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.nonzero_entries() == other.nonzero_entries()
    }
}

impl Eq for RationalMatrix {}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format_rational(&self.get(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            storage: Storage::Sparse(BTreeMap::new()),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
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

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        assert!(r < self.rows && c < self.cols, "index out of range");
        match &self.storage {
            Storage::Sparse(map) => map.get(&(r, c)).cloned().unwrap_or_else(Rational::zero),
            Storage::Dense(v) => v[r * self.cols + c].clone(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let cols = self.cols;
        match &mut self.storage {
            Storage::Dense(v) => v[r * cols + c] = value,
            Storage::Sparse(map) => {
                if value.is_zero() {
                    map.remove(&(r, c));
                } else {
                    map.insert((r, c), value);
                }
            }
        }
        self.maybe_densify();
    }

    fn maybe_densify(&mut self) {
        if let Storage::Sparse(map) = &self.storage {
            if 2 * map.len() > self.rows * self.cols {
                let mut v = vec![Rational::zero(); self.rows * self.cols];
                for (&(r, c), x) in map {
                    v[r * self.cols + c] = x.clone();
                }
                self.storage = Storage::Dense(v);
            }
        }
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Sparse(map) => map.len(),
            Storage::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    /// All nonzero entries in row-major order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, Rational)> {
        match &self.storage {
            Storage::Sparse(map) => map.iter().map(|(&(r, c), x)| (r, c, x.clone())).collect(),
            Storage::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| (k / self.cols, k % self.cols, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, c, x) in self.nonzero_entries() {
            out[r][c] = x;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, x) in self.nonzero_entries() {
            t.set(c, r, x);
        }
        t
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        if !k.is_zero() {
            for (r, c, x) in self.nonzero_entries() {
                out.set(r, c, x * k);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("add: shapes differ".into()));
        }
        let mut out = self.clone();
        for (r, c, x) in other.nonzero_entries() {
            let v = out.get(r, c) + x;
            out.set(r, c, v);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); other.rows];
        for (r, c, x) in other.nonzero_entries() {
            by_row[r].push((c, x));
        }
        let mut acc = vec![Rational::zero(); self.rows * other.cols];
        for (r, k, x) in self.nonzero_entries() {
            for (c, y) in &by_row[k] {
                acc[r * other.cols + c] += &x * y;
            }
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (k, v) in acc.into_iter().enumerate() {
            if !v.is_zero() {
                out.set(k / other.cols, k % other.cols, v);
            }
        }
        Ok(out)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.is_square()
            && self
                .nonzero_entries()
                .iter()
                .all(|(r, c, x)| self.get(*c, *r) == -x.clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows) && self.is_square()
    }
}

/// Outcome of exact elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub rank: usize,
    /// Present only for square input.
    pub determinant: Option<Rational>,
}

/// Rows scaled to integers, with the product of the scale factors.
fn integer_rows(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let dense = m.to_dense_rows();
    let mut scale = BigInt::one();
    let rows = dense
        .into_iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            row.into_iter()
                .map(|x| (x * Rational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect();
    (rows, scale)
}

/// Rank, and determinant for square input, by Bareiss elimination.
pub fn eliminate(m: &RationalMatrix) -> Elimination {
    let (mut a, scale) = integer_rows(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut negate = false;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = pivot;
        rank += 1;
    }
    let determinant = m.is_square().then(|| {
        if rank < rows {
            Rational::zero()
        } else {
            let d = if rows == 0 { BigInt::one() } else { prev };
            let d = if negate { -d } else { d };
            Rational::new(d, scale)
        }
    });
    Elimination { rank, determinant }
}

pub fn rank(m: &RationalMatrix) -> usize {
    eliminate(m).rank
}

pub fn determinant(m: &RationalMatrix) -> Result<Rational> {
    eliminate(m)
        .determinant
        .ok_or_else(|| Error::Dimension("determinant of a non-square matrix".into()))
}

pub fn kernel_dimension(m: &RationalMatrix) -> usize {
    m.cols() - rank(m)
}

/// Exact inverse by Gauss-Jordan elimination on `[m | I]`.
pub fn invert(m: &RationalMatrix) -> Result<RationalMatrix> {
    if !m.is_square() {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut a = m.to_dense_rows();
    let mut inv = RationalMatrix::identity(n).to_dense_rows();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Err(Error::Singular {
                kernel_dimension: kernel_dimension(m),
            });
        };
        a.swap(p, c);
        inv.swap(p, c);
        let pinv = a[c][c].recip();
        for x in a[c].iter_mut().chain(inv[c].iter_mut()) {
            if !x.is_zero() {
                *x *= &pinv;
            }
        }
        let (pa, pi) = (a[c].clone(), inv[c].clone());
        let pa_nz: Vec<usize> = (0..n).filter(|&j| !pa[j].is_zero()).collect();
        let pi_nz: Vec<usize> = (0..n).filter(|&j| !pi[j].is_zero()).collect();
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for &j in &pa_nz {
                let d = &f * &pa[j];
                a[r][j] -= d;
            }
            for &j in &pi_nz {
                let d = &f * &pi[j];
                inv[r][j] -= d;
            }
        }
    }
    RationalMatrix::from_rows(inv)
}

/// `true` when the rational is an integer.
pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Converts an integral rational to `i64`.
pub fn to_i64(r: &Rational) -> Option<i64> {
    use num::ToPrimitive;
    if is_integer(r) {
        r.numer().to_i64()
    } else {
        None
    }
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn symplectic_block() {
        let j = m(&[vec![0, 1], vec![-1, 0]]);
        assert_eq!(eliminate(&j), Elimination { rank: 2, determinant: Some(rat(1)) });
        assert_eq!(invert(&j).unwrap(), m(&[vec![0, -1], vec![1, 0]]));
        assert_eq!(kernel_dimension(&j), 0);
    }

    #[test]
    fn empty_matrix() {
        let e = RationalMatrix::zeros(0, 0);
        assert_eq!(eliminate(&e), Elimination { rank: 0, determinant: Some(rat(1)) });
    }

    #[test]
    fn zero_matrix_kernel() {
        assert_eq!(kernel_dimension(&RationalMatrix::zeros(3, 3)), 3);
        assert_eq!(
            invert(&RationalMatrix::zeros(3, 3)),
            Err(Error::Singular { kernel_dimension: 3 })
        );
    }

    #[test]
    fn identity_inverse() {
        for n in 0..5 {
            assert_eq!(invert(&RationalMatrix::identity(n)).unwrap(), RationalMatrix::identity(n));
        }
    }

    #[test]
    fn rational_determinant() {
        let a = RationalMatrix::from_rows(vec![
            vec![ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 4), ratio(1, 5)],
        ])
        .unwrap();
        assert_eq!(determinant(&a).unwrap(), ratio(1, 10) - ratio(1, 12));
    }

    #[test]
    fn swaps_track_sign() {
        let a = m(&[vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]);
        assert_eq!(determinant(&a).unwrap(), rat(-1));
        let b = m(&[vec![0, 2, 0], vec![3, 0, 0], vec![0, 0, 5]]);
        assert_eq!(determinant(&b).unwrap(), rat(-30));
    }

    #[test]
    fn rank_deficient_with_skipped_columns() {
        let a = m(&[vec![1, 2, 3, 4], vec![2, 4, 6, 9], vec![3, 6, 9, 13]]);
        assert_eq!(rank(&a), 2);
        assert_eq!(rank(&a.transpose()), 2);
    }

    #[test]
    fn densifies_past_half() {
        let mut a = RationalMatrix::zeros(2, 2);
        a.set(0, 0, rat(1));
        a.set(1, 1, rat(1));
        assert!(!a.is_dense());
        a.set(0, 1, rat(1));
        assert!(a.is_dense());
        assert_eq!(a.nnz(), 3);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-15/7").unwrap(), ratio(-15, 7));
        assert_eq!(parse_rational("4/2").unwrap(), rat(2));
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(0)), "0");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
