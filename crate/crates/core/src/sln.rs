//! sl(n), its parabolic and seaweed subalgebras, functionals and the Kirillov form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, format_rational, parse_rational, rat, Rational, RationalMatrix};

/// Index pair `(i, j)` of the matrix unit `e_ij`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct IndexPair {
    pub i: usize,
    pub j: usize,
}

impl IndexPair {
    pub const fn new(i: usize, j: usize) -> Self {
        IndexPair { i, j }
    }

    pub fn transpose(self) -> Self {
        IndexPair::new(self.j, self.i)
    }

    pub fn is_diagonal(self) -> bool {
        self.i == self.j
    }
}

impl From<[usize; 2]> for IndexPair {
    fn from([i, j]: [usize; 2]) -> Self {
        IndexPair { i, j }
    }
}

impl From<IndexPair> for [usize; 2] {
    fn from(p: IndexPair) -> Self {
        [p.i, p.j]
    }
}

impl From<(usize, usize)> for IndexPair {
    fn from((i, j): (usize, usize)) -> Self {
        IndexPair { i, j }
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

pub fn pairs_from(list: &[(usize, usize)]) -> BTreeSet<IndexPair> {
    list.iter().map(|&p| p.into()).collect()
}

/// Basis vector of sl(n). The derived order is the canonical basis order:
/// off-diagonal units lexicographically, then `ε_1 .. ε_{n-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisElement {
    Unit(IndexPair),
    /// `ε_k = e_kk - 1/n`, for `k < n`.
    Eps(usize),
}

impl BasisElement {
    pub fn unit(i: usize, j: usize) -> Self {
        BasisElement::Unit(IndexPair::new(i, j))
    }

    /// Machine form used in JSON: `e(i,j)` or `eps(k)`.
    pub fn code(&self) -> String {
        match self {
            BasisElement::Unit(p) => format!("e({},{})", p.i, p.j),
            BasisElement::Eps(k) => format!("eps({k})"),
        }
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::Unit(p) if p.i < 10 && p.j < 10 => write!(f, "e{}{}", p.i, p.j),
            BasisElement::Unit(p) => write!(f, "e({},{})", p.i, p.j),
            BasisElement::Eps(k) => write!(f, "ε{k}"),
        }
    }
}

impl FromStr for BasisElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a basis element: {s:?}"));
        let s = s.trim();
        if let Some(inner) = s.strip_prefix("eps(").and_then(|r| r.strip_suffix(')')) {
            return inner.trim().parse().map(BasisElement::Eps).map_err(|_| bad());
        }
        let inner = s
            .strip_prefix("e(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (i, j) = inner.split_once(',').ok_or_else(bad)?;
        Ok(BasisElement::unit(
            i.trim().parse().map_err(|_| bad())?,
            j.trim().parse().map_err(|_| bad())?,
        ))
    }
}

impl Serialize for BasisElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.code())
    }
}

impl<'de> Deserialize<'de> for BasisElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Linear combination of basis elements with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    terms: BTreeMap<BasisElement, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(b: BasisElement) -> Self {
        let mut e = Element::zero();
        e.add_term(b, Rational::one());
        e
    }

    pub fn unit(i: usize, j: usize) -> Self {
        Element::basis(BasisElement::unit(i, j))
    }

    /// `ε_k` in sl(n), rewriting `ε_n = -(ε_1 + ... + ε_{n-1})`.
    pub fn eps(k: usize, n: usize) -> Self {
        if k < n {
            return Element::basis(BasisElement::Eps(k));
        }
        let mut e = Element::zero();
        for l in 1..n {
            e.add_term(BasisElement::Eps(l), rat(-1));
        }
        e
    }

    /// Traceless diagonal matrix `diag(d)` over the `ε` basis.
    pub fn diagonal(d: &[Rational]) -> Self {
        let n = d.len();
        let mut e = Element::zero();
        for k in 1..n {
            e.add_term(BasisElement::Eps(k), &d[k - 1] - &d[n - 1]);
        }
        e
    }

    pub fn add_term(&mut self, b: BasisElement, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Rational) {
        for (b, x) in &other.terms {
            self.add_term(*b, x * c);
        }
    }

    pub fn plus(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(other, &Rational::one());
        e
    }

    pub fn minus(&self, other: &Element) -> Element {
        let mut e = self.clone();
        e.add_scaled(other, &rat(-1));
        e
    }

    pub fn scaled(&self, c: &Rational) -> Element {
        let mut e = Element::zero();
        e.add_scaled(self, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: &BasisElement) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisElement, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single basis element with coefficient one, if that is what this is.
    pub fn as_basis(&self) -> Option<BasisElement> {
        match self.terms.iter().next() {
            Some((b, c)) if self.terms.len() == 1 && c.is_one() => Some(*b),
            _ => None,
        }
    }

    pub fn bracket(&self, other: &Element, n: usize) -> Element {
        let mut out = Element::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_scaled(&bracket(*a, *b, n), &(x * y));
            }
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, "-")?,
                (_, false) => write!(f, "+")?,
            }
            if !mag.is_one() {
                write!(f, "{}·", format_rational(&mag))?;
            }
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// `[a, b]` in sl(n), with diagonal output rewritten over `ε_1 .. ε_{n-1}`.
pub fn bracket(a: BasisElement, b: BasisElement, n: usize) -> Element {
    use BasisElement::*;
    match (a, b) {
        (Eps(_), Eps(_)) => Element::zero(),
        (Eps(k), Unit(p)) => {
            let c = i64::from(k == p.i) - i64::from(k == p.j);
            Element::basis(Unit(p)).scaled(&rat(c))
        }
        (Unit(p), Eps(k)) => {
            let c = i64::from(k == p.j) - i64::from(k == p.i);
            Element::basis(Unit(p)).scaled(&rat(c))
        }
        (Unit(p), Unit(q)) => {
            let (i, j, k, l) = (p.i, p.j, q.i, q.j);
            if j == k && l == i {
                Element::eps(i, n).minus(&Element::eps(j, n))
            } else if j == k {
                Element::unit(i, l)
            } else if l == i {
                Element::unit(k, j).scaled(&rat(-1))
            } else {
                Element::zero()
            }
        }
    }
}

/// Which family a support was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SupportKind {
    Parabolic { m: usize },
    Seaweed { top: Vec<usize>, bottom: Vec<usize> },
    Custom,
}

/// The off-diagonal support `Π(g)` of a subalgebra of sl(n) containing the Cartan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSupport")]
pub struct LieSupport {
    pub n: usize,
    pub kind: SupportKind,
    pub pairs: BTreeSet<IndexPair>,
}

#[derive(Deserialize)]
struct RawSupport {
    n: usize,
    kind: SupportKind,
    pairs: BTreeSet<IndexPair>,
}

impl TryFrom<RawSupport> for LieSupport {
    type Error = Error;

    fn try_from(r: RawSupport) -> Result<Self> {
        let mut s = LieSupport::custom(r.n, r.pairs)?;
        s.kind = r.kind;
        Ok(s)
    }
}

fn block_ranges(comp: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 1;
    for &len in comp {
        out.push((start, start + len - 1));
        start += len;
    }
    out
}

impl LieSupport {
    /// Subalgebra with the given off-diagonal pairs; checks ranges and closure.
    pub fn custom(n: usize, pairs: BTreeSet<IndexPair>) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameters("n must be at least 1".into()));
        }
        let pairs: BTreeSet<IndexPair> = pairs.into_iter().filter(|p| !p.is_diagonal()).collect();
        if let Some(p) = pairs.iter().find(|p| p.i == 0 || p.j == 0 || p.i > n || p.j > n) {
            return Err(Error::OutsideSupport(*p));
        }
        let s = LieSupport { n, kind: SupportKind::Custom, pairs };
        s.check_closure()?;
        Ok(s)
    }

    pub fn parabolic(n: usize, m: usize) -> Result<Self> {
        if m < 1 || m >= n {
            return Err(Error::InvalidParameters(format!("parabolic needs 1 <= m < n, got ({n}, {m})")));
        }
        let mut s = Self::seaweed(&[n], &[m, n - m])?;
        s.kind = SupportKind::Parabolic { m };
        Ok(s)
    }

    /// Upper-triangular blocks from `top`, lower-triangular blocks from `bottom`.
    pub fn seaweed(top: &[usize], bottom: &[usize]) -> Result<Self> {
        let n: usize = top.iter().sum();
        if n == 0 || bottom.iter().sum::<usize>() != n || top.contains(&0) || bottom.contains(&0) {
            return Err(Error::InvalidParameters(
                "compositions must have positive parts and equal sums".into(),
            ));
        }
        let mut pairs = BTreeSet::new();
        for (p, q) in block_ranges(top) {
            for i in p..=q {
                for j in i + 1..=q {
                    pairs.insert(IndexPair::new(i, j));
                }
            }
        }
        for (p, q) in block_ranges(bottom) {
            for i in p..=q {
                for j in p..i {
                    pairs.insert(IndexPair::new(i, j));
                }
            }
        }
        Ok(LieSupport {
            n,
            kind: SupportKind::Seaweed { top: top.to_vec(), bottom: bottom.to_vec() },
            pairs,
        })
    }

    /// All of sl(n).
    pub fn full(n: usize) -> Result<Self> {
        Self::seaweed(&[n], &[n])
    }

    /// Top and bottom compositions, if this is a seaweed (parabolics included).
    pub fn compositions(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        match &self.kind {
            SupportKind::Parabolic { m } => Some((vec![self.n], vec![*m, self.n - m])),
            SupportKind::Seaweed { top, bottom } => Some((top.clone(), bottom.clone())),
            SupportKind::Custom => None,
        }
    }

    fn check_closure(&self) -> Result<()> {
        for a in &self.pairs {
            for b in self.pairs.range(IndexPair::new(a.j, 0)..IndexPair::new(a.j + 1, 0)) {
                if b.j != a.i && !self.pairs.contains(&IndexPair::new(a.i, b.j)) {
                    return Err(Error::NotClosed { a: *a, b: *b });
                }
            }
        }
        Ok(())
    }

    /// Membership in `Π(g)`, diagonal included.
    pub fn contains(&self, p: IndexPair) -> bool {
        (p.is_diagonal() && p.i >= 1 && p.i <= self.n) || self.pairs.contains(&p)
    }

    pub fn dim(&self) -> usize {
        self.pairs.len() + self.n - 1
    }

    /// Canonical basis: units in lexicographic order, then `ε_1 .. ε_{n-1}`.
    pub fn basis(&self) -> Vec<BasisElement> {
        self.pairs
            .iter()
            .map(|&p| BasisElement::Unit(p))
            .chain((1..self.n).map(BasisElement::Eps))
            .collect()
    }

    pub fn contains_element(&self, b: &BasisElement) -> bool {
        match b {
            BasisElement::Unit(p) => self.pairs.contains(p),
            BasisElement::Eps(k) => *k >= 1 && *k < self.n,
        }
    }

    /// `Π(g)` with all diagonal pairs added.
    pub fn pairs_with_diagonal(&self) -> BTreeSet<IndexPair> {
        let mut all = self.pairs.clone();
        all.extend((1..=self.n).map(|k| IndexPair::new(k, k)));
        all
    }
}

/// A functional given by its values `F(e_ij)`; diagonal values allowed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawFunctional", try_from = "RawFunctional")]
pub struct Functional {
    pub coefficients: BTreeMap<IndexPair, Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawFunctional {
    coefficients: Vec<(IndexPair, String)>,
}

impl From<Functional> for RawFunctional {
    fn from(f: Functional) -> Self {
        RawFunctional {
            coefficients: f
                .coefficients
                .iter()
                .map(|(p, c)| (*p, format_rational(c)))
                .collect(),
        }
    }
}

impl TryFrom<RawFunctional> for Functional {
    type Error = Error;

    fn try_from(r: RawFunctional) -> Result<Self> {
        let mut f = Functional::default();
        for (p, c) in r.coefficients {
            f.set(p, parse_rational(&c)?);
        }
        Ok(f)
    }
}

impl Functional {
    /// `F_S`: coefficient one on every pair of `S`.
    pub fn from_support(s: &BTreeSet<IndexPair>) -> Self {
        let mut f = Functional::default();
        for &p in s {
            f.set(p, Rational::one());
        }
        f
    }

    pub fn set(&mut self, p: IndexPair, c: Rational) {
        if c.is_zero() {
            self.coefficients.remove(&p);
        } else {
            self.coefficients.insert(p, c);
        }
    }

    pub fn get(&self, p: IndexPair) -> Rational {
        self.coefficients.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    /// Integer coefficients drawn uniformly from `[-10n, 10n]` on every pair of
    /// `Π(g)`, diagonal included.
    pub fn random<R: Rng>(g: &LieSupport, rng: &mut R) -> Self {
        let bound = 10 * g.n as i64;
        let mut f = Functional::default();
        for p in g.pairs_with_diagonal() {
            f.set(p, rat(rng.random_range(-bound..=bound)));
        }
        f
    }

    /// Value on a basis element; `F(ε_k) = F(e_kk) - (1/n) Σ F(e_ii)`.
    pub fn on_basis(&self, b: &BasisElement, n: usize) -> Rational {
        match b {
            BasisElement::Unit(p) => self.get(*p),
            BasisElement::Eps(k) => self.get(IndexPair::new(*k, *k)) - self.diagonal_trace(n) / rat(n as i64),
        }
    }

    fn diagonal_trace(&self, n: usize) -> Rational {
        (1..=n).map(|k| self.get(IndexPair::new(k, k))).sum()
    }

    pub fn evaluate(&self, x: &Element, n: usize) -> Rational {
        let mean = self.diagonal_trace(n) / rat(n as i64);
        x.terms()
            .map(|(b, c)| {
                let v = match b {
                    BasisElement::Unit(p) => self.get(*p),
                    BasisElement::Eps(k) => self.get(IndexPair::new(*k, *k)) - &mean,
                };
                v * c
            })
            .sum()
    }

    pub fn support(&self) -> BTreeSet<IndexPair> {
        self.coefficients.keys().copied().collect()
    }
}

/// Matrix of `B_F(x, y) = F([x, y])` on the canonical basis of `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KirillovMatrix {
    pub basis: Vec<BasisElement>,
    pub matrix: RationalMatrix,
}

impl KirillovMatrix {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, b: &BasisElement) -> Option<usize> {
        self.basis.binary_search(b).ok()
    }
}

#[derive(Serialize, Deserialize)]
struct RawKirillov {
    basis: Vec<BasisElement>,
    size: usize,
    entries: Vec<(usize, usize, String)>,
}

impl Serialize for KirillovMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawKirillov {
            basis: self.basis.clone(),
            size: self.size(),
            entries: self
                .matrix
                .nonzero_entries()
                .into_iter()
                .map(|(r, c, x)| (r, c, format_rational(&x)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KirillovMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawKirillov::deserialize(d)?;
        if raw.size != raw.basis.len() {
            return Err(serde::de::Error::custom("size does not match basis length"));
        }
        let mut matrix = RationalMatrix::zeros(raw.size, raw.size);
        for (r, c, x) in raw.entries {
            if r >= raw.size || c >= raw.size {
                return Err(serde::de::Error::custom("entry out of range"));
            }
            matrix.set(r, c, parse_rational(&x).map_err(serde::de::Error::custom)?);
        }
        Ok(KirillovMatrix { basis: raw.basis, matrix })
    }
}

fn check_functional(g: &LieSupport, f: &Functional) -> Result<()> {
    match f.coefficients.keys().find(|p| !g.contains(**p)) {
        Some(p) => Err(Error::OutsideSupport(*p)),
        None => Ok(()),
    }
}

pub fn kirillov_matrix(g: &LieSupport, f: &Functional) -> Result<KirillovMatrix> {
    check_functional(g, f)?;
    let basis = g.basis();
    let mut matrix = RationalMatrix::zeros(basis.len(), basis.len());
    for (a, x) in basis.iter().enumerate() {
        for (b, y) in basis.iter().enumerate().skip(a + 1) {
            let v = f.evaluate(&bracket(*x, *y, g.n), g.n);
            if !v.is_zero() {
                matrix.set(b, a, -v.clone());
                matrix.set(a, b, v);
            }
        }
    }
    Ok(KirillovMatrix { basis, matrix })
}

/// Exact non-degeneracy certificate for `B_F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusCertificate {
    pub frobenius: bool,
    pub dimension: usize,
    pub rank: usize,
    pub kernel_dimension: usize,
    #[serde(with = "exact::rational_string")]
    pub determinant: Rational,
}

pub fn certify(km: &KirillovMatrix) -> FrobeniusCertificate {
    let e = exact::eliminate(&km.matrix);
    let dimension = km.size();
    FrobeniusCertificate {
        frobenius: e.rank == dimension,
        dimension,
        rank: e.rank,
        kernel_dimension: dimension - e.rank,
        determinant: e.determinant.unwrap_or_else(Rational::zero),
    }
}

pub fn is_frobenius(g: &LieSupport, f: &Functional) -> Result<FrobeniusCertificate> {
    Ok(certify(&kirillov_matrix(g, f)?))
}

/// Minimum kernel dimension over `samples` seeded random functionals.
pub fn algebra_index_estimate(g: &LieSupport, samples: usize, seed: u64) -> Result<usize> {
    if samples == 0 {
        return Err(Error::InvalidParameters("samples must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = usize::MAX;
    for _ in 0..samples {
        let f = Functional::random(g, &mut rng);
        best = best.min(is_frobenius(g, &f)?.kernel_dimension);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// The principal element `F̂`, defined by `F([F̂, y]) = F(y)` for all `y`,
/// found by solving the linear system against `B_F`.
pub fn principal_by_solving(g: &LieSupport, f: &Functional) -> Result<Element> {
    let km = kirillov_matrix(g, f)?;
    let inv = exact::invert(&km.matrix)?;
    let mut rhs = RationalMatrix::zeros(km.size(), 1);
    for (b, x) in km.basis.iter().enumerate() {
        rhs.set(b, 0, f.on_basis(x, g.n));
    }
    let c = inv.mul(&rhs)?.neg();
    let mut out = Element::zero();
    for (a, x) in km.basis.iter().enumerate() {
        out.add_term(*x, c.get(a, 0));
    }
    Ok(out)
}

/// Extracts the diagonal `(d_1, .., d_n)` with trace zero from an element
/// supported on the Cartan.
pub fn cartan_diagonal(x: &Element, n: usize) -> Option<Vec<Rational>> {
    let mut d = vec![Rational::zero(); n];
    for (b, c) in x.terms() {
        match b {
            BasisElement::Eps(k) => d[k - 1] += c,
            BasisElement::Unit(_) => return None,
        }
    }
    let shift: Rational = d.iter().sum::<Rational>() / rat(n as i64);
    Some(d.into_iter().map(|v| v - &shift).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(i: usize, j: usize) -> IndexPair {
        IndexPair::new(i, j)
    }

    #[test]
    fn bracket_examples() {
        let b = |a, c| bracket(a, c, 3);
        assert_eq!(
            b(BasisElement::unit(1, 2), BasisElement::unit(2, 1)),
            Element::eps(1, 3).minus(&Element::eps(2, 3))
        );
        assert_eq!(b(BasisElement::Eps(1), BasisElement::unit(1, 2)), Element::unit(1, 2));
        assert_eq!(b(BasisElement::unit(1, 2), BasisElement::unit(2, 3)), Element::unit(1, 3));
        assert_eq!(
            b(BasisElement::unit(2, 3), BasisElement::unit(1, 2)),
            Element::unit(1, 3).scaled(&rat(-1))
        );
        // e_23 with e_32 lands on ε_2 - ε_3 = ε_1 + 2ε_2
        let h = b(BasisElement::unit(2, 3), BasisElement::unit(3, 2));
        assert_eq!(h.coefficient(&BasisElement::Eps(1)), rat(1));
        assert_eq!(h.coefficient(&BasisElement::Eps(2)), rat(2));
    }

    #[test]
    fn dimensions() {
        assert_eq!(LieSupport::parabolic(7, 3).unwrap().dim(), 36);
        assert_eq!(LieSupport::parabolic(4, 3).unwrap().dim(), 12);
        let s = LieSupport::parabolic(2, 1).unwrap();
        assert_eq!(s.pairs, pairs_from(&[(1, 2)]));
        assert_eq!(s.dim(), 2);
        for n in 2..=12 {
            for m in 1..n {
                assert_eq!(LieSupport::parabolic(n, m).unwrap().dim(), n * n - m * (n - m) - 1);
            }
        }
        assert!(LieSupport::parabolic(3, 3).is_err());
        assert!(LieSupport::parabolic(3, 0).is_err());
    }

    #[test]
    fn seaweed_patterns() {
        let p73 = LieSupport::parabolic(7, 3).unwrap();
        assert_eq!(LieSupport::seaweed(&[7], &[3, 4]).unwrap().pairs, p73.pairs);
        assert!(LieSupport::seaweed(&[1, 1], &[1, 1]).unwrap().pairs.is_empty());
        let s = LieSupport::seaweed(&[2, 2], &[4]).unwrap();
        let mut want = BTreeSet::new();
        for i in 1..=4 {
            for j in 1..i {
                want.insert(p(i, j));
            }
        }
        want.insert(p(1, 2));
        want.insert(p(3, 4));
        assert_eq!(s.pairs, want);
        assert!(LieSupport::seaweed(&[2, 2], &[3]).is_err());
    }

    #[test]
    fn closure_rejects() {
        let err = LieSupport::custom(3, pairs_from(&[(1, 2), (2, 3)])).unwrap_err();
        assert!(matches!(err, Error::NotClosed { .. }));
        assert!(LieSupport::custom(3, pairs_from(&[(1, 2), (2, 3), (1, 3)])).is_ok());
        assert!(LieSupport::custom(3, pairs_from(&[(1, 4)])).is_err());
    }

    #[test]
    fn smallest_kirillov() {
        let g = LieSupport::parabolic(2, 1).unwrap();
        let f = Functional::from_support(&pairs_from(&[(1, 2)]));
        let km = kirillov_matrix(&g, &f).unwrap();
        assert_eq!(km.basis, vec![BasisElement::unit(1, 2), BasisElement::Eps(1)]);
        assert_eq!(
            km.matrix,
            RationalMatrix::from_i64_rows(&[vec![0, -1], vec![1, 0]]).unwrap()
        );
        assert!(is_frobenius(&g, &f).unwrap().frobenius);
    }

    #[test]
    fn functional_outside_support() {
        let g = LieSupport::parabolic(3, 1).unwrap();
        let f = Functional::from_support(&pairs_from(&[(2, 1)]));
        assert_eq!(kirillov_matrix(&g, &f).unwrap_err(), Error::OutsideSupport(p(2, 1)));
    }

    #[test]
    fn sl2_cartan_index() {
        let g = LieSupport::seaweed(&[1, 1], &[1, 1]).unwrap();
        assert_eq!(algebra_index_estimate(&g, 3, 1).unwrap(), 1);
        assert_eq!(algebra_index_estimate(&LieSupport::parabolic(4, 2).unwrap(), 5, 2).unwrap(), 1);
    }

    #[test]
    fn eps_evaluation_uses_trace() {
        let mut f = Functional::default();
        f.set(p(1, 1), rat(3));
        f.set(p(2, 2), rat(1));
        assert_eq!(f.on_basis(&BasisElement::Eps(1), 2), rat(1));
    }

    #[test]
    fn json_round_trips() {
        let g = LieSupport::parabolic(4, 3).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert!(s.contains("\"pairs\":[[1,2]"));
        let back: LieSupport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let mut f = Functional::default();
        f.set(p(1, 2), crate::exact::ratio(-3, 7));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"coefficients":[[[1,2],"-3/7"]]}"#);
        assert_eq!(serde_json::from_str::<Functional>(&s).unwrap(), f);
        let km = kirillov_matrix(&LieSupport::parabolic(2, 1).unwrap(), &Functional::from_support(&pairs_from(&[(1, 2)]))).unwrap();
        let s = serde_json::to_string(&km).unwrap();
        assert_eq!(serde_json::from_str::<KirillovMatrix>(&s).unwrap(), km);
        assert!(serde_json::from_str::<LieSupport>(r#"{"n":3,"kind":{"type":"custom"},"pairs":[[1,2],[2,3]]}"#).is_err());
    }

    #[test]
    fn basis_codes_parse() {
        for b in [BasisElement::unit(10, 2), BasisElement::Eps(4)] {
            assert_eq!(b.code().parse::<BasisElement>().unwrap(), b);
        }
        assert_eq!(BasisElement::unit(3, 2).to_string(), "e32");
        assert!("f(1,2)".parse::<BasisElement>().is_err());
    }
}
