//! Bivectors, the three r-matrix constructions and the classical Yang-Baxter
//! check.
//!
//! `a∧b` stands for `a⊗b - b⊗a`. With that convention the r-matrix of a
//! Frobenius pair is `R_SCALE · Σ_{i<j} (B⁻¹)_ij x_i∧x_j`, so its coefficient
//! matrix `R` satisfies `R·B = R_SCALE·I`. The choice `R_SCALE = -1` makes a
//! dual pair `B(x, x') = 1` contribute exactly `x∧x'`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num::bigint::BigInt;
use num::integer::Integer;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, format_rational, parse_rational, rat, ratio, Rational, RationalMatrix};
use crate::form_graph::{FormGraph, FormVertex};
use crate::gallery::PrincipalElement;
use crate::sln::{bracket, BasisElement, Element, Functional, IndexPair, KirillovMatrix, LieSupport};

/// Global normalisation of every r-matrix produced here.
pub const R_SCALE: i64 = -1;

/// `Σ c_ab a∧b` stored with `a < b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WedgeTwo {
    terms: BTreeMap<(BasisElement, BasisElement), Rational>,
}

impl WedgeTwo {
    pub fn zero() -> Self {
        WedgeTwo::default()
    }

    /// Adds `c·a∧b`, reordering and flipping the sign as needed.
    pub fn add_term(&mut self, a: BasisElement, b: BasisElement, c: Rational) {
        if a == b || c.is_zero() {
            return;
        }
        let (key, c) = if a < b { ((a, b), c) } else { ((b, a), -c) };
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `x∧y` expanded bilinearly.
    pub fn wedge(x: &Element, y: &Element) -> Self {
        let mut w = WedgeTwo::zero();
        w.add_wedge(x, y, &Rational::one());
        w
    }

    pub fn add_wedge(&mut self, x: &Element, y: &Element, c: &Rational) {
        for (a, p) in x.terms() {
            for (b, q) in y.terms() {
                self.add_term(*a, *b, p * q * c);
            }
        }
    }

    pub fn add(&mut self, other: &WedgeTwo) {
        for ((a, b), c) in &other.terms {
            self.add_term(*a, *b, c.clone());
        }
    }

    pub fn plus(&self, other: &WedgeTwo) -> WedgeTwo {
        let mut w = self.clone();
        w.add(other);
        w
    }

    pub fn scaled(&self, k: &Rational) -> WedgeTwo {
        let mut w = WedgeTwo::zero();
        for ((a, b), c) in &self.terms {
            w.add_term(*a, *b, c * k);
        }
        w
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

    /// Coefficient of `a∧b` (antisymmetric in the arguments).
    pub fn coefficient(&self, a: BasisElement, b: BasisElement) -> Rational {
        if a < b {
            self.terms.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
        } else {
            -self.terms.get(&(b, a)).cloned().unwrap_or_else(Rational::zero)
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(BasisElement, BasisElement), &Rational)> {
        self.terms.iter()
    }

    /// Basis elements that occur.
    pub fn support(&self) -> BTreeSet<BasisElement> {
        self.terms.keys().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// Skew matrix `R` with `R_ab` the coefficient of `a∧b`.
    pub fn coefficient_matrix(&self, basis: &[BasisElement]) -> Result<RationalMatrix> {
        let mut m = RationalMatrix::zeros(basis.len(), basis.len());
        let index = |b: &BasisElement| {
            basis.binary_search(b).map_err(|_| Error::Dimension(format!("{b} is not in the basis")))
        };
        for ((a, b), c) in &self.terms {
            let (i, j) = (index(a)?, index(b)?);
            m.set(i, j, c.clone());
            m.set(j, i, -c.clone());
        }
        Ok(m)
    }

    /// `λ` with `other = λ·self`, if there is one.
    pub fn ratio_to(&self, other: &WedgeTwo) -> Option<Rational> {
        let ((a, b), c) = self.terms.iter().next()?;
        let lambda = other.coefficient(*a, *b) / c;
        (self.scaled(&lambda) == *other).then_some(lambda)
    }
}

impl fmt::Display for WedgeTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((a, b), c)) in self.terms.iter().enumerate() {
            write_coefficient(f, k, c)?;
            write!(f, "{a}∧{b}")?;
        }
        Ok(())
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, k: usize, c: &Rational) -> fmt::Result {
    match (k, c.is_negative()) {
        (0, true) => write!(f, "-")?,
        (0, false) => {}
        (_, true) => write!(f, " - ")?,
        (_, false) => write!(f, " + ")?,
    }
    let mag = c.abs();
    if !mag.is_one() {
        write!(f, "{}·", format_rational(&mag))?;
    }
    Ok(())
}

impl Serialize for WedgeTwo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<([BasisElement; 2], String)> =
            self.terms.iter().map(|((a, b), c)| ([*a, *b], format_rational(c))).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WedgeTwo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<([BasisElement; 2], String)>::deserialize(d)?;
        let mut w = WedgeTwo::zero();
        for ([a, b], c) in raw {
            w.add_term(a, b, parse_rational(&c).map_err(serde::de::Error::custom)?);
        }
        Ok(w)
    }
}

/// `Σ c_abc a∧b∧c` stored with `a < b < c`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WedgeThree {
    terms: BTreeMap<[BasisElement; 3], Rational>,
}

impl WedgeThree {
    pub fn zero() -> Self {
        WedgeThree::default()
    }

    /// Adds `c·a∧b∧c` for any order of the factors.
    pub fn add_term(&mut self, mut t: [BasisElement; 3], c: Rational) {
        if c.is_zero() || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return;
        }
        let mut sign = false;
        for i in 0..3 {
            for j in 0..2 - i {
                if t[j] > t[j + 1] {
                    t.swap(j, j + 1);
                    sign = !sign;
                }
            }
        }
        let c = if sign { -c } else { c };
        let entry = self.terms.entry(t).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&t);
        }
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

    pub fn coefficient(&self, t: [BasisElement; 3]) -> Rational {
        let mut w = WedgeThree::zero();
        w.add_term(t, Rational::one());
        match w.terms.into_iter().next() {
            Some((key, sign)) => self.terms.get(&key).map(|c| c * sign).unwrap_or_else(Rational::zero),
            None => Rational::zero(),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[BasisElement; 3], &Rational)> {
        self.terms.iter()
    }
}

impl fmt::Display for WedgeThree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ([a, b, c], x)) in self.terms.iter().enumerate() {
            write_coefficient(f, k, x)?;
            write!(f, "{a}∧{b}∧{c}")?;
        }
        Ok(())
    }
}

impl Serialize for WedgeThree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<([BasisElement; 3], String)> =
            self.terms.iter().map(|(t, c)| (*t, format_rational(c))).collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WedgeThree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<([BasisElement; 3], String)>::deserialize(d)?;
        let mut w = WedgeThree::zero();
        for (t, c) in raw {
            w.add_term(t, parse_rational(&c).map_err(serde::de::Error::custom)?);
        }
        Ok(w)
    }
}

/// `B(x, y)` read off the Kirillov matrix.
pub fn form_value(km: &KirillovMatrix, x: &Element, y: &Element) -> Result<Rational> {
    let mut v = Rational::zero();
    for (a, p) in x.terms() {
        let i = km.index_of(a).ok_or_else(|| Error::Dimension(format!("{a} is not in the basis")))?;
        for (b, q) in y.terms() {
            let j = km.index_of(b).ok_or_else(|| Error::Dimension(format!("{b} is not in the basis")))?;
            v += km.matrix.get(i, j) * p * q;
        }
    }
    Ok(v)
}

pub fn r_from_inverse(km: &KirillovMatrix) -> Result<WedgeTwo> {
    let inv = exact::invert(&km.matrix)?;
    let scale = rat(R_SCALE);
    let mut r = WedgeTwo::zero();
    for (i, j, c) in inv.nonzero_entries() {
        if i < j {
            r.add_term(km.basis[i], km.basis[j], c * &scale);
        }
    }
    Ok(r)
}

/// `R·B = R_SCALE·I` exactly.
pub fn satisfies_defining_property(r: &WedgeTwo, km: &KirillovMatrix) -> Result<bool> {
    let rm = r.coefficient_matrix(&km.basis)?;
    Ok(rm.mul(&km.matrix)? == RationalMatrix::identity(km.size()).scale(&rat(R_SCALE)))
}

/// `even` spans the even eigenspaces of `ad(d)` (Cartan included) and
/// `odd[i]` is the element of the odd ones with `B(even[j], odd[i]) = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianSplit {
    pub even: Vec<Element>,
    pub odd: Vec<Element>,
    /// `ad(d)` eigenvalue of `even[i]`; its partner has `1 - eigenvalue`.
    pub eigenvalues: Vec<i64>,
    /// `B(even_i, odd_j)`, the identity after dualisation.
    pub pairing: RationalMatrix,
}

pub fn lagrangian_split(g: &LieSupport, f: &Functional, d: &PrincipalElement) -> Result<LagrangianSplit> {
    let km = crate::sln::kirillov_matrix(g, f)?;
    let mut spaces: BTreeMap<i64, Vec<BasisElement>> = BTreeMap::new();
    for b in &km.basis {
        let v = d.eigenvalue_on_basis(b);
        let k = exact::to_i64(&v).ok_or_else(|| Error::NonIntegral(format!("ad eigenvalue {} on {b}", format_rational(&v))))?;
        spaces.entry(k).or_default().push(*b);
    }
    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut eigenvalues = Vec::new();
    for (&m, xs) in spaces.iter().filter(|(m, _)| m.rem_euclid(2) == 0) {
        let empty = Vec::new();
        let ys = spaces.get(&(1 - m)).unwrap_or(&empty);
        if ys.len() != xs.len() {
            return Err(Error::Singular { kernel_dimension: xs.len().abs_diff(ys.len()) });
        }
        let mut p = RationalMatrix::zeros(xs.len(), ys.len());
        for (i, x) in xs.iter().enumerate() {
            for (k, y) in ys.iter().enumerate() {
                p.set(i, k, form_value(&km, &Element::basis(*x), &Element::basis(*y))?);
            }
        }
        let c = exact::invert(&p)?.transpose();
        for (i, x) in xs.iter().enumerate() {
            let mut dual = Element::zero();
            for (k, y) in ys.iter().enumerate() {
                dual.add_term(*y, c.get(i, k));
            }
            even.push(Element::basis(*x));
            odd.push(dual);
            eigenvalues.push(m);
        }
    }
    if even.len() + odd.len() != km.size() {
        return Err(Error::Singular { kernel_dimension: km.size() - even.len() - odd.len() });
    }
    let mut pairing = RationalMatrix::zeros(even.len(), odd.len());
    for (i, x) in even.iter().enumerate() {
        for (j, y) in odd.iter().enumerate() {
            pairing.set(i, j, form_value(&km, x, y)?);
        }
    }
    Ok(LagrangianSplit { even, odd, eigenvalues, pairing })
}

pub fn r_from_lagrangian(ls: &LagrangianSplit) -> WedgeTwo {
    let mut r = WedgeTwo::zero();
    for (x, y) in ls.even.iter().zip(&ls.odd) {
        r.add_wedge(x, y, &Rational::one());
    }
    r
}

/// One detachment: the link `link.0 ∧ link.1` (weighted by `1/B`) leaves
/// the graph and each listed vertex takes the new value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelStep {
    pub link: (FormVertex, FormVertex),
    pub link_elements: (Element, Element),
    pub weight: Rational,
    pub replaced: Vec<(FormVertex, Element)>,
}

/// Contribution of one component of `Γ(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeeledComponent {
    pub root: FormVertex,
    pub steps: Vec<PeelStep>,
    pub r: WedgeTwo,
}

impl PeeledComponent {
    /// Grouped rendering, e.g. `e32∧(e21+e34) + e13∧e34`.
    pub fn notation(&self) -> String {
        let wrap = |e: &Element| {
            if e.len() > 1 {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        let parts: Vec<String> = self
            .steps
            .iter()
            .rev()
            .map(|s| {
                let head = if s.weight.is_one() { String::new() } else { format!("{}·", format_rational(&s.weight)) };
                format!("{head}{}∧{}", wrap(&s.link_elements.0), wrap(&s.link_elements.1))
            })
            .collect();
        parts.join(" + ")
    }
}

fn rooted_root(vs: &BTreeSet<FormVertex>, arcs: &[(FormVertex, FormVertex)]) -> Option<FormVertex> {
    if arcs.len() + 1 != vs.len() {
        return None;
    }
    let mut indeg: BTreeMap<FormVertex, usize> = vs.iter().map(|&v| (v, 0)).collect();
    for (_, b) in arcs {
        *indeg.get_mut(b)? += 1;
    }
    let roots: Vec<FormVertex> = indeg.iter().filter(|(_, &k)| k == 0).map(|(&v, _)| v).collect();
    (roots.len() == 1 && indeg.values().all(|&k| k <= 1)).then(|| roots[0])
}

/// Detaches terminal links, deepest leaf first with ties broken by the
/// canonical vertex order. A leaf `c` hanging off `b` leaves as `b∧c / B(b,c)`
/// after every other neighbour `a` of `b` is replaced by
/// `a + B(a,b)/B(b,c)·c`, which makes `a` orthogonal to `b`.
pub fn peel_components(fg: &FormGraph) -> Result<Vec<PeeledComponent>> {
    let n = fg.support.n;
    let f = Functional::from_support(&fg.s);
    let form = |x: &Element, y: &Element| f.evaluate(&x.bracket(y, n), n);
    let mut out = Vec::new();
    for comp in fg.components() {
        let vs: BTreeSet<FormVertex> = comp.iter().copied().collect();
        let arcs: Vec<(FormVertex, FormVertex)> =
            fg.arcs.iter().filter(|(a, _)| vs.contains(a)).copied().collect();
        let root = rooted_root(&vs, &arcs)
            .ok_or_else(|| Error::NotATree(format!("component of {} is not a rooted tree", comp[0])))?;
        let mut adj: BTreeMap<FormVertex, BTreeSet<FormVertex>> = vs.iter().map(|&v| (v, BTreeSet::new())).collect();
        for (a, b) in &arcs {
            adj.get_mut(a).unwrap().insert(*b);
            adj.get_mut(b).unwrap().insert(*a);
        }
        let mut depth: BTreeMap<FormVertex, usize> = BTreeMap::from([(root, 0)]);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if !depth.contains_key(&w) {
                    depth.insert(w, depth[&v] + 1);
                    queue.push_back(w);
                }
            }
        }
        let mut current: BTreeMap<FormVertex, Element> = vs.iter().map(|v| (*v, fg.element_of(v))).collect();
        let mut steps = Vec::new();
        let mut r = WedgeTwo::zero();
        while !adj.is_empty() {
            let c = adj
                .iter()
                .filter(|(_, nb)| nb.len() <= 1)
                .max_by(|x, y| depth[x.0].cmp(&depth[y.0]).then(y.0.cmp(x.0)))
                .map(|(v, _)| *v)
                .ok_or_else(|| Error::NotATree("peeling met a cycle".into()))?;
            let b = *adj[&c]
                .iter()
                .next()
                .ok_or_else(|| Error::Singular { kernel_dimension: 1 })?;
            let sigma = form(&current[&b], &current[&c]);
            if sigma.is_zero() {
                return Err(Error::Inconsistent(format!("B({b}, {c}) vanishes on an arc")));
            }
            let mut replaced = Vec::new();
            for a in adj[&b].iter().filter(|&&a| a != c).copied().collect::<Vec<_>>() {
                let k = form(&current[&a], &current[&b]) / &sigma;
                let mut next = current[&a].clone();
                next.add_scaled(&current[&c], &k);
                current.insert(a, next.clone());
                adj.get_mut(&a).unwrap().remove(&b);
                replaced.push((a, next));
            }
            let weight = Rational::one() / &sigma;
            let (x, y) = if depth[&b] <= depth[&c] { (b, c) } else { (c, b) };
            let (ex, ey) = (current[&x].clone(), current[&y].clone());
            let w = if x == b { weight.clone() } else { -weight.clone() };
            r.add_wedge(&ex, &ey, &w);
            steps.push(PeelStep { link: (x, y), link_elements: (ex, ey), weight: w, replaced });
            adj.remove(&b);
            adj.remove(&c);
        }
        for s in &mut steps {
            s.replaced.sort();
        }
        out.push(PeeledComponent { root, steps, r });
    }
    Ok(out)
}

pub fn r_from_peeling(fg: &FormGraph) -> Result<WedgeTwo> {
    let mut r = WedgeTwo::zero();
    for c in peel_components(fg)? {
        r.add(&c.r);
    }
    Ok(r)
}

fn eps_sum(ks: impl IntoIterator<Item = usize>, n: usize) -> Element {
    let mut e = Element::zero();
    for k in ks {
        e = e.plus(&Element::eps(k, n));
    }
    e
}

/// `Σ_p d_p∧e_{p,p+1} + Σ_{i<j} Σ_{m=1}^{j-i-1} e_{i,j-m+1}∧e_{j,i+m}` with
/// `d_p = ε_1 + .. + ε_p`.
pub fn closed_form_r_n1(n: usize) -> Result<WedgeTwo> {
    if n < 2 {
        return Err(Error::InvalidParameters("need n >= 2".into()));
    }
    let mut r = WedgeTwo::zero();
    for p in 1..n {
        r.add_wedge(&eps_sum(1..=p, n), &Element::unit(p, p + 1), &Rational::one());
    }
    for i in 1..=n {
        for j in i + 1..=n {
            for m in 1..j - i {
                r.add_term(BasisElement::unit(i, j - m + 1), BasisElement::unit(j, i + m), Rational::one());
            }
        }
    }
    Ok(r)
}

/// Dual elements for the `(n, 2)` carrier `S = {(2,1), (1,3), (2,4), .., (n-2,n)}`:
/// `d_21 = ε_2 + ε_4 + .. + ε_{n-1}`, `d_{2k,2k+2} = -(ε_{2k+2} + .. + ε_{n-1})`
/// over even indices, and `d_{2k+1,2k+3} = ε_1 + .. + ε_{2k+1} + (ε_{2k+2} + ε_{2k+4} + .. + ε_{n-1})`.
pub fn closed_form_duals_n2(n: usize) -> Result<BTreeMap<IndexPair, Element>> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameters(format!("n = {n} must be odd and at least 3")));
    }
    let evens_from = |a: usize| eps_sum((a..n).step_by(2), n);
    let mut d = BTreeMap::new();
    d.insert(IndexPair::new(2, 1), evens_from(2));
    for k in 0..=(n - 3) / 2 {
        d.insert(IndexPair::new(2 * k + 1, 2 * k + 3), eps_sum(1..=2 * k + 1, n).plus(&evens_from(2 * k + 2)));
        if k >= 1 {
            d.insert(IndexPair::new(2 * k, 2 * k + 2), evens_from(2 * k + 2).scaled(&rat(-1)));
        }
    }
    Ok(d)
}

/// `Σ_{s≠(2,1)} d_s∧e_s + d_21∧(e_21 + Σ_{k≥2} e_{2k,2k-1})
///  + Σ e_ij∧Σ_{k≥0} e_{j+2k,i+2k+2}`, the last over `i < j`, `j ≠ i+2`, `(i, j) ≠ (2k, 2k+1)`, with sums
/// stopping at `n`.
pub fn closed_form_r_n2(n: usize) -> Result<WedgeTwo> {
    let d = closed_form_duals_n2(n)?;
    let mut r = WedgeTwo::zero();
    let first = IndexPair::new(2, 1);
    for (s, ds) in &d {
        if *s != first {
            r.add_wedge(ds, &Element::basis(BasisElement::Unit(*s)), &Rational::one());
        }
    }
    let mut tail = Element::unit(2, 1);
    for k in (2..).take_while(|k| 2 * k <= n) {
        tail = tail.plus(&Element::unit(2 * k, 2 * k - 1));
    }
    r.add_wedge(&d[&first], &tail, &Rational::one());
    for i in 1..=n {
        for j in i + 1..=n {
            // e_{2k,2k+1} already sits on the right of the chain e12 -> e23 -> e34 -> ..
            if j == i + 2 || (j == i + 1 && i % 2 == 0) {
                continue;
            }
            let mut partner = Element::zero();
            for k in (0..).take_while(|k| j + 2 * k <= n && i + 2 * k + 2 <= n) {
                partner = partner.plus(&Element::unit(j + 2 * k, i + 2 * k + 2));
            }
            r.add_wedge(&Element::unit(i, j), &partner, &Rational::one());
        }
    }
    Ok(r)
}

/// `diag(0, 1, -1, 0, -2, -1, -3, .., (5-n)/2, (1-n)/2) + (n-1)(n-3)/(4n)·I`.
pub fn principal_n2(n: usize) -> Result<PrincipalElement> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidParameters(format!("n = {n} must be odd and at least 3")));
    }
    let shift = ratio(((n - 1) * (n - 3)) as i64, (4 * n) as i64);
    let diagonal = (1..=n)
        .map(|p| {
            let v = if p % 2 == 1 { -((p as i64 - 1) / 2) } else { 2 - p as i64 / 2 };
            rat(v) + &shift
        })
        .collect();
    PrincipalElement::new(diagonal)
}

type Triple = (u32, u32, u32);

struct Table {
    n: usize,
    elements: Vec<BasisElement>,
    index: HashMap<BasisElement, u32>,
    brackets: HashMap<(u32, u32), Vec<(u32, i64)>>,
}

impl Table {
    fn id(&mut self, b: BasisElement) -> u32 {
        if let Some(&k) = self.index.get(&b) {
            return k;
        }
        let k = self.elements.len() as u32;
        self.elements.push(b);
        self.index.insert(b, k);
        k
    }

    fn bracket(&mut self, a: u32, b: u32) -> Result<Vec<(u32, i64)>> {
        if let Some(v) = self.brackets.get(&(a, b)) {
            return Ok(v.clone());
        }
        let e = bracket(self.elements[a as usize], self.elements[b as usize], self.n);
        let mut v = Vec::new();
        for (x, c) in e.terms() {
            let c = exact::to_i64(c).ok_or_else(|| Error::NonIntegral("structure constant".into()))?;
            let k = self.id(*x);
            v.push((k, c));
        }
        self.brackets.insert((a, b), v.clone());
        Ok(v)
    }
}

/// `[r̃₁₂, r̃₁₃] + [r̃₁₂, r̃₂₃] + [r̃₁₃, r̃₂₃]` for `r̃ = Σ c_ab (a⊗b - b⊗a)`,
/// antisymmetrised. Zero certifies the classical Yang-Baxter equation.
pub fn cybe_check(r: &WedgeTwo, g: &LieSupport) -> Result<WedgeThree> {
    for b in r.support() {
        if !g.contains_element(&b) {
            return Err(Error::OutsideSupport(match b {
                BasisElement::Unit(p) => p,
                BasisElement::Eps(k) => IndexPair::new(k, k),
            }));
        }
    }
    let denom = r.terms().fold(BigInt::one(), |l, (_, c)| l.lcm(c.denom()));
    let mut table = Table { n: g.n, elements: Vec::new(), index: HashMap::new(), brackets: HashMap::new() };
    let mut full: Vec<(u32, u32, BigInt)> = Vec::with_capacity(2 * r.len());
    for ((a, b), c) in r.terms() {
        let k = (c * Rational::from_integer(denom.clone())).to_integer();
        let (ia, ib) = (table.id(*a), table.id(*b));
        full.push((ia, ib, k.clone()));
        full.push((ib, ia, -k));
    }
    for &(a, _, _) in &full {
        for &(b, _, _) in &full {
            table.bracket(a, b)?;
        }
    }
    let table = table;
    let threads = std::thread::available_parallelism().map(|k| k.get()).unwrap_or(1).min(8);
    let chunk = full.len().div_ceil(threads.max(1)).max(1);
    let partials: Vec<HashMap<Triple, BigInt>> = std::thread::scope(|scope| {
        let handles: Vec<_> = full
            .chunks(chunk)
            .map(|part| {
                let full = &full;
                let table = &table;
                scope.spawn(move || {
                    let mut acc: HashMap<Triple, BigInt> = HashMap::new();
                    let mut push = |t: Triple, c: BigInt| {
                        let e = acc.entry(t).or_insert_with(BigInt::zero);
                        *e += c;
                    };
                    for (a, b, x) in part {
                        for (a2, b2, y) in full {
                            let xy = x * y;
                            for (k, c) in &table.brackets[&(*a, *a2)] {
                                push((*k, *b, *b2), &xy * c);
                            }
                            for (k, c) in &table.brackets[&(*b, *a2)] {
                                push((*a, *k, *b2), &xy * c);
                            }
                            for (k, c) in &table.brackets[&(*b, *b2)] {
                                push((*a, *a2, *k), &xy * c);
                            }
                        }
                    }
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut total: BTreeMap<Triple, BigInt> = BTreeMap::new();
    for part in partials {
        for (t, c) in part {
            *total.entry(t).or_insert_with(BigInt::zero) += c;
        }
    }
    let scale = Rational::new(BigInt::one(), &denom * &denom * BigInt::from(6));
    let mut out = WedgeThree::zero();
    for ((a, b, c), x) in total {
        if x.is_zero() {
            continue;
        }
        let e = &table.elements;
        out.add_term([e[a as usize], e[b as usize], e[c as usize]], Rational::from_integer(x) * &scale);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form_graph::build_form_graph;
    use crate::gallery::{cyclic_support, principal_candidate, prime_support};
    use crate::sln::kirillov_matrix;

    fn e(i: usize, j: usize) -> Element {
        Element::unit(i, j)
    }

    fn eps(ks: &[usize], n: usize) -> Element {
        eps_sum(ks.iter().copied(), n)
    }

    fn w(pairs: &[(Element, Element)]) -> WedgeTwo {
        let mut r = WedgeTwo::zero();
        for (x, y) in pairs {
            r.add_wedge(x, y, &Rational::one());
        }
        r
    }

    fn cyclic(n: usize, m: usize) -> (LieSupport, Functional, FormGraph) {
        let g = LieSupport::parabolic(n, m).unwrap();
        let (s, _) = cyclic_support(n, m).unwrap();
        let fg = build_form_graph(&g, &s).unwrap();
        (g, Functional::from_support(&s), fg)
    }

    #[test]
    fn smallest_case() {
        let g = LieSupport::parabolic(2, 1).unwrap();
        let f = Functional::from_support(&[IndexPair::new(1, 2)].into());
        let km = kirillov_matrix(&g, &f).unwrap();
        let r = r_from_inverse(&km).unwrap();
        assert_eq!(r, WedgeTwo::wedge(&eps(&[1], 2), &e(1, 2)));
        assert!(satisfies_defining_property(&r, &km).unwrap());
        assert!(cybe_check(&r, &g).unwrap().is_zero());
    }

    #[test]
    fn printed_r_4_3() {
        let (g, f, fg) = cyclic(4, 3);
        let want = w(&[
            (e(3, 2), e(2, 1).plus(&e(3, 4))),
            (e(1, 3), e(3, 4)),
            (eps(&[2], 4), e(2, 3)),
            (eps(&[2, 3], 4), e(3, 1)),
            (eps(&[1, 2, 3], 4), e(1, 4)),
            (e(1, 2), e(2, 4)),
        ]);
        let km = kirillov_matrix(&g, &f).unwrap();
        assert_eq!(r_from_inverse(&km).unwrap(), want);
        assert_eq!(r_from_peeling(&fg).unwrap(), want);
        let d = principal_candidate(4, &fg.s).unwrap();
        assert_eq!(r_from_lagrangian(&lagrangian_split(&g, &f, &d).unwrap()), want);
    }

    #[test]
    fn peeling_states_4_3() {
        let (_, _, fg) = cyclic(4, 3);
        let comps = peel_components(&fg).unwrap();
        let first = comps.iter().find(|c| c.root == FormVertex::Unit(IndexPair::new(3, 2))).unwrap();
        assert_eq!(first.steps.len(), 2);
        let s0 = &first.steps[0];
        assert_eq!(s0.link_elements, (e(1, 3), e(3, 4)));
        assert_eq!(s0.replaced, vec![(FormVertex::Unit(IndexPair::new(2, 1)), e(2, 1).plus(&e(3, 4)))]);
        assert_eq!(first.steps[1].link_elements, (e(3, 2), e(2, 1).plus(&e(3, 4))));
        assert_eq!(first.notation(), "e32∧(e21+e34) + e13∧e34");
    }

    #[test]
    fn first_component_7_3() {
        let (_, _, fg) = cyclic(7, 3);
        let comps = peel_components(&fg).unwrap();
        let first = comps.iter().find(|c| c.root == FormVertex::Unit(IndexPair::new(3, 2))).unwrap();
        let want = w(&[
            (e(3, 2).plus(&e(6, 5)), e(2, 1).plus(&e(5, 4)).plus(&e(3, 4)).plus(&e(6, 7))),
            (e(1, 3), e(3, 4).plus(&e(6, 7))),
            (e(2, 6), e(6, 5)),
            (e(1, 5), e(5, 4)),
            (e(4, 6), e(6, 7)),
        ]);
        assert_eq!(first.r, want);
        let isolated = comps.iter().filter(|c| c.steps.len() == 1).count();
        assert_eq!(isolated, 7);
        assert_eq!(comps.len() - 1 - isolated, 3);
        assert!(comps.iter().filter(|c| c.steps.len() > 1 && c.root != first.root).all(|c| c.steps.len() == 2));
    }

    #[test]
    fn constructions_agree_on_cyclic() {
        for (n, m) in [(3, 1), (3, 2), (4, 1), (4, 3), (5, 2), (5, 3), (7, 3), (8, 3), (8, 5)] {
            let (g, f, fg) = cyclic(n, m);
            let km = kirillov_matrix(&g, &f).unwrap();
            let r = r_from_inverse(&km).unwrap();
            assert!(satisfies_defining_property(&r, &km).unwrap());
            assert_eq!(r_from_peeling(&fg).unwrap(), r, "peeling ({n},{m})");
            let d = principal_candidate(n, &fg.s).unwrap();
            let ls = lagrangian_split(&g, &f, &d).unwrap();
            assert!(ls.pairing.is_identity());
            assert_eq!(r_from_lagrangian(&ls), r, "lagrangian ({n},{m})");
        }
    }

    #[test]
    fn split_sizes_and_isotropy() {
        let (g, f, fg) = cyclic(7, 3);
        let d = principal_candidate(7, &fg.s).unwrap();
        let ls = lagrangian_split(&g, &f, &d).unwrap();
        assert_eq!((ls.even.len(), ls.odd.len()), (18, 18));
        let km = kirillov_matrix(&g, &f).unwrap();
        for x in &ls.even {
            for y in &ls.even {
                assert!(form_value(&km, x, y).unwrap().is_zero());
            }
        }
        for x in &ls.odd {
            for y in &ls.odd {
                assert!(form_value(&km, x, y).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn prime_closed_form() {
        assert_eq!(closed_form_r_n1(2).unwrap(), WedgeTwo::wedge(&eps(&[1], 2), &e(1, 2)));
        for n in 2..=9 {
            let g = LieSupport::parabolic(n, 1).unwrap();
            let s = prime_support(n).unwrap();
            let km = kirillov_matrix(&g, &Functional::from_support(&s)).unwrap();
            assert_eq!(closed_form_r_n1(n).unwrap(), r_from_inverse(&km).unwrap(), "n = {n}");
        }
        let (_, _, fg) = cyclic(5, 1);
        assert_eq!(closed_form_r_n1(5).unwrap(), r_from_peeling(&fg).unwrap());
    }

    #[test]
    fn two_closed_form() {
        assert!(closed_form_r_n2(4).is_err());
        for n in (3..=9).step_by(2) {
            let (g, f, fg) = cyclic(n, 2);
            let duals = closed_form_duals_n2(n).unwrap();
            for d in &fg.duals {
                assert_eq!(duals[&d.s], d.to_element(), "d_{} for n = {n}", d.s);
            }
            let km = kirillov_matrix(&g, &f).unwrap();
            assert_eq!(closed_form_r_n2(n).unwrap(), r_from_inverse(&km).unwrap(), "n = {n}");
            assert_eq!(principal_n2(n).unwrap(), principal_candidate(n, &fg.s).unwrap(), "n = {n}");
        }
        let want: Vec<Rational> = [0, 1, -1, 0, -2].iter().map(|&v| rat(v) + ratio(2, 5)).collect();
        assert_eq!(principal_n2(5).unwrap().diagonal, want);
    }

    #[test]
    fn cybe_on_cyclic_family() {
        for n in 2..=7usize {
            for m in 1..n {
                if num::integer::gcd(n, m) != 1 {
                    continue;
                }
                let (g, f, _) = cyclic(n, m);
                let r = r_from_inverse(&kirillov_matrix(&g, &f).unwrap()).unwrap();
                assert!(cybe_check(&r, &g).unwrap().is_zero(), "({n},{m})");
            }
        }
    }

    #[test]
    fn sl2_bivector_is_not_a_solution() {
        let g = LieSupport::full(2).unwrap();
        let r = WedgeTwo::wedge(&e(1, 2), &e(2, 1));
        let t = cybe_check(&r, &g).unwrap();
        assert_eq!(t.len(), 1);
        let c = t.coefficient([BasisElement::unit(1, 2), BasisElement::unit(2, 1), BasisElement::Eps(1)]);
        assert!(!c.is_zero());
    }

    #[test]
    fn json_round_trip() {
        let r = closed_form_r_n1(3).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with("[[[\"e(1,2)\",\"eps(1)\"],\"-1\"]"), "{s}");
        assert_eq!(serde_json::from_str::<WedgeTwo>(&s).unwrap(), r);
    }
}
