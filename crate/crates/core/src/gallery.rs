//! Small functionals: the cyclic, prime, subprime, upper-triangular and
//! Dergachev-Kirillov families, their graphs `γ(S)`, dual bases and principal
//! elements, the cyclic reduction and the meander index.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use num::integer::gcd;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, format_rational, rat, Rational, RationalMatrix};
use crate::sln::{BasisElement, Element, Functional, IndexPair, LieSupport};

/// Directed graph on `1..=n` with an arrow `i -> j` for each pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallGraph {
    pub n: usize,
    pub arcs: BTreeSet<IndexPair>,
}

/// The graph `γ(S)`.
pub fn gamma_graph(n: usize, s: &BTreeSet<IndexPair>) -> SmallGraph {
    SmallGraph { n, arcs: s.clone() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedTreeCheck {
    pub rooted: bool,
    pub root: Option<usize>,
}

impl SmallGraph {
    /// Undirected neighbours, with `+1` for an out-arc and `-1` for an in-arc.
    fn neighbours(&self) -> Vec<Vec<(usize, i64)>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for a in &self.arcs {
            adj[a.i].push((a.j, 1));
            adj[a.j].push((a.i, -1));
        }
        adj
    }

    pub fn is_tree(&self) -> bool {
        if self.n == 0 || self.arcs.len() != self.n - 1 {
            return false;
        }
        if self.arcs.iter().any(|a| a.i == a.j || a.i < 1 || a.j < 1 || a.i > self.n || a.j > self.n) {
            return false;
        }
        let undirected: BTreeSet<(usize, usize)> =
            self.arcs.iter().map(|a| (a.i.min(a.j), a.i.max(a.j))).collect();
        if undirected.len() != self.arcs.len() {
            return false;
        }
        self.component_of(1, None).len() == self.n
    }

    fn check_tree(&self) -> Result<()> {
        if self.is_tree() {
            Ok(())
        } else {
            Err(Error::NotATree(format!("{} arcs on {} vertices", self.arcs.len(), self.n)))
        }
    }

    /// Vertices reachable from `start`, optionally ignoring one arc.
    pub fn component_of(&self, start: usize, without: Option<IndexPair>) -> BTreeSet<usize> {
        let adj = self.neighbours();
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, dir) in &adj[v] {
                let arc = if dir == 1 { IndexPair::new(v, w) } else { IndexPair::new(w, v) };
                if Some(arc) == without {
                    continue;
                }
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// A tree with a unique vertex of in-degree 0 and in-degree 1 elsewhere.
    pub fn is_rooted_tree(&self) -> RootedTreeCheck {
        if !self.is_tree() {
            return RootedTreeCheck { rooted: false, root: None };
        }
        let mut indeg = vec![0usize; self.n + 1];
        for a in &self.arcs {
            indeg[a.j] += 1;
        }
        let roots: Vec<usize> = (1..=self.n).filter(|&v| indeg[v] == 0).collect();
        let ok = roots.len() == 1 && (1..=self.n).all(|v| indeg[v] <= 1);
        RootedTreeCheck { rooted: ok, root: if ok { Some(roots[0]) } else { None } }
    }

    /// Potentials `c` with `c_1 = 0` and `c_i - c_j = 1` on every arrow `i -> j`.
    fn potentials(&self) -> Result<Vec<i64>> {
        self.check_tree()?;
        let adj = self.neighbours();
        let mut c = vec![None; self.n + 1];
        c[1] = Some(0i64);
        let mut queue = VecDeque::from([1]);
        while let Some(v) = queue.pop_front() {
            let cv = c[v].unwrap();
            for &(w, dir) in &adj[v] {
                if c[w].is_none() {
                    c[w] = Some(cv - dir);
                    queue.push_back(w);
                }
            }
        }
        Ok((0..=self.n).map(|v| c[v].unwrap_or(0)).collect())
    }

    /// DOT rendering; the root, if any, is drawn doubled.
    pub fn to_dot(&self, name: &str, header: &str) -> String {
        let mut out = String::new();
        if !header.is_empty() {
            let _ = writeln!(out, "// {header}");
        }
        let _ = writeln!(out, "digraph {name} {{");
        let root = self.is_rooted_tree().root;
        for v in 1..=self.n {
            if Some(v) == root {
                let _ = writeln!(out, "  {v} [shape=doublecircle];");
            } else {
                let _ = writeln!(out, "  {v};");
            }
        }
        for a in &self.arcs {
            let _ = writeln!(out, "  {} -> {};", a.i, a.j);
        }
        out.push_str("}\n");
        out
    }
}

/// Path-counted eigenvalue of `ad(D_S)` on `e_ij`: arrows walked forward
/// minus arrows walked backward on the tree path from `i` to `j`.
pub fn eigenvalue_on(g: &SmallGraph, p: IndexPair) -> Result<i64> {
    g.check_tree()?;
    if p.i == p.j || p.i < 1 || p.j < 1 || p.i > g.n || p.j > g.n {
        return Err(Error::InvalidParameters(format!("bad pair {p}")));
    }
    let adj = g.neighbours();
    let mut back: Vec<Option<(usize, i64)>> = vec![None; g.n + 1];
    let mut queue = VecDeque::from([p.i]);
    let mut seen = vec![false; g.n + 1];
    seen[p.i] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, dir) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                back[w] = Some((v, dir));
                queue.push_back(w);
            }
        }
    }
    let mut total = 0;
    let mut v = p.j;
    while v != p.i {
        let (u, dir) = back[v].expect("tree is connected");
        total += dir;
        v = u;
    }
    Ok(total)
}

fn check_coprime(n: usize, m: usize) -> Result<()> {
    if m < 1 || m >= n {
        return Err(Error::InvalidParameters(format!("need 1 <= m < n, got ({n}, {m})")));
    }
    if gcd(n, m) != 1 {
        return Err(Error::NotCoprime { n, m });
    }
    Ok(())
}

/// `1, m+1, 2m+1, ...` reduced into `1..=n`.
pub fn cyclic_sequence(n: usize, m: usize) -> Vec<usize> {
    (0..n).map(|k| (k * m) % n + 1).collect()
}

/// Orientation of the arrows laid along the strings of one cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StringDirection {
    /// Arrows from smaller to larger entries.
    Forward,
    /// Arrows from larger to smaller entries.
    Backward,
}

impl StringDirection {
    pub fn flipped(self) -> Self {
        match self {
            StringDirection::Forward => StringDirection::Backward,
            StringDirection::Backward => StringDirection::Forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringCycle {
    pub direction: StringDirection,
    pub strings: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicLog {
    pub cycles: Vec<StringCycle>,
}

/// Splits a cyclic sequence, read from its minimum, into maximal ascending runs.
fn ascending_strings(seq: &[usize]) -> Vec<Vec<usize>> {
    let start = seq
        .iter()
        .enumerate()
        .min_by_key(|(_, v)| **v)
        .map_or(0, |(k, _)| k);
    let mut strings: Vec<Vec<usize>> = Vec::new();
    for k in 0..seq.len() {
        let v = seq[(start + k) % seq.len()];
        match strings.last_mut() {
            Some(s) if *s.last().unwrap() < v => s.push(v),
            _ => strings.push(vec![v]),
        }
    }
    strings
}

/// The cyclic functional's support, with the strings used at each cycle.
pub fn cyclic_support(n: usize, m: usize) -> Result<(BTreeSet<IndexPair>, CyclicLog)> {
    check_coprime(n, m)?;
    let mut s = BTreeSet::new();
    let mut log = CyclicLog::default();
    let mut seq = cyclic_sequence(n, m);
    let mut direction = StringDirection::Forward;
    loop {
        let strings = ascending_strings(&seq);
        for st in &strings {
            for w in st.windows(2) {
                s.insert(match direction {
                    StringDirection::Forward => IndexPair::new(w[0], w[1]),
                    StringDirection::Backward => IndexPair::new(w[1], w[0]),
                });
            }
        }
        let done = strings.len() == 1;
        seq = strings
            .iter()
            .map(|st| match direction {
                StringDirection::Forward => st[0],
                StringDirection::Backward => *st.last().unwrap(),
            })
            .collect();
        log.cycles.push(StringCycle { direction, strings });
        if done {
            break;
        }
        direction = direction.flipped();
    }
    if s.len() != n - 1 {
        return Err(Error::Inconsistent(format!("cyclic support has {} pairs", s.len())));
    }
    Ok((s, log))
}

/// The superdiagonal chain `(1,2), .., (n-1,n)`.
pub fn prime_support(n: usize) -> Result<BTreeSet<IndexPair>> {
    if n < 2 {
        return Err(Error::InvalidParameters("prime support needs n >= 2".into()));
    }
    Ok((1..n).map(|i| IndexPair::new(i, i + 1)).collect())
}

/// `(i, i+m)` for `i <= n-m` together with `(i+1, i)` for `i < m`.
pub fn subprime_support(n: usize, m: usize) -> Result<BTreeSet<IndexPair>> {
    if m <= 1 || m >= n {
        return Err(Error::InvalidParameters(format!("subprime needs 1 < m < n, got ({n}, {m})")));
    }
    Ok((1..=n - m)
        .map(|i| IndexPair::new(i, i + m))
        .chain((1..m).map(|i| IndexPair::new(i + 1, i)))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrikeStep {
    pub n: usize,
    pub m: usize,
    pub direction: StringDirection,
    pub sequence: Vec<usize>,
    pub struck: Vec<usize>,
    pub pairs: Vec<IndexPair>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrikeLog {
    pub steps: Vec<StrikeStep>,
}

/// The upper-triangular modification of the cyclic functional.
///
/// The cyclic sequence is shortened step by step. Going forward the largest
/// entries are struck and each contributes `(pred, j)`; going backward the
/// smallest are struck and contribute `(j, pred)`, where `pred` is the cyclic
/// predecessor in the sequence as it stood before striking.
pub fn upper_triangular_support(n: usize, m: usize) -> Result<(BTreeSet<IndexPair>, StrikeLog)> {
    check_coprime(n, m)?;
    let mut seq = cyclic_sequence(n, m);
    let (mut cn, mut cm) = (n, m);
    let mut direction = if n > 2 * m { StringDirection::Forward } else { StringDirection::Backward };
    let mut s = BTreeSet::new();
    let mut log = StrikeLog::default();
    loop {
        let k = if cn == 2 { 1 } else if cn > 2 * cm { cm } else { cn - cm };
        let mut sorted = seq.clone();
        sorted.sort_unstable();
        let struck: Vec<usize> = match direction {
            StringDirection::Forward => sorted[sorted.len() - k..].to_vec(),
            StringDirection::Backward => sorted[..k].to_vec(),
        };
        let len = seq.len();
        let pred = |j: usize| {
            let pos = seq.iter().position(|&v| v == j).unwrap();
            seq[(pos + len - 1) % len]
        };
        let pairs: Vec<IndexPair> = struck
            .iter()
            .map(|&j| match direction {
                StringDirection::Forward => IndexPair::new(pred(j), j),
                StringDirection::Backward => IndexPair::new(j, pred(j)),
            })
            .collect();
        s.extend(pairs.iter().copied());
        log.steps.push(StrikeStep { n: cn, m: cm, direction, sequence: seq.clone(), struck: struck.clone(), pairs });
        if cn == 2 {
            break;
        }
        seq.retain(|v| !struck.contains(v));
        (cn, cm) = if cn > 2 * cm { (cn - cm, cm) } else { (cm, cn - cm) };
        if cn <= 2 * cm {
            direction = direction.flipped();
        }
    }
    if s.len() != n - 1 || s.iter().any(|p| p.i >= p.j) {
        return Err(Error::Inconsistent("upper-triangular procedure left the upper triangle".into()));
    }
    Ok((s, log))
}

fn block_ranges(comp: &[usize]) -> Vec<(usize, usize)> {
    let mut start = 1;
    comp.iter()
        .map(|&len| {
            let r = (start, start + len - 1);
            start += len;
            r
        })
        .collect()
}

/// Antidiagonals of each block, above the diagonal for top blocks and
/// below it for bottom blocks.
pub fn dk_support(g: &LieSupport) -> Result<BTreeSet<IndexPair>> {
    let (top, bottom) = g.compositions().ok_or(Error::NotSeaweed)?;
    let mut s = BTreeSet::new();
    for (p, q) in block_ranges(&top) {
        for i in p..=q {
            let j = p + q - i;
            if i < j {
                s.insert(IndexPair::new(i, j));
            }
        }
    }
    for (p, q) in block_ranges(&bottom) {
        for i in p..=q {
            let j = p + q - i;
            if i > j {
                s.insert(IndexPair::new(i, j));
            }
        }
    }
    Ok(s)
}

/// `d_s`: sum of `ε_k` over the side of `s` containing its tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualBasisElement {
    pub s: IndexPair,
    /// Coefficients on `ε_1 .. ε_{n-1}`; each is 0 or ±1.
    pub coefficients: BTreeMap<usize, i64>,
}

impl DualBasisElement {
    pub fn to_element(&self) -> Element {
        let mut e = Element::zero();
        for (&k, &c) in &self.coefficients {
            e.add_term(BasisElement::Eps(k), rat(c));
        }
        e
    }
}

pub fn dual_basis(n: usize, s: &BTreeSet<IndexPair>) -> Result<Vec<DualBasisElement>> {
    let g = gamma_graph(n, s);
    g.check_tree()?;
    let f = Functional::from_support(s);
    let mut out = Vec::with_capacity(s.len());
    for &p in s {
        let mut side = g.component_of(p.i, Some(p));
        let mut sign = 1;
        if side.contains(&n) {
            side = g.component_of(p.j, Some(p));
            sign = -1;
        }
        let coefficients: BTreeMap<usize, i64> = side.into_iter().map(|k| (k, sign)).collect();
        out.push(DualBasisElement { s: p, coefficients });
    }
    for d in &out {
        let x = d.to_element();
        for &q in s {
            let v = f.evaluate(&x.bracket(&Element::basis(BasisElement::Unit(q)), n), n);
            let want = if q == d.s { rat(1) } else { rat(0) };
            if v != want {
                return Err(Error::Inconsistent(format!("B(d_{}, e_{}) = {}", d.s, q, format_rational(&v))));
            }
        }
    }
    Ok(out)
}

/// Traceless diagonal element of the Cartan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawDiagonal", try_from = "RawDiagonal")]
pub struct PrincipalElement {
    pub diagonal: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawDiagonal {
    diagonal: Vec<String>,
}

impl From<PrincipalElement> for RawDiagonal {
    fn from(p: PrincipalElement) -> Self {
        RawDiagonal { diagonal: p.diagonal.iter().map(format_rational).collect() }
    }
}

impl TryFrom<RawDiagonal> for PrincipalElement {
    type Error = Error;

    fn try_from(r: RawDiagonal) -> Result<Self> {
        let d = r.diagonal.iter().map(|s| exact::parse_rational(s)).collect::<Result<Vec<_>>>()?;
        PrincipalElement::new(d)
    }
}

impl PrincipalElement {
    pub fn new(diagonal: Vec<Rational>) -> Result<Self> {
        if !diagonal.iter().sum::<Rational>().is_zero() {
            return Err(Error::InvalidParameters("diagonal must have trace zero".into()));
        }
        Ok(PrincipalElement { diagonal })
    }

    /// Subtracts the mean so the result is traceless.
    pub fn from_any_diagonal(d: &[Rational]) -> Self {
        let mean = d.iter().sum::<Rational>() / rat(d.len() as i64);
        PrincipalElement { diagonal: d.iter().map(|v| v - &mean).collect() }
    }

    pub fn n(&self) -> usize {
        self.diagonal.len()
    }

    /// Eigenvalue of `ad` on `e_ij`.
    pub fn eigenvalue(&self, p: IndexPair) -> Rational {
        &self.diagonal[p.i - 1] - &self.diagonal[p.j - 1]
    }

    pub fn eigenvalue_on_basis(&self, b: &BasisElement) -> Rational {
        match b {
            BasisElement::Unit(p) => self.eigenvalue(*p),
            BasisElement::Eps(_) => Rational::zero(),
        }
    }

    pub fn to_element(&self) -> Element {
        Element::diagonal(&self.diagonal)
    }

    /// `diag(entries) - shift·I` with `entries` normalised to end in 0.
    pub fn integral_form(&self) -> (Vec<Rational>, Rational) {
        let last = self.diagonal.last().cloned().unwrap_or_else(Rational::zero);
        (self.diagonal.iter().map(|v| v - &last).collect(), -last)
    }

    /// Eigenvalues of `ad` on the canonical basis of `g`.
    pub fn ad_spectrum(&self, g: &LieSupport) -> Vec<Rational> {
        g.basis().iter().map(|b| self.eigenvalue_on_basis(b)).collect()
    }
}

/// `D_S`, computed from the dual basis and from tree potentials; the two must agree.
pub fn principal_candidate(n: usize, s: &BTreeSet<IndexPair>) -> Result<PrincipalElement> {
    let duals = dual_basis(n, s)?;
    let mut sum = Element::zero();
    for d in &duals {
        sum = sum.plus(&d.to_element());
    }
    let a = crate::sln::cartan_diagonal(&sum, n).expect("duals lie in the Cartan");
    let c = gamma_graph(n, s).potentials()?;
    let b = PrincipalElement::from_any_diagonal(&c[1..].iter().map(|&v| rat(v)).collect::<Vec<_>>());
    if a != b.diagonal {
        return Err(Error::Inconsistent("dual-basis sum and potential rule disagree".into()));
    }
    Ok(b)
}

/// Change of basis from `ε` to the `d_s` after renumbering the tree so that
/// a leaf is the last vertex and labels increase toward it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularForm {
    /// `relabel[v]` is the new label of old vertex `v` (index 0 unused).
    pub relabel: Vec<usize>,
    /// Row `r` holds the `ε` coefficients of the dual element whose edge has
    /// its far endpoint at new label `r + 1`.
    pub matrix: RationalMatrix,
}

pub fn triangular_form(n: usize, s: &BTreeSet<IndexPair>) -> Result<TriangularForm> {
    let g = gamma_graph(n, s);
    g.check_tree()?;
    let adj = g.neighbours();
    let terminal = if adj[n].len() <= 1 { n } else { (1..=n).find(|&v| adj[v].len() == 1).unwrap() };
    // post-order from the terminal vertex gives every vertex a smaller label than its parent
    let mut relabel = vec![0; n + 1];
    let mut next = 1;
    let mut stack = vec![(terminal, 0usize, false)];
    while let Some((v, parent, expanded)) = stack.pop() {
        if expanded {
            relabel[v] = next;
            next += 1;
            continue;
        }
        stack.push((v, parent, true));
        for &(w, _) in adj[v].iter().rev() {
            if w != parent {
                stack.push((w, v, false));
            }
        }
    }
    let renamed: BTreeSet<IndexPair> = s.iter().map(|p| IndexPair::new(relabel[p.i], relabel[p.j])).collect();
    let duals = dual_basis(n, &renamed)?;
    let mut matrix = RationalMatrix::zeros(n - 1, n - 1);
    for d in &duals {
        let far = d.s.i.min(d.s.j);
        for (&k, &c) in &d.coefficients {
            matrix.set(far - 1, k - 1, rat(c));
        }
    }
    Ok(TriangularForm { relabel, matrix })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Stable,
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub n: usize,
    pub m: usize,
    pub kind: ReductionKind,
}

/// `(n-m, m)` when `n > 2m`, `(m, 2m-n)` when `n < 2m`.
pub fn cyclic_reduce(n: usize, m: usize) -> Result<Reduction> {
    check_coprime(n, m)?;
    if (n, m) == (2, 1) {
        return Err(Error::InvalidParameters("(2, 1) does not reduce".into()));
    }
    Ok(if n > 2 * m {
        Reduction { n: n - m, m, kind: ReductionKind::Stable }
    } else {
        Reduction { n: m, m: 2 * m - n, kind: ReductionKind::Unstable }
    })
}

/// The chain of reductions from `(n, m)` down to `(2, 1)`.
pub fn reduction_chain(n: usize, m: usize) -> Result<Vec<Reduction>> {
    check_coprime(n, m)?;
    let mut out = Vec::new();
    let (mut a, mut b) = (n, m);
    while (a, b) != (2, 1) {
        let r = cyclic_reduce(a, b)?;
        (a, b) = (r.n, r.m);
        out.push(r);
    }
    Ok(out)
}

fn root_by_recursion(n: usize, m: usize) -> usize {
    if m == 1 {
        return 1;
    }
    if n > 2 * m {
        root_by_recursion(n - m, m)
    } else {
        m + 1 - root_by_recursion(m, 2 * m - n)
    }
}

/// Root of the cyclic tree, by the reduction recursion checked against the tree.
pub fn cyclic_root(n: usize, m: usize) -> Result<usize> {
    let (s, _) = cyclic_support(n, m)?;
    let direct = gamma_graph(n, &s).is_rooted_tree().root;
    let rec = root_by_recursion(n, m);
    if direct != Some(rec) {
        return Err(Error::Inconsistent(format!("root recursion gives {rec}, tree gives {direct:?}")));
    }
    Ok(rec)
}

/// Component census of a meander.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanderCensus {
    pub loops: usize,
    pub chains: usize,
    pub isolated: usize,
}

impl MeanderCensus {
    pub fn index(&self) -> usize {
        2 * self.loops + self.chains + self.isolated - 1
    }
}

pub fn meander_census(g: &LieSupport) -> Result<MeanderCensus> {
    let s = dk_support(g)?;
    let n = g.n;
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for a in &s {
        let (x, y) = (find(&mut parent, a.i), find(&mut parent, a.j));
        parent[x] = y;
    }
    let mut vertices: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edges: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 1..=n {
        *vertices.entry(find(&mut parent, v)).or_default() += 1;
    }
    for a in &s {
        *edges.entry(find(&mut parent, a.i)).or_default() += 1;
    }
    let mut census = MeanderCensus::default();
    for (root, &nv) in &vertices {
        let ne = edges.get(root).copied().unwrap_or(0);
        match ne {
            0 => census.isolated += 1,
            e if e + 1 == nv => census.chains += 1,
            e if e == nv => census.loops += 1,
            _ => return Err(Error::Inconsistent("meander component with excess edges".into())),
        }
    }
    Ok(census)
}

/// `2·loops + chains + isolated - 1`.
pub fn meander_index(g: &LieSupport) -> Result<usize> {
    Ok(meander_census(g)?.index())
}

/// Named functional families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Cyclic,
    Prime,
    Subprime,
    UpperTriangular,
    Dk,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cyclic" => Ok(Family::Cyclic),
            "prime" => Ok(Family::Prime),
            "subprime" => Ok(Family::Subprime),
            "upper-triangular" | "upper" => Ok(Family::UpperTriangular),
            "dk" => Ok(Family::Dk),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// The parabolic `P(n, m)` together with the family's support on it.
pub fn family_support(family: Family, n: usize, m: usize) -> Result<(LieSupport, BTreeSet<IndexPair>)> {
    let g = LieSupport::parabolic(n, m)?;
    let s = match family {
        Family::Cyclic => cyclic_support(n, m)?.0,
        Family::Prime => {
            if m != 1 {
                return Err(Error::InvalidParameters("the prime functional lives on P(n, 1)".into()));
            }
            prime_support(n)?
        }
        Family::Subprime => subprime_support(n, m)?,
        Family::UpperTriangular => upper_triangular_support(n, m)?.0,
        Family::Dk => dk_support(&g)?,
    };
    if let Some(p) = s.iter().find(|p| !g.contains(**p)) {
        return Err(Error::OutsideSupport(*p));
    }
    Ok((g, s))
}
