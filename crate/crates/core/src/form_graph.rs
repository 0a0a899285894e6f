//! The graph `Γ(S)` of a small functional, whose skew adjacency matrix is
//! the Kirillov form on the basis of matrix units and dual elements `d_s`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, rat, Rational};
use crate::gallery::{self, cyclic_support, dual_basis, gamma_graph, DualBasisElement, PrincipalElement, ReductionKind};
use crate::graph::{self, Graph, MatchingCertificate};
use crate::sln::{BasisElement, Element, IndexPair, LieSupport};

/// Vertex of `Γ(S)`. The derived order is the canonical one: matrix units
/// lexicographically, then duals by `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormVertex {
    Unit(IndexPair),
    Dual(IndexPair),
}

impl fmt::Display for FormVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormVertex::Unit(p) => write!(f, "{}", BasisElement::Unit(*p)),
            FormVertex::Dual(s) if s.i < 10 && s.j < 10 => write!(f, "d{}{}", s.i, s.j),
            FormVertex::Dual(s) => write!(f, "d({},{})", s.i, s.j),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormGraph {
    pub support: LieSupport,
    pub s: BTreeSet<IndexPair>,
    /// Canonical order.
    pub vertices: Vec<FormVertex>,
    pub arcs: BTreeSet<(FormVertex, FormVertex)>,
    pub duals: Vec<DualBasisElement>,
}

fn check_small(g: &LieSupport, s: &BTreeSet<IndexPair>) -> Result<()> {
    if let Some(p) = s.iter().find(|p| !g.pairs.contains(p)) {
        return Err(Error::OutsideSupport(*p));
    }
    if !gamma_graph(g.n, s).is_tree() {
        return Err(Error::NotATree("γ(S) is not a tree".into()));
    }
    Ok(())
}

/// Vertices: every off-diagonal unit of `g` and `d_s` for `s ∈ S`.
/// Arcs: `e_ij -> e_jl` when `(i, l) ∈ S`, and `d_s -> e_s`.
pub fn build_form_graph(g: &LieSupport, s: &BTreeSet<IndexPair>) -> Result<FormGraph> {
    check_small(g, s)?;
    let duals = dual_basis(g.n, s)?;
    let mut vertices: Vec<FormVertex> = g.pairs.iter().map(|&p| FormVertex::Unit(p)).collect();
    vertices.extend(s.iter().map(|&p| FormVertex::Dual(p)));
    let mut arcs = BTreeSet::new();
    for a in &g.pairs {
        for b in g.pairs.range(IndexPair::new(a.j, 0)..IndexPair::new(a.j + 1, 0)) {
            if a.i != b.j && s.contains(&IndexPair::new(a.i, b.j)) {
                arcs.insert((FormVertex::Unit(*a), FormVertex::Unit(*b)));
            }
        }
    }
    for &p in s {
        arcs.insert((FormVertex::Dual(p), FormVertex::Unit(p)));
    }
    Ok(FormGraph { support: g.clone(), s: s.clone(), vertices, arcs, duals })
}

impl FormGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, v: &FormVertex) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn element_of(&self, v: &FormVertex) -> Element {
        match v {
            FormVertex::Unit(p) => Element::basis(BasisElement::Unit(*p)),
            FormVertex::Dual(s) => self
                .duals
                .iter()
                .find(|d| d.s == *s)
                .map(DualBasisElement::to_element)
                .expect("every dual vertex has a dual element"),
        }
    }

    /// Oriented graph on vertex indices in canonical order.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::with_labels(self.vertices.iter().map(ToString::to_string).collect());
        for (a, b) in &self.arcs {
            g.add_arc(self.index_of(a).unwrap(), self.index_of(b).unwrap())
                .expect("arcs are simple");
        }
        g
    }

    /// Components as vertex lists, ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<FormVertex>> {
        self.to_graph()
            .components()
            .into_iter()
            .map(|c| c.into_iter().map(|k| self.vertices[k]).collect())
            .collect()
    }

    pub fn in_degrees(&self) -> BTreeMap<FormVertex, usize> {
        let mut deg: BTreeMap<FormVertex, usize> = self.vertices.iter().map(|&v| (v, 0)).collect();
        for (_, b) in &self.arcs {
            *deg.get_mut(b).unwrap() += 1;
        }
        deg
    }

    pub fn to_dot(&self, header: &str, labels: Option<&[FormComponent]>) -> String {
        let mut out = String::new();
        if !header.is_empty() {
            let _ = writeln!(out, "// {header}");
        }
        out.push_str("digraph form_graph {\n");
        let comps: Vec<(Option<String>, Vec<FormVertex>)> = match labels {
            Some(cs) => cs
                .iter()
                .map(|c| (Some(format!("({}, {})", format_rational(&c.eigenpair), format_rational(&(rat(1) - &c.eigenpair)))), c.vertices.clone()))
                .collect(),
            None => self.components().into_iter().map(|c| (None, c)).collect(),
        };
        for (k, (label, vs)) in comps.iter().enumerate() {
            let _ = writeln!(out, "  subgraph cluster_{k} {{");
            if let Some(l) = label {
                let _ = writeln!(out, "    label=\"{l}\";");
            }
            for v in vs {
                let _ = writeln!(out, "    \"{v}\";");
            }
            out.push_str("  }\n");
        }
        for (a, b) in &self.arcs {
            let _ = writeln!(out, "  \"{a}\" -> \"{b}\";");
        }
        out.push_str("}\n");
        out
    }

    fn arc_set(&self) -> (BTreeSet<FormVertex>, &BTreeSet<(FormVertex, FormVertex)>) {
        (self.vertices.iter().copied().collect(), &self.arcs)
    }

    /// Same vertices and arcs.
    pub fn same_graph(&self, other: &FormGraph) -> bool {
        self.arc_set() == other.arc_set()
    }
}

/// One component of `Γ(S)` with its eigenvalue pair `(m, 1 - m)`, stored as
/// the smaller member `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormComponent {
    pub id: usize,
    pub vertices: Vec<FormVertex>,
    pub arcs: Vec<(FormVertex, FormVertex)>,
    #[serde(with = "crate::exact::rational_string")]
    pub eigenpair: Rational,
    pub is_tree: bool,
    pub rooted: bool,
    pub matching_number: usize,
    pub rank: usize,
}

fn vertex_eigenvalue(v: &FormVertex, d: &PrincipalElement) -> Rational {
    match v {
        FormVertex::Unit(p) => d.eigenvalue(*p),
        FormVertex::Dual(_) => Rational::zero(),
    }
}

fn rooted_tree(vs: &[FormVertex], arcs: &[(FormVertex, FormVertex)]) -> bool {
    if arcs.len() + 1 != vs.len() {
        return false;
    }
    let mut indeg: BTreeMap<FormVertex, usize> = vs.iter().map(|&v| (v, 0)).collect();
    for (_, b) in arcs {
        *indeg.get_mut(b).unwrap() += 1;
    }
    indeg.values().filter(|&&k| k == 0).count() == 1 && indeg.values().all(|&k| k <= 1)
}

/// Splits `Γ(S)` into components labelled by `ad(d)` eigenvalue pairs, with
/// matching number and skew rank of each.
pub fn eigenpair_components(fg: &FormGraph, d: &PrincipalElement) -> Result<Vec<FormComponent>> {
    let whole = fg.to_graph();
    let mut out = Vec::new();
    for (id, comp) in whole.components().into_iter().enumerate() {
        let sub = whole.induced(&comp);
        let vertices: Vec<FormVertex> = comp.iter().map(|&k| fg.vertices[k]).collect();
        let arcs: Vec<(FormVertex, FormVertex)> = fg
            .arcs
            .iter()
            .filter(|(a, _)| vertices.binary_search(a).is_ok())
            .copied()
            .collect();
        let values: BTreeSet<Rational> = vertices.iter().map(|v| vertex_eigenvalue(v, d)).collect();
        let low = values.iter().next().cloned().unwrap_or_else(Rational::zero);
        let partner = rat(1) - &low;
        if values.iter().any(|x| *x != low && *x != partner) || (values.len() == 1 && vertices.len() > 1) {
            let shown: Vec<String> = values.iter().map(format_rational).collect();
            return Err(Error::Inconsistent(format!("component {id} mixes eigenvalues {}", shown.join(", "))));
        }
        let eigenpair = if low <= partner { low } else { partner };
        let is_tree = sub.is_forest();
        let matching_number = graph::matching_number(&sub)?.number;
        let rank = if is_tree { 2 * matching_number } else { graph::skew_adjacency_rank(&sub)? };
        out.push(FormComponent {
            id,
            rooted: rooted_tree(&vertices, &arcs),
            vertices,
            arcs,
            eigenpair,
            is_tree,
            matching_number,
            rank,
        });
    }
    Ok(out)
}

/// Every component is a tree with a unique vertex of in-degree 0 and
/// in-degree 1 elsewhere.
pub fn rooted_components_check(fg: &FormGraph) -> bool {
    let whole = fg.to_graph();
    whole.components().into_iter().all(|comp| {
        let vs: Vec<FormVertex> = comp.iter().map(|&k| fg.vertices[k]).collect();
        let arcs: Vec<(FormVertex, FormVertex)> =
            fg.arcs.iter().filter(|(a, _)| vs.binary_search(a).is_ok()).copied().collect();
        rooted_tree(&vs, &arcs)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectMatchingReport {
    pub exists: bool,
    pub unique: bool,
    pub matching: MatchingCertificate,
}

/// Leaf stripping: a leaf's edge is forced, so a forest has at most one
/// perfect matching and stripping finds it when it exists.
pub fn perfect_matching_unique(fg: &FormGraph) -> Result<PerfectMatchingReport> {
    let g = fg.to_graph();
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    let mut adj = g.adjacency();
    let mut alive = vec![true; g.vertex_count()];
    let mut queue: VecDeque<usize> = (0..g.vertex_count()).filter(|&v| adj[v].len() == 1).collect();
    let mut edges = BTreeSet::new();
    while let Some(v) = queue.pop_front() {
        if !alive[v] || adj[v].len() != 1 {
            continue;
        }
        let w = *adj[v].iter().next().unwrap();
        edges.insert((v.min(w), v.max(w)));
        for x in [v, w] {
            alive[x] = false;
            for y in std::mem::take(&mut adj[x]) {
                adj[y].remove(&x);
                if alive[y] && adj[y].len() == 1 {
                    queue.push_back(y);
                }
            }
        }
    }
    let exists = alive.iter().all(|a| !a);
    let number = edges.len();
    Ok(PerfectMatchingReport { exists, unique: exists, matching: MatchingCertificate { edges, number } })
}

/// Rebuilds `Γ(n, m)` of the cyclic functional from `Γ(n', m')` of its
/// reduction by attaching terminal chains of length two and isolated links.
pub fn rebuild_cyclic_form_graph(n: usize, m: usize) -> Result<FormGraph> {
    let g = LieSupport::parabolic(n, m)?;
    let (s, _) = cyclic_support(n, m)?;
    if (n, m) == (2, 1) {
        return build_form_graph(&g, &s);
    }
    let red = gallery::cyclic_reduce(n, m)?;
    let inner = rebuild_cyclic_form_graph(red.n, red.m)?;
    let relabel = |k: usize| match red.kind {
        ReductionKind::Stable => k,
        ReductionKind::Unstable => m + 1 - k,
    };
    let map_pair = |p: IndexPair| IndexPair::new(relabel(p.i), relabel(p.j));
    let map_vertex = |v: FormVertex| match v {
        FormVertex::Unit(p) => FormVertex::Unit(map_pair(p)),
        FormVertex::Dual(p) => FormVertex::Dual(map_pair(p)),
    };
    let inner_s: BTreeSet<IndexPair> = inner.s.iter().map(|&p| map_pair(p)).collect();
    if !inner_s.is_subset(&s) {
        return Err(Error::Inconsistent(format!("S({}, {}) does not sit inside S({n}, {m})", red.n, red.m)));
    }
    let mut vertices: BTreeSet<FormVertex> = inner.vertices.iter().map(|&v| map_vertex(v)).collect();
    let mut arcs: BTreeSet<(FormVertex, FormVertex)> =
        inner.arcs.iter().map(|&(a, b)| (map_vertex(a), map_vertex(b))).collect();
    let pred: BTreeMap<usize, usize> = s.iter().map(|p| (p.j, p.i)).collect();
    let unit = |i: usize, j: usize| FormVertex::Unit(IndexPair::new(i, j));
    for i in 1..=n - m {
        for j in n - m + 1..=n {
            vertices.insert(unit(i, j));
        }
    }
    for k in n - m + 1..=n {
        for l in m + 1..=n {
            if k == l {
                continue;
            }
            vertices.insert(unit(k, l));
            let j = *pred.get(&l).ok_or_else(|| Error::Inconsistent(format!("{l} has no predecessor")))?;
            arcs.insert((unit(j, k), unit(k, l)));
            match pred.get(&k) {
                Some(&i) if g.pairs.contains(&IndexPair::new(i, j)) => {
                    arcs.insert((unit(i, j), unit(j, k)));
                }
                _ => {}
            }
        }
    }
    // Second-block units can also precede units kept from the remainder.
    let kept: Vec<IndexPair> = inner.vertices.iter().filter_map(|&v| match map_vertex(v) {
        FormVertex::Unit(p) => Some(p),
        FormVertex::Dual(_) => None,
    }).collect();
    for j in 1..=n - m {
        for &p in &kept {
            if p.i > n - m && p.j != j && s.contains(&IndexPair::new(j, p.j)) {
                arcs.insert((unit(j, p.i), FormVertex::Unit(p)));
            }
        }
    }
    for p in s.difference(&inner_s) {
        vertices.insert(FormVertex::Dual(*p));
        arcs.insert((FormVertex::Dual(*p), FormVertex::Unit(*p)));
    }
    Ok(FormGraph {
        duals: dual_basis(n, &s)?,
        support: g,
        s,
        vertices: vertices.into_iter().collect(),
        arcs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{dk_support, principal_candidate, prime_support};
    use crate::sln::{kirillov_matrix, Functional};

    fn cyclic(n: usize, m: usize) -> (FormGraph, PrincipalElement) {
        let g = LieSupport::parabolic(n, m).unwrap();
        let (s, _) = cyclic_support(n, m).unwrap();
        (build_form_graph(&g, &s).unwrap(), principal_candidate(n, &s).unwrap())
    }

    #[test]
    fn gamma_4_3() {
        let (fg, d) = cyclic(4, 3);
        assert_eq!(fg.vertex_count(), 12);
        let comps = eigenpair_components(&fg, &d).unwrap();
        assert_eq!(comps.len(), 5);
        let pm = perfect_matching_unique(&fg).unwrap();
        assert!(pm.exists && pm.unique);
        assert_eq!(pm.matching.number, 6);
    }

    #[test]
    fn gamma_7_3() {
        let (fg, d) = cyclic(7, 3);
        assert_eq!(fg.vertex_count(), 36);
        let comps = eigenpair_components(&fg, &d).unwrap();
        assert_eq!(comps.len(), 11);
        assert_eq!(comps.iter().map(|c| c.matching_number).sum::<usize>(), 18);
        assert!(rooted_components_check(&fg));
        let big = comps.iter().max_by_key(|c| c.vertices.len()).unwrap();
        let root = big.vertices.iter().find(|v| !big.arcs.iter().any(|(_, b)| b == *v)).unwrap();
        assert_eq!(*root, FormVertex::Unit(IndexPair::new(3, 2)));
        assert_eq!(big.eigenpair, rat(-1));
    }

    #[test]
    fn arcs_are_the_form() {
        for (n, m) in [(4, 3), (5, 2), (7, 3)] {
            let (fg, _) = cyclic(n, m);
            let f = Functional::from_support(&fg.s);
            let km = kirillov_matrix(&fg.support, &f).unwrap();
            for a in &fg.vertices {
                for b in &fg.vertices {
                    let v = f.evaluate(&fg.element_of(a).bracket(&fg.element_of(b), n), n);
                    let want = if fg.arcs.contains(&(*a, *b)) {
                        rat(1)
                    } else if fg.arcs.contains(&(*b, *a)) {
                        rat(-1)
                    } else {
                        rat(0)
                    };
                    assert_eq!(v, want, "{a} {b}");
                }
            }
            assert_eq!(km.size(), fg.vertex_count());
        }
    }

    #[test]
    fn prime_chains() {
        let n = 5;
        let g = LieSupport::parabolic(n, 1).unwrap();
        let s = prime_support(n).unwrap();
        let fg = build_form_graph(&g, &s).unwrap();
        let d = principal_candidate(n, &s).unwrap();
        let comps = eigenpair_components(&fg, &d).unwrap();
        let g2 = fg.to_graph();
        assert!(g2.is_forest());
        assert!(g2.adjacency().iter().all(|a| a.len() <= 2));
        let pairs: BTreeSet<Rational> = comps.iter().map(|c| c.eigenpair.clone()).collect();
        let want: BTreeSet<Rational> = (0..=n as i64 - 2).map(|k| rat(-k)).collect();
        assert_eq!(pairs, want);
    }

    #[test]
    fn dk_graph_records() {
        let g = LieSupport::parabolic(7, 3).unwrap();
        let s = dk_support(&g).unwrap();
        let fg = build_form_graph(&g, &s).unwrap();
        assert_eq!(fg.vertex_count(), 36);
        let _ = rooted_components_check(&fg);
    }

    #[test]
    fn single_link() {
        let (fg, _) = cyclic(2, 1);
        assert!(rooted_components_check(&fg));
        let pm = perfect_matching_unique(&fg).unwrap();
        assert!(pm.exists && pm.unique && pm.matching.number == 1);
    }

    #[test]
    fn rebuild_matches_small() {
        for (n, m) in (2..=11usize).flat_map(|n| (1..n).map(move |m| (n, m))) {
            if num::integer::gcd(n, m) != 1 {
                continue;
            }
            let (fg, _) = cyclic(n, m);
            let rb = rebuild_cyclic_form_graph(n, m).unwrap();
            assert!(fg.same_graph(&rb), "({n},{m})");
        }
    }
}
