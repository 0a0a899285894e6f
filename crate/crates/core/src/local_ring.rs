//! Full and reduced local rings of a graph.
//!
//! The full ring `K[E]/(e e' : e, e' share a vertex)` is kept as its conflict
//! relation only: `J^k` has the `k`-matchings as a basis, so every dimension
//! is a count of independent sets of the conflict graph. Characteristic zero
//! is assumed throughout.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Generators with the pairs whose product vanishes. Squares vanish too.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingPresentation {
    pub generators: Vec<String>,
    /// Index pairs `(a, b)` with `a < b`.
    pub conflicts: BTreeSet<(usize, usize)>,
}

const WORD: usize = 128;

impl RingPresentation {
    pub fn new(generators: Vec<String>, conflicts: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = generators.len();
        let mut set = BTreeSet::new();
        for (a, b) in conflicts {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidParameters(format!("bad conflict ({a}, {b})")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(RingPresentation { generators, conflicts: set })
    }

    pub fn dim_radical(&self) -> usize {
        self.generators.len()
    }

    pub fn conflict(&self, a: usize, b: usize) -> bool {
        self.conflicts.contains(&(a.min(b), a.max(b)))
    }

    fn masks(&self) -> Result<Vec<u128>> {
        if self.generators.len() > WORD {
            return Err(Error::TooLarge { edges: self.generators.len(), bound: WORD });
        }
        let mut m = vec![0u128; self.generators.len()];
        for &(a, b) in &self.conflicts {
            m[a] |= 1 << b;
            m[b] |= 1 << a;
        }
        Ok(m)
    }

    /// The conflict relation as a graph on the generators.
    pub fn conflict_graph(&self) -> Graph {
        let mut g = Graph::with_labels(self.generators.clone());
        for &(a, b) in &self.conflicts {
            g.add_edge(a, b).expect("conflicts are simple");
        }
        g
    }

    /// Exactly three generators, all products zero.
    pub fn is_r3(&self) -> bool {
        self.generators.len() == 3 && self.conflicts.len() == 3
    }
}

/// Generators are the edges, labelled `u-v` by the vertex labels.
pub fn present(g: &Graph) -> RingPresentation {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let generators = edges.iter().map(|&(u, v)| format!("{}-{}", g.labels[u], g.labels[v])).collect();
    let mut conflicts = BTreeSet::new();
    for (a, &(u, v)) in edges.iter().enumerate() {
        for (b, &(x, y)) in edges.iter().enumerate().skip(a + 1) {
            if u == x || u == y || v == x || v == y {
                conflicts.insert((a, b));
            }
        }
    }
    RingPresentation { generators, conflicts }
}

fn count_by_size(alive: u128, masks: &[u128], memo: &mut HashMap<u128, Vec<u64>>) -> Vec<u64> {
    if alive == 0 {
        return vec![1];
    }
    if let Some(v) = memo.get(&alive) {
        return v.clone();
    }
    let v = alive.trailing_zeros() as usize;
    let without = count_by_size(alive & !(1 << v), masks, memo);
    let with = count_by_size(alive & !(1 << v) & !masks[v], masks, memo);
    let mut out = without;
    if out.len() < with.len() + 1 {
        out.resize(with.len() + 1, 0);
    }
    for (k, c) in with.iter().enumerate() {
        out[k + 1] += c;
    }
    memo.insert(alive, out.clone());
    out
}

/// `(dim J, dim J², ..)` up to the last nonzero power.
pub fn radical_power_dims(p: &RingPresentation) -> Result<Vec<u64>> {
    let masks = p.masks()?;
    let all = if masks.len() == WORD { u128::MAX } else { (1u128 << masks.len()) - 1 };
    let mut counts = count_by_size(all, &masks, &mut HashMap::new());
    counts.remove(0);
    while counts.last() == Some(&0) {
        counts.pop();
    }
    Ok(counts)
}

/// Smallest `k` with `J^k = 0`; equals the matching number plus one.
pub fn nilpotence_index(p: &RingPresentation) -> Result<usize> {
    Ok(radical_power_dims(p)?.len() + 1)
}

/// `J` splits as `J_1 ⊕ J_2` with all cross products nonzero exactly when
/// the generators split into two sets with no conflict between them, so
/// graph connectedness is connectivity of the conflict relation.
pub fn graph_connected(p: &RingPresentation) -> bool {
    p.generators.len() <= 1 || p.conflict_graph().is_connected()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Reconstruction {
    Graph {
        graph: Graph,
        /// Generator index to the edge it becomes.
        edges: Vec<(usize, usize)>,
    },
    /// Triangle or three-pointed star; the ring cannot tell which.
    AmbiguousR3,
}

/// A vertex of the graph being rebuilt: a maximal zero subalgebra from the
/// partition below, given by its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroSubalgebra {
    pub generators: Vec<usize>,
}

struct Search<'a> {
    masks: &'a [u128],
    covered: Vec<u128>,
    uses: Vec<u8>,
    cliques: Vec<u128>,
}

impl Search<'_> {
    fn first_uncovered(&self) -> Option<(usize, usize)> {
        for (x, &m) in self.masks.iter().enumerate() {
            let open = m & !self.covered[x] & !((1u128 << x) | ((1u128 << x) - 1));
            if open != 0 {
                return Some((x, open.trailing_zeros() as usize));
            }
        }
        None
    }

    fn is_open_clique(&self, c: u128) -> bool {
        let mut rest = c;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let others = c & !(1 << v);
            if self.masks[v] & others != others || self.covered[v] & others != 0 || self.uses[v] >= 2 {
                return false;
            }
        }
        true
    }

    fn apply(&mut self, c: u128, sign: bool) {
        let mut rest = c;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let others = c & !(1 << v);
            if sign {
                self.covered[v] |= others;
                self.uses[v] += 1;
            } else {
                self.covered[v] &= !others;
                self.uses[v] -= 1;
            }
        }
    }

    /// Each conflict lies in exactly one clique and each generator in at most
    /// two: the clique at `x ∩ y` holds `x`, `y` and every common neighbour
    /// except possibly the third side of one triangle.
    fn run(&mut self) -> bool {
        let Some((x, y)) = self.first_uncovered() else {
            return true;
        };
        let common = self.masks[x] & self.masks[y];
        let base = (1u128 << x) | (1u128 << y) | common;
        let mut candidates = vec![base];
        let mut rest = common;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            candidates.push(base & !(1 << w));
        }
        for c in candidates {
            if !self.is_open_clique(c) {
                continue;
            }
            self.apply(c, true);
            self.cliques.push(c);
            if self.run() {
                return true;
            }
            self.cliques.pop();
            self.apply(c, false);
        }
        false
    }
}

fn bits(mut m: u128) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Zero subalgebras that become the vertices, as found by [`reconstruct`].
pub fn vertex_subalgebras(p: &RingPresentation) -> Result<Vec<ZeroSubalgebra>> {
    let masks = p.masks()?;
    let mut s = Search { masks: &masks, covered: vec![0; masks.len()], uses: vec![0; masks.len()], cliques: Vec::new() };
    if !s.run() {
        return Err(Error::Inconsistent("the conflicts are not those of any graph".into()));
    }
    Ok(s.cliques.iter().map(|&c| ZeroSubalgebra { generators: bits(c) }).collect())
}

/// Rebuilds a connected graph from its presentation. Generators lying in a
/// single zero subalgebra get a fresh end vertex.
pub fn reconstruct(p: &RingPresentation) -> Result<Reconstruction> {
    if !graph_connected(p) {
        return Err(Error::InvalidParameters("presentation is not graph connected".into()));
    }
    if p.is_r3() {
        return Ok(Reconstruction::AmbiguousR3);
    }
    let subalgebras = vertex_subalgebras(p)?;
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); p.generators.len()];
    for (v, z) in subalgebras.iter().enumerate() {
        for &x in &z.generators {
            ends[x].push(v);
        }
    }
    let mut count = subalgebras.len();
    let mut edges = Vec::with_capacity(ends.len());
    for e in &mut ends {
        while e.len() < 2 {
            e.push(count);
            count += 1;
        }
        edges.push((e[0], e[1]));
    }
    let mut graph = Graph::with_labels((0..count).map(|v| format!("v{v}")).collect());
    for &(u, v) in &edges {
        graph.add_edge(u, v)?;
    }
    Ok(Reconstruction::Graph { graph, edges })
}

/// Dimensions of the graded pieces of the image of the full ring in the even
/// exterior algebra on the vertices, each edge `u -> v` going to `u∧v`.
///
/// A `k`-matching goes to `±` the wedge of its `2k` endpoints, a single basis
/// monomial of `Λ^{2k}`, so the rank in degree `k` is the number of distinct
/// vertex sets covered by `k`-matchings; the signs record the orientation.
pub fn reduced_radical_dims(g: &Graph) -> Result<Vec<u64>> {
    let edges: Vec<(usize, usize)> = g
        .edges()
        .map(|e| g.orientation_of(e).ok_or(Error::MissingOrientation(e)))
        .collect::<Result<_>>()?;
    let p = present(g);
    let masks = p.masks()?;
    let mut by_degree: BTreeMap<usize, BTreeMap<Vec<usize>, i64>> = BTreeMap::new();
    let mut stack: Vec<(usize, u128, Vec<usize>)> = vec![(0, 0, Vec::new())];
    while let Some((next, blocked, chosen)) = stack.pop() {
        if !chosen.is_empty() {
            let (set, sign) = wedge_monomial(&chosen, &edges);
            by_degree.entry(chosen.len()).or_default().insert(set, sign);
        }
        for e in next..edges.len() {
            if blocked >> e & 1 == 0 {
                let mut c = chosen.clone();
                c.push(e);
                stack.push((e + 1, blocked | masks[e] | (1 << e), c));
            }
        }
    }
    Ok(by_degree.values().map(|m| m.len() as u64).collect())
}

/// Sorted vertex set of `v_1∧v_1'∧v_2∧v_2'∧..` and the sign of sorting it.
pub fn wedge_monomial(matching: &[usize], arcs: &[(usize, usize)]) -> (Vec<usize>, i64) {
    let mut seq: Vec<usize> = matching.iter().flat_map(|&e| [arcs[e].0, arcs[e].1]).collect();
    let mut sign = 1;
    for i in 0..seq.len() {
        for j in 0..seq.len() - 1 - i {
            if seq[j] > seq[j + 1] {
                seq.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    (seq, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, RationalMatrix};
    use crate::graph::{isomorphic, matching_number_bruteforce, random};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn square() -> Graph {
        Graph::from_arcs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn matchings_by_size(g: &Graph) -> Vec<u64> {
        let edges: Vec<_> = g.edges().collect();
        let mut counts = vec![0u64; edges.len() + 1];
        for mask in 1u32..1 << edges.len() {
            let chosen: Vec<_> = (0..edges.len()).filter(|b| mask >> b & 1 == 1).map(|b| edges[b]).collect();
            let mut seen = BTreeSet::new();
            if chosen.iter().all(|&(u, v)| seen.insert(u) && seen.insert(v)) {
                counts[chosen.len()] += 1;
            }
        }
        counts.remove(0);
        while counts.last() == Some(&0) {
            counts.pop();
        }
        counts
    }

    #[test]
    fn small_presentations() {
        let tri = present(&Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap());
        let star = present(&Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap());
        assert_eq!(tri.conflicts, star.conflicts);
        assert!(tri.is_r3());
        assert_eq!(reconstruct(&tri).unwrap(), Reconstruction::AmbiguousR3);
        assert_eq!(radical_power_dims(&tri).unwrap(), vec![3]);
        let two = present(&Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap());
        assert!(two.conflicts.is_empty());
        assert!(!graph_connected(&two));
        assert!(graph_connected(&present(&Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap())));
    }

    #[test]
    fn square_rings() {
        let p = present(&square());
        assert_eq!(radical_power_dims(&p).unwrap(), vec![4, 2]);
        assert_eq!(nilpotence_index(&p).unwrap(), 3);
        assert_eq!(reduced_radical_dims(&square()).unwrap(), vec![4, 1]);
    }

    #[test]
    fn reduced_square_by_rank() {
        // xz and yw as vectors in Λ⁴ of the four vertices: both ±a∧b∧c∧d
        let arcs = [(0, 1), (1, 2), (2, 3), (3, 0)];
        let rows: Vec<Vec<i64>> = [[0usize, 2], [1, 3]]
            .iter()
            .map(|m| vec![wedge_monomial(m, &arcs).1])
            .collect();
        assert_eq!(crate::exact::rank(&RationalMatrix::from_i64_rows(&rows).unwrap()), 1);
        let mut deg1 = RationalMatrix::zeros(4, 6);
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        for (r, &(u, v)) in arcs.iter().enumerate() {
            let c = pairs.iter().position(|&q| q == (u.min(v), u.max(v))).unwrap();
            deg1.set(r, c, rat(if u < v { 1 } else { -1 }));
        }
        assert_eq!(crate::exact::rank(&deg1), 4);
    }

    #[test]
    fn dims_count_matchings() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = if rng.random_bool(0.5) { random::forest(10, &mut rng) } else { random::gnp(6, 0.5, &mut rng) };
            if g.edge_count() > 10 {
                continue;
            }
            let p = present(&g);
            let dims = radical_power_dims(&p).unwrap();
            assert_eq!(dims, matchings_by_size(&g));
            assert_eq!(nilpotence_index(&p).unwrap(), matching_number_bruteforce(&g).unwrap().number + 1);
            let o = random::orient(&g, &mut rng);
            let red = reduced_radical_dims(&o).unwrap();
            assert_eq!(red.len(), dims.len());
            assert!(red.iter().zip(&dims).all(|(a, b)| a <= b));
            assert_eq!(red, reduced_radical_dims(&random::orient(&g, &mut rng)).unwrap());
        }
    }

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let n = rng.random_range(2..=12);
            let g = random::connected(n, rng.random_range(0.0..0.6), &mut rng);
            let p = present(&g);
            match reconstruct(&p).unwrap() {
                Reconstruction::Graph { graph, edges } => {
                    assert!(isomorphic(&graph, &g));
                    let again = present(&graph);
                    let relabel: BTreeSet<(usize, usize)> = p.conflicts.iter().copied().collect();
                    let back: BTreeSet<(usize, usize)> = again
                        .conflicts
                        .iter()
                        .map(|&(a, b)| {
                            let ea = graph.edges().nth(a).unwrap();
                            let eb = graph.edges().nth(b).unwrap();
                            let ia = edges.iter().position(|&e| (e.0.min(e.1), e.0.max(e.1)) == ea).unwrap();
                            let ib = edges.iter().position(|&e| (e.0.min(e.1), e.0.max(e.1)) == eb).unwrap();
                            (ia.min(ib), ia.max(ib))
                        })
                        .collect();
                    assert_eq!(back, relabel);
                }
                Reconstruction::AmbiguousR3 => assert_eq!(g.edge_count(), 3),
            }
        }
        let edge = present(&Graph::from_edges(2, &[(0, 1)]).unwrap());
        match reconstruct(&edge).unwrap() {
            Reconstruction::Graph { graph, .. } => assert_eq!((graph.vertex_count(), graph.edge_count()), (2, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn not_a_line_graph() {
        // the claw K_{1,3} is not a line graph
        let p = RingPresentation::new(vec!["a".into(), "b".into(), "c".into(), "d".into()], [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(reconstruct(&p).is_err());
    }
}
