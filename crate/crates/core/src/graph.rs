//! Undirected graphs with optional orientation: matching numbers, covers,
//! graph index and skew adjacency rank.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, rat, RationalMatrix};

pub type Edge = (usize, usize);

fn key(u: usize, v: usize) -> Edge {
    (u.min(v), u.max(v))
}

/// Simple graph on vertices `0..n`, optionally oriented edge by edge.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub labels: Vec<String>,
    edges: BTreeSet<Edge>,
    /// Edge key to `(tail, head)`.
    #[serde(with = "arc_list")]
    orientation: BTreeMap<Edge, Edge>,
}

/// JSON maps need string keys, so the orientation is written as its arcs.
mod arc_list {
    use super::{key, BTreeMap, Edge};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<Edge, Edge>, s: S) -> Result<S::Ok, S::Error> {
        m.values().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Edge, Edge>, D::Error> {
        let arcs = Vec::<Edge>::deserialize(d)?;
        Ok(arcs.into_iter().map(|(t, h)| (key(t, h), (t, h))).collect())
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { labels: (0..n).map(|v| v.to_string()).collect(), ..Default::default() }
    }

    pub fn with_labels(labels: Vec<String>) -> Self {
        Graph { labels, ..Default::default() }
    }

    pub fn from_edges(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Graph whose every edge is oriented `tail -> head`.
    pub fn from_arcs(n: usize, arcs: &[Edge]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v || u >= self.vertex_count() || v >= self.vertex_count() {
            return Err(Error::InvalidParameters(format!("bad edge ({u}, {v})")));
        }
        if !self.edges.insert(key(u, v)) {
            return Err(Error::InvalidParameters(format!("duplicate edge ({u}, {v})")));
        }
        Ok(())
    }

    pub fn add_arc(&mut self, tail: usize, head: usize) -> Result<()> {
        self.add_edge(tail, head)?;
        self.orientation.insert(key(tail, head), (tail, head));
        Ok(())
    }

    /// Sets or flips the orientation of an existing edge.
    pub fn orient(&mut self, tail: usize, head: usize) -> Result<()> {
        if !self.edges.contains(&key(tail, head)) {
            return Err(Error::InvalidParameters(format!("no edge ({tail}, {head})")));
        }
        self.orientation.insert(key(tail, head), (tail, head));
        Ok(())
    }

    pub fn orientation_of(&self, e: Edge) -> Option<Edge> {
        self.orientation.get(&key(e.0, e.1)).copied()
    }

    pub fn is_fully_oriented(&self) -> bool {
        self.edges.iter().all(|e| self.orientation.contains_key(e))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&key(u, v))
    }

    pub fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertex_count()];
        for &(u, v) in &self.edges {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        adj
    }

    /// Connected components, each sorted, listed by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        for s in 0..self.vertex_count() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.vertex_count()
    }

    /// Two-colouring, if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let adj = self.adjacency();
        let mut colour: Vec<Option<bool>> = vec![None; self.vertex_count()];
        for s in 0..self.vertex_count() {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].unwrap();
                for &w in &adj[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(d) if d == c => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(Option::unwrap).collect())
    }

    /// Subgraph induced on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let index: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let mut g = Graph::with_labels(vertices.iter().map(|&v| self.labels[v].clone()).collect());
        for &(u, v) in &self.edges {
            if let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) {
                g.edges.insert(key(a, b));
                if let Some(&(t, h)) = self.orientation.get(&(u, v)) {
                    g.orientation.insert(key(a, b), (index[&t], index[&h]));
                }
            }
        }
        g
    }

    pub fn to_dot(&self, name: &str, header: &str) -> String {
        let directed = !self.edges.is_empty() && self.is_fully_oriented();
        let mut out = String::new();
        if !header.is_empty() {
            let _ = writeln!(out, "// {header}");
        }
        let (kind, sep) = if directed { ("digraph", "->") } else { ("graph", "--") };
        let _ = writeln!(out, "{kind} {name} {{");
        for (v, l) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "  {v} [label=\"{l}\"];");
        }
        for e in &self.edges {
            let (a, b) = if directed { self.orientation[e] } else { *e };
            let _ = writeln!(out, "  {a} {sep} {b};");
        }
        out.push_str("}\n");
        out
    }
}

/// A set of pairwise disjoint edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingCertificate {
    pub edges: BTreeSet<Edge>,
    pub number: usize,
}

impl MatchingCertificate {
    fn from_edges(edges: BTreeSet<Edge>) -> Self {
        let number = edges.len();
        MatchingCertificate { edges, number }
    }

    /// Edges are in `g` and pairwise disjoint.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut used = BTreeSet::new();
        self.number == self.edges.len()
            && self.edges.iter().all(|&(u, v)| g.has_edge(u, v) && used.insert(u) && used.insert(v))
    }
}

/// Maximum matching of a forest by repeated pruning.
///
/// Rules, tried in order, ties to the smallest vertex: a star component
/// (one centre whose neighbours are all leaves) gives one edge and is
/// removed; a terminal chain `a - b - c` with `a` a leaf and `deg b = 2`
/// gives `ab` and loses `a, b`; a branch vertex with at most one non-leaf
/// neighbour gives one of its leaf edges and is removed together with its
/// leaves.
pub fn matching_number_pruned(g: &Graph) -> Result<MatchingCertificate> {
    if !g.is_forest() {
        return Err(Error::NotAForest);
    }
    let mut adj = g.adjacency();
    let mut alive: BTreeSet<usize> = (0..g.vertex_count()).filter(|&v| !adj[v].is_empty()).collect();
    let mut matching = BTreeSet::new();
    let remove = |adj: &mut Vec<BTreeSet<usize>>, alive: &mut BTreeSet<usize>, v: usize| {
        for w in std::mem::take(&mut adj[v]) {
            adj[w].remove(&v);
            if adj[w].is_empty() {
                alive.remove(&w);
            }
        }
        alive.remove(&v);
    };
    while !alive.is_empty() {
        let deg = |v: usize, adj: &Vec<BTreeSet<usize>>| adj[v].len();
        let star = alive.iter().copied().find(|&v| adj[v].iter().all(|&w| deg(w, &adj) == 1));
        if let Some(v) = star {
            let w = *adj[v].iter().next().unwrap();
            matching.insert(key(v, w));
            for leaf in adj[v].clone() {
                remove(&mut adj, &mut alive, leaf);
            }
            remove(&mut adj, &mut alive, v);
            continue;
        }
        let chain = alive.iter().copied().find(|&a| {
            deg(a, &adj) == 1 && deg(*adj[a].iter().next().unwrap(), &adj) == 2
        });
        if let Some(a) = chain {
            let b = *adj[a].iter().next().unwrap();
            matching.insert(key(a, b));
            remove(&mut adj, &mut alive, a);
            remove(&mut adj, &mut alive, b);
            continue;
        }
        let branch = alive.iter().copied().find(|&v| {
            deg(v, &adj) >= 3 && adj[v].iter().filter(|&&w| deg(w, &adj) > 1).count() <= 1
        });
        let Some(v) = branch else {
            return Err(Error::Inconsistent("pruning found no applicable rule".into()));
        };
        let leaves: Vec<usize> = adj[v].iter().copied().filter(|&w| deg(w, &adj) == 1).collect();
        matching.insert(key(v, leaves[0]));
        remove(&mut adj, &mut alive, v);
    }
    Ok(MatchingCertificate::from_edges(matching))
}

pub const BRUTE_FORCE_EDGE_BOUND: usize = 24;

/// Maximum matching by exhaustive search. Exponential; tests only.
pub fn matching_number_bruteforce(g: &Graph) -> Result<MatchingCertificate> {
    if g.edge_count() > BRUTE_FORCE_EDGE_BOUND {
        return Err(Error::TooLarge { edges: g.edge_count(), bound: BRUTE_FORCE_EDGE_BOUND });
    }
    fn search(edges: &[Edge], k: usize, used: &mut Vec<bool>, cur: &mut Vec<Edge>, best: &mut Vec<Edge>) {
        if cur.len() + (edges.len() - k) <= best.len() {
            return;
        }
        if k == edges.len() {
            *best = cur.clone();
            return;
        }
        let (u, v) = edges[k];
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            cur.push((u, v));
            search(edges, k + 1, used, cur, best);
            cur.pop();
            used[u] = false;
            used[v] = false;
        }
        search(edges, k + 1, used, cur, best);
    }
    let edges: Vec<Edge> = g.edges().collect();
    let mut best = Vec::new();
    search(&edges, 0, &mut vec![false; g.vertex_count()], &mut Vec::new(), &mut best);
    Ok(MatchingCertificate::from_edges(best.into_iter().collect()))
}

/// Minimum vertex cover of a bipartite graph, with a matching of equal size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub number: usize,
    pub cover: BTreeSet<usize>,
    pub matching: MatchingCertificate,
}

/// Augmenting-path matching plus alternating reachability for the cover.
pub fn cover_number_bipartite(g: &Graph) -> Result<CoverCertificate> {
    let side = g.bipartition().ok_or(Error::NotBipartite)?;
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    fn augment(v: usize, adj: &[BTreeSet<usize>], mate: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &w in &adj[v] {
            if seen[w] {
                continue;
            }
            seen[w] = true;
            if mate[w].is_none_or(|u| augment(u, adj, mate, seen)) {
                mate[w] = Some(v);
                mate[v] = Some(w);
                return true;
            }
        }
        false
    }
    for v in (0..n).filter(|&v| !side[v]) {
        if mate[v].is_none() {
            augment(v, &adj, &mut mate, &mut vec![false; n]);
        }
    }
    let mut reach = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| !side[v] && mate[v].is_none()).collect();
    for &v in &queue {
        reach[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            let step = if side[v] { mate[v] == Some(w) } else { mate[v] != Some(w) };
            if step && !reach[w] {
                reach[w] = true;
                queue.push_back(w);
            }
        }
    }
    let cover: BTreeSet<usize> = (0..n).filter(|&v| (!side[v] && !reach[v]) || (side[v] && reach[v])).collect();
    let matching: BTreeSet<Edge> = (0..n).filter(|&v| !side[v]).filter_map(|v| mate[v].map(|w| key(v, w))).collect();
    let matching = MatchingCertificate::from_edges(matching);
    if cover.len() != matching.number || !g.edges().all(|(u, v)| cover.contains(&u) || cover.contains(&v)) {
        return Err(Error::Inconsistent("cover extraction failed".into()));
    }
    Ok(CoverCertificate { number: cover.len(), cover, matching })
}

/// Maximum matching by whichever exact method applies.
pub fn matching_number(g: &Graph) -> Result<MatchingCertificate> {
    if g.is_forest() {
        matching_number_pruned(g)
    } else if g.bipartition().is_some() {
        Ok(cover_number_bipartite(g)?.matching)
    } else {
        matching_number_bruteforce(g)
    }
}

/// `vx(Γ) - 2·mn(Γ)`.
pub fn graph_index(g: &Graph) -> Result<usize> {
    Ok(g.vertex_count() - 2 * matching_number(g)?.number)
}

/// `+1` at `(tail, head)` and `-1` at `(head, tail)` for every arc.
pub fn skew_adjacency_matrix(g: &Graph) -> Result<RationalMatrix> {
    let n = g.vertex_count();
    let mut m = RationalMatrix::zeros(n, n);
    for e in g.edges() {
        let (t, h) = g.orientation_of(e).ok_or(Error::MissingOrientation(e))?;
        m.set(t, h, rat(1));
        m.set(h, t, rat(-1));
    }
    Ok(m)
}

pub fn skew_adjacency_rank(g: &Graph) -> Result<usize> {
    Ok(exact::rank(&skew_adjacency_matrix(g)?))
}

/// Signs `s` with `s_u s_v = -1` exactly on the edges where two
/// orientations of the same forest disagree, so `D M_a D = M_b` for
/// `D = diag(s)`.
pub fn orientation_conjugator(a: &Graph, b: &Graph) -> Result<Vec<i64>> {
    if a.edges != b.edges || a.vertex_count() != b.vertex_count() {
        return Err(Error::InvalidParameters("graphs differ as undirected graphs".into()));
    }
    if !a.is_forest() {
        return Err(Error::NotAForest);
    }
    let adj = a.adjacency();
    let mut sign = vec![0i64; a.vertex_count()];
    for s in 0..a.vertex_count() {
        if sign[s] != 0 {
            continue;
        }
        sign[s] = 1;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if sign[w] == 0 {
                    let oa = a.orientation_of((v, w)).ok_or(Error::MissingOrientation((v, w)))?;
                    let ob = b.orientation_of((v, w)).ok_or(Error::MissingOrientation((v, w)))?;
                    sign[w] = if oa == ob { sign[v] } else { -sign[v] };
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(sign)
}

/// Colour refinement starting from degrees.
fn refine(g: &Graph) -> Vec<usize> {
    let adj = g.adjacency();
    let mut colour: Vec<usize> = adj.iter().map(BTreeSet::len).collect();
    loop {
        let sig: Vec<(usize, Vec<usize>)> = (0..g.vertex_count())
            .map(|v| {
                let mut nb: Vec<usize> = adj[v].iter().map(|&w| colour[w]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut sorted = sig.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<usize> = sig.iter().map(|s| sorted.binary_search(s).unwrap()).collect();
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

/// Isomorphism of undirected graphs by refinement and backtracking.
pub fn isomorphic(a: &Graph, b: &Graph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let joint = {
        let mut j = Graph::new(2 * n);
        for (u, v) in a.edges() {
            j.edges.insert(key(u, v));
        }
        for (u, v) in b.edges() {
            j.edges.insert(key(u + n, v + n));
        }
        j
    };
    let colour = refine(&joint);
    let (ca, cb) = (&colour[..n], &colour[n..]);
    let mut sa = ca.to_vec();
    let mut sb = cb.to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let (adj_a, adj_b) = (a.adjacency(), b.adjacency());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (ca.iter().filter(|&&c| c == ca[v]).count(), ca[v], v));
    fn extend(
        k: usize,
        order: &[usize],
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        ctx: (&[usize], &[usize], &[BTreeSet<usize>], &[BTreeSet<usize>]),
    ) -> bool {
        let (ca, cb, adj_a, adj_b) = ctx;
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in 0..cb.len() {
            if used[w] || cb[w] != ca[v] {
                continue;
            }
            let ok = order[..k].iter().all(|&u| {
                let mu = map[u].unwrap();
                adj_a[v].contains(&u) == adj_b[w].contains(&mu)
            });
            if ok {
                map[v] = Some(w);
                used[w] = true;
                if extend(k + 1, order, map, used, ctx) {
                    return true;
                }
                map[v] = None;
                used[w] = false;
            }
        }
        false
    }
    extend(0, &order, &mut vec![None; n], &mut vec![false; n], (ca, cb, &adj_a, &adj_b))
}

/// Seeded generators for sweeps and tests.
pub mod random {
    use super::*;

    /// Uniform-ish random tree on `n` vertices (random attachment).
    pub fn tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let mut g = Graph::new(n);
        for k in 1..n {
            let parent = perm[rng.random_range(0..k)];
            g.add_edge(parent, perm[k]).unwrap();
        }
        g
    }

    /// Each edge gets an independent random direction.
    pub fn orient<R: Rng>(g: &Graph, rng: &mut R) -> Graph {
        let mut o = Graph::with_labels(g.labels.clone());
        for (u, v) in g.edges() {
            if rng.random_bool(0.5) {
                o.add_arc(u, v).unwrap();
            } else {
                o.add_arc(v, u).unwrap();
            }
        }
        o
    }

    /// Forest with at most `max_edges` edges: random trees glued side by side.
    pub fn forest<R: Rng>(max_edges: usize, rng: &mut R) -> Graph {
        let target = rng.random_range(0..=max_edges);
        let mut sizes = Vec::new();
        let mut left = target;
        while left > 0 {
            let e = rng.random_range(1..=left);
            sizes.push(e + 1);
            left -= e;
        }
        let isolated = rng.random_range(0..3);
        let n: usize = sizes.iter().sum::<usize>() + isolated;
        let mut g = Graph::new(n);
        let mut base = 0;
        for s in sizes {
            let t = tree(s, rng);
            for (u, v) in t.edges() {
                g.add_edge(base + u, base + v).unwrap();
            }
            base += s;
        }
        g
    }

    /// Connected graph: a random tree plus each other edge with probability `p`.
    pub fn connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut g = tree(n, rng);
        for u in 0..n {
            for v in u + 1..n {
                if !g.has_edge(u, v) && rng.random_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    /// Arbitrary graph: each edge with probability `p`.
    pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }
}
