//! Admissible triples for sl(n), root progressions and the degeneration of
//! the `α(T)` part of a modified Yang-Baxter solution under `exp(th)`.
//!
//! `α(T)` is handled through its mapped root pairs: conjugation scales the
//! pair `a -> b` by `exp(t(λ_a - λ_b))` with `λ_i = h_i - h_{i+1}`.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rat, Rational};
use crate::gallery::{cyclic_sequence, cyclic_support, principal_candidate};

/// A bijection `t: s1 -> s2` between sets of simple roots `1..n-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTriple", into = "RawTriple")]
pub struct AdmissibleTriple {
    pub n: usize,
    pub s1: BTreeSet<usize>,
    pub s2: BTreeSet<usize>,
    pub t: BTreeMap<usize, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawTriple {
    n: usize,
    s1: Vec<usize>,
    s2: Vec<usize>,
    map: Vec<(usize, usize)>,
}

impl From<AdmissibleTriple> for RawTriple {
    fn from(t: AdmissibleTriple) -> Self {
        RawTriple {
            n: t.n,
            s1: t.s1.into_iter().collect(),
            s2: t.s2.into_iter().collect(),
            map: t.t.into_iter().collect(),
        }
    }
}

impl TryFrom<RawTriple> for AdmissibleTriple {
    type Error = Error;

    fn try_from(r: RawTriple) -> Result<Self> {
        let t = AdmissibleTriple::from_map(r.n, r.map.into_iter().collect())?;
        if t.s1 != r.s1.into_iter().collect() || t.s2 != r.s2.into_iter().collect() {
            return Err(Error::Inconsistent("s1 and s2 must be the domain and image of the map".into()));
        }
        Ok(t)
    }
}

impl AdmissibleTriple {
    pub fn empty(n: usize) -> Self {
        AdmissibleTriple { n, s1: BTreeSet::new(), s2: BTreeSet::new(), t: BTreeMap::new() }
    }

    /// Domain and image are read off the map; it must be injective and stay
    /// inside `1..n-1`.
    pub fn from_map(n: usize, t: BTreeMap<usize, usize>) -> Result<Self> {
        let s1: BTreeSet<usize> = t.keys().copied().collect();
        let s2: BTreeSet<usize> = t.values().copied().collect();
        if s2.len() != t.len() {
            return Err(Error::InvalidParameters("map is not injective".into()));
        }
        if let Some(k) = s1.iter().chain(&s2).find(|&&k| k == 0 || k >= n) {
            return Err(Error::InvalidParameters(format!("{k} is not a simple root of sl({n})")));
        }
        Ok(AdmissibleTriple { n, s1, s2, t })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let map: BTreeMap<usize, usize> = pairs.iter().copied().collect();
        if map.len() != pairs.len() {
            return Err(Error::InvalidParameters("a root is mapped twice".into()));
        }
        AdmissibleTriple::from_map(n, map)
    }

    /// Restriction to a subset of the domain.
    pub fn restrict(&self, domain: &BTreeSet<usize>) -> Self {
        let t: BTreeMap<usize, usize> = self.t.iter().filter(|(k, _)| domain.contains(k)).map(|(&a, &b)| (a, b)).collect();
        AdmissibleTriple::from_map(self.n, t).expect("restriction of a valid map")
    }

    /// Roots visited by iterating `t` from the roots of `s1` not in `s2`.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for &start in self.s1.iter().filter(|k| !self.s2.contains(k)) {
            let mut chain = vec![start];
            let mut k = start;
            while let Some(&next) = self.t.get(&k) {
                chain.push(next);
                k = next;
            }
            out.push(chain);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

/// Checks nilpotency (every orbit leaves `s1`) and that adjacent roots go to
/// adjacent roots.
pub fn validate_triple(t: &AdmissibleTriple) -> TripleReport {
    let mut violations = Vec::new();
    for &i in &t.s1 {
        let mut k = i;
        let mut steps = 0;
        while let Some(&next) = t.t.get(&k) {
            k = next;
            steps += 1;
            if steps > t.s1.len() {
                violations.push(format!("the orbit of {i} never leaves s1"));
                break;
            }
        }
    }
    for &i in &t.s1 {
        if let (Some(&a), Some(&b)) = (t.t.get(&i), t.t.get(&(i + 1))) {
            if a.abs_diff(b) != 1 {
                violations.push(format!("{i} and {} are adjacent but map to {a} and {b}", i + 1));
            }
        }
    }
    TripleReport { valid: violations.is_empty(), violations }
}

/// `s1 = {1..n-1} \ {n-m}`, `t(i) = i + m mod n`.
pub fn maximal_triple(n: usize, m: usize) -> Result<AdmissibleTriple> {
    if m == 0 || m >= n {
        return Err(Error::InvalidParameters(format!("need 0 < m < n, got n = {n}, m = {m}")));
    }
    if num::integer::gcd(n, m) != 1 {
        return Err(Error::NotCoprime { n, m });
    }
    let t = (1..n).filter(|&i| i != n - m).map(|i| (i, (i + m) % n)).collect();
    AdmissibleTriple::from_map(n, t)
}

/// `a ≺ b`: `a.t` is the restriction of `b.t` to `a.s1`.
pub fn triple_precedes(a: &AdmissibleTriple, b: &AdmissibleTriple) -> bool {
    a.n == b.n && a.t.iter().all(|(k, v)| b.t.get(k) == Some(v))
}

/// How the weights run along the order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

/// A linear order on the simple roots with its consecutive pairs and the
/// weights `λ_i = h_i - h_{i+1}` of the cyclic principal element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootProgression {
    pub n: usize,
    pub m: usize,
    pub order: Vec<usize>,
    pub mapped_pairs: Vec<(usize, usize)>,
    #[serde(with = "weights_json")]
    pub weights: BTreeMap<usize, Rational>,
    pub monotonicity: Monotonicity,
    /// `position[k]` is the place of root `k` in `order`, the renumbering
    /// that turns the order into `1..n-1`.
    pub position: BTreeMap<usize, usize>,
}

mod weights_json {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::exact::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(w: &BTreeMap<usize, Rational>, s: S) -> Result<S::Ok, S::Error> {
        let v: BTreeMap<String, String> = w.iter().map(|(k, x)| (k.to_string(), format_rational(x))).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<usize, Rational>, D::Error> {
        let v = BTreeMap::<String, String>::deserialize(d)?;
        v.into_iter()
            .map(|(k, x)| {
                let k: usize = k.parse().map_err(serde::de::Error::custom)?;
                Ok((k, parse_rational(&x).map_err(serde::de::Error::custom)?))
            })
            .collect()
    }
}

impl RootProgression {
    /// Pairs `a -> b` of the order with `b < a`.
    pub fn descents(&self) -> Vec<(usize, usize)> {
        self.mapped_pairs.iter().copied().filter(|(a, b)| b < a).collect()
    }

    /// The mapped pairs as a triple (not necessarily admissible).
    pub fn triple(&self) -> Result<AdmissibleTriple> {
        AdmissibleTriple::from_pairs(self.n, &self.mapped_pairs)
    }
}

/// `λ_i = h_i - h_{i+1}`.
pub fn root_weights(h: &[Rational]) -> BTreeMap<usize, Rational> {
    (1..h.len()).map(|i| (i, &h[i - 1] - &h[i])).collect()
}

fn monotonicity(order: &[usize], w: &BTreeMap<usize, Rational>) -> Option<Monotonicity> {
    let steps: Vec<Rational> = order.windows(2).map(|p| &w[&p[1]] - &w[&p[0]]).collect();
    if steps.iter().all(|s| !s.is_negative()) {
        Some(Monotonicity::Nondecreasing)
    } else if steps.iter().all(|s| !s.is_positive()) {
        Some(Monotonicity::Nonincreasing)
    } else {
        None
    }
}

fn cyclic_weights(n: usize, m: usize) -> Result<BTreeMap<usize, Rational>> {
    let (s, _) = cyclic_support(n, m)?;
    Ok(root_weights(&principal_candidate(n, &s)?.diagonal))
}

fn progression(n: usize, m: usize, order: Vec<usize>, weights: BTreeMap<usize, Rational>, mono: Monotonicity) -> RootProgression {
    RootProgression {
        n,
        m,
        mapped_pairs: order.windows(2).map(|p| (p[0], p[1])).collect(),
        position: order.iter().enumerate().map(|(k, &r)| (r, k + 1)).collect(),
        order,
        weights,
        monotonicity: mono,
    }
}

/// The cyclic sequence `1, m+1, 2m+1, ..` with `n` deleted, cut at the first
/// rotation along which the cyclic principal element's weights are
/// nondecreasing (failing that, nonincreasing).
pub fn root_progression(n: usize, m: usize) -> Result<RootProgression> {
    if m == 0 || m >= n {
        return Err(Error::InvalidParameters(format!("need 0 < m < n, got n = {n}, m = {m}")));
    }
    if num::integer::gcd(n, m) != 1 {
        return Err(Error::NotCoprime { n, m });
    }
    let weights = cyclic_weights(n, m)?;
    let base: Vec<usize> = cyclic_sequence(n, m).into_iter().filter(|&k| k != n).collect();
    let rotations: Vec<Vec<usize>> = (0..base.len())
        .map(|r| base[r..].iter().chain(&base[..r]).copied().collect())
        .collect();
    for wanted in [Monotonicity::Nondecreasing, Monotonicity::Nonincreasing] {
        if let Some(order) = rotations.iter().find(|o| monotonicity(o, &weights) == Some(wanted)) {
            return Ok(progression(n, m, order.clone(), weights, wanted));
        }
    }
    Err(Error::Inconsistent(format!("no rotation of the root sequence of ({n}, {m}) has monotone weights")))
}

/// The single chain of `maximal_triple(n, m)`: `m -> m + m -> .. -> n - m`.
pub fn t_chain_progression(n: usize, m: usize) -> Result<RootProgression> {
    let t = maximal_triple(n, m)?;
    let order = if n == 2 { vec![1] } else { t.chains().remove(0) };
    let weights = cyclic_weights(n, m)?;
    let mono = monotonicity(&order, &weights)
        .ok_or_else(|| Error::Inconsistent(format!("weights are not monotone along the chain of ({n}, {m})")))?;
    Ok(progression(n, m, order, weights, mono))
}

/// Pairs kept and dropped in the limit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degeneration {
    pub surviving: Vec<(usize, usize)>,
    pub removed: Vec<(usize, usize)>,
    /// `+1` for `t -> +∞`, `-1` for `t -> -∞`.
    pub direction: i8,
}

/// Limit of the mapped pairs of `p` under `exp(th)`. The limit is taken in
/// the direction in which every pair weight `±(λ_a - λ_b)` is at most zero;
/// pairs with nonzero weight vanish.
pub fn degeneration_limit(p: &RootProgression, h: &[Rational]) -> Result<Degeneration> {
    if h.len() != p.n {
        return Err(Error::Dimension(format!("h has {} entries, expected {}", h.len(), p.n)));
    }
    let w = root_weights(h);
    let gaps: Vec<Rational> = p.mapped_pairs.iter().map(|(a, b)| &w[a] - &w[b]).collect();
    let direction: i8 = if gaps.iter().all(|g| !g.is_positive()) {
        1
    } else if gaps.iter().all(|g| !g.is_negative()) {
        -1
    } else {
        let k = gaps.iter().position(|g| g.is_positive()).unwrap();
        let (a, b) = p.mapped_pairs[k];
        return Err(Error::Divergent(a, b));
    };
    let (mut surviving, mut removed) = (Vec::new(), Vec::new());
    for (pair, g) in p.mapped_pairs.iter().zip(&gaps) {
        if g.is_zero() {
            surviving.push(*pair);
        } else {
            removed.push(*pair);
        }
    }
    Ok(Degeneration { surviving, removed, direction })
}

/// Integer diagonal whose weights step up by one exactly at the pairs not
/// kept, so that the limit keeps exactly `keep`.
pub fn find_separating_h(p: &RootProgression, keep: &BTreeSet<(usize, usize)>) -> Result<Vec<i64>> {
    let pairs: BTreeSet<(usize, usize)> = p.mapped_pairs.iter().copied().collect();
    if let Some(bad) = keep.iter().find(|q| !pairs.contains(q)) {
        return Err(Error::Inconsistent(format!("{} -> {} is not a pair of the progression", bad.0, bad.1)));
    }
    let mut lambda: BTreeMap<usize, i64> = BTreeMap::new();
    let mut level = 0;
    lambda.insert(p.order[0], level);
    for &(a, b) in &p.mapped_pairs {
        if !keep.contains(&(a, b)) {
            level += 1;
        }
        lambda.insert(b, level);
    }
    let mut h = vec![0i64; p.n];
    for i in 1..p.n {
        h[i] = h[i - 1] - lambda.get(&i).copied().unwrap_or(0);
    }
    Ok(h)
}

/// Integer `h` as rationals.
pub fn integer_diagonal(h: &[i64]) -> Vec<Rational> {
    h.iter().map(|&v| rat(v)).collect()
}
#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic_h(n: usize, m: usize) -> Vec<Rational> {
        let (s, _) = cyclic_support(n, m).unwrap();
        principal_candidate(n, &s).unwrap().diagonal
    }

    fn coprime(limit: usize) -> impl Iterator<Item = (usize, usize)> {
        (2..=limit).flat_map(|n| (1..n).map(move |m| (n, m))).filter(|&(n, m)| num::integer::gcd(n, m) == 1)
    }

    #[test]
    fn triple_validation() {
        let t = AdmissibleTriple::from_pairs(5, &[(1, 3), (2, 4), (4, 1)]).unwrap();
        assert!(validate_triple(&t).valid);
        assert_eq!(maximal_triple(5, 2).unwrap(), t);
        let id = AdmissibleTriple::from_pairs(3, &[(1, 1)]).unwrap();
        assert!(!validate_triple(&id).valid);
        assert!(validate_triple(&AdmissibleTriple::empty(4)).valid);
        let bent = AdmissibleTriple::from_pairs(5, &[(1, 2), (2, 4)]).unwrap();
        assert_eq!(validate_triple(&bent).violations.len(), 1);
    }

    #[test]
    fn maximal_triples() {
        for (n, m) in coprime(12) {
            let t = maximal_triple(n, m).unwrap();
            assert!(validate_triple(&t).valid, "({n},{m})");
            assert_eq!(t.s1.len(), n - 2);
            if n > 2 {
                let chains = t.chains();
                assert_eq!(chains.len(), 1);
                let mut seen = chains[0].clone();
                seen.sort();
                assert_eq!(seen, (1..n).collect::<Vec<_>>());
            }
        }
        assert!(matches!(maximal_triple(6, 4), Err(Error::NotCoprime { .. })));
        assert_eq!(maximal_triple(2, 1).unwrap(), AdmissibleTriple::empty(2));
        assert_eq!(maximal_triple(8, 5).unwrap().chains()[0], vec![5, 2, 7, 4, 1, 6, 3]);
    }

    #[test]
    fn precedence() {
        let big = maximal_triple(5, 2).unwrap();
        assert!(triple_precedes(&AdmissibleTriple::empty(5), &big));
        assert!(triple_precedes(&big.restrict(&[1, 2].into()), &big));
        assert!(!triple_precedes(&big, &maximal_triple(5, 3).unwrap()));
    }

    #[test]
    fn printed_progressions() {
        let p = root_progression(5, 2).unwrap();
        assert_eq!(p.order, vec![1, 3, 2, 4]);
        let d = degeneration_limit(&p, &cyclic_h(5, 2)).unwrap();
        assert_eq!(d.removed, vec![(3, 2)]);
        let p = root_progression(8, 5).unwrap();
        assert_eq!(p.order, vec![5, 2, 7, 4, 1, 6, 3]);
        let d = degeneration_limit(&p, &cyclic_h(8, 5)).unwrap();
        assert_eq!(d.removed, vec![(5, 2), (4, 1)]);
        assert!(d.surviving.contains(&(7, 4)) && d.surviving.contains(&(6, 3)));
        assert_eq!(root_progression(6, 1).unwrap().order, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn zero_h_keeps_everything() {
        let p = root_progression(8, 5).unwrap();
        let d = degeneration_limit(&p, &vec![Rational::zero(); 8]).unwrap();
        assert!(d.removed.is_empty());
    }

    #[test]
    fn wrong_direction_diverges() {
        let p = root_progression(5, 2).unwrap();
        let h = integer_diagonal(&[0, -1, -2, -2, -2]);
        assert!(matches!(degeneration_limit(&p, &h), Err(Error::Divergent(..))));
    }

    #[test]
    fn chain_reading_removes_only_descents() {
        for (n, m) in coprime(9) {
            let p = t_chain_progression(n, m).unwrap();
            let d = degeneration_limit(&p, &cyclic_h(n, m)).unwrap();
            let desc = p.descents();
            assert!(d.removed.iter().all(|q| desc.contains(q)), "({n},{m})");
            assert_eq!(d.removed.is_empty(), desc.is_empty(), "({n},{m})");
            let limit = AdmissibleTriple::from_pairs(n, &d.surviving).unwrap();
            assert!(triple_precedes(&limit, &maximal_triple(n, m).unwrap()));
        }
    }

    #[test]
    fn separating_h_round_trip() {
        for (n, m) in coprime(8) {
            for p in [root_progression(n, m).unwrap(), t_chain_progression(n, m).unwrap()] {
                let k = p.mapped_pairs.len();
                for mask in 0..1u32 << k {
                    let keep: BTreeSet<(usize, usize)> =
                        (0..k).filter(|b| mask >> b & 1 == 1).map(|b| p.mapped_pairs[b]).collect();
                    let h = find_separating_h(&p, &keep).unwrap();
                    let d = degeneration_limit(&p, &integer_diagonal(&h)).unwrap();
                    assert_eq!(d.surviving.iter().copied().collect::<BTreeSet<_>>(), keep);
                    assert!(triple_precedes(&AdmissibleTriple::from_pairs(n, &d.surviving).unwrap(), &p.triple().unwrap()));
                }
            }
        }
        let p = root_progression(5, 2).unwrap();
        assert!(find_separating_h(&p, &[(2, 3)].into()).is_err());
    }

    #[test]
    fn json_shapes() {
        let t = maximal_triple(5, 2).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(s, r#"{"n":5,"s1":[1,2,4],"s2":[1,3,4],"map":[[1,3],[2,4],[4,1]]}"#);
        assert_eq!(serde_json::from_str::<AdmissibleTriple>(&s).unwrap(), t);
        let p = root_progression(5, 2).unwrap();
        let back: RootProgression = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }
}
