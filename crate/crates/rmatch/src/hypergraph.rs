//! Core combinatorial objects: uniform hypergraphs with canonical sorted-edge
//! storage, `(1,k)`-partite hosts, vertex sets, matchings, closeness, bad
//! vertices, and the coordinatewise dominance order.
//!
//! Vertices are integers `1..=n`. Removed vertices are masked rather than
//! reindexed, so ids stay stable when matchings found in subgraphs are
//! composed with matchings of the remainder.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::Zero;

use crate::num::{rat_int, Rat};
use crate::{Error, Result};

/// Vertex id, 1-based.
pub type Vertex = u32;

/// Canonical edge: strictly ascending vertex ids.
pub type Edge = Vec<Vertex>;

/// Sorts and validates an edge candidate: distinct vertices, ascending order.
pub fn canonical_edge(mut vs: Vec<Vertex>) -> Result<Edge> {
    vs.sort_unstable();
    if vs.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidInput(format!(
            "repeated vertex in edge {vs:?}"
        )));
    }
    Ok(vs)
}

/// A set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct VertexSet(BTreeSet<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: Vertex) -> bool {
        self.0.insert(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.0.intersection(&other.0).next().is_some()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn as_sorted_vec(&self) -> Vec<Vertex> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<T: IntoIterator<Item = Vertex>>(iter: T) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

/// A `k`-uniform hypergraph on vertex set `1..=n` with a removal mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: Vertex,
    k: usize,
    edges: BTreeSet<Edge>,
    removed: BTreeSet<Vertex>,
}

impl Hypergraph {
    /// Empty `k`-graph on `1..=n`. Uniformity must be at least 2.
    pub fn new(n: Vertex, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("uniformity {k} < 2")));
        }
        Ok(Hypergraph {
            n,
            k,
            edges: BTreeSet::new(),
            removed: BTreeSet::new(),
        })
    }

    pub fn n(&self) -> Vertex {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn is_active(&self, v: Vertex) -> bool {
        v >= 1 && v <= self.n && !self.removed.contains(&v)
    }

    /// Unmasked vertices, ascending.
    pub fn active_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (1..=self.n).filter(move |v| !self.removed.contains(v))
    }

    /// Number of unmasked vertices.
    pub fn order(&self) -> usize {
        self.n as usize - self.removed.len()
    }

    pub fn removed(&self) -> &BTreeSet<Vertex> {
        &self.removed
    }

    pub fn add_edge(&mut self, vs: Vec<Vertex>) -> Result<()> {
        let e = canonical_edge(vs)?;
        if e.len() != self.k {
            return Err(Error::InvalidInput(format!(
                "edge {e:?} has {} vertices, expected {}",
                e.len(),
                self.k
            )));
        }
        for &v in &e {
            if v < 1 || v > self.n {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} outside 1..={}",
                    self.n
                )));
            }
            if self.removed.contains(&v) {
                return Err(Error::InvalidInput(format!("vertex {v} is removed")));
            }
        }
        self.edges.insert(e);
        Ok(())
    }

    pub fn remove_edge(&mut self, e: &Edge) -> bool {
        self.edges.remove(e)
    }

    /// Number of edges containing every vertex of `t`.
    pub fn degree(&self, t: &VertexSet) -> Result<u64> {
        for v in t.iter() {
            if v < 1 || v > self.n {
                return Err(Error::InvalidInput(format!(
                    "vertex {v} outside 1..={}",
                    self.n
                )));
            }
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| t.iter().all(|v| e.binary_search(&v).is_ok()))
            .count() as u64)
    }

    /// Minimum degree over all `l`-subsets of active vertices; `e(H)` for `l = 0`.
    pub fn min_degree(&self, l: usize) -> Result<u64> {
        if l > self.k {
            return Err(Error::InvalidInput(format!(
                "l = {l} exceeds uniformity {}",
                self.k
            )));
        }
        if l == 0 {
            return Ok(self.edge_count() as u64);
        }
        let verts: Vec<Vertex> = self.active_vertices().collect();
        if verts.len() < l {
            return Ok(0);
        }
        let mut min = u64::MAX;
        for combo in verts.iter().copied().combinations(l) {
            let d = self.degree(&VertexSet::from_iter(combo))?;
            if d < min {
                min = d;
                if min == 0 {
                    break;
                }
            }
        }
        Ok(min)
    }

    /// `H - S`: masks `S` and drops every edge meeting it. Ids are unchanged.
    pub fn remove_vertices(&self, s: &VertexSet) -> Hypergraph {
        let removed: BTreeSet<Vertex> = self.removed.iter().copied().chain(s.iter()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| !e.iter().any(|v| s.contains(*v)))
            .cloned()
            .collect();
        Hypergraph {
            n: self.n,
            k: self.k,
            edges,
            removed,
        }
    }

    /// Induced subgraph on `s`: masks everything outside `s`.
    pub fn induced(&self, s: &VertexSet) -> Hypergraph {
        let outside: VertexSet = self.active_vertices().filter(|v| !s.contains(*v)).collect();
        self.remove_vertices(&outside)
    }

    /// True iff no edge lies entirely inside `s`.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        !self.edges.iter().any(|e| e.iter().all(|v| s.contains(*v)))
    }

    /// Link of `t`: the `(k - |t|)`-graph `{e \ t : t ⊆ e ∈ E(H)}` with `t` masked.
    pub fn link(&self, t: &VertexSet) -> Result<Hypergraph> {
        if t.len() + 2 > self.k {
            return Err(Error::InvalidInput(format!(
                "link of a {}-set in a {}-graph would not be a hypergraph",
                t.len(),
                self.k
            )));
        }
        let mut out = Hypergraph {
            n: self.n,
            k: self.k - t.len(),
            edges: BTreeSet::new(),
            removed: self.removed.iter().copied().chain(t.iter()).collect(),
        };
        for e in &self.edges {
            if t.iter().all(|v| e.binary_search(&v).is_ok()) {
                let rest: Vec<Vertex> = e.iter().copied().filter(|v| !t.contains(*v)).collect();
                out.edges.insert(rest);
            }
        }
        Ok(out)
    }

    /// Degree sum identity target: `Σ_v d(v) = k · e(H)`.
    pub fn degree_sum(&self) -> u64 {
        (self.k * self.edge_count()) as u64
    }
}

/// A `(1,k)`-partite `(k+1)`-graph. The base hypergraph lives on ids
/// `1..=n+m`; class `V = 1..=n`, class `X = n+1..=n+m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteGraph {
    base: Hypergraph,
    m: Vertex,
}

impl PartiteGraph {
    pub fn new(n: Vertex, m: Vertex, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!(
                "partite uniformity parameter {k} < 2"
            )));
        }
        Ok(PartiteGraph {
            base: Hypergraph::new(n + m, k + 1)?,
            m,
        })
    }

    /// Wraps an existing `(k+1)`-graph, validating the partite shape of all edges.
    pub fn from_hypergraph(base: Hypergraph, m: Vertex) -> Result<Self> {
        if base.n < m {
            return Err(Error::InvalidInput("class X larger than vertex set".into()));
        }
        let n = base.n - m;
        for e in base.edges() {
            let x_hits = e.iter().filter(|&&v| v > n).count();
            if x_hits != 1 {
                return Err(Error::InvalidInput(format!(
                    "edge {e:?} meets X in {x_hits} vertices, expected 1"
                )));
            }
        }
        Ok(PartiteGraph { base, m })
    }

    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    /// Size of the small side of an edge (`k` in `(1,k)`-partite).
    pub fn k(&self) -> usize {
        self.base.k - 1
    }

    /// Size of class `V`.
    pub fn n_v(&self) -> Vertex {
        self.base.n - self.m
    }

    /// Size of class `X` (before masking).
    pub fn m(&self) -> Vertex {
        self.m
    }

    pub fn is_x_vertex(&self, v: Vertex) -> bool {
        v > self.n_v() && v <= self.base.n
    }

    pub fn x_class(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.base
            .active_vertices()
            .filter(move |&v| self.is_x_vertex(v))
    }

    pub fn v_class(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.base
            .active_vertices()
            .filter(move |&v| !self.is_x_vertex(v))
    }

    pub fn add_edge(&mut self, vs: Vec<Vertex>) -> Result<()> {
        let e = canonical_edge(vs)?;
        let x_hits = e.iter().filter(|&&v| self.is_x_vertex(v)).count();
        let v_hits = e.len() - x_hits;
        if x_hits != 1 || v_hits != self.k() {
            return Err(Error::InvalidInput(format!(
                "edge {e:?} is not (1,{})-partite",
                self.k()
            )));
        }
        self.base.add_edge(e)
    }

    /// `k |X| = |V|` over active vertices.
    pub fn is_balanced(&self) -> bool {
        self.k() * self.x_class().count() == self.v_class().count()
    }

    /// A vertex set is balanced when `k |S ∩ X| = |S ∩ V|`.
    pub fn is_balanced_set(&self, s: &VertexSet) -> bool {
        let x = s.iter().filter(|&v| self.is_x_vertex(v)).count();
        let v = s.len() - x;
        self.k() * x == v
    }

    pub fn remove_vertices(&self, s: &VertexSet) -> PartiteGraph {
        PartiteGraph {
            base: self.base.remove_vertices(s),
            m: self.m,
        }
    }

    pub fn induced(&self, s: &VertexSet) -> PartiteGraph {
        PartiteGraph {
            base: self.base.induced(s),
            m: self.m,
        }
    }
}

/// A set of pairwise disjoint canonical edges.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    /// Validates pairwise disjointness; edges are stored sorted.
    pub fn try_new(edges: Vec<Edge>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut canon = Vec::with_capacity(edges.len());
        for e in edges {
            let e = canonical_edge(e)?;
            for &v in &e {
                if !seen.insert(v) {
                    return Err(Error::InvalidInput(format!("vertex {v} covered twice")));
                }
            }
            canon.push(e);
        }
        canon.sort();
        Ok(Matching { edges: canon })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }

    pub fn covered(&self) -> VertexSet {
        VertexSet::from_iter(self.edges.iter().flatten().copied())
    }
}

/// Outcome of classifying an edge list against a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingClass {
    /// Not a matching; the diagnostic names the offending edge or vertex.
    NotMatching(String),
    Matching,
    Perfect,
}

/// Classifies `edges` with respect to `h`: edges must belong to `E(h)` and be
/// pairwise disjoint; `Perfect` additionally covers every active vertex
/// (vacuously so on a host with no active vertices).
pub fn classify_matching(h: &Hypergraph, edges: &[Edge]) -> MatchingClass {
    let mut covered: BTreeSet<Vertex> = BTreeSet::new();
    for e in edges {
        if !h.contains_edge(e) {
            return MatchingClass::NotMatching(format!("edge {e:?} not in host"));
        }
        for &v in e {
            if !covered.insert(v) {
                return MatchingClass::NotMatching(format!("vertex {v} covered twice"));
            }
        }
    }
    if covered.len() == h.order() {
        MatchingClass::Perfect
    } else {
        MatchingClass::Matching
    }
}

/// Parameters for ε-closeness.
#[derive(Debug, Clone)]
pub struct ClosenessParams {
    pub epsilon: Rat,
    pub mode: ClosenessMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosenessMode {
    /// Compare under the identity labeling only.
    FixedLabeling,
    /// Additionally search class-preserving relabelings for a copy within the
    /// bound: exhaustive up to 10 vertices, hill-climbing above.
    ClassPreservingSearch,
}

impl ClosenessParams {
    pub fn fixed(epsilon: Rat) -> Self {
        ClosenessParams {
            epsilon,
            mode: ClosenessMode::FixedLabeling,
        }
    }

    pub fn search(epsilon: Rat) -> Self {
        ClosenessParams {
            epsilon,
            mode: ClosenessMode::ClassPreservingSearch,
        }
    }
}

/// Result of an ε-closeness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closeness {
    pub is_close: bool,
    /// Smallest deficiency among the labelings inspected.
    pub deficiency: u64,
    /// True when the relabeling search was heuristic rather than exhaustive.
    pub heuristic: bool,
}

/// `|E(h1) \ E(h2)|` under the identity labeling.
pub fn edit_deficiency(h1: &Hypergraph, h2: &Hypergraph) -> Result<u64> {
    if h1.n != h2.n || h1.k != h2.k {
        return Err(Error::InvalidInput(format!(
            "mismatched graphs: ({}, {}) vs ({}, {})",
            h1.n, h1.k, h2.n, h2.k
        )));
    }
    Ok(h1.edges.iter().filter(|e| !h2.edges.contains(*e)).count() as u64)
}

fn deficiency_under(h1: &Hypergraph, h2: &Hypergraph, perm: &[Vertex]) -> u64 {
    // perm maps h2's vertex v to perm[v-1].
    h1.edges
        .iter()
        .filter(|e| {
            let pre: Result<Edge> =
                canonical_edge(e.iter().map(|&v| perm[v as usize - 1]).collect());
            match pre {
                Ok(pre) => !h2.edges.contains(&pre),
                Err(_) => true,
            }
        })
        .count() as u64
}

const EXHAUSTIVE_SEARCH_LIMIT: usize = 10;

/// Is `h2` ε-close to `h1`? Fixed-labeling mode compares
/// `edit_deficiency(h1, h2) < ε n^k` exactly; search mode also looks for a
/// relabeled copy of `h2` meeting the bound.
pub fn is_eps_close(
    h1: &Hypergraph,
    h2: &Hypergraph,
    params: &ClosenessParams,
) -> Result<Closeness> {
    let base = edit_deficiency(h1, h2)?;
    let n = h1.n as u64;
    let threshold = &params.epsilon * rat_int(n.pow(h1.k as u32));
    let within = |d: u64| rat_int(d) < threshold;
    if within(base) || params.mode == ClosenessMode::FixedLabeling {
        return Ok(Closeness {
            is_close: within(base),
            deficiency: base,
            heuristic: false,
        });
    }
    // Search over relabelings of h2. The inverse permutation is applied to
    // h1's edges when testing membership, which is equivalent.
    let verts: Vec<Vertex> = (1..=h1.n).collect();
    if verts.len() <= EXHAUSTIVE_SEARCH_LIMIT {
        let mut best = base;
        for perm in verts.iter().copied().permutations(verts.len()) {
            let d = deficiency_under(h1, h2, &perm);
            if d < best {
                best = d;
                if within(best) {
                    return Ok(Closeness {
                        is_close: true,
                        deficiency: best,
                        heuristic: false,
                    });
                }
            }
        }
        Ok(Closeness {
            is_close: within(best),
            deficiency: best,
            heuristic: false,
        })
    } else {
        let classes = vec![verts];
        let best = hill_climb_deficiency(h1, h2, classes, base);
        Ok(Closeness {
            is_close: within(best),
            deficiency: best,
            heuristic: true,
        })
    }
}

/// Class-preserving ε-closeness for partite hosts: relabelings permute `X`
/// and `V` independently.
pub fn is_eps_close_partite(
    h1: &PartiteGraph,
    h2: &PartiteGraph,
    params: &ClosenessParams,
) -> Result<Closeness> {
    if h1.m != h2.m {
        return Err(Error::InvalidInput("mismatched X classes".into()));
    }
    let base = edit_deficiency(&h1.base, &h2.base)?;
    let n_total = h1.base.n as u64;
    let threshold = &params.epsilon * rat_int(n_total.pow(h1.base.k as u32));
    let within = |d: u64| rat_int(d) < threshold;
    if within(base) || params.mode == ClosenessMode::FixedLabeling {
        return Ok(Closeness {
            is_close: within(base),
            deficiency: base,
            heuristic: false,
        });
    }
    let v_class: Vec<Vertex> = (1..=h1.n_v()).collect();
    let x_class: Vec<Vertex> = (h1.n_v() + 1..=h1.base.n).collect();
    if (v_class.len() + x_class.len()) <= EXHAUSTIVE_SEARCH_LIMIT {
        let mut best = base;
        for vp in v_class.iter().copied().permutations(v_class.len()) {
            for xp in x_class.iter().copied().permutations(x_class.len()) {
                let mut perm: Vec<Vertex> = vp.clone();
                perm.extend(xp.iter().copied());
                let d = deficiency_under(&h1.base, &h2.base, &perm);
                if d < best {
                    best = d;
                    if within(best) {
                        return Ok(Closeness {
                            is_close: true,
                            deficiency: best,
                            heuristic: false,
                        });
                    }
                }
            }
        }
        Ok(Closeness {
            is_close: within(best),
            deficiency: best,
            heuristic: false,
        })
    } else {
        let best = hill_climb_deficiency(&h1.base, &h2.base, vec![v_class, x_class], base);
        Ok(Closeness {
            is_close: within(best),
            deficiency: best,
            heuristic: true,
        })
    }
}

/// Greedy descent over within-class transpositions. Starts at the identity
/// and applies the best improving swap until a local optimum.
fn hill_climb_deficiency(
    h1: &Hypergraph,
    h2: &Hypergraph,
    classes: Vec<Vec<Vertex>>,
    start: u64,
) -> u64 {
    let mut perm: Vec<Vertex> = (1..=h1.n).collect();
    let mut best = start;
    loop {
        let mut improved = false;
        for class in &classes {
            for pair in class.iter().copied().combinations(2) {
                let (a, b) = (pair[0] as usize - 1, pair[1] as usize - 1);
                perm.swap(a, b);
                let d = deficiency_under(h1, h2, &perm);
                if d < best {
                    best = d;
                    improved = true;
                } else {
                    perm.swap(a, b);
                }
            }
        }
        if !improved {
            return best;
        }
    }
}

/// The α-bad vertices of `h1` with respect to the reference `h2`: vertices
/// whose reference link misses more than `α |V|^{k-1}` edges in `h1`.
pub fn bad_vertices(h1: &Hypergraph, h2: &Hypergraph, alpha: &Rat) -> Result<VertexSet> {
    if h1.n != h2.n || h1.k != h2.k {
        return Err(Error::InvalidInput(
            "bad_vertices: mismatched graphs".into(),
        ));
    }
    let order = h1.order() as u64;
    let bound = alpha * rat_int(order.pow((h1.k - 1) as u32));
    let mut bad = VertexSet::new();
    for v in h1.active_vertices() {
        let missing = h2
            .edges
            .iter()
            .filter(|e| e.binary_search(&v).is_ok() && !h1.edges.contains(*e))
            .count() as u64;
        if rat_int(missing) > bound {
            bad.insert(v);
        }
    }
    Ok(bad)
}

/// Coordinatewise dominance on sorted representatives.
pub fn dominance_leq(e: &VertexSet, f: &VertexSet) -> Result<bool> {
    if e.len() != f.len() {
        return Err(Error::InvalidInput(format!(
            "dominance on sets of sizes {} and {}",
            e.len(),
            f.len()
        )));
    }
    Ok(e.iter().zip(f.iter()).all(|(a, b)| a <= b))
}

/// Largest id strictly below `val` that is absent from `edge`, if any.
fn step_down(edge: &Edge, val: Vertex) -> Option<Vertex> {
    let mut cand = val.checked_sub(1)?;
    while cand >= 1 {
        if edge.binary_search(&cand).is_err() {
            return Some(cand);
        }
        cand = cand.checked_sub(1)?;
    }
    None
}

/// Single-step dominance predecessors of a sorted edge: for each coordinate,
/// decrement to the next available smaller id. Closure under these steps
/// equals closure under full dominance.
pub fn single_step_predecessors(edge: &Edge) -> Vec<Edge> {
    let mut preds = Vec::new();
    for (i, &v) in edge.iter().enumerate() {
        if let Some(down) = step_down(edge, v) {
            let mut p = edge.clone();
            p[i] = down;
            p.sort_unstable();
            preds.push(p);
        }
    }
    preds
}

/// Downward closure under dominance, checked via single-step predecessors.
pub fn is_stable(h: &Hypergraph) -> bool {
    h.edges.iter().all(|f| {
        single_step_predecessors(f)
            .iter()
            .all(|p| h.edges.contains(p))
    })
}

/// Fractional comparison helper: `value < eps * n^pow` exactly.
pub fn below_threshold(value: u64, eps: &Rat, n: u64, pow: u32) -> bool {
    rat_int(value) < eps * rat_int(n.pow(pow))
}

/// True when `r` is zero or negative (used for vacuous degree bounds).
pub fn nonpositive(r: &Rat) -> bool {
    r <= &Rat::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{make_hk, script_h};
    use crate::num::rat;
    use proptest::prelude::*;

    fn h632() -> Hypergraph {
        make_hk(6, 2, 3).unwrap()
    }

    #[test]
    fn degree_examples() {
        let h = h632();
        assert_eq!(h.degree(&VertexSet::from_iter([1])).unwrap(), 10);
        assert_eq!(h.degree(&VertexSet::from_iter([3])).unwrap(), 7);
        assert_eq!(h.degree(&VertexSet::new()).unwrap(), h.edge_count() as u64);
        assert!(h.degree(&VertexSet::from_iter([9])).is_err());
    }

    #[test]
    fn min_degree_examples() {
        let h = h632();
        assert_eq!(h.min_degree(1).unwrap(), 7); // C(5,2) - C(3,2)
        assert_eq!(h.min_degree(0).unwrap(), 16);
        assert!(h.min_degree(4).is_err());

        let empty = Hypergraph::new(5, 3).unwrap();
        assert_eq!(empty.min_degree(1).unwrap(), 0);

        let h = make_hk(12, 2, 4).unwrap();
        assert_eq!(h.min_degree(1).unwrap(), 81); // C(11,3) - C(9,3)
    }

    #[test]
    fn classify_matching_examples() {
        let mut h = Hypergraph::new(3, 3).unwrap();
        h.add_edge(vec![1, 2, 3]).unwrap();
        assert_eq!(
            classify_matching(&h, &[vec![1, 2, 3]]),
            MatchingClass::Perfect
        );
        assert_eq!(classify_matching(&h, &[]), MatchingClass::Matching);

        let h = make_hk(9, 2, 3).unwrap();
        assert_eq!(
            classify_matching(&h, &[vec![1, 3, 4], vec![2, 5, 6]]),
            MatchingClass::Matching
        );
        assert!(matches!(
            classify_matching(&h, &[vec![3, 4, 5]]),
            MatchingClass::NotMatching(_)
        ));
        assert!(matches!(
            classify_matching(&h, &[vec![1, 3, 4], vec![2, 4, 6]]),
            MatchingClass::NotMatching(_)
        ));
    }

    #[test]
    fn remove_vertices_examples() {
        let mut h = Hypergraph::new(6, 3).unwrap();
        h.add_edge(vec![1, 2, 3]).unwrap();
        h.add_edge(vec![4, 5, 6]).unwrap();
        let same = h.remove_vertices(&VertexSet::new());
        assert_eq!(same.edge_count(), 2);

        let cut = h.remove_vertices(&VertexSet::from_iter([1]));
        assert_eq!(cut.edge_count(), 1);
        assert!(cut.contains_edge(&vec![4, 5, 6]));
        assert!(!cut.is_active(1));
        assert_eq!(cut.order(), 5);

        // Every edge of H_3(6,2) meets [2].
        let h = h632();
        assert_eq!(
            h.remove_vertices(&VertexSet::from_iter([1, 2]))
                .edge_count(),
            0
        );
    }

    #[test]
    fn independence_examples() {
        let mut h = Hypergraph::new(6, 3).unwrap();
        assert!(h.is_independent(&VertexSet::from_iter([1, 2])));
        h.add_edge(vec![1, 2, 3]).unwrap();
        assert!(!h.is_independent(&VertexSet::from_iter([1, 2, 3])));
        let h = h632();
        assert!(h.is_independent(&VertexSet::from_iter([3, 4, 5, 6])));
    }

    #[test]
    fn deficiency_and_closeness() {
        let h = h632();
        assert_eq!(edit_deficiency(&h, &h).unwrap(), 0);

        let empty = Hypergraph::new(6, 3).unwrap();
        assert_eq!(edit_deficiency(&h, &empty).unwrap(), 16);

        let c = is_eps_close(&h, &h, &ClosenessParams::fixed(rat(1, 1000))).unwrap();
        assert!(c.is_close);

        let h4 = make_hk(12, 3, 4).unwrap();
        let empty4 = Hypergraph::new(12, 4).unwrap();
        let c = is_eps_close(&h4, &empty4, &ClosenessParams::fixed(rat(1, 1_000_000))).unwrap();
        assert!(!c.is_close);

        let mut minus_one = h4.clone();
        let first = minus_one.edges().next().unwrap().clone();
        minus_one.remove_edge(&first);
        assert_eq!(edit_deficiency(&h4, &minus_one).unwrap(), 1);
        // Zero deficiency exactly when E(H1) ⊆ E(H2).
        assert_eq!(edit_deficiency(&minus_one, &h4).unwrap(), 0);
    }

    #[test]
    fn closeness_search_recovers_relabeling() {
        // Relabel vertices 1,2 of H_3(6,2) to 5,6: the swapped copy is far under
        // the identity but a class-preserving search recovers deficiency 0.
        let h = h632();
        let perm = |v: Vertex| match v {
            1 => 5,
            2 => 6,
            5 => 1,
            6 => 2,
            other => other,
        };
        let mut relabeled = Hypergraph::new(6, 3).unwrap();
        for e in h.edges() {
            relabeled
                .add_edge(e.iter().map(|&v| perm(v)).collect())
                .unwrap();
        }
        assert!(edit_deficiency(&h, &relabeled).unwrap() > 0);
        let c = is_eps_close(&h, &relabeled, &ClosenessParams::search(rat(1, 100))).unwrap();
        assert!(c.is_close);
        assert_eq!(c.deficiency, 0);
        assert!(!c.heuristic);
    }

    #[test]
    fn bad_vertices_examples() {
        let h = script_h(9, 3, 3).unwrap();
        let bad = bad_vertices(h.base(), h.base(), &rat(0, 1)).unwrap();
        assert!(bad.is_empty());

        let empty = Hypergraph::new(12, 4).unwrap();
        let bad = bad_vertices(&empty, h.base(), &rat(0, 1)).unwrap();
        assert_eq!(bad.len(), 12);

        // Strip every edge at x_1 = 10; pick alpha below d(x_1) / |V|^3.
        let x1 = 10;
        let d_x1 = h.base().degree(&VertexSet::from_iter([x1])).unwrap();
        assert_eq!(d_x1, 63); // e(H_3(9,3)) = C(9,3) - C(6,3) - C(3,3)
        let stripped: Hypergraph = {
            let mut g = h.base().clone();
            let doomed: Vec<Edge> = g
                .edges()
                .filter(|e| e.binary_search(&x1).is_ok())
                .cloned()
                .collect();
            for e in doomed {
                g.remove_edge(&e);
            }
            g
        };
        let alpha = rat(d_x1 as i64, 12i64.pow(3)) - rat(1, 100_000);
        let bad = bad_vertices(&stripped, h.base(), &alpha).unwrap();
        assert_eq!(bad.as_sorted_vec(), vec![x1]);
    }

    #[test]
    fn dominance_examples() {
        let leq = |a: &[Vertex], b: &[Vertex]| {
            dominance_leq(
                &VertexSet::from_iter(a.iter().copied()),
                &VertexSet::from_iter(b.iter().copied()),
            )
            .unwrap()
        };
        assert!(leq(&[1, 2, 3], &[1, 2, 3]));
        assert!(leq(&[1, 2, 4], &[2, 3, 4]));
        assert!(!leq(&[1, 5, 6], &[2, 3, 9]));
        assert!(dominance_leq(
            &VertexSet::from_iter([1, 2]),
            &VertexSet::from_iter([1, 2, 3])
        )
        .is_err());
    }

    /// Brute-force dominance closure, the oracle for the single-step check.
    fn is_stable_bruteforce(h: &Hypergraph) -> bool {
        let verts: Vec<Vertex> = (1..=h.n()).collect();
        for f in h.edges() {
            let fs = VertexSet::from_iter(f.iter().copied());
            for combo in verts.iter().copied().combinations(h.k()) {
                let es = VertexSet::from_iter(combo.iter().copied());
                if dominance_leq(&es, &fs).unwrap() && !h.contains_edge(&combo) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn stability_examples() {
        assert!(is_stable(&h632()));
        assert!(is_stable_bruteforce(&h632()));

        let mut h = Hypergraph::new(4, 3).unwrap();
        h.add_edge(vec![2, 3, 4]).unwrap();
        assert!(!is_stable(&h));

        let empty = Hypergraph::new(4, 3).unwrap();
        assert!(is_stable(&empty));
    }

    proptest! {
        #[test]
        fn degree_sum_identity(edges in proptest::collection::btree_set(
            proptest::collection::btree_set(1u32..=7, 3), 0..25)) {
            let mut h = Hypergraph::new(7, 3).unwrap();
            for e in edges {
                h.add_edge(e.into_iter().collect()).unwrap();
            }
            let total: u64 = (1..=7)
                .map(|v| h.degree(&VertexSet::from_iter([v])).unwrap())
                .sum();
            prop_assert_eq!(total, h.degree_sum());
        }

        #[test]
        fn degree_monotone_under_superset(edges in proptest::collection::btree_set(
            proptest::collection::btree_set(1u32..=7, 3), 0..25),
            t in proptest::collection::btree_set(1u32..=7, 1..3)) {
            let mut h = Hypergraph::new(7, 3).unwrap();
            for e in edges {
                h.add_edge(e.into_iter().collect()).unwrap();
            }
            let t: Vec<u32> = t.into_iter().collect();
            let small = VertexSet::from_iter(t[..1].iter().copied());
            let big = VertexSet::from_iter(t.iter().copied());
            prop_assert!(h.degree(&small).unwrap() >= h.degree(&big).unwrap());
        }

        #[test]
        fn removal_never_raises_degree(edges in proptest::collection::btree_set(
            proptest::collection::btree_set(1u32..=7, 3), 0..25),
            s in proptest::collection::btree_set(1u32..=7, 0..3)) {
            let mut h = Hypergraph::new(7, 3).unwrap();
            for e in edges {
                h.add_edge(e.into_iter().collect()).unwrap();
            }
            let s = VertexSet::from_iter(s);
            let cut = h.remove_vertices(&s);
            prop_assert!(cut.edges().all(|e| !e.iter().any(|v| s.contains(*v))));
            for v in cut.active_vertices() {
                let vs = VertexSet::from_iter([v]);
                prop_assert!(cut.degree(&vs).unwrap() <= h.degree(&vs).unwrap());
            }
        }

        #[test]
        fn single_step_stability_matches_bruteforce(edges in proptest::collection::btree_set(
            proptest::collection::btree_set(1u32..=6, 3), 0..12)) {
            let mut h = Hypergraph::new(6, 3).unwrap();
            for e in edges {
                h.add_edge(e.into_iter().collect()).unwrap();
            }
            prop_assert_eq!(is_stable(&h), is_stable_bruteforce(&h));
        }

        #[test]
        fn alpha_one_never_flags(edges in proptest::collection::btree_set(
            proptest::collection::btree_set(1u32..=6, 3), 0..12)) {
            let mut h = Hypergraph::new(6, 3).unwrap();
            for e in edges {
                h.add_edge(e.into_iter().collect()).unwrap();
            }
            let reference = {
                let mut g = Hypergraph::new(6, 3).unwrap();
                for combo in (1u32..=6).combinations(3) {
                    g.add_edge(combo).unwrap();
                }
                g
            };
            let bad = bad_vertices(&h, &reference, &rat(1, 1)).unwrap();
            prop_assert!(bad.is_empty());
        }
    }
}
