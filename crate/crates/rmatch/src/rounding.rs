//! Two-round randomization: vertex-sampled induced subgraphs with
//! multiplicity accounting, density and independence profiling, the
//! generalized binomial subgraph built from per-sample fractional perfect
//! matchings, the almost-regularity hypothesis check, and the semi-random
//! nibble.
//!
//! The source exponents (`n^{-0.9}`, `n^{1.1}`, `n^{0.2}`, ...) only bite
//! asymptotically. Everything here is parameterized by the actual `(N, p)`
//! of a batch; [`desk_preset`] and [`paper_preset`] provide the two stock
//! translations.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::hypergraph::{Edge, Hypergraph, PartiteGraph, Vertex, VertexSet};
use crate::lp::WeightVector;
use crate::num::{binomial_rat, rat, rat_int, rat_to_f64, Rat};
use crate::rng;
use crate::{Error, Result};

/// Sampling plan: `n_samples` independent vertex samples at probability `p`,
/// with a band tolerance for the multiplicity checks.
#[derive(Debug, Clone)]
pub struct SamplePlan {
    pub n_samples: usize,
    pub p: Rat,
    pub tolerance: Rat,
}

/// Desk-scale stock plan: moderate `N` and `p` with a 20% band.
pub fn desk_preset(n_samples: usize, p: Rat) -> SamplePlan {
    SamplePlan {
        n_samples,
        p,
        tolerance: rat(1, 5),
    }
}

/// Source-exponent plan for an order-`n` host: `N = n^{1.1}`, `p = n^{-0.9}`,
/// band `n^{-0.01}`. Only meaningful for very large `n`; provided so reports
/// can state what the asymptotic regime would demand.
pub fn paper_preset(n: u64) -> SamplePlan {
    let nf = n.max(2) as f64;
    let p = nf.powf(-0.9);
    let n_samples = nf.powf(1.1).round() as usize;
    let tol = nf.powf(-0.01);
    let to_rat = |x: f64| -> Rat {
        let denom = 1_000_000i64;
        rat((x * denom as f64).round() as i64, denom)
    };
    SamplePlan {
        n_samples,
        p: to_rat(p),
        tolerance: to_rat(tol),
    }
}

/// A batch of sampled, trimmed-to-balanced vertex subsets.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub subsets: Vec<VertexSet>,
    pub p: Rat,
    /// Vertices removed from each raw sample to reach balancedness.
    pub trim_log: Vec<Vec<Vertex>>,
}

/// Draws `plan.n_samples` independent vertex samples of `h`, each vertex
/// kept with probability `p`, then trims each sample to a balanced set
/// (which makes its size divisible by `k+1`). Trimming removes vertices
/// from the over-full class in descending id, preferring members of the
/// exception pools when given.
pub fn sample_batch(
    h: &PartiteGraph,
    plan: &SamplePlan,
    seed: u64,
    pools: Option<(&VertexSet, &VertexSet)>,
) -> Result<SampleBatch> {
    if plan.p <= Rat::zero() || plan.p >= Rat::one() {
        return Err(Error::InvalidInput(
            "sampling probability must lie in (0,1)".into(),
        ));
    }
    let p_f = rat_to_f64(&plan.p);
    let k = h.k();
    let mut subsets = Vec::with_capacity(plan.n_samples);
    let mut trim_log = Vec::with_capacity(plan.n_samples);
    for i in 0..plan.n_samples {
        let mut rng = rng::substream(seed, i as u64);
        let mut x_side: Vec<Vertex> = Vec::new();
        let mut v_side: Vec<Vertex> = Vec::new();
        for v in h.base().active_vertices() {
            if rng.gen_bool(p_f) {
                if h.is_x_vertex(v) {
                    x_side.push(v);
                } else {
                    v_side.push(v);
                }
            }
        }
        let mut removed = Vec::new();
        loop {
            let (xc, vc) = (x_side.len(), v_side.len());
            if k * xc == vc {
                break;
            }
            let (side, pool): (&mut Vec<Vertex>, Option<&VertexSet>) = if vc > k * xc {
                (&mut v_side, pools.map(|(_, a4)| a4))
            } else {
                (&mut x_side, pools.map(|(a3, _)| a3))
            };
            // Highest pool member first, then highest id.
            let pick = pool
                .and_then(|p| {
                    side.iter()
                        .enumerate()
                        .filter(|(_, v)| p.contains(**v))
                        .max_by_key(|(_, v)| **v)
                })
                .or_else(|| side.iter().enumerate().max_by_key(|(_, v)| **v))
                .map(|(i, _)| i);
            match pick {
                Some(i) => removed.push(side.swap_remove(i)),
                None => break,
            }
        }
        removed.sort_unstable();
        subsets.push(VertexSet::from_iter(x_side.into_iter().chain(v_side)));
        trim_log.push(removed);
    }
    Ok(SampleBatch {
        subsets,
        p: plan.p.clone(),
        trim_log,
    })
}

/// Multiplicity accounting for a batch: `Y_S = |{i : S ⊆ R_i}|` for
/// singletons, pairs, and host edges, plus pass/fail of the three bands.
#[derive(Debug, Clone)]
pub struct MultiplicityStats {
    pub y_vertex: BTreeMap<Vertex, u64>,
    pub max_pair: u64,
    pub max_edge: u64,
    /// Band (i): every vertex multiplicity within `N p (1 ± tol)`.
    pub vertex_band_ok: bool,
    pub vertices_outside_band: u64,
    /// Band (ii): every pair multiplicity at most 2.
    pub pair_band_ok: bool,
    /// Band (iii): every edge multiplicity at most 1.
    pub edge_band_ok: bool,
}

pub fn multiplicity_stats(
    batch: &SampleBatch,
    h: &PartiteGraph,
    tolerance: &Rat,
) -> MultiplicityStats {
    let mut y_vertex: BTreeMap<Vertex, u64> = h.base().active_vertices().map(|v| (v, 0)).collect();
    let mut pair_counts: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    for r in &batch.subsets {
        let members = r.as_sorted_vec();
        for (i, &u) in members.iter().enumerate() {
            if let Some(y) = y_vertex.get_mut(&u) {
                *y += 1;
            }
            for &v in &members[i + 1..] {
                *pair_counts.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let max_pair = pair_counts.values().copied().max().unwrap_or(0);
    let mut max_edge = 0u64;
    for e in h.base().edges() {
        let mult = batch
            .subsets
            .iter()
            .filter(|r| e.iter().all(|v| r.contains(*v)))
            .count() as u64;
        max_edge = max_edge.max(mult);
    }
    let center = rat_int(batch.subsets.len() as u64) * &batch.p;
    let lo = (Rat::one() - tolerance) * &center;
    let hi = (Rat::one() + tolerance) * &center;
    let outside = y_vertex
        .values()
        .filter(|&&y| {
            let y = rat_int(y);
            y < lo || y > hi
        })
        .count() as u64;
    MultiplicityStats {
        max_pair,
        max_edge,
        vertex_band_ok: outside == 0,
        vertices_outside_band: outside,
        pair_band_ok: max_pair <= 2,
        edge_band_ok: max_edge <= 1,
        y_vertex,
    }
}

/// Pair-degree inheritance inside a sampled set: every pair
/// `(x, v) ∈ (R ∩ X) × (R ∩ V)` must satisfy
/// `d_{H[R]}({x,v}) > C(β-1, k-1) - C(β - β/k, k-1) - 3 ρ β^{k-1}`
/// with `β = |R ∩ V|`, compared exactly via the generalized binomial.
pub fn degree_inheritance_check(h: &PartiteGraph, r: &VertexSet, rho: &Rat) -> Result<bool> {
    let k = h.k() as u64;
    let induced = h.base().induced(r);
    let xs: Vec<Vertex> = r.iter().filter(|&v| h.is_x_vertex(v)).collect();
    let vs: Vec<Vertex> = r.iter().filter(|&v| !h.is_x_vertex(v)).collect();
    if (vs.len() as u64) < k {
        return Ok(true);
    }
    let beta = rat_int(vs.len() as u64);
    let beta_trim = &beta - &beta / rat_int(k);
    let mut bound = binomial_rat(&(&beta - Rat::one()), k - 1) - binomial_rat(&beta_trim, k - 1);
    bound -= rat(3, 1) * rho * num_traits::pow::pow(beta.clone(), (k - 1) as usize);
    for &x in &xs {
        for &v in &vs {
            let d = induced.degree(&VertexSet::from_iter([x, v]))?;
            if rat_int(d) <= bound {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `e(H[A]) ≥ λ e(H)`, exactly.
pub fn dense_check(h: &PartiteGraph, a: &VertexSet, lambda: &Rat) -> bool {
    let inside = h
        .base()
        .edges()
        .filter(|e| e.iter().all(|v| a.contains(*v)))
        .count() as u64;
    rat_int(inside) >= lambda * rat_int(h.base().edge_count() as u64)
}

/// Membership predicate for the dense family: `|A ∩ X| ≥ (1/k - a1) n` and
/// `|A ∩ V| ≥ (1 - 1/k - a2) n`, with `n` the size of class `V`.
pub fn in_dense_family(h: &PartiteGraph, a: &VertexSet, a1: &Rat, a2: &Rat) -> bool {
    let n = rat_int(h.n_v() as u64);
    let k = rat_int(h.k() as u64);
    let x_cnt = rat_int(a.iter().filter(|&v| h.is_x_vertex(v)).count() as u64);
    let v_cnt = rat_int(a.iter().filter(|&v| !h.is_x_vertex(v)).count() as u64);
    x_cnt >= (Rat::one() / &k - a1) * &n && v_cnt >= (Rat::one() - Rat::one() / &k - a2) * &n
}

/// Pareto profile of independent sets in `H[R]` under the two objectives
/// `(|J ∩ X|, then |J ∩ V|)` and `(|J ∩ V|, then |J ∩ X|)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceProfile {
    pub x_max: usize,
    pub v_at_x_max: usize,
    pub v_max: usize,
    pub x_at_v_max: usize,
    /// False when the budget ran out; the profile is then a lower bound.
    pub exact: bool,
}

/// Exact two-objective sweep by branch and bound over the vertices of `R`.
pub fn independence_profile(h: &PartiteGraph, r: &VertexSet, budget: u64) -> IndependenceProfile {
    let induced = h.base().induced(r);
    let verts: Vec<Vertex> = r.iter().filter(|&v| h.base().is_active(v)).collect();
    let is_x: Vec<bool> = verts.iter().map(|&v| h.is_x_vertex(v)).collect();
    let edges: Vec<Vec<usize>> = induced
        .edges()
        .map(|e| e.iter().map(|v| verts.binary_search(v).unwrap()).collect())
        .collect();
    // edge -> number of chosen vertices; choosing the last free vertex of an
    // edge is forbidden.
    let mut chosen_in_edge = vec![0usize; edges.len()];
    let mut edges_at: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
    for (ei, e) in edges.iter().enumerate() {
        for &vi in e {
            edges_at[vi].push(ei);
        }
    }
    // Suffix counts of each class for pruning.
    let mut suffix_x = vec![0usize; verts.len() + 1];
    let mut suffix_v = vec![0usize; verts.len() + 1];
    for i in (0..verts.len()).rev() {
        suffix_x[i] = suffix_x[i + 1] + usize::from(is_x[i]);
        suffix_v[i] = suffix_v[i + 1] + usize::from(!is_x[i]);
    }

    struct Search<'a> {
        edges: &'a [Vec<usize>],
        edges_at: &'a [Vec<usize>],
        is_x: &'a [bool],
        suffix_x: &'a [usize],
        suffix_v: &'a [usize],
        budget: u64,
        nodes: u64,
        exceeded: bool,
        best: (usize, usize),
        x_first: bool,
    }

    impl Search<'_> {
        fn key(&self, x: usize, v: usize) -> (usize, usize) {
            if self.x_first {
                (x, v)
            } else {
                (v, x)
            }
        }

        fn run(&mut self, idx: usize, x: usize, v: usize, chosen_in_edge: &mut [usize]) {
            self.nodes += 1;
            if self.nodes > self.budget {
                self.exceeded = true;
                return;
            }
            if self.key(x, v) > self.best {
                self.best = self.key(x, v);
            }
            if idx == self.is_x.len() {
                return;
            }
            // Optimistic bound: take every remaining vertex.
            let bound = self.key(x + self.suffix_x[idx], v + self.suffix_v[idx]);
            if bound <= self.best {
                return;
            }
            // Include idx if no edge gets completed.
            let completes = self.edges_at[idx]
                .iter()
                .any(|&ei| chosen_in_edge[ei] + 1 == self.edges[ei].len());
            if !completes {
                for &ei in &self.edges_at[idx] {
                    chosen_in_edge[ei] += 1;
                }
                let (nx, nv) = if self.is_x[idx] {
                    (x + 1, v)
                } else {
                    (x, v + 1)
                };
                self.run(idx + 1, nx, nv, chosen_in_edge);
                for &ei in &self.edges_at[idx] {
                    chosen_in_edge[ei] -= 1;
                }
                if self.exceeded {
                    return;
                }
            }
            self.run(idx + 1, x, v, chosen_in_edge);
        }
    }

    let mut run_pass = |x_first: bool| -> ((usize, usize), bool) {
        let mut s = Search {
            edges: &edges,
            edges_at: &edges_at,
            is_x: &is_x,
            suffix_x: &suffix_x,
            suffix_v: &suffix_v,
            budget,
            nodes: 0,
            exceeded: false,
            best: (0, 0),
            x_first,
        };
        s.run(0, 0, 0, &mut chosen_in_edge);
        (s.best, !s.exceeded)
    };

    let ((x_max, v_at_x_max), e1) = run_pass(true);
    let ((v_max, x_at_v_max), e2) = run_pass(false);
    IndependenceProfile {
        x_max,
        v_at_x_max,
        v_max,
        x_at_v_max,
        exact: e1 && e2,
    }
}

/// Keeps each edge of `∪ H[R_i]` independently with the probability its
/// sample's fractional matching assigns it. Edges inside several samples are
/// charged to the lowest index, the desk-scale stand-in for the uniqueness
/// that band (iii) provides asymptotically.
pub fn binomial_subgraph(
    h: &PartiteGraph,
    batch: &SampleBatch,
    fms: &[WeightVector],
    seed: u64,
) -> Result<PartiteGraph> {
    if fms.len() != batch.subsets.len() {
        return Err(Error::InvalidInput(format!(
            "{} weight vectors for {} samples",
            fms.len(),
            batch.subsets.len()
        )));
    }
    for (i, fm) in fms.iter().enumerate() {
        let induced = h.base().induced(&batch.subsets[i]);
        if !fm.is_fractional_matching(&induced) {
            return Err(Error::InvalidInput(format!(
                "weight vector {i} is not a fractional matching of its sample"
            )));
        }
    }
    let mut rng = rng::stream(seed);
    let mut out = PartiteGraph::new(h.n_v(), h.m(), h.k())?;
    for e in h.base().edges() {
        let assigned = batch
            .subsets
            .iter()
            .position(|r| e.iter().all(|v| r.contains(*v)));
        let Some(i) = assigned else { continue };
        let w = match &fms[i] {
            WeightVector::Edges(m) => m.get(e).cloned().unwrap_or_else(Rat::zero),
            _ => Rat::zero(),
        };
        if w.is_zero() {
            continue;
        }
        let keep = if w >= Rat::one() {
            true
        } else {
            rng.gen_bool(rat_to_f64(&w))
        };
        if keep {
            out.add_edge(e.clone())?;
        }
    }
    // Keep the input host's masks so spanning-subgraph degree accounting
    // ranges over the same vertex set.
    let masked: VertexSet = h.base().removed().iter().copied().collect();
    Ok(out.remove_vertices(&masked))
}

/// Hypothesis set of the nibble lemma, checked exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityCheck {
    pub pass: bool,
    /// Vertices with degree outside `(1 ± γ) D`.
    pub out_of_band: u64,
    /// Vertices violating `d(x) < r D`.
    pub degree_cap_violations: u64,
    /// Pairs violating `d(x,y) < γ D`.
    pub pair_cap_violations: u64,
    pub max_pair_degree: u64,
}

pub fn almost_regular_check(
    hp: &PartiteGraph,
    d: &Rat,
    gamma: &Rat,
    r: &Rat,
    exceptions: u64,
) -> RegularityCheck {
    let h = hp.base();
    let mut degrees: BTreeMap<Vertex, u64> = h.active_vertices().map(|v| (v, 0)).collect();
    let mut pair_deg: BTreeMap<(Vertex, Vertex), u64> = BTreeMap::new();
    for e in h.edges() {
        for (i, &u) in e.iter().enumerate() {
            *degrees.get_mut(&u).expect("active") += 1;
            for &v in &e[i + 1..] {
                *pair_deg.entry((u, v)).or_insert(0) += 1;
            }
        }
    }
    let lo = (Rat::one() - gamma) * d;
    let hi = (Rat::one() + gamma) * d;
    let cap = r * d;
    let pair_cap = gamma * d;
    let out_of_band = degrees
        .values()
        .filter(|&&deg| {
            let deg = rat_int(deg);
            deg < lo || deg > hi
        })
        .count() as u64;
    let degree_cap_violations = degrees.values().filter(|&&deg| rat_int(deg) >= cap).count() as u64;
    let pair_cap_violations = pair_deg
        .values()
        .filter(|&&pd| rat_int(pd) >= pair_cap)
        .count() as u64;
    RegularityCheck {
        pass: out_of_band <= exceptions && degree_cap_violations == 0 && pair_cap_violations == 0,
        out_of_band,
        degree_cap_violations,
        pair_cap_violations,
        max_pair_degree: pair_deg.values().copied().max().unwrap_or(0),
    }
}

/// How clashing activations are resolved within a nibble round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClashRule {
    /// Discard every member of a conflict component.
    DropAll,
    /// Keep one uniform survivor per conflict component.
    KeepOne,
}

#[derive(Debug, Clone)]
pub struct NibbleParams {
    /// Fraction of the current average degree used as activation odds.
    pub bite_fraction: Rat,
    /// Loss parameter of the target guarantee `(1-(k-1)a) n/k`; recorded in
    /// reports, not used by the algorithm itself.
    pub a: Rat,
    pub max_rounds: u32,
    pub seed: u64,
    pub clash: ClashRule,
}

impl NibbleParams {
    pub fn new(seed: u64) -> Self {
        NibbleParams {
            bite_fraction: rat(1, 4),
            a: rat(1, 20),
            max_rounds: 400,
            seed,
            clash: ClashRule::KeepOne,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NibbleOutcome {
    pub matching: Vec<Edge>,
    pub rounds: u32,
    pub covered: usize,
    pub isolated_dropped: usize,
    /// Edges committed by the semi-random rounds themselves, before the
    /// greedy completion pass. Monotone in `max_rounds` for a fixed seed
    /// because round `r` always draws from substream `r`.
    pub committed_by_rounds: usize,
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }
    fn find(&mut self, i: usize) -> usize {
        if self.0[i] != i {
            let root = self.find(self.0[i]);
            self.0[i] = root;
        }
        self.0[i]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Semi-random nibble. Each round activates surviving edges independently
/// with probability `bite / D̄` (`D̄` the current average degree over
/// uncovered vertices of positive degree), resolves clashes per the rule,
/// commits the survivors, and removes covered vertices. A final greedy pass
/// in lexicographic order adds any remaining disjoint edges, so the output
/// is always a maximal matching of the residual graph.
pub fn nibble(h: &Hypergraph, params: &NibbleParams) -> NibbleOutcome {
    let edges: Vec<&Edge> = h.edges().collect();
    let k = h.k();
    let mut incident: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        for &v in e.iter() {
            incident.entry(v).or_default().push(i);
        }
    }
    let isolated_dropped = h
        .active_vertices()
        .filter(|v| !incident.contains_key(v))
        .count();
    let mut alive: Vec<bool> = vec![true; edges.len()];
    let mut alive_count = edges.len();
    let mut covered: BTreeMap<Vertex, bool> = h.active_vertices().map(|v| (v, false)).collect();
    let mut matching: Vec<usize> = Vec::new();
    let bite = rat_to_f64(&params.bite_fraction);

    let mut rounds = 0u32;
    while alive_count > 0 && rounds < params.max_rounds {
        let uncovered_touched: usize = covered
            .iter()
            .filter(|(v, &c)| {
                !c && incident
                    .get(v)
                    .is_some_and(|ids| ids.iter().any(|&i| alive[i]))
            })
            .count();
        if uncovered_touched == 0 {
            break;
        }
        let avg_degree = (k * alive_count) as f64 / uncovered_touched as f64;
        let q = (bite / avg_degree).clamp(0.0, 1.0);
        let mut rng = rng::substream(params.seed, rounds as u64);
        let activated: Vec<usize> = (0..edges.len())
            .filter(|&i| alive[i] && rng.gen_bool(q))
            .collect();
        if !activated.is_empty() {
            // Conflict components among activated edges sharing a vertex.
            let index_of: BTreeMap<usize, usize> = activated
                .iter()
                .enumerate()
                .map(|(pos, &i)| (i, pos))
                .collect();
            let mut dsu = DisjointSets::new(activated.len());
            let mut seen_at: BTreeMap<Vertex, usize> = BTreeMap::new();
            for (pos, &i) in activated.iter().enumerate() {
                for &v in edges[i] {
                    match seen_at.get(&v) {
                        Some(&first) => dsu.union(first, pos),
                        None => {
                            seen_at.insert(v, pos);
                        }
                    }
                }
            }
            let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &i in &activated {
                let root = dsu.find(index_of[&i]);
                components.entry(root).or_default().push(i);
            }
            let mut kept: Vec<usize> = Vec::new();
            for (_, members) in components {
                match params.clash {
                    ClashRule::DropAll => {
                        if members.len() == 1 {
                            kept.push(members[0]);
                        }
                    }
                    ClashRule::KeepOne => {
                        let pick = rng.gen_range(0..members.len());
                        kept.push(members[pick]);
                    }
                }
            }
            for i in kept {
                if !alive[i] || edges[i].iter().any(|v| covered[v]) {
                    continue;
                }
                matching.push(i);
                for &v in edges[i] {
                    covered.insert(v, true);
                }
            }
            // Kill edges touching covered vertices.
            for i in 0..edges.len() {
                if alive[i] && edges[i].iter().any(|v| covered[v]) {
                    alive[i] = false;
                    alive_count -= 1;
                }
            }
        }
        rounds += 1;
    }

    let committed_by_rounds = matching.len();

    // Greedy completion in lexicographic edge order.
    for i in 0..edges.len() {
        if alive[i] && edges[i].iter().all(|v| !covered[v]) {
            matching.push(i);
            for &v in edges[i] {
                covered.insert(v, true);
            }
            alive[i] = false;
        }
    }

    matching.sort_unstable();
    let out: Vec<Edge> = matching.iter().map(|&i| edges[i].clone()).collect();
    debug_assert!(crate::hypergraph::Matching::try_new(out.clone()).is_ok());
    let covered_count = out.len() * k;
    NibbleOutcome {
        matching: out,
        rounds,
        covered: covered_count,
        isolated_dropped,
        committed_by_rounds,
    }
}

/// Report entry for a concentration bound evaluation. Pure arithmetic: no
/// probabilistic claim is made, the entry just tags the observation.
#[derive(Debug, Clone)]
pub struct ConcentrationEntry {
    pub observed: String,
    pub expectation: String,
    pub alpha: String,
    pub chernoff_expr: String,
    pub chernoff_bound: f64,
    /// True when the deviation event `|X - E| ≥ α E` did not occur, or the
    /// bound is vacuous (≥ 1).
    pub within: bool,
}

/// Small-deviation Chernoff bound `2 exp(-α² E / 3)`.
pub fn chernoff_small_dev(alpha: &Rat, expectation: &Rat) -> (f64, String) {
    let a = rat_to_f64(alpha);
    let e = rat_to_f64(expectation);
    let bound = 2.0 * (-a * a * e / 3.0).exp();
    (
        bound,
        format!(
            "2*exp(-({alpha})^2*({expectation})/3)",
            alpha = alpha,
            expectation = expectation
        ),
    )
}

/// Janson lower-tail bound `exp(-t² / (2λ + 4Δ))`.
pub fn janson_lower_tail(t: &Rat, lambda: &Rat, delta: &Rat) -> f64 {
    let t = rat_to_f64(t);
    let l = rat_to_f64(lambda);
    let d = rat_to_f64(delta);
    (-t * t / (2.0 * l + 4.0 * d)).exp()
}

pub fn concentration_entry(observed: &Rat, expectation: &Rat, alpha: &Rat) -> ConcentrationEntry {
    let (bound, expr) = chernoff_small_dev(alpha, expectation);
    let deviation = (observed - expectation).abs();
    let within = bound >= 1.0 || deviation < alpha * expectation;
    ConcentrationEntry {
        observed: crate::num::rat_to_string(observed),
        expectation: crate::num::rat_to_string(expectation),
        alpha: crate::num::rat_to_string(alpha),
        chernoff_expr: expr,
        chernoff_bound: bound,
        within,
    }
}
