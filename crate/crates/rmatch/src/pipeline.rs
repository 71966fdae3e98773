//! End-to-end perfect-matching solvers mirroring the two-case split:
//! hosts close to the extremal lift go through the bad-vertex repair
//! stages and the shape-respecting local search; hosts far from it go
//! through absorb, sample, round, nibble, absorb-leftover.
//!
//! Desk-scale n cannot satisfy any "sufficiently large" hypothesis, so
//! every lemma hypothesis is checked and recorded in the stage trace while
//! the returned witness never depends on one: each branch ends with full
//! re-validation and, when configured, the exact solver as fallback.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;

use crate::absorption::{absorb, build_absorbing_matching, AbsorbConfig};
use crate::constructions::{lift_family, script_h, Family};
use crate::exact::{
    has_perfect_matching_partite, rainbow_matching, rainbow_with_degree_check, validate_rainbow,
    SolveResult, SolveStatus, Witness,
};
use crate::hypergraph::{
    bad_vertices, classify_matching, is_eps_close_partite, ClosenessMode, ClosenessParams, Edge,
    MatchingClass, PartiteGraph, Vertex, VertexSet,
};
use crate::num::{binomial_rat, rat, rat_int, Rat};
use crate::rng;
use crate::rounding::{
    almost_regular_check, binomial_subgraph, degree_inheritance_check, nibble, sample_batch,
    ClashRule, NibbleParams, SampleBatch, SamplePlan,
};
use crate::{Error, Result};

/// What to do when a pipeline branch starves at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fallback {
    /// Hand the host to the exact solver and record that this happened.
    Exact,
    /// Report the failure.
    Fail,
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub epsilon: Rat,
    pub eta: Rat,
    pub rho: Rat,
    pub rho_prime: Rat,
    /// Node budget for exact-solver calls.
    pub budget: u64,
    /// Restarts of the shape-respecting local search before it falls back.
    pub matcher_restarts: u32,
    /// Far-case stage retries with fresh substreams.
    pub retries: u32,
    pub seed: u64,
    pub fallback: Fallback,
    pub closeness_mode: ClosenessMode,
    /// Absorbing-lemma constants.
    pub absorb_b: Rat,
    pub absorb_c: Rat,
    /// Rounding plan for the far case.
    pub batch_samples: usize,
    pub sample_p: Rat,
    pub bite_fraction: Rat,
    pub nibble_rounds: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            epsilon: rat(1, 10),
            eta: rat(1, 100),
            rho: rat(1, 1000),
            rho_prime: rat(1, 10000),
            budget: 5_000_000,
            matcher_restarts: 3,
            retries: 3,
            seed: 0,
            fallback: Fallback::Exact,
            closeness_mode: ClosenessMode::FixedLabeling,
            absorb_b: rat(1, 10),
            absorb_c: rat(2, 5),
            batch_samples: 40,
            sample_p: rat(2, 5),
            bite_fraction: rat(1, 4),
            nibble_rounds: 400,
        }
    }
}

impl PipelineConfig {
    /// The separation chain: each constant at least 10 times the next.
    pub fn validate(&self) -> Result<()> {
        let ten = rat_int(10);
        let in_unit = |x: &Rat| x > &Rat::zero() && x < &Rat::one();
        if !(in_unit(&self.epsilon)
            && in_unit(&self.eta)
            && in_unit(&self.rho)
            && in_unit(&self.rho_prime))
        {
            return Err(Error::InvalidInput(
                "pipeline constants must lie in (0,1)".into(),
            ));
        }
        if self.epsilon < (&ten * &self.eta)
            || self.eta < (&ten * &self.rho)
            || self.rho < (&ten * &self.rho_prime)
        {
            return Err(Error::InvalidInput(
                "separation chain violated: need epsilon >= 10 eta >= 100 rho >= 1000 rho'".into(),
            ));
        }
        Ok(())
    }

    /// Density constant `a1 = epsilon / 8k`.
    pub fn a1(&self, k: usize) -> Rat {
        &self.epsilon / rat_int(8 * k as u64)
    }

    /// Density constant `a2 = epsilon / 8k^3`.
    pub fn a2(&self, k: usize) -> Rat {
        &self.epsilon / rat_int(8 * (k as u64).pow(3))
    }

    /// Rational approximation of `sqrt(epsilon)`, the bad-vertex constant.
    /// The square root of a rational is rarely rational; the approximation
    /// is fixed at 9 decimal digits so thresholds stay reproducible.
    pub fn alpha(&self) -> Rat {
        let e = crate::num::rat_to_f64(&self.epsilon);
        let denom: i64 = 1_000_000_000;
        rat((e.sqrt() * denom as f64).round() as i64, denom)
    }
}

/// One pipeline stage: name, hypothesis outcome when one was checked, and
/// free-form details (sizes, counts, seeds).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: String,
    pub pass: Option<bool>,
    pub detail: BTreeMap<String, String>,
}

/// Stage records in execution order plus the wall-clock total, which is
/// excluded from determinism comparisons.
#[derive(Debug, Clone, Default)]
pub struct StageTrace {
    pub stages: Vec<StageRecord>,
    pub total_millis: f64,
}

impl StageTrace {
    fn push(&mut self, stage: &str, pass: Option<bool>, detail: &[(&str, String)]) {
        self.stages.push(StageRecord {
            stage: stage.to_string(),
            pass,
            detail: detail
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect(),
        });
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.stage == name)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "stages": self
                .stages
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "stage": s.stage,
                        "pass": s.pass,
                        "detail": s.detail,
                    })
                })
                .collect::<Vec<_>>(),
        })
    }
}

/// Which route the dispatcher took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Close,
    Far,
    /// Unbalanced family handed straight to the exact rainbow solver.
    ExactDirect,
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub result: SolveResult,
    pub trace: StageTrace,
    pub branch: Branch,
}

fn edge_w_count(e: &Edge, w: &VertexSet) -> usize {
    e.iter().filter(|v| w.contains(**v)).count()
}

fn shape_edge(h: &PartiteGraph, e: &Edge, w: &VertexSet) -> bool {
    // Partite edges have exactly one X vertex; shape additionally asks for
    // exactly one W vertex.
    debug_assert!(e.iter().filter(|&&v| h.is_x_vertex(v)).count() == 1);
    edge_w_count(e, w) == 1
}

/// Exhaustive search for a shape-respecting perfect matching inside a small
/// vertex set (at most `(k+1)^2` vertices in practice).
fn shape_pm_inside(
    h: &PartiteGraph,
    inside: &VertexSet,
    w: &VertexSet,
    nodes: &mut u64,
    budget: u64,
) -> Option<Vec<Edge>> {
    let candidates: Vec<&Edge> = h
        .base()
        .edges()
        .filter(|e| e.iter().all(|v| inside.contains(*v)) && shape_edge(h, e, w))
        .collect();
    let verts = inside.as_sorted_vec();
    fn go(
        verts: &[Vertex],
        candidates: &[&Edge],
        covered: &mut VertexSet,
        chosen: &mut Vec<Edge>,
        nodes: &mut u64,
        budget: u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > budget {
            return false;
        }
        let Some(v) = verts.iter().copied().find(|v| !covered.contains(*v)) else {
            return true;
        };
        for e in candidates.iter().filter(|e| e.binary_search(&v).is_ok()) {
            if e.iter().any(|u| covered.contains(*u)) {
                continue;
            }
            for &u in e.iter() {
                covered.insert(u);
            }
            chosen.push((*e).clone());
            if go(verts, candidates, covered, chosen, nodes, budget) {
                return true;
            }
            chosen.pop();
            let mut next = VertexSet::new();
            for x in covered.iter() {
                if e.binary_search(&x).is_err() {
                    next.insert(x);
                }
            }
            *covered = next;
        }
        false
    }
    let mut covered = VertexSet::new();
    let mut chosen = Vec::new();
    if go(
        &verts,
        &candidates,
        &mut covered,
        &mut chosen,
        nodes,
        budget,
    ) {
        Some(chosen)
    } else {
        None
    }
}

/// Local search for a perfect matching whose every edge has exactly one
/// vertex in the designated small class `W`. Starts from a maximal
/// shape-respecting matching; while imperfect, looks for an uncovered
/// `S = {x, w, u_1..u_{k-1}}` and `k` matching edges whose union carries a
/// shape-respecting matching of size `k+1`, and swaps it in. Stalls restart
/// from a reshuffled maximal matching; after the retry cap the exact solver
/// decides the instance.
pub fn good_case_matcher(
    h: &PartiteGraph,
    w_class: &VertexSet,
    budget: u64,
    seed: u64,
    restarts: u32,
) -> SolveResult {
    use itertools::Itertools;
    let w: VertexSet = w_class.iter().filter(|&v| h.base().is_active(v)).collect();
    let k = h.k();
    let mut nodes: u64 = 0;
    let mut warnings: Vec<String> = Vec::new();

    for attempt in 0..=restarts {
        // Maximal shape-respecting matching; lexicographic first, then
        // seeded shuffles.
        let mut order: Vec<&Edge> = h.base().edges().filter(|e| shape_edge(h, e, &w)).collect();
        if attempt > 0 {
            order.shuffle(&mut rng::substream(seed, attempt as u64));
        }
        let mut matching: Vec<Edge> = Vec::new();
        let mut covered = VertexSet::new();
        for e in &order {
            if e.iter().all(|v| !covered.contains(*v)) {
                matching.push((*e).clone());
                for &v in e.iter() {
                    covered.insert(v);
                }
            }
        }

        'improve: loop {
            let uncovered: Vec<Vertex> = h
                .base()
                .active_vertices()
                .filter(|v| !covered.contains(*v))
                .collect();
            if uncovered.is_empty() {
                matching.sort();
                return SolveResult {
                    status: SolveStatus::Found,
                    witness: Some(Witness::Edges(matching)),
                    nodes_explored: nodes,
                    warnings,
                };
            }
            let xs: Vec<Vertex> = uncovered
                .iter()
                .copied()
                .filter(|&v| h.is_x_vertex(v))
                .collect();
            let ws: Vec<Vertex> = uncovered
                .iter()
                .copied()
                .filter(|v| w.contains(*v))
                .collect();
            let us: Vec<Vertex> = uncovered
                .iter()
                .copied()
                .filter(|&v| !h.is_x_vertex(v) && !w.contains(v))
                .collect();
            if xs.is_empty() || ws.is_empty() || us.len() < k - 1 {
                break 'improve; // shape cannot cover the remainder
            }
            for &x in &xs {
                for &wv in &ws {
                    for us_pick in us.iter().copied().combinations(k - 1) {
                        let s: VertexSet = VertexSet::from_iter(us_pick.into_iter().chain([x, wv]));
                        for replaced in (0..matching.len()).combinations(k) {
                            if nodes > budget {
                                warnings.push("local-search budget exhausted".into());
                                break 'improve;
                            }
                            let mut inside = s.clone();
                            for &i in &replaced {
                                for &v in &matching[i] {
                                    inside.insert(v);
                                }
                            }
                            if let Some(swap) = shape_pm_inside(h, &inside, &w, &mut nodes, budget)
                            {
                                let mut keep: Vec<Edge> = matching
                                    .iter()
                                    .enumerate()
                                    .filter(|(i, _)| !replaced.contains(i))
                                    .map(|(_, e)| e.clone())
                                    .collect();
                                keep.extend(swap);
                                matching = keep;
                                covered = VertexSet::from_iter(matching.iter().flatten().copied());
                                continue 'improve;
                            }
                        }
                    }
                }
            }
            break 'improve; // no improving swap exists
        }
        warnings.push(format!("local search stalled on attempt {attempt}"));
    }

    // Retry cap reached: the exact solver owns the instance.
    let mut res = has_perfect_matching_partite(h, budget);
    res.nodes_explored += nodes;
    res.warnings
        .push("good-case local search fell back to the exact solver".into());
    res.warnings.extend(warnings);
    res
}

struct GreedyPick {
    edges: Vec<Edge>,
    starved: Option<String>,
}

/// Greedily covers each target with the lexicographically first edge that
/// contains it, avoids `covered`, and satisfies `admit`.
fn greedy_cover(
    h: &PartiteGraph,
    targets: &[Vertex],
    covered: &mut VertexSet,
    admit: impl Fn(&Edge) -> bool,
) -> GreedyPick {
    let mut edges = Vec::new();
    for &t in targets {
        if covered.contains(t) {
            continue;
        }
        let pick = h
            .base()
            .edges()
            .find(|e| {
                e.binary_search(&t).is_ok() && e.iter().all(|v| !covered.contains(*v)) && admit(e)
            })
            .cloned();
        match pick {
            Some(e) => {
                for &v in &e {
                    covered.insert(v);
                }
                edges.push(e);
            }
            None => {
                return GreedyPick {
                    edges,
                    starved: Some(format!("no admissible edge covers vertex {t}")),
                }
            }
        }
    }
    GreedyPick {
        edges,
        starved: None,
    }
}

/// Greedily picks `count` pairwise-disjoint edges satisfying `admit`.
fn greedy_fill(
    h: &PartiteGraph,
    count: usize,
    covered: &mut VertexSet,
    admit: impl Fn(&Edge) -> bool,
) -> GreedyPick {
    let mut edges = Vec::new();
    for _ in 0..count {
        let pick = h
            .base()
            .edges()
            .find(|e| e.iter().all(|v| !covered.contains(*v)) && admit(e))
            .cloned();
        match pick {
            Some(e) => {
                for &v in &e {
                    covered.insert(v);
                }
                edges.push(e);
            }
            None => {
                return GreedyPick {
                    edges,
                    starved: Some("fill stage starved".into()),
                }
            }
        }
    }
    GreedyPick {
        edges,
        starved: None,
    }
}

fn finish_with_fallback(
    h: &PartiteGraph,
    cfg: &PipelineConfig,
    trace: &mut StageTrace,
    reason: String,
) -> SolveResult {
    match cfg.fallback {
        Fallback::Exact => {
            trace.push("fallback-exact", None, &[("reason", reason)]);
            let mut res = has_perfect_matching_partite(h, cfg.budget);
            res.warnings.push("resolved by exact fallback".into());
            res
        }
        Fallback::Fail => {
            trace.push("fallback-fail", Some(false), &[("reason", reason.clone())]);
            SolveResult {
                status: SolveStatus::ExhaustedNone,
                witness: None,
                nodes_explored: 0,
                warnings: vec![format!("pipeline failed without fallback: {reason}")],
            }
        }
    }
}

/// Close-case solver: bad-vertex repair stages followed by the good-case
/// local search. The input must be balanced and on the same vertex ids as
/// the reference lift (V = 1..n, X = n+1..n+m).
pub fn solve_close(h: &PartiteGraph, cfg: &PipelineConfig) -> Result<(SolveResult, StageTrace)> {
    let start = std::time::Instant::now();
    let mut trace = StageTrace::default();
    if !h.is_balanced() {
        return Err(Error::InvalidInput(
            "close-case solver needs a balanced host".into(),
        ));
    }
    let k = h.k();
    let n = h.n_v() as u64;
    let m = h.m() as u64;
    let reference = script_h(h.n_v(), h.m(), k)?;
    let w_class: VertexSet = (1..=h.m()).collect();

    // Stage 1: the sqrt(eps)-bad set and its size bound.
    let alpha = cfg.alpha();
    let bad = bad_vertices(h.base(), reference.base(), &alpha)?;
    let bad_bound = rat_int(2 * (k as u64 + 1)) * &alpha * rat_int(n);
    let bad_ok = rat_int(bad.len() as u64) <= bad_bound;
    trace.push(
        "bad-set",
        Some(bad_ok),
        &[
            ("bad", bad.len().to_string()),
            ("bound", crate::num::rat_to_string(&bad_bound)),
        ],
    );

    let x_bad: Vec<Vertex> = bad.iter().filter(|&v| h.is_x_vertex(v)).collect();
    let w_bad: Vec<Vertex> = bad.iter().filter(|v| w_class.contains(*v)).collect();
    let w_good: VertexSet = w_class.iter().filter(|v| !bad.contains(*v)).collect();
    let mut covered = VertexSet::new();
    let mut assembled: Vec<Edge> = Vec::new();

    // Stage 2: rainbow coverage of the X-bad block via links avoiding a
    // reserved W' inside the good part of W.
    let r_count = x_bad.len() + w_bad.len();
    if r_count > 0 {
        if r_count > m as usize || w_good.len() + r_count < m as usize {
            let res = finish_with_fallback(
                h,
                cfg,
                &mut trace,
                "bad classes exceed stage-2 capacity".into(),
            );
            return Ok((res, trace));
        }
        let mut anchors: Vec<Vertex> = x_bad.clone();
        for x in h.x_class() {
            if anchors.len() == r_count {
                break;
            }
            if !bad.contains(x) {
                anchors.push(x);
            }
        }
        let w_reserve: VertexSet = w_good.iter().take(m as usize - r_count).collect();
        let mut links = Vec::with_capacity(anchors.len());
        for &x in &anchors {
            let mut link = h.base().link(&VertexSet::from_iter([x]))?;
            let doomed: Vec<Edge> = link
                .edges()
                .filter(|e| e.iter().any(|v| w_reserve.contains(*v)))
                .cloned()
                .collect();
            for e in doomed {
                link.remove_edge(&e);
            }
            links.push(link);
        }
        let family = Family::new(links)?;
        let rainbow = rainbow_with_degree_check(&family, anchors.len(), cfg.budget)?;
        trace.push(
            "cover-bad-block",
            Some(rainbow.status == SolveStatus::Found),
            &[
                ("anchors", anchors.len().to_string()),
                ("x_bad", x_bad.len().to_string()),
                ("w_bad", w_bad.len().to_string()),
                ("hypothesis_warnings", rainbow.warnings.len().to_string()),
            ],
        );
        match rainbow.rainbow_witness() {
            Some(witness) if rainbow.status == SolveStatus::Found => {
                for (color, e) in witness {
                    let mut full = e.clone();
                    full.push(anchors[*color]);
                    full.sort_unstable();
                    for &v in &full {
                        covered.insert(v);
                    }
                    assembled.push(full);
                }
            }
            _ => {
                let res =
                    finish_with_fallback(h, cfg, &mut trace, "stage 2 rainbow starved".into());
                return Ok((res, trace));
            }
        }
    } else {
        trace.push(
            "cover-bad-block",
            None,
            &[("skipped", "no bad X or W vertices".into())],
        );
    }

    // Stage 3: greedy matching over bad vertices rich in 1-W-good edges.
    let eta_threshold = &cfg.eta * rat_int(n.pow(k as u32));
    let b_prime: Vec<Vertex> = bad
        .iter()
        .filter(|v| !covered.contains(*v))
        .filter(|&v| {
            let count = h
                .base()
                .edges()
                .filter(|e| {
                    e.binary_search(&v).is_ok()
                        && e.iter().filter(|u| w_good.contains(**u)).count() == 1
                })
                .count() as u64;
            rat_int(count) >= eta_threshold
        })
        .collect();
    let pick = greedy_cover(h, &b_prime, &mut covered, |e| {
        e.iter().filter(|u| w_good.contains(**u)).count() == 1 && edge_w_count(e, &w_class) <= 2
    });
    trace.push(
        "cover-rich-bad",
        Some(pick.starved.is_none()),
        &[
            ("targets", b_prime.len().to_string()),
            ("picked", pick.edges.len().to_string()),
        ],
    );
    if let Some(reason) = pick.starved {
        let res = finish_with_fallback(h, cfg, &mut trace, reason);
        return Ok((res, trace));
    }
    assembled.extend(pick.edges);

    // Stage 4: remaining bad vertices, avoiding the good part of W; then
    // compensating edges with exactly two good-W vertices.
    let leftover_bad: Vec<Vertex> = bad.iter().filter(|v| !covered.contains(*v)).collect();
    let pick = greedy_cover(h, &leftover_bad, &mut covered, |e| {
        e.iter().all(|u| !w_good.contains(*u))
    });
    let m2_zero_w = pick
        .edges
        .iter()
        .filter(|e| edge_w_count(e, &w_class) == 0)
        .count();
    trace.push(
        "cover-remaining-bad",
        Some(pick.starved.is_none()),
        &[
            ("targets", leftover_bad.len().to_string()),
            ("picked", pick.edges.len().to_string()),
            ("zero_w_edges", m2_zero_w.to_string()),
        ],
    );
    if let Some(reason) = pick.starved {
        let res = finish_with_fallback(h, cfg, &mut trace, reason);
        return Ok((res, trace));
    }
    assembled.extend(pick.edges);

    let pick = greedy_fill(h, m2_zero_w, &mut covered, |e| {
        e.iter().filter(|u| w_good.contains(**u)).count() == 2
            && e.iter().all(|u| !bad.contains(*u))
    });
    trace.push(
        "compensate-two-w",
        Some(pick.starved.is_none()),
        &[("picked", pick.edges.len().to_string())],
    );
    if let Some(reason) = pick.starved {
        let res = finish_with_fallback(h, cfg, &mut trace, reason);
        return Ok((res, trace));
    }
    assembled.extend(pick.edges);

    // Stage 5: class balance repair. A shape-respecting completion needs
    // |W| - |X| = 0 on the remainder; stage-2 edges may use W unevenly.
    let w_left = w_class.iter().filter(|v| !covered.contains(*v)).count() as i64;
    let x_left = h.x_class().filter(|v| !covered.contains(*v)).count() as i64;
    let imbalance = w_left - x_left;
    if imbalance != 0 {
        let want_w = if imbalance > 0 { 2 } else { 0 };
        let pick = greedy_fill(h, imbalance.unsigned_abs() as usize, &mut covered, |e| {
            edge_w_count(e, &w_class) == want_w && e.iter().all(|u| !bad.contains(*u))
        });
        trace.push(
            "balance-repair",
            Some(pick.starved.is_none()),
            &[
                ("imbalance", imbalance.to_string()),
                ("picked", pick.edges.len().to_string()),
            ],
        );
        if let Some(reason) = pick.starved {
            let res = finish_with_fallback(h, cfg, &mut trace, reason);
            return Ok((res, trace));
        }
        assembled.extend(pick.edges);
    } else {
        trace.push("balance-repair", None, &[("imbalance", "0".into())]);
    }

    // Stage 6: good-case local search on the remainder.
    let remainder = h.remove_vertices(&covered);
    let tail = good_case_matcher(
        &remainder,
        &w_class,
        cfg.budget,
        cfg.seed,
        cfg.matcher_restarts,
    );
    trace.push(
        "good-case-matcher",
        Some(tail.status == SolveStatus::Found),
        &[
            ("remainder_vertices", remainder.base().order().to_string()),
            (
                "fallback_used",
                tail.warnings
                    .iter()
                    .any(|w| w.contains("fell back"))
                    .to_string(),
            ),
        ],
    );
    match tail.status {
        SolveStatus::Found => {
            let mut full = assembled;
            full.extend(tail.matching_edges().unwrap_or(&[]).to_vec());
            full.sort();
            let valid = classify_matching(h.base(), &full) == MatchingClass::Perfect;
            trace.push(
                "re-validate",
                Some(valid),
                &[("edges", full.len().to_string())],
            );
            trace.total_millis = start.elapsed().as_secs_f64() * 1e3;
            if valid {
                Ok((
                    SolveResult {
                        status: SolveStatus::Found,
                        witness: Some(Witness::Edges(full)),
                        nodes_explored: tail.nodes_explored,
                        warnings: tail.warnings,
                    },
                    trace,
                ))
            } else {
                let res =
                    finish_with_fallback(h, cfg, &mut trace, "assembled witness invalid".into());
                Ok((res, trace))
            }
        }
        _ => {
            // The local search (including its own exact fallback on the
            // remainder) found nothing; decisive only for the whole host.
            let res = finish_with_fallback(
                h,
                cfg,
                &mut trace,
                "remainder has no perfect matching under the stage decomposition".into(),
            );
            trace.total_millis = start.elapsed().as_secs_f64() * 1e3;
            Ok((res, trace))
        }
    }
}

/// Far-case solver: absorbing matching, sampled fractional rounding,
/// nibble, and leftover absorption.
pub fn solve_far(h: &PartiteGraph, cfg: &PipelineConfig) -> Result<(SolveResult, StageTrace)> {
    let start = std::time::Instant::now();
    let mut trace = StageTrace::default();
    if !h.is_balanced() {
        return Err(Error::InvalidInput(
            "far-case solver needs a balanced host".into(),
        ));
    }
    let k = h.k();
    let n = h.n_v() as u64;

    // Pair-degree hypothesis of the far case, recorded.
    {
        let target = binomial_rat(&rat_int(n - 1), k as u64 - 1)
            - binomial_rat(&(rat_int(n) - rat_int(n) / rat_int(k as u64)), k as u64 - 1)
            - &cfg.rho * rat_int(n.pow((k - 1) as u32));
        let mut ok = true;
        'outer: for x in h.x_class() {
            for v in h.v_class() {
                let d = h.base().degree(&VertexSet::from_iter([x, v]))?;
                if rat_int(d) <= target {
                    ok = false;
                    break 'outer;
                }
            }
        }
        trace.push("pair-degree-hypothesis", Some(ok), &[]);
    }

    for attempt in 0..=cfg.retries {
        let seed = cfg.seed.wrapping_add((attempt as u64) << 32);
        let absorb_cfg = AbsorbConfig {
            b: cfg.absorb_b.clone(),
            c: cfg.absorb_c.clone(),
            seed,
            retries: 4,
            probe_samples: 6,
            budget: cfg.budget,
        };
        let built = build_absorbing_matching(h, &absorb_cfg);
        let (am, diag) = match built {
            Ok(pair) => pair,
            Err(err) => {
                trace.push(
                    "absorbing-matching",
                    Some(false),
                    &[("error", err.to_string())],
                );
                continue;
            }
        };
        let m1_bound_ok = rat_int(am.len() as u64) <= &cfg.rho * rat_int(n);
        trace.push(
            "absorbing-matching",
            Some(true),
            &[
                ("edges", am.len().to_string()),
                ("family", am.family().len().to_string()),
                ("sampled", diag.sampled.to_string()),
                ("size_within_rho_n", m1_bound_ok.to_string()),
            ],
        );

        let h1 = h.remove_vertices(&am.covered());
        if h1.base().order() == 0 {
            let edges = am.edges();
            let valid = classify_matching(h.base(), &edges) == MatchingClass::Perfect;
            trace.push(
                "re-validate",
                Some(valid),
                &[("edges", edges.len().to_string())],
            );
            trace.total_millis = start.elapsed().as_secs_f64() * 1e3;
            if valid {
                return Ok((
                    SolveResult {
                        status: SolveStatus::Found,
                        witness: Some(Witness::Edges(edges)),
                        nodes_explored: 0,
                        warnings: Vec::new(),
                    },
                    trace,
                ));
            }
            continue;
        }

        let inherited = degree_inheritance_check(
            &h1,
            &h1.base().active_vertices().collect(),
            &(rat_int(10) * &cfg.rho),
        )?;
        trace.push("inherited-pair-degree", Some(inherited), &[]);

        // Rounding: sampled induced hosts with fractional perfect matchings.
        let plan = SamplePlan {
            n_samples: cfg.batch_samples,
            p: cfg.sample_p.clone(),
            tolerance: rat(1, 5),
        };
        let batch = sample_batch(&h1, &plan, seed ^ 0x5bd1e995, None)?;
        let mut kept_subsets = Vec::new();
        let mut fms = Vec::new();
        for r in &batch.subsets {
            if r.is_empty() {
                continue;
            }
            let induced = h1.induced(r);
            if let Some(fm) = crate::lp::fractional_perfect_matching(&induced)? {
                kept_subsets.push(r.clone());
                fms.push(fm);
            }
        }
        let kept_batch = SampleBatch {
            subsets: kept_subsets,
            p: batch.p.clone(),
            trim_log: Vec::new(),
        };
        trace.push(
            "sample-and-round",
            None,
            &[
                ("samples", batch.subsets.len().to_string()),
                ("with_fractional_pm", kept_batch.subsets.len().to_string()),
            ],
        );

        let h1_prime = if kept_batch.subsets.is_empty() {
            PartiteGraph::new(h.n_v(), h.m(), k)?
        } else {
            binomial_subgraph(&h1, &kept_batch, &fms, seed ^ 0x27d4eb2f)?
        };
        let d_target = rat_int(kept_batch.subsets.len() as u64) * &plan.p;
        let regular = almost_regular_check(
            &h1_prime,
            &d_target,
            &rat(1, 2),
            &rat_int(2),
            (h1.base().order() as u64) / 4,
        );
        trace.push(
            "almost-regular",
            Some(regular.pass),
            &[
                ("edges", h1_prime.base().edge_count().to_string()),
                ("out_of_band", regular.out_of_band.to_string()),
                ("max_pair_degree", regular.max_pair_degree.to_string()),
            ],
        );

        let params = NibbleParams {
            bite_fraction: cfg.bite_fraction.clone(),
            a: cfg.rho_prime.clone(),
            max_rounds: cfg.nibble_rounds,
            seed: seed ^ 0x165667b1,
            clash: ClashRule::KeepOne,
        };
        let nib = nibble(h1_prime.base(), &params);
        let nib_covered: VertexSet = nib.matching.iter().flatten().copied().collect();
        let leftover: VertexSet = h1
            .base()
            .active_vertices()
            .filter(|v| !nib_covered.contains(*v))
            .collect();
        let leftover_ok = rat_int(leftover.len() as u64) <= &cfg.rho_prime * rat_int(n);
        trace.push(
            "nibble",
            Some(leftover_ok),
            &[
                ("matched_edges", nib.matching.len().to_string()),
                ("leftover", leftover.len().to_string()),
                ("rounds", nib.rounds.to_string()),
            ],
        );

        if !h.is_balanced_set(&leftover) {
            trace.push(
                "absorb-leftover",
                Some(false),
                &[("error", "leftover unbalanced".into())],
            );
            continue;
        }
        match absorb(h, &am, &leftover, cfg.budget) {
            Ok(m1_prime) => {
                let mut full = m1_prime;
                full.extend(nib.matching.clone());
                full.sort();
                let valid = classify_matching(h.base(), &full) == MatchingClass::Perfect;
                trace.push(
                    "re-validate",
                    Some(valid),
                    &[("edges", full.len().to_string())],
                );
                if valid {
                    trace.total_millis = start.elapsed().as_secs_f64() * 1e3;
                    return Ok((
                        SolveResult {
                            status: SolveStatus::Found,
                            witness: Some(Witness::Edges(full)),
                            nodes_explored: 0,
                            warnings: Vec::new(),
                        },
                        trace,
                    ));
                }
            }
            Err(err) => {
                trace.push(
                    "absorb-leftover",
                    Some(false),
                    &[("error", err.to_string())],
                );
            }
        }
    }

    let res = finish_with_fallback(h, cfg, &mut trace, "far-case retries exhausted".into());
    trace.total_millis = start.elapsed().as_secs_f64() * 1e3;
    Ok((res, trace))
}

/// Pipeline input: a colored family (lifted first) or a partite host.
#[derive(Debug, Clone)]
pub enum SolveInput {
    Family(Family),
    Host(PartiteGraph),
}

/// Dispatcher: lifts families, branches on closeness to the extremal lift,
/// and re-validates every witness before returning it.
pub fn solve(input: &SolveInput, cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    cfg.validate()?;
    match input {
        SolveInput::Family(f) => {
            if f.t() * f.k() != f.n() as usize {
                // Unbalanced lift: the rainbow question is still well posed,
                // the dispatcher answers it exactly.
                let res = rainbow_matching(f, cfg.budget);
                if let Some(w) = res.rainbow_witness() {
                    if !validate_rainbow(f, w) {
                        return Err(Error::Inconclusive(
                            "rainbow witness failed validation".into(),
                        ));
                    }
                }
                let mut trace = StageTrace::default();
                trace.push(
                    "exact-direct",
                    None,
                    &[("reason", "unbalanced family".into())],
                );
                return Ok(PipelineOutcome {
                    result: res,
                    trace,
                    branch: Branch::ExactDirect,
                });
            }
            let lifted = lift_family(f)?;
            let mut outcome = solve_host(&lifted, cfg)?;
            // Translate a perfect matching of the lift into a rainbow witness.
            if outcome.result.status == SolveStatus::Found {
                let edges = outcome
                    .result
                    .matching_edges()
                    .ok_or_else(|| Error::Inconclusive("missing witness".into()))?
                    .to_vec();
                let mut rainbow = BTreeMap::new();
                for e in &edges {
                    let x = *e
                        .iter()
                        .find(|&&v| v > f.n())
                        .expect("lift edge has a color vertex");
                    let color = (x - f.n() - 1) as usize;
                    let body: Edge = e.iter().copied().filter(|&v| v <= f.n()).collect();
                    rainbow.insert(color, body);
                }
                if !validate_rainbow(f, &rainbow) {
                    return Err(Error::Inconclusive(
                        "translated rainbow witness invalid".into(),
                    ));
                }
                outcome.result.witness = Some(Witness::Rainbow(rainbow));
            }
            Ok(outcome)
        }
        SolveInput::Host(h) => solve_host(h, cfg),
    }
}

fn solve_host(h: &PartiteGraph, cfg: &PipelineConfig) -> Result<PipelineOutcome> {
    if !h.is_balanced() {
        let mut trace = StageTrace::default();
        trace.push("dispatch", None, &[("reason", "unbalanced host".into())]);
        return Ok(PipelineOutcome {
            result: SolveResult {
                status: SolveStatus::ExhaustedNone,
                witness: None,
                nodes_explored: 0,
                warnings: vec!["unbalanced host has no perfect matching".into()],
            },
            trace,
            branch: Branch::ExactDirect,
        });
    }
    let reference = script_h(h.n_v(), h.m(), h.k())?;
    let close = is_eps_close_partite(
        &reference,
        h,
        &ClosenessParams {
            epsilon: cfg.epsilon.clone(),
            mode: cfg.closeness_mode,
        },
    )?;
    let (result, mut trace, branch) = if close.is_close {
        let (r, t) = solve_close(h, cfg)?;
        (r, t, Branch::Close)
    } else {
        let (r, t) = solve_far(h, cfg)?;
        (r, t, Branch::Far)
    };
    trace.stages.insert(
        0,
        StageRecord {
            stage: "dispatch".into(),
            pass: None,
            detail: [
                (
                    "branch".to_string(),
                    if close.is_close { "close" } else { "far" }.to_string(),
                ),
                ("deficiency".to_string(), close.deficiency.to_string()),
            ]
            .into_iter()
            .collect(),
        },
    );
    // Final re-validation, independent of whatever the branch recorded.
    if result.status == SolveStatus::Found {
        let edges = result
            .matching_edges()
            .ok_or_else(|| Error::Inconclusive("missing witness".into()))?;
        if classify_matching(h.base(), edges) != MatchingClass::Perfect {
            return Err(Error::Inconclusive(
                "final witness failed re-validation".into(),
            ));
        }
    }
    Ok(PipelineOutcome {
        result,
        trace,
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        complete_partite, extremal_family, sample_threshold_family, ThresholdSpec,
    };
    use crate::exact::SolveStatus;

    fn cfg_with_seed(seed: u64) -> PipelineConfig {
        PipelineConfig {
            seed,
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(PipelineConfig::default().validate().is_ok());
        let bad = PipelineConfig {
            eta: rat(9, 100),
            ..PipelineConfig::default()
        };
        assert!(bad.validate().is_err());
        let k = 4;
        let c = PipelineConfig::default();
        assert_eq!(c.a1(k), rat(1, 320));
        assert_eq!(c.a2(k), rat(1, 5120));
    }

    #[test]
    fn good_case_matcher_on_clean_host() {
        // script_h is the fully good case: greedy alone finds the shape PM.
        let h = script_h(12, 4, 3).unwrap();
        let w: VertexSet = (1..=4).collect();
        let res = good_case_matcher(&h, &w, 2_000_000, 0, 2);
        assert_eq!(res.status, SolveStatus::Found);
        assert!(res.warnings.is_empty());
        assert_eq!(
            classify_matching(h.base(), res.matching_edges().unwrap()),
            MatchingClass::Perfect
        );
    }

    #[test]
    fn good_case_matcher_falls_back_without_shape_edges() {
        // No edge touches W = [m]; the local search cannot start and the
        // exact solver decides (here: no PM at all, vertex 1 is isolated).
        let mut h = PartiteGraph::new(6, 2, 3).unwrap();
        h.add_edge(vec![3, 4, 5, 7]).unwrap();
        h.add_edge(vec![3, 4, 6, 8]).unwrap();
        let w: VertexSet = (1..=2).collect();
        let res = good_case_matcher(&h, &w, 100_000, 0, 1);
        assert_eq!(res.status, SolveStatus::ExhaustedNone);
        assert!(res.warnings.iter().any(|m| m.contains("fell back")));
    }

    #[test]
    fn solve_close_on_reference_host() {
        let h = script_h(16, 4, 4).unwrap();
        let (res, trace) = solve_close(&h, &cfg_with_seed(1)).unwrap();
        assert_eq!(res.status, SolveStatus::Found);
        // No bad vertices: stage 2 skipped.
        let stage = trace.stage("cover-bad-block").unwrap();
        assert!(stage.detail.contains_key("skipped"));
        assert_eq!(trace.stage("re-validate").unwrap().pass, Some(true));
    }

    #[test]
    fn solve_close_covers_a_weakened_color_vertex() {
        // Keep only four edges at color vertex x1 = 13, all of the form
        // {4, u, v, 13} with u, v outside W = [4]. At alpha = 1/40 only x1
        // is bad (it misses 160 reference edges against a threshold of
        // 102.4, every other vertex misses at most 52), and its kept edges
        // avoid the reserved W' = {1,2,3}, so the stage-2 rainbow covers it.
        let h = script_h(12, 4, 3).unwrap();
        let x1: Vertex = 13;
        let mut weakened = PartiteGraph::new(12, 4, 3).unwrap();
        let mut kept = 0usize;
        for e in h.base().edges() {
            if e.binary_search(&x1).is_ok() {
                let w_part: Vec<Vertex> = e.iter().copied().filter(|&v| v <= 4).collect();
                if kept < 4 && w_part == vec![4] {
                    weakened.add_edge(e.clone()).unwrap();
                    kept += 1;
                }
            } else {
                weakened.add_edge(e.clone()).unwrap();
            }
        }
        assert_eq!(kept, 4);
        let mut cfg = cfg_with_seed(3);
        cfg.epsilon = rat(1, 1600); // alpha = sqrt(eps) = 1/40
        cfg.eta = rat(1, 16_000);
        cfg.rho = rat(1, 160_000);
        cfg.rho_prime = rat(1, 1_600_000);
        let (res, trace) = solve_close(&weakened, &cfg).unwrap();
        assert_eq!(res.status, SolveStatus::Found);
        let stage = trace.stage("cover-bad-block").unwrap();
        assert_eq!(stage.detail.get("x_bad").map(String::as_str), Some("1"));
        assert_eq!(trace.stage("bad-set").unwrap().pass, Some(true));
        // x1's matching edge came from the rainbow stage.
        let witness = res.matching_edges().unwrap();
        let x1_edge = witness
            .iter()
            .find(|e| e.binary_search(&x1).is_ok())
            .unwrap();
        assert!(weakened.base().contains_edge(x1_edge));
        assert_eq!(
            classify_matching(weakened.base(), witness),
            MatchingClass::Perfect
        );
    }

    #[test]
    fn solve_close_isolated_color_vertex_is_exhausted() {
        // Remove every edge at one color vertex: no perfect matching exists
        // and the stage-2 starvation path lands in the exact fallback.
        let h = script_h(12, 4, 3).unwrap();
        let x1: Vertex = 13;
        let mut stripped = PartiteGraph::new(12, 4, 3).unwrap();
        for e in h.base().edges() {
            if e.binary_search(&x1).is_err() {
                stripped.add_edge(e.clone()).unwrap();
            }
        }
        let mut cfg = cfg_with_seed(5);
        cfg.epsilon = rat(1, 10_000);
        cfg.eta = rat(1, 100_000);
        cfg.rho = rat(1, 1_000_000);
        cfg.rho_prime = rat(1, 10_000_000);
        let (res, _) = solve_close(&stripped, &cfg).unwrap();
        assert_eq!(res.status, SolveStatus::ExhaustedNone);
    }

    #[test]
    fn solve_close_rejects_unbalanced_input() {
        let h = script_h(9, 2, 3).unwrap();
        assert!(solve_close(&h, &cfg_with_seed(0)).is_err());
    }

    #[test]
    fn solve_far_assembles_on_complete_host() {
        let h = complete_partite(24, 8, 3).unwrap();
        let mut cfg = cfg_with_seed(7);
        cfg.batch_samples = 30;
        let (res, trace) = solve_far(&h, &cfg).unwrap();
        assert_eq!(res.status, SolveStatus::Found);
        assert!(trace.stage("absorbing-matching").is_some());
        assert!(trace.stage("nibble").is_some());
        assert_eq!(
            classify_matching(h.base(), res.matching_edges().unwrap()),
            MatchingClass::Perfect
        );
    }

    #[test]
    fn solve_far_retry_path_with_starved_absorber() {
        // A tiny c makes the sampled absorbing family empty most attempts;
        // the far case retries and ultimately the exact fallback closes it.
        let h = complete_partite(24, 8, 3).unwrap();
        let mut cfg = cfg_with_seed(2);
        cfg.absorb_c = rat(1, 1000);
        cfg.retries = 2;
        let (res, trace) = solve_far(&h, &cfg).unwrap();
        assert_eq!(res.status, SolveStatus::Found);
        let absorb_failures = trace
            .stages
            .iter()
            .filter(|s| s.stage == "absorbing-matching" && s.pass == Some(false))
            .count();
        let fallback = trace.stage("fallback-exact").is_some();
        assert!(
            absorb_failures > 0 || fallback,
            "expected retries or fallback in the trace"
        );
        assert_eq!(
            classify_matching(h.base(), res.matching_edges().unwrap()),
            MatchingClass::Perfect
        );
    }

    #[test]
    fn dispatcher_reports_sharpness_on_extremal_family() {
        let f = extremal_family(9, 3).unwrap();
        let out = solve(&SolveInput::Family(f), &cfg_with_seed(2)).unwrap();
        assert_eq!(out.result.status, SolveStatus::ExhaustedNone);
    }

    #[test]
    fn dispatcher_solves_threshold_families() {
        let spec = ThresholdSpec::vertex_degree_main(8, 4, 2).unwrap();
        for seed in 0..5 {
            let f = sample_threshold_family(&spec, 0, seed).unwrap();
            let out = solve(&SolveInput::Family(f.clone()), &cfg_with_seed(seed)).unwrap();
            assert_eq!(out.result.status, SolveStatus::Found, "seed {seed}");
            let witness = out.result.rainbow_witness().unwrap();
            assert!(validate_rainbow(&f, witness));
        }
    }

    #[test]
    fn dispatcher_handles_unbalanced_family_exactly() {
        // Two colors of a 3-graph on 9 vertices: t*k != n.
        let f = Family::new(vec![crate::constructions::make_hk(9, 2, 3).unwrap(); 2]).unwrap();
        let out = solve(&SolveInput::Family(f.clone()), &cfg_with_seed(0)).unwrap();
        assert_eq!(out.branch, Branch::ExactDirect);
        assert_eq!(out.result.status, SolveStatus::Found);
        assert!(validate_rainbow(&f, out.result.rainbow_witness().unwrap()));
    }

    #[test]
    fn dispatcher_branch_is_deterministic() {
        let h = script_h(16, 4, 4).unwrap();
        let a = solve(&SolveInput::Host(h.clone()), &cfg_with_seed(9)).unwrap();
        let b = solve(&SolveInput::Host(h), &cfg_with_seed(9)).unwrap();
        assert_eq!(a.branch, b.branch);
        assert_eq!(a.result.status, b.result.status);
        assert_eq!(a.result.witness, b.result.witness);
        assert_eq!(
            a.trace
                .stages
                .iter()
                .map(|s| (&s.stage, &s.detail))
                .collect::<Vec<_>>(),
            b.trace
                .stages
                .iter()
                .map(|s| (&s.stage, &s.detail))
                .collect::<Vec<_>>()
        );
    }
}
