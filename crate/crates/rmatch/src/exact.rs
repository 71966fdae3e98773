//! Exhaustive and branch-and-bound oracles: maximum matching, perfect
//! matching, rainbow matching, and the empirical checker for the stability
//! lemma of stable 3-graphs.
//!
//! Budgets count node expansions, not wall time, so node counts reproduce
//! across hosts. Branching is deterministic: the lowest-id uncovered vertex
//! is expanded first and its incident edges are tried in lexicographic
//! order.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::constructions::Family;
use crate::hypergraph::{Edge, Hypergraph, PartiteGraph, Vertex, VertexSet};
use crate::num::{binomial, rat_int, Rat};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Found,
    ExhaustedNone,
    BudgetExceeded,
}

/// Witness carried by a [`SolveResult`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A matching (possibly partial when the budget ran out).
    Edges(Vec<Edge>),
    /// Rainbow witness: color index (0-based) to the edge chosen for it.
    Rainbow(BTreeMap<usize, Edge>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub witness: Option<Witness>,
    pub nodes_explored: u64,
    pub warnings: Vec<String>,
}

impl SolveResult {
    pub fn found(&self) -> bool {
        self.status == SolveStatus::Found
    }

    pub fn matching_edges(&self) -> Option<&[Edge]> {
        match &self.witness {
            Some(Witness::Edges(es)) => Some(es),
            _ => None,
        }
    }

    pub fn rainbow_witness(&self) -> Option<&BTreeMap<usize, Edge>> {
        match &self.witness {
            Some(Witness::Rainbow(m)) => Some(m),
            _ => None,
        }
    }
}

struct MatchState<'a> {
    edges: Vec<&'a Edge>,
    /// Edge ids incident to each vertex, in lexicographic edge order.
    incident: BTreeMap<Vertex, Vec<usize>>,
    vertices: Vec<Vertex>,
    k: usize,
    budget: u64,
    nodes: u64,
    exceeded: bool,
}

impl<'a> MatchState<'a> {
    fn new(h: &'a Hypergraph, budget: u64) -> Self {
        let edges: Vec<&Edge> = h.edges().collect();
        let mut incident: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            for &v in e.iter() {
                incident.entry(v).or_default().push(i);
            }
        }
        MatchState {
            edges,
            incident,
            vertices: h.active_vertices().collect(),
            k: h.k(),
            budget,
            nodes: 0,
            exceeded: false,
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exceeded = true;
        }
        self.exceeded
    }
}

/// Maximum matching by branch and bound. Branches on the lowest uncovered,
/// unskipped vertex: one branch per incident available edge plus a skip
/// branch, pruned by the `free / k` packing bound.
pub fn max_matching(h: &Hypergraph, budget: u64) -> SolveResult {
    if budget == 0 {
        return SolveResult {
            status: SolveStatus::BudgetExceeded,
            witness: Some(Witness::Edges(Vec::new())),
            nodes_explored: 0,
            warnings: vec!["zero budget".into()],
        };
    }
    let mut st = MatchState::new(h, budget);
    let mut covered: BTreeSet<Vertex> = BTreeSet::new();
    let mut skipped: BTreeSet<Vertex> = BTreeSet::new();
    let mut current: Vec<usize> = Vec::new();
    let mut best: Vec<usize> = Vec::new();

    fn recurse(
        st: &mut MatchState,
        covered: &mut BTreeSet<Vertex>,
        skipped: &mut BTreeSet<Vertex>,
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if st.tick() {
            return;
        }
        let next = st
            .vertices
            .iter()
            .copied()
            .find(|v| !covered.contains(v) && !skipped.contains(v));
        let Some(v) = next else {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        };
        // Packing bound: every further edge needs k vertices that are
        // neither covered nor skipped.
        let free = st
            .vertices
            .iter()
            .filter(|u| !covered.contains(u) && !skipped.contains(u))
            .count();
        if current.len() + free / st.k <= best.len() {
            return;
        }
        let candidate_edges: Vec<usize> = st
            .incident
            .get(&v)
            .map(|ids| {
                ids.iter()
                    .copied()
                    .filter(|&i| st.edges[i].iter().all(|u| !covered.contains(u)))
                    .collect()
            })
            .unwrap_or_default();
        for i in candidate_edges {
            if st.exceeded {
                return;
            }
            for &u in st.edges[i] {
                covered.insert(u);
            }
            current.push(i);
            recurse(st, covered, skipped, current, best);
            current.pop();
            for &u in st.edges[i] {
                covered.remove(&u);
            }
        }
        if st.exceeded {
            return;
        }
        skipped.insert(v);
        recurse(st, covered, skipped, current, best);
        skipped.remove(&v);
    }

    recurse(&mut st, &mut covered, &mut skipped, &mut current, &mut best);
    let witness: Vec<Edge> = best.iter().map(|&i| st.edges[i].clone()).collect();
    SolveResult {
        status: if st.exceeded {
            SolveStatus::BudgetExceeded
        } else {
            SolveStatus::Found
        },
        witness: Some(Witness::Edges(witness)),
        nodes_explored: st.nodes,
        warnings: Vec::new(),
    }
}

/// Decides whether `h` has a perfect matching on its active vertices.
/// Every vertex must be covered, so there is no skip branch.
pub fn has_perfect_matching(h: &Hypergraph, budget: u64) -> SolveResult {
    let order = h.order();
    if order == 0 {
        return SolveResult {
            status: SolveStatus::Found,
            witness: Some(Witness::Edges(Vec::new())),
            nodes_explored: 0,
            warnings: Vec::new(),
        };
    }
    if !order.is_multiple_of(h.k()) {
        return SolveResult {
            status: SolveStatus::ExhaustedNone,
            witness: None,
            nodes_explored: 0,
            warnings: vec![format!("{} active vertices, uniformity {}", order, h.k())],
        };
    }
    let mut st = MatchState::new(h, budget.max(1));
    let mut covered: BTreeSet<Vertex> = BTreeSet::new();
    let mut current: Vec<usize> = Vec::new();

    fn recurse(
        st: &mut MatchState,
        covered: &mut BTreeSet<Vertex>,
        current: &mut Vec<usize>,
    ) -> bool {
        if st.tick() {
            return false;
        }
        let next = st.vertices.iter().copied().find(|v| !covered.contains(v));
        let Some(v) = next else {
            return true;
        };
        let candidate_edges: Vec<usize> = st
            .incident
            .get(&v)
            .map(|ids| {
                ids.iter()
                    .copied()
                    .filter(|&i| st.edges[i].iter().all(|u| !covered.contains(u)))
                    .collect()
            })
            .unwrap_or_default();
        for i in candidate_edges {
            if st.exceeded {
                return false;
            }
            for &u in st.edges[i] {
                covered.insert(u);
            }
            current.push(i);
            if recurse(st, covered, current) {
                return true;
            }
            current.pop();
            for &u in st.edges[i] {
                covered.remove(&u);
            }
        }
        false
    }

    let ok = recurse(&mut st, &mut covered, &mut current);
    if ok {
        let witness: Vec<Edge> = current.iter().map(|&i| st.edges[i].clone()).collect();
        SolveResult {
            status: SolveStatus::Found,
            witness: Some(Witness::Edges(witness)),
            nodes_explored: st.nodes,
            warnings: Vec::new(),
        }
    } else {
        SolveResult {
            status: if st.exceeded {
                SolveStatus::BudgetExceeded
            } else {
                SolveStatus::ExhaustedNone
            },
            witness: None,
            nodes_explored: st.nodes,
            warnings: Vec::new(),
        }
    }
}

/// Perfect matching in a partite host; an unbalanced host has none.
pub fn has_perfect_matching_partite(h: &PartiteGraph, budget: u64) -> SolveResult {
    if !h.is_balanced() {
        return SolveResult {
            status: SolveStatus::ExhaustedNone,
            witness: None,
            nodes_explored: 0,
            warnings: vec!["host is not balanced".into()],
        };
    }
    has_perfect_matching(h.base(), budget)
}

/// Rainbow matching: one edge per color, pairwise disjoint. Colors are
/// processed in order of increasing edge count (ties by index) for
/// fail-first pruning.
pub fn rainbow_matching(f: &Family, budget: u64) -> SolveResult {
    let mut order: Vec<usize> = (0..f.t()).collect();
    order.sort_by_key(|&i| (f.graph(i).edge_count(), i));

    let mut nodes: u64 = 0;
    let mut exceeded = false;
    let mut covered: BTreeSet<Vertex> = BTreeSet::new();
    let mut chosen: BTreeMap<usize, Edge> = BTreeMap::new();

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &Family,
        order: &[usize],
        depth: usize,
        covered: &mut BTreeSet<Vertex>,
        chosen: &mut BTreeMap<usize, Edge>,
        nodes: &mut u64,
        budget: u64,
        exceeded: &mut bool,
    ) -> bool {
        *nodes += 1;
        if *nodes > budget {
            *exceeded = true;
            return false;
        }
        if depth == order.len() {
            return true;
        }
        // Each remaining color needs k fresh vertices.
        let free = f.n() as usize - covered.len();
        if (order.len() - depth) * f.k() > free {
            return false;
        }
        let color = order[depth];
        let candidates: Vec<&Edge> = f
            .graph(color)
            .edges()
            .filter(|e| e.iter().all(|v| !covered.contains(v)))
            .collect();
        for e in candidates {
            if *exceeded {
                return false;
            }
            for &v in e {
                covered.insert(v);
            }
            chosen.insert(color, e.clone());
            if recurse(
                f,
                order,
                depth + 1,
                covered,
                chosen,
                nodes,
                budget,
                exceeded,
            ) {
                return true;
            }
            chosen.remove(&color);
            for &v in e {
                covered.remove(&v);
            }
        }
        false
    }

    let ok = recurse(
        f,
        &order,
        0,
        &mut covered,
        &mut chosen,
        &mut nodes,
        budget.max(1),
        &mut exceeded,
    );
    SolveResult {
        status: if ok {
            SolveStatus::Found
        } else if exceeded {
            SolveStatus::BudgetExceeded
        } else {
            SolveStatus::ExhaustedNone
        },
        witness: if ok {
            Some(Witness::Rainbow(chosen))
        } else {
            None
        },
        nodes_explored: nodes,
        warnings: Vec::new(),
    }
}

/// Rainbow subroutine used where the close-case pipeline needs a rainbow
/// matching for link graphs: same engine as [`rainbow_matching`], plus a
/// recorded check of the degree hypothesis
/// `δ₁(G_i) > C(n-1, k-1) - C(n-t, k-1)`.
pub fn rainbow_with_degree_check(g: &Family, t: usize, budget: u64) -> Result<SolveResult> {
    if t != g.t() {
        return Err(Error::InvalidInput(format!(
            "t = {t} but the family has {} colors",
            g.t()
        )));
    }
    let n = g.n() as u64;
    let k = g.k() as u64;
    let threshold = binomial(n - 1, k - 1) - binomial(n.saturating_sub(t as u64), k - 1);
    let mut warnings = Vec::new();
    for (i, gi) in g.graphs().iter().enumerate() {
        let d = gi.min_degree(1)?;
        if rat_int(d) <= Rat::from_integer(threshold.clone().into()) {
            warnings.push(format!(
                "degree hypothesis violated for color {i}: min degree {d} <= {threshold}"
            ));
        }
    }
    let mut res = rainbow_matching(g, budget);
    res.warnings.extend(warnings);
    Ok(res)
}

/// Checks the lift equivalence on a balanced family: the rainbow solver and
/// the perfect-matching solver on the lifted host must agree.
pub fn rainbow_equiv_check(f: &Family, budget: u64) -> Result<bool> {
    if f.t() * f.k() != f.n() as usize {
        return Err(Error::InvalidInput(format!(
            "lift is not balanced: t k = {} but n = {}",
            f.t() * f.k(),
            f.n()
        )));
    }
    let side_budget = (budget / 2).max(1);
    let rainbow = rainbow_matching(f, side_budget);
    let lifted = crate::constructions::lift_family(f)?;
    let pm = has_perfect_matching_partite(&lifted, side_budget);
    if rainbow.status == SolveStatus::BudgetExceeded || pm.status == SolveStatus::BudgetExceeded {
        return Err(Error::Inconclusive(format!(
            "budget exceeded (rainbow {:?} after {} nodes, lift {:?} after {} nodes)",
            rainbow.status, rainbow.nodes_explored, pm.status, pm.nodes_explored
        )));
    }
    Ok(rainbow.status == pm.status)
}

/// Outcome of probing the stability lemma on a stable 3-graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StabilityOutcome {
    /// The lemma's hypothesis fails: small edge count or a large matching.
    Vacuous { reason: String },
    /// Hypothesis holds and the graph is η-close to `H_3^*(n, n/4 - 1)`.
    Implied { deficiency: u64 },
    /// Hypothesis holds yet closeness fails. At desk scale this is a
    /// small-n artifact of an asymptotic statement, not a refutation.
    Counterexample { deficiency: u64 },
}

/// Empirical probe of the stable-graph stability lemma at `m = 3n/4`.
///
/// Requires a stable 3-graph on `n ≡ 0 (mod 4)` vertices. Stable graphs are
/// canonically labeled, so closeness is evaluated under the fixed labeling.
pub fn check_stability_lemma(h: &Hypergraph, eta: &Rat, budget: u64) -> Result<StabilityOutcome> {
    if h.k() != 3 {
        return Err(Error::InvalidInput(
            "stability lemma probe needs a 3-graph".into(),
        ));
    }
    if !crate::hypergraph::is_stable(h) {
        return Err(Error::InvalidInput("input graph is not stable".into()));
    }
    let n = h.n() as u64;
    if !n.is_multiple_of(4) {
        return Err(Error::InvalidInput(format!(
            "n = {n} is not divisible by 4"
        )));
    }
    let e = h.edge_count() as u64;
    let eta4n3 = eta * eta * eta * eta * rat_int(n.pow(3));
    let size_bound = binomial(n, 3) - binomial(3 * n / 4, 3);
    let threshold = Rat::from_integer(size_bound.into()) - eta4n3;
    if rat_int(e) <= threshold {
        return Ok(StabilityOutcome::Vacuous {
            reason: format!("e(H) = {e} does not exceed the size threshold"),
        });
    }
    let nu = max_matching(h, budget);
    if nu.status == SolveStatus::BudgetExceeded {
        return Err(Error::Inconclusive(
            "matching oracle ran out of budget".into(),
        ));
    }
    let nu_size = nu.matching_edges().map(|m| m.len()).unwrap_or(0) as u64;
    if 4 * nu_size >= n {
        return Ok(StabilityOutcome::Vacuous {
            reason: format!("matching number {nu_size} >= n/4"),
        });
    }
    let reference = crate::constructions::make_hk_star(h.n(), h.n() / 4 - 1, 3)?;
    let deficiency = crate::hypergraph::edit_deficiency(&reference, h)?;
    if rat_int(deficiency) < eta * rat_int(n.pow(3)) {
        Ok(StabilityOutcome::Implied { deficiency })
    } else {
        Ok(StabilityOutcome::Counterexample { deficiency })
    }
}

/// `ν(H)` convenience wrapper; `None` when the budget runs out.
pub fn matching_number(h: &Hypergraph, budget: u64) -> Option<usize> {
    let res = max_matching(h, budget);
    if res.status == SolveStatus::Found {
        res.matching_edges().map(|m| m.len())
    } else {
        None
    }
}

/// Validates a rainbow witness against its family.
pub fn validate_rainbow(f: &Family, witness: &BTreeMap<usize, Edge>) -> bool {
    if witness.len() != f.t() {
        return false;
    }
    let mut covered: BTreeSet<Vertex> = BTreeSet::new();
    for (&color, e) in witness {
        if color >= f.t() || !f.graph(color).contains_edge(e) {
            return false;
        }
        for &v in e {
            if !covered.insert(v) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive maximum matching by plain enumeration, without pruning.
/// This is the independent oracle; it stays out of the solver's code path.
pub fn exhaustive_max_matching(h: &Hypergraph) -> usize {
    let edges: Vec<&Edge> = h.edges().collect();
    fn go(edges: &[&Edge], idx: usize, covered: &mut BTreeSet<Vertex>, size: usize) -> usize {
        if idx == edges.len() {
            return size;
        }
        let mut best = go(edges, idx + 1, covered, size);
        let e = edges[idx];
        if e.iter().all(|v| !covered.contains(v)) {
            for &v in e {
                covered.insert(v);
            }
            best = best.max(go(edges, idx + 1, covered, size + 1));
            for &v in e {
                covered.remove(&v);
            }
        }
        best
    }
    go(&edges, 0, &mut BTreeSet::new(), 0)
}

/// Independence helper shared with the rounding module's profile tests.
pub fn is_independent_set(h: &Hypergraph, s: &VertexSet) -> bool {
    h.is_independent(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{extremal_family, make_hk, make_hk_star, script_h, Family};
    use crate::hypergraph::classify_matching;
    use crate::hypergraph::MatchingClass;
    use crate::num::rat;
    use crate::rng;
    use itertools::Itertools;
    use rand::Rng;

    const BUDGET: u64 = 5_000_000;

    #[test]
    fn max_matching_on_extremal_host() {
        let h = make_hk(9, 2, 3).unwrap();
        let res = max_matching(&h, BUDGET);
        assert_eq!(res.status, SolveStatus::Found);
        assert_eq!(res.matching_edges().unwrap().len(), 2);
    }

    #[test]
    fn max_matching_trivial_cases() {
        let empty = Hypergraph::new(6, 3).unwrap();
        assert_eq!(matching_number(&empty, BUDGET).unwrap(), 0);

        let mut disjoint = Hypergraph::new(9, 3).unwrap();
        disjoint.add_edge(vec![1, 2, 3]).unwrap();
        disjoint.add_edge(vec![4, 5, 6]).unwrap();
        disjoint.add_edge(vec![7, 8, 9]).unwrap();
        assert_eq!(matching_number(&disjoint, BUDGET).unwrap(), 3);
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let h = make_hk_star(9, 4, 3).unwrap();
        let res = max_matching(&h, 3);
        assert_eq!(res.status, SolveStatus::BudgetExceeded);
        assert!(res.matching_edges().is_some());
    }

    #[test]
    fn perfect_matching_cases() {
        let mut complete = Hypergraph::new(6, 3).unwrap();
        for c in (1u32..=6).combinations(3) {
            complete.add_edge(c).unwrap();
        }
        assert_eq!(
            has_perfect_matching(&complete, BUDGET).status,
            SolveStatus::Found
        );

        let h = make_hk(9, 2, 3).unwrap();
        assert_eq!(
            has_perfect_matching(&h, BUDGET).status,
            SolveStatus::ExhaustedNone
        );

        let lifted = script_h(8, 2, 4).unwrap();
        let res = has_perfect_matching_partite(&lifted, BUDGET);
        assert_eq!(res.status, SolveStatus::Found);
        assert_eq!(
            classify_matching(lifted.base(), res.matching_edges().unwrap()),
            MatchingClass::Perfect
        );
    }

    #[test]
    fn unbalanced_partite_has_no_pm() {
        let h = script_h(9, 2, 3).unwrap(); // 2 colors over 9 vertices
        assert_eq!(
            has_perfect_matching_partite(&h, BUDGET).status,
            SolveStatus::ExhaustedNone
        );
    }

    #[test]
    fn rainbow_single_color() {
        let mut f1 = Hypergraph::new(4, 4).unwrap();
        f1.add_edge(vec![1, 2, 3, 4]).unwrap();
        let f = Family::new(vec![f1]).unwrap();
        let res = rainbow_matching(&f, BUDGET);
        assert_eq!(res.status, SolveStatus::Found);
        assert_eq!(res.rainbow_witness().unwrap()[&0], vec![1, 2, 3, 4]);
        assert!(validate_rainbow(&f, res.rainbow_witness().unwrap()));
    }

    #[test]
    fn extremal_family_has_no_rainbow_matching() {
        let f = extremal_family(9, 3).unwrap();
        let res = rainbow_matching(&f, BUDGET);
        assert_eq!(res.status, SolveStatus::ExhaustedNone);
    }

    #[test]
    fn complete_colors_have_rainbow_matching() {
        let mut complete = Hypergraph::new(8, 4).unwrap();
        for c in (1u32..=8).combinations(4) {
            complete.add_edge(c).unwrap();
        }
        let f = Family::new(vec![complete; 2]).unwrap();
        let res = rainbow_matching(&f, BUDGET);
        assert_eq!(res.status, SolveStatus::Found);
        assert!(validate_rainbow(&f, res.rainbow_witness().unwrap()));
    }

    #[test]
    fn equivalence_on_extremal_and_random_families() {
        let f = extremal_family(9, 3).unwrap();
        assert!(rainbow_equiv_check(&f, BUDGET).unwrap());

        let mut rng = rng::stream(11);
        for trial in 0..30 {
            let k = if trial % 2 == 0 { 2 } else { 3 };
            let t = 2 + (trial % 2);
            let n = (k * t) as Vertex;
            let mut graphs = Vec::new();
            for _ in 0..t {
                let mut g = Hypergraph::new(n, k).unwrap();
                for combo in (1..=n).combinations(k) {
                    if rng.gen_bool(0.4) {
                        g.add_edge(combo).unwrap();
                    }
                }
                graphs.push(g);
            }
            let fam = Family::new(graphs).unwrap();
            assert!(rainbow_equiv_check(&fam, BUDGET).unwrap());
        }
    }

    #[test]
    fn degree_checked_rainbow_examples() {
        // t = 1 with positive minimum degree: any edge at the minimum-degree
        // vertex works.
        let g1 = make_hk_star(6, 2, 3).unwrap();
        let f = Family::new(vec![g1]).unwrap();
        let res = rainbow_with_degree_check(&f, 1, BUDGET).unwrap();
        assert_eq!(res.status, SolveStatus::Found);
        assert!(res.warnings.is_empty());

        // Hypothesis-violating extremal family: warning plus exhaustion.
        let f = extremal_family(9, 3).unwrap();
        let res = rainbow_with_degree_check(&f, 3, BUDGET).unwrap();
        assert_eq!(res.status, SolveStatus::ExhaustedNone);
        assert!(!res.warnings.is_empty());
    }

    #[test]
    fn nu_monotone_under_edge_insertion() {
        let mut rng = rng::stream(5);
        let mut h = Hypergraph::new(7, 3).unwrap();
        let mut last = 0;
        for combo in (1u32..=7).combinations(3) {
            if rng.gen_bool(0.5) {
                h.add_edge(combo).unwrap();
                let nu = matching_number(&h, BUDGET).unwrap();
                assert!(nu >= last);
                last = nu;
            }
        }
    }

    #[test]
    fn solver_matches_exhaustive_oracle() {
        let mut rng = rng::stream(23);
        for _ in 0..60 {
            let n: Vertex = rng.gen_range(4..=7);
            let mut h = Hypergraph::new(n, 3).unwrap();
            for combo in (1..=n).combinations(3) {
                if rng.gen_bool(0.35) {
                    h.add_edge(combo).unwrap();
                }
            }
            assert_eq!(
                matching_number(&h, BUDGET).unwrap(),
                exhaustive_max_matching(&h)
            );
        }
    }

    #[test]
    fn stability_lemma_probe() {
        // H_3^*(12,2): hypothesis holds for generous eta, closeness is exact.
        let h = make_hk_star(12, 2, 3).unwrap();
        match check_stability_lemma(&h, &rat(2, 5), BUDGET).unwrap() {
            StabilityOutcome::Implied { deficiency } => assert_eq!(deficiency, 0),
            other => panic!("expected Implied, got {other:?}"),
        }
        // Tiny eta: the size threshold is out of reach, the probe is vacuous.
        match check_stability_lemma(&h, &rat(1, 100), BUDGET).unwrap() {
            StabilityOutcome::Vacuous { .. } => {}
            other => panic!("expected Vacuous, got {other:?}"),
        }

        // A stable graph with a spread matching is vacuous via the matching number.
        let mut complete = Hypergraph::new(12, 3).unwrap();
        for c in (1u32..=12).combinations(3) {
            complete.add_edge(c).unwrap();
        }
        match check_stability_lemma(&complete, &rat(2, 5), BUDGET).unwrap() {
            StabilityOutcome::Vacuous { reason } => assert!(reason.contains("matching number")),
            other => panic!("expected Vacuous, got {other:?}"),
        }

        // Non-stable input is rejected.
        let mut bad = Hypergraph::new(12, 3).unwrap();
        bad.add_edge(vec![10, 11, 12]).unwrap();
        assert!(check_stability_lemma(&bad, &rat(1, 10), BUDGET).is_err());

        // H_3(12,2) is stable with matching number 2; for eta large enough
        // the deficiency against H_3^*(12,2) is zero.
        let h = make_hk(12, 2, 3).unwrap();
        match check_stability_lemma(&h, &rat(2, 5), BUDGET).unwrap() {
            StabilityOutcome::Implied { deficiency } => assert_eq!(deficiency, 0),
            other => panic!("expected Implied, got {other:?}"),
        }
    }

    #[test]
    fn extremal_host_matching_number() {
        // min(m, n/k): every edge meets [m].
        for (n, m, k) in [(9u32, 2u32, 3usize), (12, 3, 3), (8, 2, 4), (12, 2, 4)] {
            let h = make_hk(n, m, k).unwrap();
            let nu = matching_number(&h, BUDGET).unwrap();
            assert_eq!(nu, m.min(n / k as u32) as usize);
        }
    }

    #[test]
    fn rainbow_equiv_rejects_unbalanced() {
        let f = Family::new(vec![make_hk(7, 2, 3).unwrap(); 2]).unwrap();
        assert!(rainbow_equiv_check(&f, BUDGET).is_err());
    }

    #[test]
    fn equiv_check_errors_when_budget_too_small() {
        let f = extremal_family(9, 3).unwrap();
        match rainbow_equiv_check(&f, 2) {
            Err(Error::Inconclusive(_)) => {}
            other => panic!("expected Inconclusive, got {other:?}"),
        }
    }
}
