//! Absorbing matchings for balanced `(1,k)`-partite hosts.
//!
//! A balanced `k(k+1)`-set `Q` absorbs a balanced `(k+1)`-set `R` when both
//! `H[Q]` and `H[Q ∪ R]` have perfect matchings. A small family of pairwise
//! disjoint absorbing sets yields a matching `M` such that any small balanced
//! leftover `S` can be folded into `V(M)` at the end of the far-case
//! pipeline.
//!
//! The family is drawn by sampling balanced `k(k+1)`-sets independently with
//! probability `p = c n / (C(n/k, k) C(n, k²))`; rather than enumerating the
//! full candidate pool, the implementation draws the sample count from the
//! matching binomial law and unranks uniform candidates, which is the same
//! distribution. Desk-scale `n` cannot satisfy the lemma's "n large" regime,
//! so each run reports which of the three probabilistic bounds actually held
//! instead of assuming them.

use std::collections::BTreeSet;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::Distribution;

use crate::exact::{has_perfect_matching, SolveStatus};
use crate::hypergraph::{Edge, PartiteGraph, Vertex, VertexSet};
use crate::num::{binomial, rat_int, rat_to_f64, Rat};
use crate::rng;
use crate::{Error, Result};

/// Constants of the absorbing construction.
#[derive(Debug, Clone)]
pub struct AbsorbConfig {
    /// Degree-slack constant, `0 < b < 1/k`.
    pub b: Rat,
    /// Sampling constant `c > 0`; the stated admissible window for `c`
    /// is advisory and only produces a warning when violated.
    pub c: Rat,
    pub seed: u64,
    /// Resampling attempts when the drawn family is unusable.
    pub retries: u32,
    /// Number of random `R`-probes used for the pool diagnostic.
    pub probe_samples: usize,
    /// Node budget for each perfect-matching call.
    pub budget: u64,
}

impl AbsorbConfig {
    pub fn new(b: Rat, c: Rat, seed: u64) -> Self {
        AbsorbConfig {
            b,
            c,
            seed,
            retries: 8,
            probe_samples: 20,
            budget: 2_000_000,
        }
    }
}

/// Stage counts and bound checks for one build.
#[derive(Debug, Clone)]
pub struct AbsorbDiagnostics {
    pub sampled: u64,
    pub after_intersect_prune: u64,
    pub after_nonabsorbing_prune: u64,
    pub min_pool_per_r_probed: u64,
    pub matching_size: u64,
    pub intersecting_pairs: u64,
    /// Named probabilistic bounds and whether they held on this run.
    pub bound_checks: Vec<(String, bool)>,
    pub warnings: Vec<String>,
    pub attempts: u32,
}

/// The absorbing matching together with its generating family. Each family
/// member keeps its own perfect matching so the absorb step can swap the
/// edges inside one set without disturbing the others.
#[derive(Debug, Clone)]
pub struct AbsorbingMatching {
    family: Vec<VertexSet>,
    per_set_edges: Vec<Vec<Edge>>,
    c: Rat,
    host_n: u64,
}

impl AbsorbingMatching {
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.per_set_edges.iter().flatten().cloned().collect();
        out.sort();
        out
    }

    pub fn family(&self) -> &[VertexSet] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.per_set_edges.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn covered(&self) -> VertexSet {
        VertexSet::from_iter(self.per_set_edges.iter().flatten().flatten().copied())
    }
}

fn check_balanced_set(h: &PartiteGraph, s: &VertexSet, want_x: usize, label: &str) -> Result<()> {
    let k = h.k();
    if !h.is_balanced_set(s) || s.iter().filter(|&v| h.is_x_vertex(v)).count() != want_x {
        return Err(Error::InvalidInput(format!(
            "{label} must be balanced with {want_x} X-vertices and {} V-vertices",
            want_x * k
        )));
    }
    for v in s.iter() {
        if !h.base().is_active(v) {
            return Err(Error::InvalidInput(format!(
                "{label} contains inactive vertex {v}"
            )));
        }
    }
    Ok(())
}

/// Do both `H[Q]` and `H[Q ∪ R]` have perfect matchings?
pub fn is_absorbing(h: &PartiteGraph, q: &VertexSet, r: &VertexSet, budget: u64) -> Result<bool> {
    let k = h.k();
    check_balanced_set(h, q, k, "Q")?;
    check_balanced_set(h, r, 1, "R")?;
    if q.intersects(r) {
        return Err(Error::InvalidInput("Q and R overlap".into()));
    }
    let inner = has_perfect_matching(&h.base().induced(q), budget);
    if inner.status != SolveStatus::Found {
        return Ok(false);
    }
    let joint = has_perfect_matching(&h.base().induced(&q.union(r)), budget);
    Ok(joint.status == SolveStatus::Found)
}

/// `|L(R)|`, the number of `R`-absorbing balanced `k(k+1)`-sets, exactly if
/// at most `cap`, else `cap` (saturated).
pub fn count_absorbing(h: &PartiteGraph, r: &VertexSet, cap: u64, budget: u64) -> Result<u64> {
    check_balanced_set(h, r, 1, "R")?;
    let k = h.k();
    let xs: Vec<Vertex> = h.x_class().filter(|&v| !r.contains(v)).collect();
    let vs: Vec<Vertex> = h.v_class().filter(|&v| !r.contains(v)).collect();
    let mut count = 0u64;
    use itertools::Itertools;
    for xc in xs.iter().copied().combinations(k) {
        for vc in vs.iter().copied().combinations(k * k) {
            let q = VertexSet::from_iter(xc.iter().copied().chain(vc.iter().copied()));
            if is_absorbing(h, &q, r, budget)? {
                count += 1;
                if count >= cap {
                    return Ok(cap);
                }
            }
        }
    }
    Ok(count)
}

fn unrank_combination(pool: &[Vertex], r: usize, mut rank: BigUint) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(r);
    let mut idx = 0usize;
    let mut left = r;
    while left > 0 {
        let rest = (pool.len() - idx - 1) as u64;
        let with_this = binomial(rest, (left - 1) as u64);
        if rank < with_this {
            out.push(pool[idx]);
            left -= 1;
        } else {
            rank -= with_this;
        }
        idx += 1;
    }
    out
}

fn draw_balanced_sets(
    xs: &[Vertex],
    vs: &[Vertex],
    k: usize,
    count: u64,
    rng: &mut impl Rng,
) -> BTreeSet<VertexSet> {
    let t_x = binomial(xs.len() as u64, k as u64);
    let t_v = binomial(vs.len() as u64, (k * k) as u64);
    let total = &t_x * &t_v;
    let mut out = BTreeSet::new();
    let mut guard = 0u64;
    while (out.len() as u64) < count && guard < 16 * count + 64 {
        guard += 1;
        let rank = rng.gen_biguint_below(&total);
        let x_rank = &rank / &t_v;
        let v_rank = &rank % &t_v;
        let xc = unrank_combination(xs, k, x_rank);
        let vc = unrank_combination(vs, k * k, v_rank);
        out.insert(VertexSet::from_iter(xc.into_iter().chain(vc)));
    }
    out
}

fn random_balanced_r(
    h: &PartiteGraph,
    forbidden: Option<&VertexSet>,
    rng: &mut impl Rng,
) -> Option<VertexSet> {
    let xs: Vec<Vertex> = h
        .x_class()
        .filter(|v| forbidden.map(|f| !f.contains(*v)).unwrap_or(true))
        .collect();
    let vs: Vec<Vertex> = h
        .v_class()
        .filter(|v| forbidden.map(|f| !f.contains(*v)).unwrap_or(true))
        .collect();
    let k = h.k();
    if xs.is_empty() || vs.len() < k {
        return None;
    }
    let x = xs[rng.gen_range(0..xs.len())];
    let mut picked = BTreeSet::new();
    while picked.len() < k {
        picked.insert(vs[rng.gen_range(0..vs.len())]);
    }
    Some(VertexSet::from_iter(picked.into_iter().chain([x])))
}

/// Samples, prunes, and assembles the absorbing matching. Deterministic for
/// a fixed seed. Retries with fresh substreams when a drawn family yields an
/// empty usable core; errors once retries are exhausted.
pub fn build_absorbing_matching(
    h: &PartiteGraph,
    cfg: &AbsorbConfig,
) -> Result<(AbsorbingMatching, AbsorbDiagnostics)> {
    let k = h.k();
    if !h.is_balanced() {
        return Err(Error::InvalidInput(
            "absorbing construction needs a balanced host".into(),
        ));
    }
    let n = h.v_class().count() as u64;
    let mut warnings = Vec::new();

    if cfg.b <= Rat::zero() || cfg.b >= Rat::one() / rat_int(k as u64) {
        warnings.push(format!("b outside (0, 1/{k})"));
    }
    if cfg.c <= Rat::zero() {
        return Err(Error::InvalidInput("c must be positive".into()));
    }
    // Advisory window for c from the absorbing lemma; it references c on both
    // sides in the source, so it is reported, never enforced.
    {
        let k_u = k as u64;
        let kfac: u64 = (1..=k_u).product();
        let b_k = num_traits::pow::pow(cfg.b.clone(), k);
        let k_k = rat_int(k_u.pow(k as u32));
        let first = b_k * k_k / rat_int(6 * kfac.pow(k as u32));
        let first = &first * &first;
        let c2 = &cfg.c * &cfg.c;
        let base = rat_int(2 * (k_u).pow(3) * (k_u + 1)) * c2;
        let second_inv = num_traits::pow::pow(base, 10);
        let within = cfg.c < first && (&cfg.c * &second_inv) < Rat::one();
        if !within {
            warnings.push("c outside the advisory window".into());
        }
    }
    // Degree hypothesis of the absorbing lemma, recorded not enforced.
    {
        let bound = (rat_int(1) / rat_int(2) + &cfg.b)
            * rat_int(u64::try_from(binomial(n - 1, k as u64 - 1)).unwrap_or(u64::MAX));
        let mut ok = true;
        for x in h.x_class() {
            let link = h.base().link(&VertexSet::from_iter([x]))?;
            if rat_int(link.min_degree(1)?) <= bound {
                ok = false;
                break;
            }
        }
        if !ok {
            warnings.push("degree hypothesis of the absorbing lemma violated".into());
        }
    }

    let xs: Vec<Vertex> = h.x_class().collect();
    let vs: Vec<Vertex> = h.v_class().collect();
    let t_x = binomial(xs.len() as u64, k as u64);
    let t_v = binomial(vs.len() as u64, (k * k) as u64);
    let total = &t_x * &t_v;
    if total.is_zero() {
        return Err(Error::AbsorptionFailed(
            "no balanced k(k+1)-sets exist".into(),
        ));
    }
    let p = (&cfg.c * rat_int(n)) / Rat::from_integer(total.clone().into());
    let p_f = rat_to_f64(&p).min(1.0);

    let mut last_diag: Option<AbsorbDiagnostics> = None;
    for attempt in 0..=cfg.retries {
        let mut rng = rng::substream(cfg.seed, attempt as u64);
        let sample_count = if let Some(t_u64) = total.to_u64() {
            rand_distr::Binomial::new(t_u64, p_f)
                .map(|d| d.sample(&mut rng))
                .unwrap_or(0)
        } else {
            let lambda = rat_to_f64(&(&cfg.c * rat_int(n))).max(1e-12);
            rand_distr::Poisson::new(lambda)
                .map(|d| d.sample(&mut rng) as u64)
                .unwrap_or(0)
        };
        let family: Vec<VertexSet> = draw_balanced_sets(&xs, &vs, k, sample_count, &mut rng)
            .into_iter()
            .collect();
        let sampled = family.len() as u64;

        // Delete the lexicographically larger member of each intersecting
        // pair, scanning pairs in sorted order.
        let mut alive = vec![true; family.len()];
        let mut intersecting_pairs = 0u64;
        for i in 0..family.len() {
            if !alive[i] {
                continue;
            }
            for j in (i + 1)..family.len() {
                if alive[j] && family[i].intersects(&family[j]) {
                    intersecting_pairs += 1;
                    alive[j] = false;
                }
            }
        }
        let surviving: Vec<VertexSet> = family
            .iter()
            .zip(&alive)
            .filter(|(_, &a)| a)
            .map(|(q, _)| q.clone())
            .collect();
        let after_intersect = surviving.len() as u64;

        // Keep only sets whose interior has a perfect matching; membership in
        // any L(R) requires it.
        let mut kept: Vec<VertexSet> = Vec::new();
        let mut per_set_edges: Vec<Vec<Edge>> = Vec::new();
        for q in surviving {
            let res = has_perfect_matching(&h.base().induced(&q), cfg.budget);
            if res.status == SolveStatus::Found {
                per_set_edges.push(res.matching_edges().unwrap_or(&[]).to_vec());
                kept.push(q);
            }
        }
        let after_absorbing = kept.len() as u64;

        // Probe the per-R pool size on random balanced R's.
        let mut min_pool = u64::MAX;
        let mut probed = 0usize;
        let mut probe_rng = rng::substream(cfg.seed, 1_000_000 + attempt as u64);
        while probed < cfg.probe_samples {
            let Some(r) = random_balanced_r(h, None, &mut probe_rng) else {
                break;
            };
            probed += 1;
            let pool = kept
                .iter()
                .filter(|q| !q.intersects(&r))
                .filter(|q| is_absorbing(h, q, &r, cfg.budget).unwrap_or(false))
                .count() as u64;
            min_pool = min_pool.min(pool);
        }
        if min_pool == u64::MAX {
            min_pool = 0;
        }

        let matching_size = per_set_edges.iter().map(Vec::len).sum::<usize>() as u64;
        let size_bound_ok = rat_int(sampled) <= rat_int(2) * &cfg.c * rat_int(n);
        let c_f = rat_to_f64(&cfg.c);
        let pool_bound_ok = (min_pool as f64) >= c_f.powf(1.5) * (n as f64) / 2.0;
        let pairs_bound_ok = (intersecting_pairs as f64) <= 2.0 * c_f.powf(1.9) * (n as f64);
        let diag = AbsorbDiagnostics {
            sampled,
            after_intersect_prune: after_intersect,
            after_nonabsorbing_prune: after_absorbing,
            min_pool_per_r_probed: min_pool,
            matching_size,
            intersecting_pairs,
            bound_checks: vec![
                ("family size <= 2cn".into(), size_bound_ok),
                ("probed pool >= c^1.5 n / 2".into(), pool_bound_ok),
                ("intersecting pairs <= 2 c^1.9 n".into(), pairs_bound_ok),
            ],
            warnings: warnings.clone(),
            attempts: attempt + 1,
        };

        if kept.is_empty() {
            last_diag = Some(diag);
            continue;
        }
        let am = AbsorbingMatching {
            family: kept,
            per_set_edges,
            c: cfg.c.clone(),
            host_n: n,
        };
        debug_assert!(crate::hypergraph::Matching::try_new(am.edges()).is_ok());
        debug_assert!(matches!(
            crate::hypergraph::classify_matching(&h.base().induced(&am.covered()), &am.edges()),
            crate::hypergraph::MatchingClass::Perfect
        ));
        return Ok((am, diag));
    }
    let detail = last_diag
        .map(|d| format!("sampled {} sets, none usable after pruning", d.sampled))
        .unwrap_or_else(|| "sampling produced nothing".into());
    Err(Error::AbsorptionFailed(format!(
        "no usable absorbing family after {} attempts: {detail}",
        cfg.retries + 1
    )))
}

/// Folds a balanced leftover `S` into the absorbing matching: partitions `S`
/// into balanced `(k+1)`-sets, matches each to an unused absorbing family
/// member, and re-solves that member's interior. Falls back to one exact
/// solve on `H[V(M) ∪ S]` when the family cannot host every piece.
pub fn absorb(
    h: &PartiteGraph,
    am: &AbsorbingMatching,
    s: &VertexSet,
    budget: u64,
) -> Result<Vec<Edge>> {
    if s.is_empty() {
        return Ok(am.edges());
    }
    let covered = am.covered();
    if covered.intersects(s) {
        return Err(Error::InvalidInput("S overlaps V(M)".into()));
    }
    if !h.is_balanced_set(s) {
        return Err(Error::InvalidInput("S is not balanced".into()));
    }
    let k = h.k();
    let window = (k as f64 + 1.0) * rat_to_f64(&am.c).powf(1.5) * (am.host_n as f64) / 2.0;
    let mut warnings = Vec::new();
    if (s.len() as f64) > window {
        warnings.push(format!(
            "|S| = {} exceeds the absorb window {window:.3}",
            s.len()
        ));
    }

    // Partition S into balanced (k+1)-sets: each X-vertex takes the k
    // lexicographically smallest unused V-vertices.
    let s_x: Vec<Vertex> = s.iter().filter(|&v| h.is_x_vertex(v)).collect();
    let mut s_v: Vec<Vertex> = s.iter().filter(|&v| !h.is_x_vertex(v)).collect();
    let mut pieces: Vec<VertexSet> = Vec::new();
    for &x in &s_x {
        let take: Vec<Vertex> = s_v.drain(..k).collect();
        pieces.push(VertexSet::from_iter(take.into_iter().chain([x])));
    }

    let mut per_set_edges = am.per_set_edges.clone();
    let mut used = vec![false; am.family.len()];
    let mut unplaced: Vec<VertexSet> = Vec::new();
    for r in pieces {
        let mut placed = false;
        for (j, q) in am.family.iter().enumerate() {
            if used[j] || q.intersects(&r) {
                continue;
            }
            if is_absorbing(h, q, &r, budget)? {
                let joint = has_perfect_matching(&h.base().induced(&q.union(&r)), budget);
                if joint.status == SolveStatus::Found {
                    per_set_edges[j] = joint.matching_edges().unwrap_or(&[]).to_vec();
                    used[j] = true;
                    placed = true;
                    break;
                }
            }
        }
        if !placed {
            unplaced.push(r);
        }
    }

    let result: Vec<Edge> = if unplaced.is_empty() {
        let mut out: Vec<Edge> = per_set_edges.into_iter().flatten().collect();
        out.sort();
        out
    } else {
        // Family exhausted for some pieces: solve the whole union exactly.
        let union = covered.union(s);
        let res = has_perfect_matching(&h.base().induced(&union), budget);
        if res.status != SolveStatus::Found {
            return Err(Error::AbsorptionFailed(format!(
                "{} pieces unplaced and the exact fallback found no perfect matching ({:?})",
                unplaced.len(),
                res.status
            )));
        }
        res.matching_edges().unwrap_or(&[]).to_vec()
    };

    let target = covered.union(s);
    match crate::hypergraph::classify_matching(&h.base().induced(&target), &result) {
        crate::hypergraph::MatchingClass::Perfect => Ok(result),
        other => Err(Error::AbsorptionFailed(format!(
            "assembled matching failed re-validation: {other:?}; warnings: {warnings:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::complete_partite;
    use crate::hypergraph::classify_matching;
    use crate::hypergraph::MatchingClass;
    use crate::num::rat;

    const BUDGET: u64 = 2_000_000;

    fn small_complete() -> PartiteGraph {
        complete_partite(12, 4, 3).unwrap()
    }

    #[test]
    fn absorbing_predicate_on_complete_host() {
        let h = small_complete();
        // Q: 3 X-vertices and 9 V-vertices, R: 1 X + 3 V, disjoint.
        let q = VertexSet::from_iter([1, 2, 3, 4, 5, 6, 7, 8, 9, 13, 14, 15]);
        let r = VertexSet::from_iter([10, 11, 12, 16]);
        assert!(is_absorbing(&h, &q, &r, BUDGET).unwrap());

        // Overlap is an input error.
        let r_bad = VertexSet::from_iter([9, 10, 11, 16]);
        assert!(is_absorbing(&h, &q, &r_bad, BUDGET).is_err());

        // Wrong sizes are input errors.
        let q_bad = VertexSet::from_iter([1, 2, 3, 13]);
        assert!(is_absorbing(&h, &q_bad, &r, BUDGET).is_err());
    }

    #[test]
    fn empty_interior_is_not_absorbing() {
        let mut h = PartiteGraph::new(12, 4, 3).unwrap();
        // One edge through R's X-vertex only; Q's interior stays empty.
        h.add_edge(vec![10, 11, 12, 16]).unwrap();
        let q = VertexSet::from_iter([1, 2, 3, 4, 5, 6, 7, 8, 9, 13, 14, 15]);
        let r = VertexSet::from_iter([10, 11, 12, 16]);
        assert!(!is_absorbing(&h, &q, &r, BUDGET).unwrap());
    }

    #[test]
    fn count_absorbing_on_complete_host() {
        let h = small_complete();
        let r = VertexSet::from_iter([10, 11, 12, 16]);
        // Exactly C(3,3) * C(9,9) = 1 candidate remains, and it absorbs.
        assert_eq!(count_absorbing(&h, &r, 100, BUDGET).unwrap(), 1);

        let empty = PartiteGraph::new(12, 4, 3).unwrap();
        assert_eq!(count_absorbing(&empty, &r, 100, BUDGET).unwrap(), 0);
    }

    #[test]
    fn count_absorbing_saturates_at_cap() {
        let h = complete_partite(16, 4, 3).unwrap();
        let r = VertexSet::from_iter([14, 15, 16, 20]);
        assert_eq!(count_absorbing(&h, &r, 5, BUDGET).unwrap(), 5);
    }

    #[test]
    fn count_absorbing_matches_closed_form_on_complete_host() {
        // On a complete host every disjoint balanced k(k+1)-set absorbs, so
        // |L(R)| = C(m-1, k) * C(n-k, k^2).
        let h = complete_partite(15, 5, 3).unwrap();
        let r = VertexSet::from_iter([13, 14, 15, 20]);
        let expect =
            u64::try_from(crate::num::binomial(4, 3) * crate::num::binomial(12, 9)).unwrap();
        assert_eq!(expect, 4 * 220);
        assert_eq!(count_absorbing(&h, &r, 10_000, BUDGET).unwrap(), expect);
    }

    #[test]
    fn build_produces_valid_matching() {
        let h = complete_partite(30, 10, 3).unwrap();
        let cfg = AbsorbConfig::new(rat(1, 10), rat(1, 20), 7);
        let (am, diag) = build_absorbing_matching(&h, &cfg).unwrap();
        // |M| <= 2 k c n = 9 at c = 1/20, n = 30.
        assert!(am.len() as u64 <= 9);
        assert_eq!(diag.matching_size, am.len() as u64);
        assert!(diag.sampled >= diag.after_intersect_prune);
        assert!(diag.after_intersect_prune >= diag.after_nonabsorbing_prune);
        let induced = h.base().induced(&am.covered());
        assert_eq!(
            classify_matching(&induced, &am.edges()),
            MatchingClass::Perfect
        );
    }

    #[test]
    fn build_is_deterministic() {
        let h = complete_partite(30, 10, 3).unwrap();
        let cfg = AbsorbConfig::new(rat(1, 10), rat(1, 20), 11);
        let (am1, d1) = build_absorbing_matching(&h, &cfg).unwrap();
        let (am2, d2) = build_absorbing_matching(&h, &cfg).unwrap();
        assert_eq!(am1.edges(), am2.edges());
        assert_eq!(d1.sampled, d2.sampled);
        assert_eq!(d1.attempts, d2.attempts);
    }

    #[test]
    fn build_fails_on_empty_host() {
        let h = PartiteGraph::new(12, 4, 3).unwrap();
        let cfg = AbsorbConfig::new(rat(1, 10), rat(1, 4), 3);
        assert!(build_absorbing_matching(&h, &cfg).is_err());
    }

    #[test]
    fn absorb_handles_empty_and_small_leftovers() {
        let h = complete_partite(30, 10, 3).unwrap();
        let cfg = AbsorbConfig::new(rat(1, 10), rat(2, 5), 19);
        let (am, _) = build_absorbing_matching(&h, &cfg).unwrap();

        // S = {} returns M unchanged.
        assert_eq!(
            absorb(&h, &am, &VertexSet::new(), BUDGET).unwrap(),
            am.edges()
        );

        // A balanced 4-set disjoint from V(M).
        let covered = am.covered();
        let x = h.x_class().find(|v| !covered.contains(*v)).unwrap();
        let vs: Vec<Vertex> = h
            .v_class()
            .filter(|v| !covered.contains(*v))
            .take(3)
            .collect();
        let s = VertexSet::from_iter(vs.into_iter().chain([x]));
        let out = absorb(&h, &am, &s, BUDGET).unwrap();
        let target = covered.union(&s);
        assert_eq!(
            classify_matching(&h.base().induced(&target), &out),
            MatchingClass::Perfect
        );

        // Overlapping S is rejected.
        let overlap = VertexSet::from_iter(covered.iter().take(4));
        assert!(absorb(&h, &am, &overlap, BUDGET).is_err());
    }
}
