//! Generators for the extremal hosts `H_k(n,m)` and `H_k^*(n,m)`, the
//! color-lift of a family into a `(1,k)`-partite `(k+1)`-graph, and seeded
//! families exceeding the vertex-degree threshold.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::hypergraph::{Hypergraph, PartiteGraph, Vertex};
use crate::num::binomial;
use crate::rng;
use crate::{Error, Result};

/// An ordered list of `k`-graphs (the colors) on a common vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    n: Vertex,
    k: usize,
    graphs: Vec<Hypergraph>,
}

impl Family {
    pub fn new(graphs: Vec<Hypergraph>) -> Result<Self> {
        let first = graphs
            .first()
            .ok_or_else(|| Error::InvalidInput("family needs at least one color".into()))?;
        let (n, k) = (first.n(), first.k());
        if graphs.iter().any(|g| g.n() != n || g.k() != k) {
            return Err(Error::InvalidInput(
                "family members disagree on (n, k)".into(),
            ));
        }
        Ok(Family { n, k, graphs })
    }

    pub fn n(&self) -> Vertex {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of colors.
    pub fn t(&self) -> usize {
        self.graphs.len()
    }

    pub fn graphs(&self) -> &[Hypergraph] {
        &self.graphs
    }

    pub fn graph(&self, i: usize) -> &Hypergraph {
        &self.graphs[i]
    }
}

/// Which bound a [`ThresholdSpec`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdKind {
    /// Minimum vertex degree strictly above `C(n-1,k-1) - C(n-n/k,k-1)`.
    VertexDegreeMain,
    /// Edge count strictly above the rainbow Erdős bound
    /// `max(C(kt-1,k), C(n,k) - C(n-t+1,k))`.
    RainbowEmc,
}

/// A degree or size bound a family is tested against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdSpec {
    pub n: Vertex,
    pub k: usize,
    pub t: usize,
    pub kind: ThresholdKind,
    pub value: u64,
}

impl ThresholdSpec {
    /// The main vertex-degree threshold `C(n-1,k-1) - C(n-n/k,k-1)`.
    pub fn vertex_degree_main(n: Vertex, k: usize, t: usize) -> Result<Self> {
        if k == 0 || !(n as usize).is_multiple_of(k) {
            return Err(Error::InvalidInput(format!("{k} does not divide {n}")));
        }
        let n64 = n as u64;
        let k64 = k as u64;
        let value = binomial(n64 - 1, k64 - 1) - binomial(n64 - n64 / k64, k64 - 1);
        let value = u64::try_from(value)
            .map_err(|_| Error::InvalidInput("threshold exceeds u64".into()))?;
        Ok(ThresholdSpec {
            n,
            k,
            t,
            kind: ThresholdKind::VertexDegreeMain,
            value,
        })
    }

    /// The rainbow Erdős matching bound for `t` colors.
    pub fn rainbow_emc(n: Vertex, k: usize, t: usize) -> Result<Self> {
        let (n64, k64, t64) = (n as u64, k as u64, t as u64);
        if k64 * t64 > n64 {
            return Err(Error::InvalidInput("t k > n".into()));
        }
        let a = binomial(k64 * t64 - 1, k64);
        let b = binomial(n64, k64) - binomial(n64 - t64 + 1, k64);
        let value = u64::try_from(a.max(b))
            .map_err(|_| Error::InvalidInput("threshold exceeds u64".into()))?;
        Ok(ThresholdSpec {
            n,
            k,
            t,
            kind: ThresholdKind::RainbowEmc,
            value,
        })
    }
}

/// `H_k(n,m)`: all `k`-subsets of `[n]` meeting both `[m]` and its complement.
///
/// Parameters outside the extremal range `2 ≤ m ≤ n/k` are accepted; the
/// returned warning names the violation.
pub fn make_hk_checked(n: Vertex, m: Vertex, k: usize) -> Result<(Hypergraph, Option<String>)> {
    if m < 1 || m >= n {
        return Err(Error::InvalidInput(format!("m = {m} outside 1..{n}")));
    }
    let warning = if m < 2 || m as usize * k > n as usize {
        Some(format!(
            "m = {m} outside the extremal range 2..={}",
            n as usize / k
        ))
    } else {
        None
    };
    let mut h = Hypergraph::new(n, k)?;
    for combo in (1..=n).combinations(k) {
        let meets_low = combo[0] <= m;
        let meets_high = combo[k - 1] > m;
        if meets_low && meets_high {
            h.add_edge(combo)?;
        }
    }
    Ok((h, warning))
}

pub fn make_hk(n: Vertex, m: Vertex, k: usize) -> Result<Hypergraph> {
    make_hk_checked(n, m, k).map(|(h, _)| h)
}

/// `H_k^*(n,m)`: all `k`-subsets of `[n]` meeting `[m]`.
pub fn make_hk_star(n: Vertex, m: Vertex, k: usize) -> Result<Hypergraph> {
    if m < 1 || m >= n {
        return Err(Error::InvalidInput(format!("m = {m} outside 1..{n}")));
    }
    let mut h = Hypergraph::new(n, k)?;
    for combo in (1..=n).combinations(k) {
        if combo[0] <= m {
            h.add_edge(combo)?;
        }
    }
    Ok(h)
}

/// Lifts a family to the `(1,k)`-partite `(k+1)`-graph whose edges are
/// `e ∪ {x_i}` for `e ∈ E(F_i)`, with `x_i = n + i`.
pub fn lift_family(f: &Family) -> Result<PartiteGraph> {
    let n = f.n();
    let t = f.t() as Vertex;
    let mut h = PartiteGraph::new(n, t, f.k())?;
    for (i, g) in f.graphs().iter().enumerate() {
        let x = n + 1 + i as Vertex;
        for e in g.edges() {
            let mut lifted = e.clone();
            lifted.push(x);
            h.add_edge(lifted)?;
        }
    }
    Ok(h)
}

/// Recovers `E(F_i)` from a lifted graph: the link of the color vertex `x_i`.
pub fn project_color(h: &PartiteGraph, i: usize) -> Result<Hypergraph> {
    let x = h.n_v() + 1 + i as Vertex;
    if !h.is_x_vertex(x) {
        return Err(Error::InvalidInput(format!("no color vertex at index {i}")));
    }
    h.base().link(&crate::hypergraph::VertexSet::from_iter([x]))
}

/// The lift of `m` copies of `H_k(n,m)`; balanced exactly when `k m = n`.
pub fn script_h(n: Vertex, m: Vertex, k: usize) -> Result<PartiteGraph> {
    let base = make_hk(n, m, k)?;
    let graphs = vec![base; m as usize];
    lift_family(&Family::new(graphs)?)
}

/// The star analogue: the lift of `m` copies of `H_k^*(n,m)`.
pub fn script_h_star(n: Vertex, m: Vertex, k: usize) -> Result<PartiteGraph> {
    let base = make_hk_star(n, m, k)?;
    let graphs = vec![base; m as usize];
    lift_family(&Family::new(graphs)?)
}

/// The complete balanced `(1,k)`-partite host: every `{x} ∪ (k-subset of V)`.
pub fn complete_partite(n: Vertex, m: Vertex, k: usize) -> Result<PartiteGraph> {
    let mut h = PartiteGraph::new(n, m, k)?;
    for x in n + 1..=n + m {
        for combo in (1..=n).combinations(k) {
            let mut e = combo;
            e.push(x);
            h.add_edge(e)?;
        }
    }
    Ok(h)
}

/// `n/k` copies of `H_k(n, n/k - 1)`: sits exactly at the degree threshold
/// and admits no rainbow matching.
pub fn extremal_family(n: Vertex, k: usize) -> Result<Family> {
    if k == 0 || !(n as usize).is_multiple_of(k) {
        return Err(Error::InvalidInput(format!("{k} does not divide {n}")));
    }
    let t = n as usize / k;
    if t < 2 {
        return Err(Error::InvalidInput("n/k must be at least 2".into()));
    }
    let h = make_hk(n, n / k as Vertex - 1, k)?;
    Family::new(vec![h; t])
}

/// True iff every member strictly exceeds the spec's bound.
pub fn verify_threshold(f: &Family, spec: &ThresholdSpec) -> Result<bool> {
    for g in f.graphs() {
        let measured = match spec.kind {
            ThresholdKind::VertexDegreeMain => g.min_degree(1)?,
            ThresholdKind::RainbowEmc => g.edge_count() as u64,
        };
        if measured <= spec.value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded random family with every color strictly above the spec's bound.
///
/// Each color starts from `H_k(n, n/k - 1)`, gains random edges until the
/// bound is strictly exceeded by `slack_extra`, then undergoes random edge
/// churn that preserves the bound. Add-then-churn is biased relative to
/// uniform sampling over the threshold class; it is the tractable generator.
pub fn sample_threshold_family(
    spec: &ThresholdSpec,
    slack_extra: u64,
    seed: u64,
) -> Result<Family> {
    let (n, k, t) = (spec.n, spec.k, spec.t);
    let n64 = n as u64;
    let max_degree = binomial(n64 - 1, k as u64 - 1);
    if max_degree <= spec.value.into() {
        return Err(Error::GenerationFailed(format!(
            "threshold {} unreachable: complete degree is {max_degree}",
            spec.value
        )));
    }
    let all_edges: Vec<Vec<Vertex>> = (1..=n).combinations(k).collect();
    let mut graphs = Vec::with_capacity(t);
    for color in 0..t {
        let mut rng = rng::substream(seed, color as u64);
        let mut g =
            if spec.kind == ThresholdKind::VertexDegreeMain && (n as usize).is_multiple_of(k) {
                make_hk(n, n / k as Vertex - 1, k)?
            } else {
                Hypergraph::new(n, k)?
            };
        let target = spec.value + slack_extra;
        let measure = |g: &Hypergraph| -> Result<u64> {
            Ok(match spec.kind {
                ThresholdKind::VertexDegreeMain => g.min_degree(1)?,
                ThresholdKind::RainbowEmc => g.edge_count() as u64,
            })
        };
        let mut guard = 0usize;
        while measure(&g)? <= target {
            let e = all_edges.choose(&mut rng).expect("edge pool nonempty");
            if !g.contains_edge(e) {
                g.add_edge(e.clone())?;
            }
            guard += 1;
            if guard > all_edges.len() * 64 {
                return Err(Error::GenerationFailed(
                    "bound not reached after churn budget".into(),
                ));
            }
        }
        // Churn: random swap attempts that keep the bound strict.
        let churn_rounds = all_edges.len().min(128);
        for _ in 0..churn_rounds {
            let present: Vec<Vec<Vertex>> = g.edges().cloned().collect();
            let (Some(out_edge), Some(in_edge)) =
                (present.choose(&mut rng), all_edges.choose(&mut rng))
            else {
                break;
            };
            if g.contains_edge(in_edge) || out_edge == in_edge {
                continue;
            }
            let mut trial = g.clone();
            trial.remove_edge(out_edge);
            trial.add_edge(in_edge.clone())?;
            if measure(&trial)? > spec.value {
                g = trial;
            }
        }
        let _ = rng.gen::<u64>();
        graphs.push(g);
    }
    let f = Family::new(graphs)?;
    debug_assert!(verify_threshold(&f, spec)?);
    Ok(f)
}

/// Union of `factors` uniformly random partitions of `[n]` into `k`-sets.
/// Every vertex gets degree `factors` minus rare collisions, so degrees
/// concentrate tightly and pair degrees stay small: the host shape the
/// nibble wants. Requires `k | n`.
pub fn random_regularish_graph(
    n: Vertex,
    k: usize,
    factors: usize,
    seed: u64,
) -> Result<Hypergraph> {
    if k == 0 || !(n as usize).is_multiple_of(k) {
        return Err(Error::InvalidInput(format!("{k} does not divide {n}")));
    }
    let mut h = Hypergraph::new(n, k)?;
    let mut rng = rng::stream(seed);
    let mut verts: Vec<Vertex> = (1..=n).collect();
    for _ in 0..factors {
        verts.shuffle(&mut rng);
        for chunk in verts.chunks(k) {
            let e = chunk.to_vec();
            if !h.contains_edge(&{
                let mut s = e.clone();
                s.sort_unstable();
                s
            }) {
                h.add_edge(e)?;
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{is_stable, VertexSet};
    use crate::num::binomial;

    #[test]
    fn hk_counts() {
        let h = make_hk(6, 2, 3).unwrap();
        assert_eq!(h.edge_count(), 16); // C(6,3) - C(4,3)

        let h = make_hk(4, 1, 3).unwrap();
        assert_eq!(h.edge_count(), 3);
        assert!(h.contains_edge(&vec![1, 2, 3]));
        assert!(h.contains_edge(&vec![1, 2, 4]));
        assert!(h.contains_edge(&vec![1, 3, 4]));

        assert!(make_hk(6, 6, 3).is_err());
        assert!(make_hk(6, 0, 3).is_err());
        let (_, warning) = make_hk_checked(6, 1, 3).unwrap();
        assert!(warning.is_some());
    }

    #[test]
    fn hk_star_counts() {
        let h = make_hk_star(6, 2, 3).unwrap();
        assert_eq!(h.edge_count(), 16);

        // Every triple of [5] meets [4].
        let h = make_hk_star(5, 4, 3).unwrap();
        assert_eq!(h.edge_count(), 10);

        // Containment of the two extremal hosts.
        let plain = make_hk(8, 2, 3).unwrap();
        let star = make_hk_star(8, 2, 3).unwrap();
        assert!(plain.edges().all(|e| star.contains_edge(e)));
    }

    #[test]
    fn degree_formula_matches_enumeration() {
        for k in 2..=4usize {
            for n in (k as Vertex + 1)..=10 {
                for m in 1..=(n / 2).max(1) {
                    if m >= n {
                        continue;
                    }
                    let expect = binomial(n as u64 - 1, k as u64 - 1)
                        - binomial((n - 1 - m) as u64, k as u64 - 1);
                    let h = make_hk(n, m, k).unwrap();
                    let hs = make_hk_star(n, m, k).unwrap();
                    assert_eq!(
                        h.min_degree(1).unwrap(),
                        u64::try_from(expect.clone()).unwrap()
                    );
                    assert_eq!(hs.min_degree(1).unwrap(), u64::try_from(expect).unwrap());
                }
            }
        }
    }

    #[test]
    fn extremal_hosts_are_stable() {
        assert!(is_stable(&make_hk(6, 2, 3).unwrap()));
        assert!(is_stable(&make_hk_star(6, 2, 3).unwrap()));
        assert!(is_stable(&make_hk(8, 2, 4).unwrap()));
        assert!(is_stable(&make_hk_star(9, 3, 3).unwrap()));
    }

    #[test]
    fn lift_single_edge() {
        let mut f1 = Hypergraph::new(4, 4).unwrap();
        f1.add_edge(vec![1, 2, 3, 4]).unwrap();
        let lifted = lift_family(&Family::new(vec![f1]).unwrap()).unwrap();
        assert_eq!(lifted.base().edge_count(), 1);
        assert!(lifted.base().contains_edge(&vec![1, 2, 3, 4, 5]));
    }

    #[test]
    fn lift_edge_count_and_projection() {
        let f = Family::new(vec![make_hk(9, 2, 3).unwrap(); 3]).unwrap();
        let lifted = lift_family(&f).unwrap();
        let per_color = make_hk(9, 2, 3).unwrap().edge_count();
        assert_eq!(lifted.base().edge_count(), 3 * per_color);
        for i in 0..3 {
            let back = project_color(&lifted, i).unwrap();
            let orig = f.graph(i);
            assert_eq!(back.edge_count(), orig.edge_count());
            assert!(orig.edges().all(|e| back.contains_edge(e)));
        }
    }

    #[test]
    fn script_h_shape() {
        let h = script_h(8, 2, 4).unwrap();
        assert_eq!(h.x_class().collect::<Vec<_>>(), vec![9, 10]);
        for e in h.base().edges() {
            let x_hits = e.iter().filter(|&&v| v > 8).count();
            assert_eq!(x_hits, 1);
        }
        assert!(script_h(8, 2, 4).unwrap().is_balanced());
        assert_eq!(script_h(6, 2, 3).unwrap().base().edge_count(), 32);
    }

    #[test]
    fn extremal_family_degrees() {
        let f = extremal_family(9, 3).unwrap();
        assert_eq!(f.t(), 3);
        for g in f.graphs() {
            assert_eq!(g.min_degree(1).unwrap(), 13); // C(8,2) - C(6,2)
        }
        assert!(extremal_family(10, 3).is_err());
    }

    #[test]
    fn threshold_spec_values() {
        let spec = ThresholdSpec::vertex_degree_main(8, 4, 2).unwrap();
        assert_eq!(spec.value, 15); // C(7,3) - C(6,3)
        let spec = ThresholdSpec::vertex_degree_main(12, 4, 3).unwrap();
        assert_eq!(spec.value, 165 - 84); // C(11,3) - C(9,3)
    }

    #[test]
    fn extremal_family_fails_threshold_strictness() {
        let f = extremal_family(8, 4).unwrap();
        let spec = ThresholdSpec::vertex_degree_main(8, 4, 2).unwrap();
        assert!(!verify_threshold(&f, &spec).unwrap());
    }

    #[test]
    fn complete_family_passes_threshold() {
        let mut complete = Hypergraph::new(8, 4).unwrap();
        for combo in (1u32..=8).combinations(4) {
            complete.add_edge(combo).unwrap();
        }
        let f = Family::new(vec![complete; 2]).unwrap();
        let spec = ThresholdSpec::vertex_degree_main(8, 4, 2).unwrap();
        assert!(verify_threshold(&f, &spec).unwrap());
    }

    #[test]
    fn sampled_families_meet_contract() {
        let spec = ThresholdSpec::vertex_degree_main(8, 4, 2).unwrap();
        let f1 = sample_threshold_family(&spec, 0, 1).unwrap();
        assert!(verify_threshold(&f1, &spec).unwrap());
        for g in f1.graphs() {
            assert!(g.min_degree(1).unwrap() >= 16);
        }
        let f2 = sample_threshold_family(&spec, 0, 1).unwrap();
        assert_eq!(f1, f2);
        let f3 = sample_threshold_family(&spec, 0, 2).unwrap();
        assert!(verify_threshold(&f3, &spec).unwrap());
    }

    #[test]
    fn projection_of_script_h_is_hk() {
        let h = script_h(6, 2, 3).unwrap();
        let f1 = project_color(&h, 0).unwrap();
        let hk = make_hk(6, 2, 3).unwrap();
        assert_eq!(f1.edge_count(), hk.edge_count());
        assert!(hk.edges().all(|e| f1.contains_edge(e)));
        let _ = VertexSet::new();
    }
}
