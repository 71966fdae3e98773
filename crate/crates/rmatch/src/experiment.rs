//! Seeded experiment suites driven by a JSON config. Each suite appends
//! check and measurement items to a [`RunReport`] and may emit CSV series;
//! hard assertions gate the CLI exit code.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    complete_partite, extremal_family, make_hk, random_regularish_graph, sample_threshold_family,
    Family, ThresholdSpec,
};
use crate::exact::{matching_number, rainbow_equiv_check, SolveStatus};
use crate::hypergraph::{Hypergraph, Vertex};
use crate::lp::{fractional_cover, fractional_matching};
use crate::num::{parse_rat, rat, rat_int, rat_to_f64, Rat};
use crate::pipeline::{solve, PipelineConfig, SolveInput};
use crate::report::{CsvSeries, ReportItem, RunReport};
use crate::rng;
use crate::rounding::{
    concentration_entry, desk_preset, multiplicity_stats, nibble, sample_batch, NibbleParams,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub suite: String,
    #[serde(default)]
    pub n_list: Vec<Vertex>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_trials")]
    pub trials: u32,
    /// Explicit seeds; when empty, `0..trials` is used.
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Named rational thresholds, e.g. `{"coverage": "9/10"}`.
    #[serde(default)]
    pub thresholds: BTreeMap<String, String>,
    /// Item names treated as hard; `"all"` hardens every check.
    #[serde(default)]
    pub hard_assertions: Vec<String>,
}

fn default_k() -> usize {
    3
}

fn default_trials() -> u32 {
    20
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    fn seeds(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            (0..self.trials as u64).collect()
        } else {
            self.seeds.clone()
        }
    }

    fn is_hard(&self, name: &str) -> bool {
        self.hard_assertions
            .iter()
            .any(|h| h == "all" || name.starts_with(h.as_str()))
    }

    fn threshold(&self, key: &str, default: Rat) -> Result<Rat> {
        match self.thresholds.get(key) {
            Some(s) => parse_rat(s),
            None => Ok(default),
        }
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(RunReport, Vec<CsvSeries>)> {
    let seed0 = cfg.seeds().first().copied().unwrap_or(0);
    let mut report = RunReport::new(cfg.suite.clone(), seed0);
    let mut series = Vec::new();
    match cfg.suite.as_str() {
        "sharpness" => sharpness_suite(cfg, &mut report)?,
        "equivalence" => equivalence_suite(cfg, &mut report)?,
        "duality" => duality_suite(cfg, &mut report)?,
        "nibble-curve" => nibble_curve_suite(cfg, &mut report, &mut series)?,
        "concentration" => concentration_suite(cfg, &mut report, &mut series)?,
        other => return Err(Error::InvalidInput(format!("unknown suite {other:?}"))),
    }
    Ok((report, series))
}

fn sharpness_suite(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let budget = 50_000_000;
    for &n in &cfg.n_list {
        if !(n as usize).is_multiple_of(cfg.k) {
            continue;
        }
        let start = std::time::Instant::now();
        let f = extremal_family(n, cfg.k)?;
        let negative = crate::exact::rainbow_matching(&f, budget);
        let name = format!("sharpness-negative-n{n}");
        report.push(
            ReportItem::check(
                &name,
                negative.status == SolveStatus::ExhaustedNone,
                cfg.is_hard(&name),
            )
            .with_data(serde_json::json!({
                "n": n, "k": cfg.k,
                "nodes": negative.nodes_explored,
            }))
            .with_millis(start.elapsed().as_secs_f64() * 1e3),
        );

        let start = std::time::Instant::now();
        let host = make_hk(n, n / cfg.k as Vertex - 1, cfg.k)?;
        let nu = matching_number(&host, budget);
        let want = (n as usize) / cfg.k - 1;
        let name = format!("sharpness-nu-n{n}");
        report.push(
            ReportItem::check(&name, nu == Some(want), cfg.is_hard(&name))
                .with_data(serde_json::json!({"nu": nu, "expected": want}))
                .with_millis(start.elapsed().as_secs_f64() * 1e3),
        );
    }
    // Positive direction: strictly-above-threshold families are solvable.
    for &n in &cfg.n_list {
        if !(n as usize).is_multiple_of(cfg.k) || cfg.k < 3 {
            continue;
        }
        let spec = ThresholdSpec::vertex_degree_main(n, cfg.k, n as usize / cfg.k)?;
        let mut solved = 0u32;
        let mut fallbacks = 0u32;
        let seeds = cfg.seeds();
        for &seed in &seeds {
            let f = sample_threshold_family(&spec, 0, seed)?;
            let pipe = PipelineConfig {
                seed,
                ..PipelineConfig::default()
            };
            let out = solve(&SolveInput::Family(f), &pipe)?;
            if out.result.status == SolveStatus::Found {
                solved += 1;
            }
            if out.result.warnings.iter().any(|w| w.contains("fallback")) {
                fallbacks += 1;
            }
        }
        let name = format!("threshold-positive-n{n}");
        report.push(
            ReportItem::check(&name, solved == seeds.len() as u32, cfg.is_hard(&name)).with_data(
                serde_json::json!({
                    "solved": solved, "trials": seeds.len(), "exact_fallbacks": fallbacks,
                }),
            ),
        );
    }
    Ok(())
}

fn random_family(n: Vertex, k: usize, t: usize, density: f64, seed: u64) -> Result<Family> {
    let mut graphs = Vec::with_capacity(t);
    for color in 0..t {
        let mut rng = rng::substream(seed, color as u64);
        let mut g = Hypergraph::new(n, k)?;
        for combo in (1..=n).combinations(k) {
            if rng.gen_bool(density) {
                g.add_edge(combo)?;
            }
        }
        graphs.push(g);
    }
    Family::new(graphs)
}

fn equivalence_suite(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let mut agreements = 0u32;
    let seeds = cfg.seeds();
    for &seed in &seeds {
        let k = if seed % 2 == 0 { 2 } else { 3.min(cfg.k) };
        let n = cfg
            .n_list
            .iter()
            .copied()
            .find(|&n| (n as usize).is_multiple_of(k) && n as usize / k >= 2)
            .unwrap_or((3 * k) as Vertex);
        let t = n as usize / k;
        let f = random_family(n, k, t, 0.4, seed)?;
        if rainbow_equiv_check(&f, 20_000_000)? {
            agreements += 1;
        }
    }
    report.push(
        ReportItem::check(
            "lift-equivalence",
            agreements == seeds.len() as u32,
            cfg.is_hard("lift-equivalence"),
        )
        .with_data(serde_json::json!({"agree": agreements, "trials": seeds.len()})),
    );
    Ok(())
}

fn duality_suite(cfg: &ExperimentConfig, report: &mut RunReport) -> Result<()> {
    let mut equal = 0u32;
    let mut integral_leq = 0u32;
    let seeds = cfg.seeds();
    for &seed in &seeds {
        let mut rng = rng::stream(seed);
        let n = cfg
            .n_list
            .iter()
            .copied()
            .filter(|&n| n <= 8)
            .nth((seed as usize) % cfg.n_list.len().max(1))
            .unwrap_or(7);
        let k = (2 + (seed as usize) % 3).min(n as usize - 1).min(4);
        let mut h = Hypergraph::new(n, k)?;
        for combo in (1..=n).combinations(k) {
            if rng.gen_bool(0.4) {
                h.add_edge(combo)?;
            }
        }
        let m = fractional_matching(&h)?;
        let c = fractional_cover(&h)?;
        if m.value == c.value {
            equal += 1;
        }
        if let Some(nu) = matching_number(&h, 5_000_000) {
            if rat_int(nu as u64) <= m.value {
                integral_leq += 1;
            }
        }
    }
    report.push(
        ReportItem::check(
            "duality-equality",
            equal == seeds.len() as u32,
            cfg.is_hard("duality-equality"),
        )
        .with_data(serde_json::json!({"equal": equal, "trials": seeds.len()})),
    );
    report.push(
        ReportItem::check(
            "integral-below-fractional",
            integral_leq == seeds.len() as u32,
            cfg.is_hard("integral-below-fractional"),
        )
        .with_data(serde_json::json!({"ok": integral_leq})),
    );
    Ok(())
}

fn nibble_curve_suite(
    cfg: &ExperimentConfig,
    report: &mut RunReport,
    series: &mut Vec<CsvSeries>,
) -> Result<()> {
    let n = cfg.n_list.first().copied().unwrap_or(300);
    let factors = rat_to_f64(&cfg.threshold("degree", rat_int(30))?) as usize;
    let host = random_regularish_graph(n, cfg.k, factors, 1)?;
    let coverage_floor = cfg.threshold("coverage", rat(9, 10))?;
    let mut curve = CsvSeries::new("nibble-coverage", &["bite", "seed", "covered_fraction"]);
    let mut all_above = true;
    for (num, den) in [(1i64, 2i64), (1, 4), (1, 8), (1, 16)] {
        for &seed in cfg.seeds().iter().take(5) {
            let mut params = NibbleParams::new(seed);
            params.bite_fraction = rat(num, den);
            let out = nibble(&host, &params);
            let frac = (out.matching.len() * cfg.k) as f64 / n as f64;
            curve.push_row(vec![
                format!("{num}/{den}"),
                seed.to_string(),
                format!("{frac:.4}"),
            ]);
            if rat((out.matching.len() * cfg.k) as i64, n as i64) < coverage_floor {
                all_above = false;
            }
        }
    }
    series.push(curve);
    report.push(
        ReportItem::check(
            "nibble-coverage-floor",
            all_above,
            cfg.is_hard("nibble-coverage-floor"),
        )
        .with_data(serde_json::json!({
            "n": n, "factors": factors,
            "floor": crate::num::rat_to_string(&coverage_floor),
        })),
    );
    Ok(())
}

fn concentration_suite(
    cfg: &ExperimentConfig,
    report: &mut RunReport,
    series: &mut Vec<CsvSeries>,
) -> Result<()> {
    let n = cfg.n_list.first().copied().unwrap_or(40);
    let k = cfg.k;
    let m = n / k as Vertex;
    let host = complete_partite(n, m, k)?;
    let plan = desk_preset(cfg.trials.max(10) as usize * 10, rat(1, 10));
    let seed = cfg.seeds().first().copied().unwrap_or(0);
    let batch = sample_batch(&host, &plan, seed, None)?;
    let stats = multiplicity_stats(&batch, &host, &plan.tolerance);
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    for &y in stats.y_vertex.values() {
        *hist.entry(y).or_insert(0) += 1;
    }
    let mut csv = CsvSeries::new(
        "vertex-multiplicity-histogram",
        &["multiplicity", "vertices"],
    );
    for (y, count) in &hist {
        csv.push_row(vec![y.to_string(), count.to_string()]);
    }
    series.push(csv);

    let expectation = rat_int(batch.subsets.len() as u64) * &plan.p;
    let mean_y =
        rat_int(stats.y_vertex.values().sum::<u64>()) / rat_int(stats.y_vertex.len() as u64);
    let entry = concentration_entry(&mean_y, &expectation, &plan.tolerance);
    report.push(
        ReportItem::check(
            "mean-multiplicity-in-band",
            entry.within,
            cfg.is_hard("mean-multiplicity-in-band"),
        )
        .with_data(serde_json::to_value(serde_json::json!({
            "observed": entry.observed,
            "expectation": entry.expectation,
            "chernoff_bound": entry.chernoff_bound,
            "chernoff_expr": entry.chernoff_expr,
        }))?),
    );
    report.push(ReportItem::measurement(
        "multiplicity-bands",
        serde_json::json!({
            "vertex_band_ok": stats.vertex_band_ok,
            "vertices_outside": stats.vertices_outside_band,
            "max_pair": stats.max_pair,
            "max_edge": stats.max_edge,
        }),
    ));
    Ok(())
}
