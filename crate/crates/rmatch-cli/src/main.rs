//! `rmatch`: generators, exact solvers, exact-rational LP, absorbing
//! matchings, semi-random rounding, and the end-to-end pipeline, over the
//! text/JSON formats of the `rmatch` library.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use rmatch::constructions::{
    complete_partite, extremal_family, make_hk, make_hk_star, sample_threshold_family, script_h,
    ThresholdSpec,
};
use rmatch::exact::{
    has_perfect_matching, max_matching, rainbow_matching, validate_rainbow, SolveStatus, Witness,
};
use rmatch::hypergraph::{classify_matching, ClosenessMode, PartiteGraph};
use rmatch::io::{
    parse_family, parse_graph, parse_witness, write_cover_sidecar, write_family, write_hypergraph,
    write_partite, write_witness, GraphFile,
};
use rmatch::lp::{
    augment_by_cover, check_augmented_stable, duality_check, fractional_cover,
    fractional_cover_lexmin, fractional_matching, fractional_pm_exists, relabel_by_cover,
};
use rmatch::num::{parse_rat, rat_to_string};
use rmatch::pipeline::{solve, Fallback, PipelineConfig, SolveInput};
use rmatch::rounding::{
    desk_preset, multiplicity_stats, nibble, paper_preset, sample_batch, ClashRule, NibbleParams,
};

#[derive(Parser)]
#[command(
    name = "rmatch",
    version,
    about = "Rainbow and perfect matchings in uniform hypergraphs"
)]
struct Cli {
    /// Seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output style for stdout summaries.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the pipeline stage trace as JSON.
    #[arg(long, global = true)]
    trace_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a construction or a random threshold family.
    Gen {
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        t: Option<usize>,
        /// Extra strict margin added to the threshold for random families.
        #[arg(long, default_value_t = 0)]
        slack: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an exact solver or the end-to-end pipeline.
    Solve {
        #[arg(long, value_enum)]
        mode: SolveMode,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Fractional matchings and covers, exactly.
    Lp {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        problem: LpProblem,
        /// Write the cover-augmented host (with weight-sorted labels) and a
        /// JSON sidecar of the cover.
        #[arg(long)]
        augment_out: Option<PathBuf>,
    },
    /// Build an absorbing matching and report diagnostics.
    Absorb {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "1/10")]
        b: String,
        #[arg(long, default_value = "2/5")]
        c: String,
        #[arg(long, default_value_t = 8)]
        retries: u32,
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
    /// Semi-random nibble matching.
    Nibble {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "1/20")]
        a: String,
        #[arg(long, default_value = "1/4")]
        bite: String,
        #[arg(long, default_value_t = 400)]
        rounds: u32,
        #[arg(long, value_enum, default_value_t = Clash::KeepOne)]
        clash: Clash,
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Sample vertex subsets and report multiplicity statistics.
    Round {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        batch: usize,
        #[arg(long, default_value = "1/10")]
        p: String,
        #[arg(long, value_enum, default_value_t = Preset::Desk)]
        preset: Preset,
        #[arg(long)]
        stats_out: Option<PathBuf>,
    },
    /// Validate a witness against a graph or family, or a family against a
    /// degree threshold.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long, value_enum)]
        threshold_kind: Option<ThresholdKindArg>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Run a seeded experiment suite from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Hk,
    Hkstar,
    Scripth,
    Complete,
    ExtremalFamily,
    RandomFamily,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveMode {
    Max,
    Perfect,
    Rainbow,
    Pipeline,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpProblem {
    Matching,
    Cover,
    PmExists,
}

#[derive(Clone, Copy, ValueEnum)]
enum Clash {
    DropAll,
    KeepOne,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Paper,
    Desk,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdKindArg {
    VertexDegreeMain,
    RainbowEmc,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(format: Format, text_line: String, json: serde_json::Value) {
    match format {
        Format::Text => println!("{text_line}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json).expect("serializable")
        ),
    }
}

fn load_host(path: &Path) -> anyhow::Result<PartiteGraph> {
    match parse_graph(&read(path)?)? {
        GraphFile::Partite(p) => Ok(p),
        GraphFile::Plain(_) => bail!(
            "{} is not a partite host (header must be `k n m`)",
            path.display()
        ),
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen {
            construction,
            n,
            m,
            k,
            t,
            slack,
            out,
        } => {
            let body = match construction {
                Construction::Hk => {
                    let m = m.ok_or_else(|| anyhow!("--m required for hk"))?;
                    write_hypergraph(&make_hk(n, m, k)?)?
                }
                Construction::Hkstar => {
                    let m = m.ok_or_else(|| anyhow!("--m required for hkstar"))?;
                    write_hypergraph(&make_hk_star(n, m, k)?)?
                }
                Construction::Scripth => {
                    let m = m.ok_or_else(|| anyhow!("--m required for scripth"))?;
                    write_partite(&script_h(n, m, k)?)?
                }
                Construction::Complete => {
                    let m = m.ok_or_else(|| anyhow!("--m required for complete"))?;
                    write_partite(&complete_partite(n, m, k)?)?
                }
                Construction::ExtremalFamily => write_family(&extremal_family(n, k)?)?,
                Construction::RandomFamily => {
                    let t = t.unwrap_or(n as usize / k);
                    let spec = ThresholdSpec::vertex_degree_main(n, k, t)?;
                    write_family(&sample_threshold_family(&spec, slack, cli.seed)?)?
                }
            };
            match out {
                Some(path) => {
                    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?
                }
                None => print!("{body}"),
            }
        }

        Command::Solve {
            mode,
            budget,
            input,
            witness_out,
        } => {
            let text = read(&input)?;
            let (result, trace_json) = match mode {
                SolveMode::Rainbow => {
                    let family = parse_family(&text)?;
                    (rainbow_matching(&family, budget), None)
                }
                SolveMode::Max => match parse_graph(&text)? {
                    GraphFile::Plain(h) => (max_matching(&h, budget), None),
                    GraphFile::Partite(p) => (max_matching(p.base(), budget), None),
                },
                SolveMode::Perfect => match parse_graph(&text)? {
                    GraphFile::Plain(h) => (has_perfect_matching(&h, budget), None),
                    GraphFile::Partite(p) => (
                        rmatch::exact::has_perfect_matching_partite(&p, budget),
                        None,
                    ),
                },
                SolveMode::Pipeline => {
                    let cfg = PipelineConfig {
                        seed: cli.seed,
                        budget,
                        fallback: Fallback::Exact,
                        closeness_mode: ClosenessMode::FixedLabeling,
                        ..PipelineConfig::default()
                    };
                    let solve_input = if text.trim_start().starts_with('{') {
                        SolveInput::Family(parse_family(&text)?)
                    } else {
                        SolveInput::Host(load_host(&input)?)
                    };
                    let outcome = solve(&solve_input, &cfg)?;
                    (outcome.result, Some(outcome.trace.to_json()))
                }
            };
            if let (Some(path), Some(trace)) = (cli.trace_out.as_ref(), trace_json.as_ref()) {
                fs::write(path, serde_json::to_string_pretty(trace)?)?;
            }
            if let (Some(path), Some(witness)) = (witness_out, result.witness.as_ref()) {
                fs::write(&path, write_witness(witness)?)?;
            }
            let size = match &result.witness {
                Some(Witness::Edges(es)) => es.len(),
                Some(Witness::Rainbow(m)) => m.len(),
                None => 0,
            };
            emit(
                cli.format,
                format!(
                    "status: {:?}, witness edges: {size}, nodes: {}",
                    result.status, result.nodes_explored
                ),
                serde_json::json!({
                    "status": format!("{:?}", result.status),
                    "witness_size": size,
                    "nodes": result.nodes_explored,
                    "warnings": result.warnings,
                }),
            );
            if result.status == SolveStatus::BudgetExceeded {
                std::process::exit(2);
            }
        }

        Command::Lp {
            input,
            problem,
            augment_out,
        } => {
            let parsed = parse_graph(&read(&input)?)?;
            match problem {
                LpProblem::Matching => {
                    let out = fractional_matching(parsed.base())?;
                    emit(
                        cli.format,
                        format!("fractional matching value: {}", rat_to_string(&out.value)),
                        serde_json::json!({
                            "value": rat_to_string(&out.value),
                            "basis": out.basis_note,
                            "duality_holds": duality_check(parsed.base())?,
                        }),
                    );
                }
                LpProblem::Cover => {
                    let out = fractional_cover(parsed.base())?;
                    emit(
                        cli.format,
                        format!("fractional cover value: {}", rat_to_string(&out.value)),
                        serde_json::json!({
                            "value": rat_to_string(&out.value),
                            "basis": out.basis_note,
                        }),
                    );
                }
                LpProblem::PmExists => {
                    let GraphFile::Partite(host) = &parsed else {
                        bail!("pm-exists needs a partite host");
                    };
                    let exists = fractional_pm_exists(host)?;
                    emit(
                        cli.format,
                        format!("fractional perfect matching exists: {exists}"),
                        serde_json::json!({"exists": exists}),
                    );
                }
            }
            if let Some(path) = augment_out {
                let GraphFile::Partite(host) = &parsed else {
                    bail!("--augment-out needs a partite host");
                };
                let cover = fractional_cover_lexmin(host.base())?;
                let (sorted, omega, _) = relabel_by_cover(host, &cover.certificate)?;
                let augmented = augment_by_cover(&sorted, &omega)?;
                let stable = check_augmented_stable(&augmented, &omega)?;
                fs::write(&path, write_partite(&augmented)?)?;
                let sidecar = path.with_extension("omega.json");
                fs::write(&sidecar, write_cover_sidecar(&omega)?)?;
                emit(
                    cli.format,
                    format!(
                        "augmented host: {} edges (stable: {stable}); cover sidecar {}",
                        augmented.base().edge_count(),
                        sidecar.display()
                    ),
                    serde_json::json!({
                        "augmented_edges": augmented.base().edge_count(),
                        "stable": stable,
                        "sidecar": sidecar.display().to_string(),
                    }),
                );
            }
        }

        Command::Absorb {
            input,
            b,
            c,
            retries,
            report_out,
        } => {
            let host = load_host(&input)?;
            let mut cfg =
                rmatch::absorption::AbsorbConfig::new(parse_rat(&b)?, parse_rat(&c)?, cli.seed);
            cfg.retries = retries;
            let (am, diag) = rmatch::absorption::build_absorbing_matching(&host, &cfg)?;
            let json = serde_json::json!({
                "matching_size": am.len(),
                "family_size": am.family().len(),
                "sampled": diag.sampled,
                "after_intersect_prune": diag.after_intersect_prune,
                "after_nonabsorbing_prune": diag.after_nonabsorbing_prune,
                "min_pool_per_r_probed": diag.min_pool_per_r_probed,
                "intersecting_pairs": diag.intersecting_pairs,
                "bound_checks": diag.bound_checks
                    .iter()
                    .map(|(name, ok)| serde_json::json!({"bound": name, "held": ok}))
                    .collect::<Vec<_>>(),
                "warnings": diag.warnings,
                "attempts": diag.attempts,
            });
            if let Some(path) = report_out {
                fs::write(&path, serde_json::to_string_pretty(&json)?)?;
            }
            emit(
                cli.format,
                format!(
                    "absorbing matching: {} edges from {} sets",
                    am.len(),
                    am.family().len()
                ),
                json,
            );
        }

        Command::Nibble {
            input,
            a,
            bite,
            rounds,
            clash,
            witness_out,
        } => {
            let parsed = parse_graph(&read(&input)?)?;
            let params = NibbleParams {
                bite_fraction: parse_rat(&bite)?,
                a: parse_rat(&a)?,
                max_rounds: rounds,
                seed: cli.seed,
                clash: match clash {
                    Clash::DropAll => ClashRule::DropAll,
                    Clash::KeepOne => ClashRule::KeepOne,
                },
            };
            let out = nibble(parsed.base(), &params);
            if let Some(path) = witness_out {
                fs::write(&path, write_witness(&Witness::Edges(out.matching.clone()))?)?;
            }
            let order = parsed.base().order();
            emit(
                cli.format,
                format!(
                    "nibble: {} edges covering {}/{} vertices in {} rounds",
                    out.matching.len(),
                    out.covered,
                    order,
                    out.rounds
                ),
                serde_json::json!({
                    "edges": out.matching.len(),
                    "covered": out.covered,
                    "order": order,
                    "rounds": out.rounds,
                    "isolated_dropped": out.isolated_dropped,
                }),
            );
        }

        Command::Round {
            input,
            batch,
            p,
            preset,
            stats_out,
        } => {
            let host = load_host(&input)?;
            let plan = match preset {
                Preset::Desk => desk_preset(batch, parse_rat(&p)?),
                Preset::Paper => paper_preset(host.n_v() as u64),
            };
            let sampled = sample_batch(&host, &plan, cli.seed, None)?;
            let stats = multiplicity_stats(&sampled, &host, &plan.tolerance);
            let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
            for &y in stats.y_vertex.values() {
                *hist.entry(y).or_insert(0) += 1;
            }
            let json = serde_json::json!({
                "samples": sampled.subsets.len(),
                "p": rat_to_string(&plan.p),
                "tolerance": rat_to_string(&plan.tolerance),
                "vertex_band_ok": stats.vertex_band_ok,
                "vertices_outside_band": stats.vertices_outside_band,
                "max_pair_multiplicity": stats.max_pair,
                "max_edge_multiplicity": stats.max_edge,
                "histogram": hist,
            });
            if let Some(path) = stats_out {
                fs::write(&path, serde_json::to_string_pretty(&json)?)?;
                let mut csv = String::from("multiplicity,vertices\n");
                for (y, count) in &hist {
                    csv.push_str(&format!("{y},{count}\n"));
                }
                fs::write(path.with_extension("csv"), csv)?;
            }
            emit(
                cli.format,
                format!(
                    "batch of {}: bands vertex={} pair={} edge={}",
                    sampled.subsets.len(),
                    stats.vertex_band_ok,
                    stats.pair_band_ok,
                    stats.edge_band_ok
                ),
                json,
            );
        }

        Command::Verify {
            input,
            witness,
            threshold_kind,
            t,
        } => {
            let text = read(&input)?;
            if let Some(kind) = threshold_kind {
                let family = parse_family(&text)?;
                let t = t.unwrap_or(family.t());
                let spec = match kind {
                    ThresholdKindArg::VertexDegreeMain => {
                        ThresholdSpec::vertex_degree_main(family.n(), family.k(), t)?
                    }
                    ThresholdKindArg::RainbowEmc => {
                        ThresholdSpec::rainbow_emc(family.n(), family.k(), t)?
                    }
                };
                let ok = rmatch::constructions::verify_threshold(&family, &spec)?;
                emit(
                    cli.format,
                    format!("threshold {} strictly exceeded: {ok}", spec.value),
                    serde_json::json!({"threshold": spec.value, "ok": ok}),
                );
                if !ok {
                    std::process::exit(1);
                }
                return Ok(());
            }
            let witness_path =
                witness.ok_or_else(|| anyhow!("--witness or --threshold-kind required"))?;
            let parsed_witness = parse_witness(&read(&witness_path)?)?;
            let (line, ok) = match (&parsed_witness, text.trim_start().starts_with('{')) {
                (Witness::Rainbow(map), true) => {
                    let family = parse_family(&text)?;
                    let ok = validate_rainbow(&family, map);
                    (format!("rainbow witness valid: {ok}"), ok)
                }
                (Witness::Edges(edges), false) => {
                    let class = classify_matching(parse_graph(&text)?.base(), edges);
                    (
                        format!("classification: {class:?}"),
                        !matches!(class, rmatch::hypergraph::MatchingClass::NotMatching(_)),
                    )
                }
                _ => bail!("witness kind does not match the input kind"),
            };
            emit(
                cli.format,
                line.clone(),
                serde_json::json!({"result": line, "ok": ok}),
            );
            if !ok {
                std::process::exit(1);
            }
        }

        Command::Experiment { config, out } => {
            let cfg = rmatch::experiment::ExperimentConfig::from_json(&read(&config)?)?;
            let (report, series) = rmatch::experiment::run_experiment(&cfg)?;
            if let Some(dir) = out {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("report.json"), report.to_json())?;
                for s in &series {
                    fs::write(dir.join(format!("{}.csv", s.name)), s.to_csv())?;
                }
            }
            let pass = report.all_hard_pass();
            emit(
                cli.format,
                format!(
                    "suite {}: {} items, hard assertions {}",
                    report.suite,
                    report.items.len(),
                    if pass { "pass" } else { "FAIL" }
                ),
                serde_json::json!({
                    "suite": report.suite,
                    "items": report.items.len(),
                    "hard_pass": pass,
                }),
            );
            if !pass {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rmatch::num::rat;

    #[test]
    fn cli_parses_representative_lines() {
        Cli::try_parse_from([
            "rmatch",
            "gen",
            "--construction",
            "hk",
            "--n",
            "9",
            "--m",
            "2",
            "--k",
            "3",
        ])
        .unwrap();
        Cli::try_parse_from([
            "rmatch", "--seed", "7", "solve", "--mode", "rainbow", "--budget", "1000", "--in",
            "f.json",
        ])
        .unwrap();
        Cli::try_parse_from([
            "rmatch", "nibble", "--in", "g.txt", "--bite", "1/8", "--clash", "drop-all",
        ])
        .unwrap();
        assert!(
            Cli::try_parse_from(["rmatch", "gen", "--construction", "bogus", "--n", "9"]).is_err()
        );
    }

    #[test]
    fn rational_flags_accept_fraction_strings() {
        assert_eq!(parse_rat("1/8").unwrap(), rat(1, 8));
        assert_eq!(parse_rat("0.25").unwrap(), rat(1, 4));
    }
}
