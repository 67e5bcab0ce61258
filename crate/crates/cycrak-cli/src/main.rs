//! CLI for cycle-ranking influencer selection, centrality baselines, and
//! SIR spreading experiments. Every pipeline loads the network, reduces
//! it to its largest connected component, and writes CSV artifacts that
//! are byte-identical for a given seed.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use cycrak::centrality::{compute_centrality, rank_nodes, write_centrality_csv, CentralityKind};
use cycrak::community::write_partition_csv;
use cycrak::cycles::{write_basis, write_scores_csv, TreeStrategy};
use cycrak::flow::{current_flow_edge_betweenness, write_edge_betweenness_csv, FlowMode, FlowOptions};
use cycrak::gen::GeneratorSpec;
use cycrak::graph::Graph;
use cycrak::harness::{
    derive_seed, emit_results, extremes_csv, profile_csv, profile_cycles, run_experiment,
    ExperimentConfig, NetworkAnalysis, NetworkSource,
};
use cycrak::select::{
    select_benchmark_with_fallback, select_cycrak, write_influencers_csv, Framework, TieMode,
};
use cycrak::sir::{epidemic_threshold, sir_influence, write_runs_csv, write_summary_csv};

#[derive(Parser)]
#[command(name = "cycrak", version, about = "Influencer selection via basic-cycle ranking")]
struct Cli {
    /// Master seed for every derived random stream.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic network and write its edge list.
    Generate {
        /// Model: ba, ws, or er.
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        /// Attachments per arrival (ba).
        #[arg(long)]
        m: Option<usize>,
        /// Ring degree (ws).
        #[arg(long)]
        k: Option<usize>,
        /// Rewiring probability (ws) or edge probability (er).
        #[arg(long)]
        p: Option<f64>,
        /// Output edge-list path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank the basic cycles of a network by importance.
    RankCycles {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "bfs-min-id")]
        tree_strategy: String,
        /// Estimate edge betweenness from this many sampled pairs
        /// instead of the exact all-pairs computation.
        #[arg(long)]
        sampled_pairs: Option<usize>,
    },
    /// Compute one node centrality (or edge betweenness) as CSV.
    Centrality {
        #[arg(long)]
        input: PathBuf,
        /// dc, hc, lc, ci, ec, cc, or edge-betweenness.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 2)]
        ci_radius: usize,
        #[arg(long)]
        sampled_pairs: Option<usize>,
    },
    /// Detect communities with Louvain and export the partition.
    Communities {
        #[arg(long)]
        input: PathBuf,
    },
    /// Select k influencers with one framework.
    Select {
        #[arg(long)]
        input: PathBuf,
        /// topk, notcon, incdis, decsim, or cycrak.
        #[arg(long)]
        framework: String,
        /// Centrality the ranking is built from.
        #[arg(long)]
        centrality: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "deterministic")]
        tie_mode: String,
        #[arg(long, default_value = "bfs-min-id")]
        tree_strategy: String,
        #[arg(long, default_value_t = 2)]
        ci_radius: usize,
        #[arg(long)]
        sampled_pairs: Option<usize>,
    },
    /// Run the SIR ensemble from an explicit seed set.
    Simulate {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated node labels.
        #[arg(long)]
        seeds: Option<String>,
        /// File with one node label per line.
        #[arg(long)]
        seeds_file: Option<PathBuf>,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 300)]
        realizations: usize,
    },
    /// Run a full experiment from a TOML config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
    /// Export the cycle length/importance profile and extreme cycles.
    ProfileCycles {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "bfs-min-id")]
        tree_strategy: String,
        #[arg(long)]
        sampled_pairs: Option<usize>,
    },
}

fn parse_tree_strategy(s: &str) -> Result<TreeStrategy> {
    match s {
        "bfs-min-id" => Ok(TreeStrategy::BfsMinId),
        "seeded-random" => Ok(TreeStrategy::SeededRandom),
        other => bail!("unknown tree strategy: {other} (expected bfs-min-id or seeded-random)"),
    }
}

fn parse_tie_mode(s: &str) -> Result<TieMode> {
    match s {
        "deterministic" => Ok(TieMode::Deterministic),
        "random" => Ok(TieMode::Random),
        other => bail!("unknown tie mode: {other} (expected deterministic or random)"),
    }
}

fn flow_options(sampled_pairs: Option<usize>, seed: u64) -> FlowOptions {
    FlowOptions {
        mode: match sampled_pairs {
            Some(pairs) => FlowMode::Sampled {
                pairs,
                seed: derive_seed(&[&seed.to_string(), "flow-sample"]),
            },
            None => FlowMode::Exact,
        },
        ..FlowOptions::default()
    }
}

/// Load an edge list and reduce it to the largest connected component.
fn load_lcc(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading edge list {}", path.display()))?;
    let (g, report) = Graph::from_edge_list_text(&text)?;
    if report.self_loops_dropped > 0 || report.duplicate_edges_dropped > 0 {
        eprintln!(
            "warning: dropped {} self-loops and {} duplicate edges",
            report.self_loops_dropped, report.duplicate_edges_dropped
        );
    }
    let lcc = g.largest_connected_component()?;
    if lcc.node_count() < g.node_count() {
        eprintln!(
            "note: using largest connected component ({} of {} nodes)",
            lcc.node_count(),
            g.node_count()
        );
    }
    Ok(lcc)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring thread pool")?;
    }
    let out_dir = cli.out_dir.clone();
    let seed = cli.seed;

    match cli.command {
        Command::Generate { model, n, m, k, p, out } => {
            let spec = match model.as_str() {
                "ba" => GeneratorSpec::Ba {
                    n,
                    m: m.ok_or_else(|| anyhow!("ba needs --m"))?,
                    seed,
                },
                "ws" => GeneratorSpec::Ws {
                    n,
                    k: k.ok_or_else(|| anyhow!("ws needs --k"))?,
                    p: p.ok_or_else(|| anyhow!("ws needs --p"))?,
                    seed,
                },
                "er" => GeneratorSpec::Er {
                    n,
                    p: p.ok_or_else(|| anyhow!("er needs --p"))?,
                    seed,
                },
                other => bail!("unknown model: {other} (expected ba, ws, or er)"),
            };
            let g = spec.generate()?;
            write_file(&out, &g.to_edge_list_text())?;
            println!("{}: N={}, M={}", spec.id_string(), g.node_count(), g.edge_count());
        }
        Command::RankCycles { input, tree_strategy, sampled_pairs } => {
            let strategy = parse_tree_strategy(&tree_strategy)?;
            let source = NetworkSource::Path { path: input };
            let analysis =
                NetworkAnalysis::compute(&source, seed, strategy, &flow_options(sampled_pairs, seed))?;
            let mut basis_txt = Vec::new();
            write_basis(&analysis.graph, &analysis.basis, &mut basis_txt)?;
            write_file(&out_dir.join("basis.txt"), &String::from_utf8(basis_txt)?)?;
            let mut scores_csv = Vec::new();
            write_scores_csv(&analysis.basis, &analysis.scores, &analysis.cycle_order, &mut scores_csv)?;
            write_file(&out_dir.join("cycle_scores.csv"), &String::from_utf8(scores_csv)?)?;
            println!(
                "{}: N={}, M={}, |B|={}",
                analysis.network_id,
                analysis.graph.node_count(),
                analysis.graph.edge_count(),
                analysis.basis.len()
            );
        }
        Command::Centrality { input, kind, ci_radius, sampled_pairs } => {
            let g = load_lcc(&input)?;
            if kind == "edge-betweenness" {
                let eb = current_flow_edge_betweenness(&g, &flow_options(sampled_pairs, seed))?;
                let mut csv = Vec::new();
                write_edge_betweenness_csv(&g, &eb, &mut csv)?;
                write_file(&out_dir.join("edge_betweenness.csv"), &String::from_utf8(csv)?)?;
            } else {
                let kind: CentralityKind = kind.parse().map_err(|e: String| anyhow!(e))?;
                let map = compute_centrality(&g, kind, ci_radius)?;
                let mut csv = Vec::new();
                write_centrality_csv(&g, &map, &mut csv)?;
                let name = format!("centrality_{}.csv", kind.code().to_ascii_lowercase());
                write_file(&out_dir.join(name), &String::from_utf8(csv)?)?;
            }
        }
        Command::Communities { input } => {
            let g = load_lcc(&input)?;
            let louvain_seed = derive_seed(&[&seed.to_string(), "louvain"]);
            let partition = cycrak::community::louvain(&g, louvain_seed);
            let mut csv = Vec::new();
            write_partition_csv(&g, &partition, &mut csv)?;
            write_file(&out_dir.join("communities.csv"), &String::from_utf8(csv)?)?;
            println!(
                "{} communities, Q={}",
                partition.community_count(),
                partition.q
            );
        }
        Command::Select {
            input,
            framework,
            centrality,
            k,
            tie_mode,
            tree_strategy,
            ci_radius,
            sampled_pairs,
        } => {
            let framework: Framework = framework.parse().map_err(|e: String| anyhow!(e))?;
            let kind: CentralityKind = centrality.parse().map_err(|e: String| anyhow!(e))?;
            let set;
            let g;
            let map;
            if framework == Framework::CycRak {
                let strategy = parse_tree_strategy(&tree_strategy)?;
                let source = NetworkSource::Path { path: input };
                let analysis = NetworkAnalysis::compute(
                    &source,
                    seed,
                    strategy,
                    &flow_options(sampled_pairs, seed),
                )?;
                map = compute_centrality(&analysis.graph, kind, ci_radius)?;
                let tie = parse_tie_mode(&tie_mode)?;
                let select_seed = derive_seed(&[&seed.to_string(), "select", kind.code()]);
                set = select_cycrak(
                    &analysis.graph,
                    &analysis.basis,
                    &analysis.cycle_order,
                    &map,
                    k,
                    tie,
                    select_seed,
                )?;
                g = analysis.graph;
            } else {
                g = load_lcc(&input)?;
                map = compute_centrality(&g, kind, ci_radius)?;
                let ranking = rank_nodes(&map);
                set = select_benchmark_with_fallback(&g, framework, &ranking, k)?;
            }
            let mut csv = Vec::new();
            write_influencers_csv(&g, &set, &map, &mut csv)?;
            write_file(&out_dir.join("influencers.csv"), &String::from_utf8(csv)?)?;
            if let Some(stage) = set.fallback_used {
                eprintln!("note: fallback used: {stage:?}");
            }
        }
        Command::Simulate { input, seeds, seeds_file, gamma, mu, realizations } => {
            let g = load_lcc(&input)?;
            let labels: Vec<String> = match (seeds, seeds_file) {
                (Some(inline), None) => inline.split(',').map(|s| s.trim().to_string()).collect(),
                (None, Some(path)) => fs::read_to_string(&path)?
                    .lines()
                    .map(|l| l.trim().to_string())
                    .filter(|l| !l.is_empty() && !l.starts_with('#'))
                    .collect(),
                _ => bail!("provide exactly one of --seeds or --seeds-file"),
            };
            let members = labels
                .iter()
                .map(|label| {
                    g.id_of(label)
                        .ok_or_else(|| anyhow!("seed label {label:?} not in the largest component"))
                })
                .collect::<Result<Vec<_>>>()?;
            let beta_c = epidemic_threshold(&g)?;
            let sir_seed = derive_seed(&[&seed.to_string(), "sir"]);
            let summary = sir_influence(&g, &members, gamma, mu, realizations, sir_seed)?;
            let mut runs = Vec::new();
            write_runs_csv(&summary, &mut runs)?;
            write_file(&out_dir.join("sir_runs.csv"), &String::from_utf8(runs)?)?;
            let mut sum = Vec::new();
            write_summary_csv(gamma, mu, members.len(), &summary, &mut sum)?;
            write_file(&out_dir.join("sir_summary.csv"), &String::from_utf8(sum)?)?;
            println!(
                "mean F = {} (std {}), beta_c = {}, {} realizations",
                summary.mean, summary.std, beta_c, summary.runs.len()
            );
        }
        Command::Experiment { config } => {
            let mut cfg = ExperimentConfig::from_toml_path(&config)?;
            // Config paths resolve relative to the config file.
            if let NetworkSource::Path { path } = &mut cfg.network {
                if path.is_relative() {
                    if let Some(dir) = config.parent() {
                        *path = dir.join(&path);
                    }
                }
            }
            let table = run_experiment(&cfg)?;
            emit_results(&table, &cfg, &out_dir)?;
            println!(
                "wrote {} rows ({} ratio rows) to {}",
                table.rows.len(),
                table.ratios.len(),
                out_dir.display()
            );
        }
        Command::ProfileCycles { input, tree_strategy, sampled_pairs } => {
            let strategy = parse_tree_strategy(&tree_strategy)?;
            let source = NetworkSource::Path { path: input };
            let analysis =
                NetworkAnalysis::compute(&source, seed, strategy, &flow_options(sampled_pairs, seed))?;
            let profile = profile_cycles(&analysis)?;
            write_file(&out_dir.join("cycle_profile.csv"), &profile_csv(&profile))?;
            write_file(&out_dir.join("cycle_extremes.csv"), &extremes_csv(&profile))?;
            let most = &profile.most_important;
            println!(
                "most important cycle: length {}, i_com={}, i_pth={}, i_lc={}, i_b={}",
                most.length, most.score.i_com, most.score.i_pth, most.score.i_lc, most.score.i_b
            );
        }
    }
    Ok(())
}
