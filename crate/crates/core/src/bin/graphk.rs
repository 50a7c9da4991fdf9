use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use graphk::aut::aut_size;
use graphk::bdm::{nbdm, DEFAULT_PERMUTATIONS};
use graphk::compress::{graph_compressed_length, Deflate};
use graphk::experiments::{self as exp, Context};
use graphk::graph::{format_edges, generate, read_edges, GeneratorSpec};
use graphk::stats::{self, Series};
use graphk::table::{desk_table, BlockDistribution, DESK_TABLE_NAME};
use graphk::{Error, Result};

#[derive(Parser)]
#[command(
    name = "graphk",
    version,
    about = "Block decomposition complexity, automorphisms and network experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized BDM of a graph, minimized over sampled vertex orderings.
    Bdm {
        #[arg(long)]
        graph: PathBuf,
        /// CTM table; defaults to the built-in d=3 table.
        #[arg(long)]
        table: Option<PathBuf>,
        /// Block side; must match the table.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
        perms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Generate a graph from a JSON spec, e.g. '{"family":"ws","n":100,"k":4,"p":0.1,"seed":3}'.
    Gen {
        #[arg(long)]
        spec: String,
        /// Edge-list output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Automorphism group order and orbits.
    Aut {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Statistics over numeric series files, or clustering of a graph.
    Stats {
        #[arg(long, value_enum)]
        op: StatOp,
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long)]
        y: Option<PathBuf>,
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Vertex for local clustering; global when absent.
        #[arg(long)]
        vertex: Option<usize>,
        /// Probability for h0.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Compressed length of the bit-packed adjacency matrix.
    Compress {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = graphk::compress::DEFAULT_LEVEL)]
        level: u32,
    },
    /// Run an experiment and write CSV, plot data and a JSON summary.
    Exp {
        #[arg(value_enum)]
        name: Experiment,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_PERMUTATIONS)]
        perms: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex count (edge-density, aut-scatter, ws-sweep, model-dist, dual-pairs).
        #[arg(long)]
        n: Option<usize>,
        /// Groups (edge-density), circulants (aut-scatter), grid points
        /// (ws-sweep) or generated pairs (dual-pairs).
        #[arg(long)]
        count: Option<usize>,
        /// Graphs per group (edge-density) or per family (model-dist).
        #[arg(long)]
        per_group: Option<usize>,
        /// Ring degree (ws-sweep, model-dist).
        #[arg(long)]
        k: Option<usize>,
        /// Graphs averaged per grid point (ws-sweep).
        #[arg(long)]
        seeds: Option<usize>,
        /// Watts-Strogatz rewiring probability (model-dist).
        #[arg(long)]
        ws_p: Option<f64>,
        /// Pair list for dual-pairs: two edge-list paths per line.
        #[arg(long)]
        pairs: Option<PathBuf>,
        /// Extra edge-list files added to the aut-scatter corpus.
        #[arg(long)]
        graphs: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StatOp {
    Pearson,
    Spearman,
    KsD,
    H0,
    Clustering,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    EdgeDensity,
    DualPairs,
    AutScatter,
    WsSweep,
    ModelDist,
    Table1Fixture,
}

fn load_table(path: Option<&Path>) -> Result<(BlockDistribution, String)> {
    match path {
        Some(p) => Ok((BlockDistribution::load(p)?, p.display().to_string())),
        None => Ok((desk_table(), DESK_TABLE_NAME.to_string())),
    }
}

/// Numbers separated by commas, whitespace or newlines; a non-numeric first
/// line is taken as a header and skipped.
fn read_series(path: &Path) -> Result<Series> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.into(),
        source: e,
    })?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let tokens: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        let parsed: std::result::Result<Vec<f64>, _> = tokens.iter().map(|t| t.parse::<f64>()).collect();
        match parsed {
            Ok(v) => values.extend(v),
            Err(_) if i == 0 => continue,
            Err(e) => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: i + 1,
                    msg: e.to_string(),
                })
            }
        }
    }
    Series::new(values)
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Stats(format!("--{flag} is required for this operation")))
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Command::Bdm {
            graph,
            table,
            d,
            perms,
            seed,
            json,
        } => {
            let g = read_edges(&graph)?;
            let (t, _) = load_table(table.as_deref())?;
            let d = d.unwrap_or(t.side());
            let rep = nbdm(&g, &t, d, perms, seed)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&rep)?);
            } else {
                println!(
                    "raw\t{}\nmin\t{}\nmax\t{}\nnbdm\t{}",
                    rep.raw, rep.min, rep.max, rep.normalized
                );
                if rep.raw_exceeds_max {
                    println!("warning\traw exceeds max ({} fallback blocks)", rep.fallback_lookups);
                }
            }
        }
        Command::Gen { spec, out } => {
            let spec: GeneratorSpec = serde_json::from_str(&spec)?;
            let g = generate(&spec)?;
            match out {
                Some(p) => graphk::graph::write_edges(&g, p)?,
                None => print!("{}", format_edges(&g)),
            }
        }
        Command::Aut { graph, json } => {
            let g = read_edges(&graph)?;
            let a = aut_size(&g)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&a.summary())?);
            } else {
                println!(
                    "order\t{}\nlog2\t{}\norbits\t{}",
                    a.order,
                    a.log2_order(),
                    a.orbits.len()
                );
            }
        }
        Command::Stats {
            op,
            x,
            y,
            graph,
            vertex,
            p,
        } => {
            let value = match op {
                StatOp::H0 => stats::h0(need(p, "p")?)?,
                StatOp::Clustering => {
                    let g = read_edges(need(graph, "graph")?)?;
                    match vertex {
                        Some(v) if v >= g.order() => {
                            return Err(Error::Stats(format!("vertex {v} outside 0..{}", g.order())))
                        }
                        Some(v) => stats::clustering(&g, v),
                        None => stats::global_clustering(&g),
                    }
                }
                _ => {
                    let xs = read_series(&need(x, "x")?)?;
                    let ys = read_series(&need(y, "y")?)?;
                    match op {
                        StatOp::Pearson => stats::pearson(&xs, &ys)?,
                        StatOp::Spearman => stats::spearman(&xs, &ys)?,
                        _ => stats::ks_d(&xs, &ys)?,
                    }
                }
            };
            println!("{value}");
        }
        Command::Compress { graph, level } => {
            let g = read_edges(&graph)?;
            println!("{}", graph_compressed_length(&g, &Deflate { level })?);
        }
        Command::Exp {
            name,
            out,
            table,
            perms,
            seed,
            n,
            count,
            per_group,
            k,
            seeds,
            ws_p,
            pairs,
            graphs,
        } => {
            let (t, source) = load_table(table.as_deref())?;
            let ctx = Context::new(t, source, perms, seed);
            let output = match name {
                Experiment::EdgeDensity => {
                    let mut cfg = exp::EdgeDensityConfig::default();
                    cfg.n = n.unwrap_or(cfg.n);
                    cfg.groups = count.unwrap_or(cfg.groups);
                    cfg.graphs_per_group = per_group.unwrap_or(cfg.graphs_per_group);
                    exp::edge_density(&ctx, &cfg)?
                }
                Experiment::DualPairs => {
                    let list = match pairs {
                        Some(p) => exp::load_pairs(p)?,
                        None => exp::relabeled_pairs(count.unwrap_or(30), n.unwrap_or(30), seed)?,
                    };
                    exp::dual_pairs(&ctx, &list)?
                }
                Experiment::AutScatter => {
                    let mut cfg = exp::AutScatterConfig::default();
                    cfg.n = n.unwrap_or(cfg.n);
                    cfg.circulants = count.unwrap_or(cfg.circulants);
                    let mut corpus = exp::regular_corpus(&cfg, seed)?;
                    for p in graphs {
                        let graph = read_edges(&p)?;
                        corpus.push(exp::CorpusGraph {
                            id: p.display().to_string(),
                            graph,
                        });
                    }
                    exp::aut_scatter(&ctx, &corpus)?
                }
                Experiment::WsSweep => {
                    let mut cfg = exp::WsSweepConfig::default();
                    cfg.n = n.unwrap_or(cfg.n);
                    cfg.k = k.unwrap_or(cfg.k);
                    cfg.steps = count.unwrap_or(cfg.steps);
                    cfg.seeds = seeds.unwrap_or(cfg.seeds);
                    exp::ws_sweep(&ctx, &cfg)?
                }
                Experiment::ModelDist => {
                    let mut cfg = exp::ModelDistConfig::default();
                    cfg.n = n.unwrap_or(cfg.n);
                    cfg.per_family = per_group.unwrap_or(cfg.per_family);
                    cfg.degree = k.unwrap_or(cfg.degree);
                    cfg.ws_p = ws_p.unwrap_or(cfg.ws_p);
                    exp::model_dist(&ctx, &cfg)?
                }
                Experiment::Table1Fixture => exp::table1_fixture(&ctx)?,
            };
            for path in output.write(&out)? {
                println!("{}", path.display());
            }
            println!("{}", serde_json::to_string_pretty(&output.summary)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
