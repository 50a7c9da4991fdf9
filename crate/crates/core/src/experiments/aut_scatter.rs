use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{csv_table, spearman_of, Context, Output, Plot};
use crate::aut::{aut_size, log2_factorial};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, GeneratorSpec, Graph};
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub id: String,
    pub graph: Graph,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct AutScatterConfig {
    pub n: usize,
    pub circulants: usize,
    /// Random regular graphs, degree-matched to the first circulants.
    pub random_regular: usize,
}

impl Default for AutScatterConfig {
    fn default() -> Self {
        AutScatterConfig {
            n: 20,
            circulants: 40,
            random_regular: 40,
        }
    }
}

/// Circulants on `n` vertices with distinct seeded offset sets, random
/// regular graphs of the same degrees, the complete graph and, when n = 20,
/// the 4x5 rook lattice.
pub fn regular_corpus(cfg: &AutScatterConfig, seed: u64) -> Result<Vec<CorpusGraph>> {
    let half = cfg.n / 2;
    if cfg.n < 3 || cfg.circulants >= (1usize << half) - 1 || cfg.random_regular > cfg.circulants {
        return Err(Error::Experiment(format!(
            "cannot draw {} distinct circulants on {} vertices",
            cfg.circulants, cfg.n
        )));
    }
    let full_mask = (1u64 << half) - 1;
    let mut rng = SplitMix64::new(seed);
    let mut masks: Vec<u64> = Vec::new();
    while masks.len() < cfg.circulants {
        let m = rng.below(full_mask) + 1;
        if m != full_mask && !masks.contains(&m) {
            masks.push(m);
        }
    }
    let mut corpus = Vec::new();
    for m in masks {
        let offsets: Vec<usize> = (0..half).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect();
        let id = format!(
            "circulant-{}",
            offsets.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(".")
        );
        let graph = generate(&GeneratorSpec::new(Family::Circulant { n: cfg.n, offsets }, 0))?;
        corpus.push(CorpusGraph { id, graph });
    }
    for i in 0..cfg.random_regular {
        let k = corpus[i].graph.degree(0);
        let spec = GeneratorSpec::new(Family::RandomRegular { n: cfg.n, k }, rng.next_u64());
        corpus.push(CorpusGraph {
            id: format!("random-regular-{k}-{i:02}"),
            graph: generate(&spec)?,
        });
    }
    corpus.push(CorpusGraph {
        id: format!("complete-{}", cfg.n),
        graph: Graph::complete(cfg.n),
    });
    if cfg.n == 20 {
        let graph = generate(&GeneratorSpec::new(Family::Lattice { rows: 4, cols: 5 }, 0))?;
        corpus.push(CorpusGraph {
            id: "lattice-4x5".into(),
            graph,
        });
    }
    Ok(corpus)
}

struct Row {
    log2_a: f64,
    over_factorial: f64,
    nbdm: f64,
    deflate: usize,
    connected: bool,
    regular: bool,
}

/// Automorphism group size against NBDM and compressed length.
pub fn aut_scatter(ctx: &Context, corpus: &[CorpusGraph]) -> Result<Output> {
    if corpus.len() < 3 {
        return Err(Error::Experiment("aut-scatter needs at least 3 graphs".into()));
    }
    let rows: Vec<Row> = corpus
        .par_iter()
        .enumerate()
        .map(|(i, c)| {
            let a = aut_size(&c.graph)?;
            let log2_a = a.log2_order();
            Ok(Row {
                log2_a,
                over_factorial: (log2_a - log2_factorial(c.graph.order())).exp2(),
                nbdm: ctx.nbdm(&c.graph, ctx.item_seed(5, i as u64))?.normalized,
                deflate: ctx.deflate(&c.graph)?,
                connected: c.graph.is_connected(),
                regular: c.graph.is_regular(),
            })
        })
        .collect::<Result<_>>()?;

    let log_a: Vec<f64> = rows.iter().map(|r| r.log2_a).collect();
    let nbdm: Vec<f64> = rows.iter().map(|r| r.nbdm).collect();
    let deflate: Vec<f64> = rows.iter().map(|r| r.deflate as f64).collect();
    let lookup = |prefix: &str| {
        corpus
            .iter()
            .zip(&rows)
            .find(|(c, _)| c.id.starts_with(prefix))
            .map(|(c, r)| json!({"id": c.id, "log2-aut": r.log2_a, "nbdm": r.nbdm, "deflate": r.deflate}))
    };
    let mut sorted = nbdm.clone();
    sorted.sort_by(f64::total_cmp);
    let summary = json!({
        "graphs": corpus.len(),
        "disconnected": corpus.iter().zip(&rows).filter(|(_, r)| !r.connected).map(|(c, _)| c.id.clone()).collect::<Vec<_>>(),
        "spearman-log2aut-nbdm": spearman_of(&log_a, &nbdm)?,
        "spearman-log2aut-deflate": spearman_of(&log_a, &deflate)?,
        "median-nbdm": sorted[sorted.len() / 2],
        "max-log2aut": log_a.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        "complete": lookup("complete-"),
        "lattice": lookup("lattice-"),
    });

    let table: Vec<Vec<String>> = corpus
        .iter()
        .zip(&rows)
        .map(|(c, r)| {
            vec![
                c.id.clone(),
                c.graph.order().to_string(),
                c.graph.edge_count().to_string(),
                r.connected.to_string(),
                r.regular.to_string(),
                r.log2_a.to_string(),
                r.over_factorial.to_string(),
                r.nbdm.to_string(),
                r.deflate.to_string(),
            ]
        })
        .collect();
    let csv = csv_table(
        &[
            "graph",
            "vertices",
            "edges",
            "connected",
            "regular",
            "log2_aut",
            "aut_over_factorial",
            "nbdm",
            "deflate",
        ],
        &table,
    )?;
    Ok(Output {
        name: "aut-scatter".into(),
        header: ctx.header("aut-scatter", &json!({"graphs": corpus.len()}))?,
        csv,
        plots: vec![
            Plot::new(
                "nbdm",
                "nbdm",
                "log2_aut",
                nbdm.iter().copied().zip(log_a.iter().copied()).collect(),
            ),
            Plot::new(
                "deflate",
                "deflate",
                "log2_aut",
                deflate.iter().copied().zip(log_a.iter().copied()).collect(),
            ),
        ],
        summary,
    })
}
