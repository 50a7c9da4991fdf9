use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{csv_table, normalized_orderings, Context, Output, Plot};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, GeneratorSpec};
use crate::stats::{mean, std_dev};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EdgeDensityConfig {
    pub n: usize,
    pub groups: usize,
    pub graphs_per_group: usize,
}

impl Default for EdgeDensityConfig {
    fn default() -> Self {
        EdgeDensityConfig {
            n: 50,
            groups: 20,
            graphs_per_group: 20,
        }
    }
}

#[derive(Debug, Clone)]
struct Group {
    edges: usize,
    density: f64,
    mean_min: f64,
    sem_min: f64,
    mean_perm_std: f64,
    flagged: usize,
}

/// Random graphs grouped by edge count from empty to complete; per group
/// the mean over graphs of the minimum NBDM across orderings and of the
/// spread of NBDM across orderings.
pub fn edge_density(ctx: &Context, cfg: &EdgeDensityConfig) -> Result<Output> {
    let max_edges = cfg.n * cfg.n.saturating_sub(1) / 2;
    if cfg.groups < 2 || cfg.graphs_per_group == 0 || max_edges == 0 {
        return Err(Error::Experiment(
            "edge-density needs n >= 2, at least 2 groups and 1 graph per group".into(),
        ));
    }
    let edge_counts: Vec<usize> = (0..cfg.groups)
        .map(|i| (i as f64 * max_edges as f64 / (cfg.groups - 1) as f64).round() as usize)
        .collect();

    let jobs: Vec<(usize, usize)> = (0..cfg.groups)
        .flat_map(|g| (0..cfg.graphs_per_group).map(move |j| (g, j)))
        .collect();
    let results: Vec<(f64, f64, bool)> = jobs
        .par_iter()
        .map(|&(g, j)| {
            let idx = (g * cfg.graphs_per_group + j) as u64;
            let spec = GeneratorSpec::new(
                Family::ErGnm {
                    n: cfg.n,
                    m: edge_counts[g],
                },
                ctx.item_seed(1, idx),
            );
            let graph = generate(&spec)?;
            let (rep, all) = normalized_orderings(ctx, &graph, ctx.item_seed(2, idx))?;
            Ok((rep.normalized, std_dev(&all), rep.raw_exceeds_max))
        })
        .collect::<Result<_>>()?;

    let groups: Vec<Group> = results
        .chunks(cfg.graphs_per_group)
        .zip(&edge_counts)
        .map(|(chunk, &edges)| {
            let mins: Vec<f64> = chunk.iter().map(|r| r.0).collect();
            let stds: Vec<f64> = chunk.iter().map(|r| r.1).collect();
            Group {
                edges,
                density: edges as f64 / max_edges as f64,
                mean_min: mean(&mins),
                sem_min: std_dev(&mins) / (mins.len() as f64).sqrt(),
                mean_perm_std: mean(&stds),
                flagged: chunk.iter().filter(|r| r.2).count(),
            }
        })
        .collect();

    let rows: Vec<Vec<String>> = groups
        .iter()
        .enumerate()
        .map(|(i, g)| {
            vec![
                i.to_string(),
                g.edges.to_string(),
                g.density.to_string(),
                cfg.graphs_per_group.to_string(),
                g.mean_min.to_string(),
                g.sem_min.to_string(),
                g.mean_perm_std.to_string(),
                g.flagged.to_string(),
            ]
        })
        .collect();
    let csv = csv_table(
        &[
            "group",
            "edges",
            "density",
            "graphs",
            "min_nbdm_mean",
            "min_nbdm_sem",
            "perm_std_mean",
            "raw_over_max",
        ],
        &rows,
    )?;

    let means: Vec<f64> = groups.iter().map(|g| g.mean_min).collect();
    let sems: Vec<f64> = groups.iter().map(|g| g.sem_min).collect();
    let peak = (0..means.len())
        .max_by(|&a, &b| means[a].total_cmp(&means[b]).then(b.cmp(&a)))
        .unwrap();
    let pooled = |a: usize, b: usize| (sems[a].powi(2) + sems[b].powi(2)).sqrt();
    // pairs with zero spread on both sides are compared exactly
    let mut worst_asymmetry = 0.0f64;
    let mut exact_pairs_unequal = 0;
    for i in 0..means.len() / 2 {
        let j = means.len() - 1 - i;
        let diff = (means[i] - means[j]).abs();
        if pooled(i, j) > 0.0 {
            worst_asymmetry = worst_asymmetry.max(diff / pooled(i, j));
        } else if diff > 0.0 {
            exact_pairs_unequal += 1;
        }
    }
    let summary = json!({
        "peak-density": groups[peak].density,
        "peak-min-nbdm": means[peak],
        "strictly-unimodal": unimodal(&means, &vec![0.0; means.len()]),
        "unimodal-within-3se": unimodal(&means, &sems),
        "worst-asymmetry-in-pooled-se": worst_asymmetry,
        "zero-spread-pairs-unequal": exact_pairs_unequal,
        "symmetric-within-3se": worst_asymmetry <= 3.0 && exact_pairs_unequal == 0,
        "empty-group-min-nbdm": means[0],
        "raw-over-max": groups.iter().map(|g| g.flagged).sum::<usize>(),
        "densities": groups.iter().map(|g| g.density).collect::<Vec<_>>(),
        "min-nbdm-means": means,
        "min-nbdm-sems": sems,
    });

    Ok(Output {
        name: "edge-density".into(),
        header: ctx.header("edge-density", cfg)?,
        csv,
        plots: vec![
            Plot::new(
                "min",
                "density",
                "min_nbdm",
                groups.iter().map(|g| (g.density, g.mean_min)).collect(),
            ),
            Plot::new(
                "std",
                "density",
                "perm_std",
                groups.iter().map(|g| (g.density, g.mean_perm_std)).collect(),
            ),
        ],
        summary,
    })
}

/// Rises to a single peak and falls after it, ignoring steps against the
/// trend smaller than three pooled standard errors.
pub(crate) fn unimodal(values: &[f64], sems: &[f64]) -> bool {
    let Some(peak) = (0..values.len()).max_by(|&a, &b| values[a].total_cmp(&values[b])) else {
        return true;
    };
    let tol = |i: usize| 3.0 * (sems[i].powi(2) + sems[i + 1].powi(2)).sqrt();
    (0..peak).all(|i| values[i + 1] >= values[i] - tol(i))
        && (peak..values.len() - 1).all(|i| values[i + 1] <= values[i] + tol(i))
}
