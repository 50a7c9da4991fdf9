use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{csv_table, spearman_of, Context, Output, Plot};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, GeneratorSpec};
use crate::stats::global_clustering;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct WsSweepConfig {
    pub n: usize,
    pub k: usize,
    /// Grid points evenly spaced over [0, 1], both ends included.
    pub steps: usize,
    /// Graphs per grid point; values are averaged over them.
    pub seeds: usize,
}

impl Default for WsSweepConfig {
    fn default() -> Self {
        WsSweepConfig {
            n: 1000,
            k: 4,
            steps: 101,
            seeds: 10,
        }
    }
}

impl WsSweepConfig {
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps.max(2) - 1;
        (0..=last).map(|i| i as f64 / last as f64).collect()
    }
}

/// order, edges, nbdm, raw bdm, raw over max, clustering, deflate length
type Run = (usize, usize, f64, f64, bool, f64, usize);

/// Watts-Strogatz rewiring sweep. Every grid point uses the same set of
/// generator and ordering seeds.
pub fn ws_sweep(ctx: &Context, cfg: &WsSweepConfig) -> Result<Output> {
    if cfg.seeds == 0 {
        return Err(Error::Experiment("ws-sweep needs at least one seed".into()));
    }
    let grid = cfg.grid();
    let jobs: Vec<(f64, u64)> = grid
        .iter()
        .flat_map(|&p| (0..cfg.seeds as u64).map(move |s| (p, s)))
        .collect();
    let runs: Vec<Run> = jobs
        .par_iter()
        .map(|&(p, s)| {
            let spec = GeneratorSpec::new(Family::Ws { n: cfg.n, k: cfg.k, p }, ctx.item_seed(6, s));
            let g = generate(&spec)?;
            let rep = ctx.nbdm(&g, ctx.item_seed(7, s))?;
            Ok((
                g.order(),
                g.edge_count(),
                rep.normalized,
                rep.raw,
                rep.raw_exceeds_max,
                global_clustering(&g),
                ctx.deflate(&g)?,
            ))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<(usize, usize, f64, f64, bool, f64, f64)> = runs
        .chunks(cfg.seeds)
        .map(|c| {
            let avg = |f: &dyn Fn(&Run) -> f64| c.iter().map(f).sum::<f64>() / c.len() as f64;
            let same = |f: &dyn Fn(&Run) -> usize| {
                if c.iter().all(|r| f(r) == f(&c[0])) {
                    f(&c[0])
                } else {
                    usize::MAX
                }
            };
            (
                same(&|r| r.0),
                same(&|r| r.1),
                avg(&|r| r.2),
                avg(&|r| r.3),
                c.iter().any(|r| r.4),
                avg(&|r| r.5),
                avg(&|r| r.6 as f64),
            )
        })
        .collect();

    let nbdm: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let clustering: Vec<f64> = rows.iter().map(|r| r.5).collect();
    let deflate: Vec<f64> = rows.iter().map(|r| r.6).collect();
    let at = |p: f64| grid.iter().position(|&q| (q - p).abs() < 1e-12).map(|i| clustering[i]);
    let summary = json!({
        "points": grid.len(),
        "spearman-p-nbdm": spearman_of(&grid, &nbdm)?,
        "spearman-p-deflate": spearman_of(&grid, &deflate)?,
        "clustering-p0": at(0.0),
        "clustering-p0.1": at(0.1),
        "clustering-p1": at(1.0),
        "nodes-constant": rows.iter().all(|r| r.0 == rows[0].0 && r.0 != usize::MAX),
        "edges-constant": rows.iter().all(|r| r.1 == rows[0].1 && r.1 != usize::MAX),
        "raw-over-max": runs.iter().filter(|r| r.4).count(),
    });

    let table: Vec<Vec<String>> = grid
        .iter()
        .zip(&rows)
        .map(|(p, r)| {
            vec![
                p.to_string(),
                r.0.to_string(),
                r.1.to_string(),
                r.2.to_string(),
                r.3.to_string(),
                r.5.to_string(),
                r.6.to_string(),
            ]
        })
        .collect();
    let csv = csv_table(
        &[
            "p",
            "nodes",
            "edges",
            "nbdm_mean",
            "raw_bdm_mean",
            "global_clustering_mean",
            "deflate_mean",
        ],
        &table,
    )?;
    let zip = |ys: &[f64]| grid.iter().copied().zip(ys.iter().copied()).collect::<Vec<_>>();
    Ok(Output {
        name: "ws-sweep".into(),
        header: ctx.header("ws-sweep", cfg)?,
        csv,
        plots: vec![
            Plot::new("nbdm", "p", "nbdm", zip(&nbdm)),
            Plot::new("clustering", "p", "global_clustering", zip(&clustering)),
            Plot::new("deflate", "p", "deflate", zip(&deflate)),
        ],
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::test_support::toy_context;

    #[test]
    fn grid_endpoints() {
        let g = WsSweepConfig::default().grid();
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 0.1);
        assert_eq!(g[100], 1.0);
    }

    #[test]
    fn small_sweep_invariants() {
        let ctx = toy_context(2);
        let out = ws_sweep(
            &ctx,
            &WsSweepConfig {
                n: 60,
                k: 4,
                steps: 11,
                seeds: 2,
            },
        )
        .unwrap();
        assert_eq!(out.summary["edges-constant"], true);
        assert_eq!(out.summary["nodes-constant"], true);
        assert_eq!(out.summary["clustering-p0"], 0.5);
    }
}
