use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{csv_table, Context, Output, Plot};
use crate::error::{Error, Result};
use crate::graph::{generate, Family, GeneratorSpec};
use crate::rng::SplitMix64;
use crate::stats::{mean, std_dev};

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ModelDistConfig {
    pub n: usize,
    pub per_family: usize,
    /// Degree of the regular and Watts-Strogatz graphs; the other families
    /// are sized to about the same edge count.
    pub degree: usize,
    pub ws_p: f64,
    /// Rewiring probability of the extra Watts-Strogatz family.
    pub ws_shift_p: f64,
    pub bins: usize,
}

impl Default for ModelDistConfig {
    fn default() -> Self {
        ModelDistConfig {
            n: 30,
            per_family: 73,
            degree: 4,
            ws_p: 0.05,
            ws_shift_p: 0.5,
            bins: 20,
        }
    }
}

const FAMILIES: [&str; 5] = ["regular", "ws", "ba", "er", "ws-shift"];

fn family(cfg: &ModelDistConfig, name: &str, rng: &mut SplitMix64) -> Family {
    let n = cfg.n;
    match name {
        "regular" => {
            let mut pool: Vec<usize> = (1..=(n - 1) / 2).collect();
            rng.shuffle(&mut pool);
            pool.truncate(cfg.degree / 2);
            pool.sort_unstable();
            Family::Circulant { n, offsets: pool }
        }
        "ws" => Family::Ws {
            n,
            k: cfg.degree,
            p: cfg.ws_p,
        },
        "ws-shift" => Family::Ws {
            n,
            k: cfg.degree,
            p: cfg.ws_shift_p,
        },
        "ba" => Family::Ba { n, m: cfg.degree / 2 },
        _ => Family::ErGnm {
            n,
            m: n * cfg.degree / 2,
        },
    }
}

/// NBDM distributions of regular, Watts-Strogatz, Barabasi-Albert and
/// Erdos-Renyi graphs of equal order and comparable size.
pub fn model_dist(ctx: &Context, cfg: &ModelDistConfig) -> Result<Output> {
    if cfg.degree < 2 || !cfg.degree.is_multiple_of(2) || cfg.degree >= cfg.n || cfg.per_family == 0 || cfg.bins == 0 {
        return Err(Error::Experiment(
            "model-dist needs an even degree in [2, n) and nonzero counts".into(),
        ));
    }
    let jobs: Vec<(usize, usize)> = (0..FAMILIES.len())
        .flat_map(|f| (0..cfg.per_family).map(move |i| (f, i)))
        .collect();
    let results: Vec<(usize, f64, bool)> = jobs
        .par_iter()
        .map(|&(f, i)| {
            let idx = (f * cfg.per_family + i) as u64;
            let mut rng = SplitMix64::new(ctx.item_seed(8, idx));
            let fam = family(cfg, FAMILIES[f], &mut rng);
            let g = generate(&GeneratorSpec::new(fam, rng.next_u64()))?;
            let rep = ctx.nbdm(&g, ctx.item_seed(9, idx))?;
            Ok((g.edge_count(), rep.normalized, rep.raw_exceeds_max))
        })
        .collect::<Result<_>>()?;

    let mut summary = serde_json::Map::new();
    let mut plots = Vec::new();
    for (f, chunk) in results.chunks(cfg.per_family).enumerate() {
        let values: Vec<f64> = chunk.iter().map(|r| r.1).collect();
        let mut hist = vec![0usize; cfg.bins];
        for v in &values {
            let b = ((v * cfg.bins as f64).floor().max(0.0) as usize).min(cfg.bins - 1);
            hist[b] += 1;
        }
        let points = hist
            .iter()
            .enumerate()
            .map(|(b, &c)| ((b as f64 + 0.5) / cfg.bins as f64, c as f64 / values.len() as f64))
            .collect();
        plots.push(Plot::new(FAMILIES[f], "nbdm", "fraction", points));
        summary.insert(
            FAMILIES[f].to_string(),
            json!({
                "mean": mean(&values),
                "std": std_dev(&values),
                "mean-edges": mean(&chunk.iter().map(|r| r.0 as f64).collect::<Vec<_>>()),
                "raw-over-max": chunk.iter().filter(|r| r.2).count(),
                "histogram": hist,
            }),
        );
    }
    let m = |k: &str| summary[k]["mean"].as_f64().unwrap_or(f64::NAN);
    let ordered = m("er") > m("ba") && m("ba") > m("ws") && m("ws") > m("regular");
    let shifted = m("ws-shift") > m("ws");
    summary.insert("ordering-er-ba-ws-regular".into(), json!(ordered));
    summary.insert("ws-shift-increases".into(), json!(shifted));

    let rows: Vec<Vec<String>> = jobs
        .iter()
        .zip(&results)
        .map(|(&(f, i), r)| vec![FAMILIES[f].to_string(), i.to_string(), r.0.to_string(), r.1.to_string()])
        .collect();
    Ok(Output {
        name: "model-dist".into(),
        header: ctx.header("model-dist", cfg)?,
        csv: csv_table(&["family", "index", "edges", "nbdm"], &rows)?,
        plots,
        summary: serde_json::Value::Object(summary),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::test_support::toy_context;

    #[test]
    fn small_run_has_every_family() {
        let ctx = toy_context(2);
        let cfg = ModelDistConfig {
            per_family: 3,
            ..Default::default()
        };
        let out = model_dist(&ctx, &cfg).unwrap();
        for f in FAMILIES {
            assert_eq!(
                out.summary[f]["histogram"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap())
                    .sum::<u64>(),
                3
            );
        }
        assert_eq!(out.csv.lines().count(), 1 + 15);
        assert_eq!(out.summary["regular"]["mean-edges"], 60.0);
    }

    #[test]
    fn odd_degree_rejected() {
        let ctx = toy_context(1);
        assert!(model_dist(
            &ctx,
            &ModelDistConfig {
                degree: 3,
                ..Default::default()
            }
        )
        .is_err());
    }
}
