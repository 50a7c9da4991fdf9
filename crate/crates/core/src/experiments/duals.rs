use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{csv_table, spearman_of, Context, Output, Plot};
use crate::error::{Error, Result};
use crate::graph::{generate, read_edges, Family, GeneratorSpec, Graph};
use crate::rng::SplitMix64;

#[derive(Debug, Clone)]
pub struct GraphPair {
    pub id: String,
    pub first: Graph,
    pub second: Graph,
}

/// `count` pairs (g, g relabeled by a random permutation); g is G(n, p) with
/// p spread evenly over [0.02, 0.5].
pub fn relabeled_pairs(count: usize, n: usize, seed: u64) -> Result<Vec<GraphPair>> {
    (0..count)
        .map(|i| {
            let p = 0.02 + 0.48 * i as f64 / (count.max(2) - 1) as f64;
            let mut rng = SplitMix64::substream(seed, i as u64);
            let g = generate(&GeneratorSpec::new(Family::ErGnp { n, p }, rng.next_u64()))?;
            let h = g.permute(&rng.permutation(n))?;
            Ok(GraphPair {
                id: format!("relabel-{i:02}"),
                first: g,
                second: h,
            })
        })
        .collect()
}

/// Reads a pair list: one pair per line, two edge-list paths separated by
/// whitespace, relative to the list's directory. `#` starts a comment.
pub fn load_pairs(list: impl AsRef<Path>) -> Result<Vec<GraphPair>> {
    let list = list.as_ref();
    let text = std::fs::read_to_string(list).map_err(|e| Error::io(list, e))?;
    let dir = list.parent().unwrap_or(Path::new("."));
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts[..] else {
            return Err(Error::parse(list.display(), i + 1, "expected two edge-list paths"));
        };
        let load = |p: &str| read_edges(dir.join(p)).map_err(|e| Error::Experiment(format!("pair {a} / {b}: {e}")));
        pairs.push(GraphPair {
            id: format!("{a}|{b}"),
            first: load(a)?,
            second: load(b)?,
        });
    }
    Ok(pairs)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
struct PairsConfig {
    pairs: usize,
}

/// NBDM and compressed length of both sides of each pair, with the rank
/// correlation across pairs for each method.
pub fn dual_pairs(ctx: &Context, pairs: &[GraphPair]) -> Result<Output> {
    if pairs.len() < 3 {
        return Err(Error::Experiment(format!(
            "dual-pairs needs at least 3 pairs, got {}",
            pairs.len()
        )));
    }
    let rows: Vec<[f64; 4]> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let a = ctx.nbdm(&p.first, ctx.item_seed(3, i as u64))?;
            let b = ctx.nbdm(&p.second, ctx.item_seed(4, i as u64))?;
            Ok([
                a.normalized,
                b.normalized,
                ctx.deflate(&p.first)? as f64,
                ctx.deflate(&p.second)? as f64,
            ])
        })
        .collect::<Result<_>>()?;

    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<f64>>();
    let (n1, n2, c1, c2) = (col(0), col(1), col(2), col(3));
    let both_nbdm: Vec<f64> = n1.iter().chain(&n2).copied().collect();
    let both_deflate: Vec<f64> = c1.iter().chain(&c2).copied().collect();
    let summary = json!({
        "pairs": pairs.len(),
        "spearman-nbdm": spearman_of(&n1, &n2)?,
        "spearman-deflate": spearman_of(&c1, &c2)?,
        "spearman-nbdm-vs-deflate": spearman_of(&both_nbdm, &both_deflate)?,
    });

    let table: Vec<Vec<String>> = pairs
        .iter()
        .zip(&rows)
        .map(|(p, r)| {
            vec![
                p.id.clone(),
                p.first.order().to_string(),
                p.second.order().to_string(),
                r[0].to_string(),
                r[1].to_string(),
                r[2].to_string(),
                r[3].to_string(),
            ]
        })
        .collect();
    let csv = csv_table(
        &[
            "pair",
            "v_first",
            "v_second",
            "nbdm_first",
            "nbdm_second",
            "deflate_first",
            "deflate_second",
        ],
        &table,
    )?;
    Ok(Output {
        name: "dual-pairs".into(),
        header: ctx.header("dual-pairs", &PairsConfig { pairs: pairs.len() })?,
        csv,
        plots: vec![
            Plot::new(
                "nbdm",
                "nbdm_first",
                "nbdm_second",
                n1.iter().copied().zip(n2.iter().copied()).collect(),
            ),
            Plot::new(
                "deflate",
                "deflate_first",
                "deflate_second",
                c1.iter().copied().zip(c2.iter().copied()).collect(),
            ),
        ],
        summary,
    })
}
