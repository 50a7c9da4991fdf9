//! Experiment runners. Each returns an [`Output`] holding a CSV table, plot
//! data files and a JSON summary; nothing depends on wall-clock time, so
//! reruns with the same configuration are byte-identical.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;

use crate::bdm;
use crate::compress::{self, Compressor, Deflate};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::SplitMix64;
use crate::table::BlockDistribution;

mod aut_scatter;
mod density;
mod duals;
mod models;
mod table1;
mod ws;

pub use aut_scatter::{aut_scatter, regular_corpus, AutScatterConfig, CorpusGraph};
pub use density::{edge_density, EdgeDensityConfig};
pub use duals::{dual_pairs, load_pairs, relabeled_pairs, GraphPair};
pub use models::{model_dist, ModelDistConfig};
pub use table1::{table1_fixture, Table1Row, TABLE1};
pub use ws::{ws_sweep, WsSweepConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Shared inputs of every experiment.
#[derive(Debug, Clone)]
pub struct Context {
    pub table: Arc<BlockDistribution>,
    /// Where the table came from, recorded in output headers.
    pub table_source: String,
    pub perms: usize,
    pub seed: u64,
    pub compressor: Deflate,
}

impl Context {
    pub fn new(table: BlockDistribution, table_source: impl Into<String>, perms: usize, seed: u64) -> Self {
        Context {
            table: Arc::new(table),
            table_source: table_source.into(),
            perms,
            seed,
            compressor: Deflate::default(),
        }
    }

    pub fn d(&self) -> usize {
        self.table.side()
    }

    /// Seed of item `i` in the named stream.
    pub fn item_seed(&self, stream: u64, i: u64) -> u64 {
        let base = SplitMix64::substream(self.seed, stream).next_u64();
        SplitMix64::substream(base, i).next_u64()
    }

    pub fn nbdm(&self, g: &Graph, seed: u64) -> Result<bdm::NbdmReport> {
        bdm::nbdm(g, &self.table, self.d(), self.perms, seed)
    }

    pub fn deflate(&self, g: &Graph) -> Result<usize> {
        compress::graph_compressed_length(g, &self.compressor)
    }

    fn header(&self, name: &str, config: &impl Serialize) -> Result<String> {
        let meta = self.table.meta_line();
        let meta = meta.trim_start_matches("#meta").trim().replace('\t', " ");
        Ok(format!(
            "# graphk {VERSION}\n# experiment: {name}\n# table: {} ({meta})\n# d={} perms={} seed={} compressor={}\n# config: {}\n",
            self.table_source,
            self.d(),
            self.perms,
            self.seed,
            self.compressor.describe(),
            serde_json::to_string(config)?,
        ))
    }
}

/// Two-column plot data.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl Plot {
    pub fn new(name: &str, x_label: &str, y_label: &str, points: Vec<(f64, f64)>) -> Self {
        Plot {
            name: name.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            points,
        }
    }

    pub fn render(&self, header: &str) -> String {
        let mut s = String::from(header);
        s.push_str(&format!("# {} {}\n", self.x_label, self.y_label));
        for (x, y) in &self.points {
            s.push_str(&format!("{x} {y}\n"));
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct Output {
    pub name: String,
    pub header: String,
    pub csv: String,
    pub plots: Vec<Plot>,
    pub summary: serde_json::Value,
}

impl Output {
    /// The CSV file content: `#` comment header then the table.
    pub fn csv_file(&self) -> String {
        format!("{}{}", self.header, self.csv)
    }

    /// Writes `<name>.csv`, one `<name>-<plot>.gp` per plot and
    /// `<name>.summary.json`; returns the paths written.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut files = vec![(dir.join(format!("{}.csv", self.name)), self.csv_file())];
        for p in &self.plots {
            files.push((dir.join(format!("{}-{}.gp", self.name, p.name)), p.render(&self.header)));
        }
        let summary = serde_json::to_string_pretty(&self.summary)? + "\n";
        files.push((dir.join(format!("{}.summary.json", self.name)), summary));
        for (path, text) in &files {
            std::fs::write(path, text).map_err(|e| Error::io(path, e))?;
        }
        Ok(files.into_iter().map(|f| f.0).collect())
    }
}

fn csv_table(columns: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Experiment(format!("csv: {e}"));
    w.write_record(columns).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Experiment(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Normalized BDM of every sampled ordering, plus the report of the best.
fn normalized_orderings(ctx: &Context, g: &Graph, seed: u64) -> Result<(bdm::NbdmReport, Vec<f64>)> {
    let d = ctx.d();
    let reports = bdm::bdm_over_orderings(g, &ctx.table, d, ctx.perms, seed)?;
    let best = reports
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::Experiment("no orderings sampled".into()))?;
    let rep = bdm::normalize(g.order(), &ctx.table, d, best.value, best.fallback_lookups)?;
    let all = reports
        .iter()
        .map(|r| (r.value - rep.min) / (rep.max - rep.min))
        .collect();
    Ok((rep, all))
}

fn spearman_of(x: &[f64], y: &[f64]) -> Result<f64> {
    crate::stats::spearman(
        &crate::stats::Series::new(x.to_vec())?,
        &crate::stats::Series::new(y.to_vec())?,
    )
}
