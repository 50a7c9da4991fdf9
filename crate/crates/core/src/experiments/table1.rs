use serde_json::json;

use super::{csv_table, Context, Output, Plot};
use crate::error::Result;
use crate::stats::{pearson, Series};

/// One printed row: vertices, NBDM and `A/V` as `mantissa x 10^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub name: &'static str,
    pub vertices: usize,
    pub nbdm: f64,
    pub a_over_v: (f64, i32),
}

impl Table1Row {
    pub fn log10_a_over_v(&self) -> f64 {
        self.a_over_v.0.log10() + self.a_over_v.1 as f64
    }
}

const fn row(name: &'static str, vertices: usize, nbdm: f64, m: f64, e: i32) -> Table1Row {
    Table1Row {
        name,
        vertices,
        nbdm,
        a_over_v: (m, e),
    }
}

/// Twenty real-world networks with published NBDM and automorphism counts.
pub const TABLE1: [Table1Row; 20] = [
    row(
        "Metabolic Network of Actinobacillus Actinomycetemcomitans",
        993,
        0.00336,
        4.42,
        74,
    ),
    row("Metabolic Network Neisseria Meningitidis", 981, 0.00344, 2.86, 76),
    row("Perl Module Authors Network", 840, 0.00350, 4.63, 470),
    row("Metabolic Network Campylobacter Jejuni", 946, 0.00370, 6.97, 74),
    row("Metabolic Network Emericella Nidulans", 916, 0.00378, 3.43, 68),
    row("Pyrococcus Horikoshii Network", 953, 0.00382, 4.22, 70),
    row("Pyrococcus Furiosus Network", 931, 0.00384, 3.37, 68),
    row("Metabolic Network Thermotoga Maritima", 830, 0.00477, 2.05, 64),
    row("Mycoplasma Genitalium Network", 878, 0.00480, 6.75, 92),
    row("Treponema Pallidum Network", 899, 0.00499, 2.71, 84),
    row("Chlamydia Trachomatis Network", 822, 0.00511, 1.73, 75),
    row("Metabolic Network Pyrococcus Furiosus", 751, 0.00511, 2.86, 50),
    row("Rickettsia Prowazekii Network", 817, 0.00523, 1.39, 76),
    row("Arabidopsis Thaliana Network", 768, 0.00535, 1.93, 60),
    row("Oryza Sativa Network", 744, 0.00569, 3.45, 57),
    row("Chlamydia Pneumoniae Network", 744, 0.00635, 2.00, 70),
    row("Metabolic Network Oryza Sativa", 665, 0.00640, 9.49, 47),
    row("Metabolic Network Rickettsia Prowazekii", 456, 0.01080, 1.10, 34),
    row("Metabolic Network Mycoplasma Pneumoniae", 411, 0.01280, 1.85, 28),
    row("Metabolic Network Borrelia Burgdorferi", 409, 0.01460, 2.10, 36),
];

/// Correlations over the shipped rows; no graph is computed.
pub fn table1_fixture(ctx: &Context) -> Result<Output> {
    let v = Series::new(TABLE1.iter().map(|r| r.vertices as f64).collect())?;
    let k = Series::new(TABLE1.iter().map(|r| r.nbdm).collect())?;
    let a = Series::new(TABLE1.iter().map(|r| r.log10_a_over_v()).collect())?;
    let summary = json!({
        "rows": TABLE1.len(),
        "pearson-nbdm-vertices": pearson(&k, &v)?,
        "pearson-nbdm-log10-aut-over-v": pearson(&k, &a)?,
    });
    let rows: Vec<Vec<String>> = TABLE1
        .iter()
        .map(|r| {
            vec![
                r.name.to_string(),
                r.vertices.to_string(),
                r.nbdm.to_string(),
                format!("{}e{}", r.a_over_v.0, r.a_over_v.1),
                r.log10_a_over_v().to_string(),
            ]
        })
        .collect();
    Ok(Output {
        name: "table1".into(),
        header: ctx.header("table1-fixture", &json!({}))?,
        csv: csv_table(
            &["network", "vertices", "nbdm", "aut_over_v", "log10_aut_over_v"],
            &rows,
        )?,
        plots: vec![Plot::new(
            "vertices",
            "vertices",
            "nbdm",
            TABLE1.iter().map(|r| (r.vertices as f64, r.nbdm)).collect(),
        )],
        summary,
    })
}
