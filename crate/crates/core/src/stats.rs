//! Entropy bound, clustering coefficients and the correlation battery.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Finite real-valued observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Stats(format!("non-finite value {v}")));
        }
        Ok(Series(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Series> {
        Series::new(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl TryFrom<Vec<f64>> for Series {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Series::new(v)
    }
}

/// Binary Shannon entropy in bits, with 0·log 0 = 0.
pub fn h0(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Stats(format!("probability {p} outside [0,1]")));
    }
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    Ok(term(p) + term(1.0 - p))
}

/// `l·H0(mean) + log2(l)` for a bit string of length `l`.
pub fn entropy_bound(bits: &[bool]) -> Result<f64> {
    if bits.is_empty() {
        return Err(Error::Stats("entropy bound of an empty string".into()));
    }
    let l = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b).count() as f64;
    Ok(l * h0(ones / l)? + l.log2())
}

/// Local clustering coefficient; 0 for vertices of degree below 2.
pub fn clustering(g: &Graph, v: usize) -> f64 {
    let nbrs: Vec<usize> = g.neighbors(v).collect();
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut links = 0usize;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if g.has_edge(a, b) {
                links += 1;
            }
        }
    }
    2.0 * links as f64 / (k * (k - 1)) as f64
}

/// Mean of the local coefficients over all vertices.
pub fn global_clustering(g: &Graph) -> f64 {
    let n = g.order();
    if n == 0 {
        return 0.0;
    }
    (0..n).map(|v| clustering(g, v)).sum::<f64>() / n as f64
}

fn paired(x: &Series, y: &Series) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Stats(format!(
            "series lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Stats("correlation needs at least 2 pairs".into()));
    }
    Ok(())
}

pub fn pearson(x: &Series, y: &Series) -> Result<f64> {
    paired(x, y)?;
    let n = x.len() as f64;
    let mx = x.values().iter().sum::<f64>() / n;
    let my = y.values().iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.values().iter().zip(y.values()) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Stats("correlation undefined for a zero-variance series".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties given their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

pub fn spearman(x: &Series, y: &Series) -> Result<f64> {
    paired(x, y)?;
    let rx = Series(average_ranks(x.values()));
    let ry = Series(average_ranks(y.values()));
    pearson(&rx, &ry)
}

/// Two-sample Kolmogorov-Smirnov statistic: the largest gap between the
/// empirical distribution functions.
pub fn ks_d(x: &Series, y: &Series) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::Stats("KS statistic needs nonempty samples".into()));
    }
    let mut a = x.values().to_vec();
    let mut b = y.values().to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let v = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] == v {
            i += 1;
        }
        while j < b.len() && b[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample standard deviation (n − 1 denominator); 0 for fewer than 2 values.
pub fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    if values.iter().all(|&v| v == values[0]) {
        return 0.0;
    }
    let m = mean(values);
    let ss: f64 = values.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (values.len() - 1) as f64).sqrt()
}
