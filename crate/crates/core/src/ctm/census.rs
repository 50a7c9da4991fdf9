use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;
use std::path::Path;

use rayon::prelude::*;

use super::machine::{check_space, TuringMachine2D};
use super::run::{OutputArray, Simulator};
use crate::error::{Error, Result};

const CHUNK: u64 = 4096;

/// Halting census over a set of machine indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuntimeCensus {
    pub n: usize,
    pub k: usize,
    pub cutoff: u64,
    pub max_side: usize,
    shards: Vec<Range<u64>>,
    pub total: u64,
    pub halting: u64,
    /// steps -> number of halting machines with that runtime
    pub runtimes: BTreeMap<u64, u64>,
    /// square outputs with side <= max_side -> number of machines producing them
    pub outputs: BTreeMap<OutputArray, u64>,
}

impl RuntimeCensus {
    fn empty(n: usize, k: usize, cutoff: u64, max_side: usize) -> Self {
        RuntimeCensus {
            n,
            k,
            cutoff,
            max_side,
            shards: Vec::new(),
            total: 0,
            halting: 0,
            runtimes: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    /// Disjoint, sorted, coalesced index ranges covered by this census.
    pub fn shards(&self) -> &[Range<u64>] {
        &self.shards
    }

    pub fn halting_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.halting as f64 / self.total as f64
        }
    }

    pub fn max_runtime(&self) -> Option<u64> {
        self.runtimes.keys().next_back().copied()
    }

    /// Smallest runtime `t` such that at least fraction `q` of halters stop
    /// within `t` steps.
    pub fn runtime_quantile(&self, q: f64) -> Option<u64> {
        if self.halting == 0 {
            return None;
        }
        let target = (q * self.halting as f64).ceil() as u64;
        let mut seen = 0;
        for (&t, &c) in &self.runtimes {
            seen += c;
            if seen >= target {
                return Some(t);
            }
        }
        self.max_runtime()
    }

    /// Combines censuses over disjoint shards. Overlapping shards or
    /// mismatched parameters are rejected.
    pub fn merge(mut self, other: RuntimeCensus) -> Result<RuntimeCensus> {
        if (self.n, self.k, self.cutoff, self.max_side) != (other.n, other.k, other.cutoff, other.max_side) {
            return Err(Error::CensusMerge(format!(
                "parameter mismatch: (n={}, k={}, cutoff={}, max_side={}) vs (n={}, k={}, cutoff={}, max_side={})",
                self.n, self.k, self.cutoff, self.max_side, other.n, other.k, other.cutoff, other.max_side
            )));
        }
        for a in &self.shards {
            for b in &other.shards {
                if a.start < b.end && b.start < a.end {
                    return Err(Error::CensusMerge(format!(
                        "shards {}..{} and {}..{} overlap",
                        a.start, a.end, b.start, b.end
                    )));
                }
            }
        }
        self.shards.extend(other.shards);
        self.shards = coalesce(std::mem::take(&mut self.shards));
        self.total += other.total;
        self.halting += other.halting;
        for (t, c) in other.runtimes {
            *self.runtimes.entry(t).or_default() += c;
        }
        for (a, c) in other.outputs {
            *self.outputs.entry(a).or_default() += c;
        }
        Ok(self)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let shards: Vec<String> = self.shards.iter().map(|r| format!("{}..{}", r.start, r.end)).collect();
        let _ = writeln!(
            out,
            "#meta\tn={}\tk={}\tcutoff={}\tmax_side={}\tshards={}\ttotal={}\thalting={}",
            self.n,
            self.k,
            self.cutoff,
            self.max_side,
            shards.join(","),
            self.total,
            self.halting
        );
        out.push_str("#runtimes\n");
        for (t, c) in &self.runtimes {
            let _ = writeln!(out, "{t}\t{c}");
        }
        out.push_str("#outputs\n");
        for (a, c) in &self.outputs {
            let _ = writeln!(out, "{}\t{}x{}\t{}", a.digits(), a.width(), a.height(), c);
        }
        out
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            Head,
            Runtimes,
            Outputs,
        }
        let mut section = Section::Head;
        let mut census: Option<RuntimeCensus> = None;
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            let err = |msg: String| Error::parse(origin, lineno, msg);
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("#meta") {
                if census.is_some() {
                    return Err(err("duplicate #meta line".into()));
                }
                census = Some(parse_meta(rest).map_err(err)?);
                continue;
            }
            match line {
                "#runtimes" => {
                    section = Section::Runtimes;
                    continue;
                }
                "#outputs" => {
                    section = Section::Outputs;
                    continue;
                }
                _ => {}
            }
            let c = census.as_mut().ok_or_else(|| err("data before #meta".into()))?;
            let fields: Vec<&str> = line.split('\t').collect();
            match section {
                Section::Head => return Err(err(format!("unexpected line {line:?}"))),
                Section::Runtimes => {
                    let [t, n] = fields[..] else {
                        return Err(err("runtime rows need 2 fields".into()));
                    };
                    let t: u64 = t.parse().map_err(|_| err(format!("bad runtime {t:?}")))?;
                    let n: u64 = n.parse().map_err(|_| err(format!("bad count {n:?}")))?;
                    if c.runtimes.insert(t, n).is_some() {
                        return Err(err(format!("duplicate runtime {t}")));
                    }
                }
                Section::Outputs => {
                    let [bits, dims, n] = fields[..] else {
                        return Err(err("output rows need 3 fields".into()));
                    };
                    let (w, h) = dims
                        .split_once('x')
                        .and_then(|(w, h)| Some((w.parse().ok()?, h.parse().ok()?)))
                        .ok_or_else(|| err(format!("bad dimensions {dims:?}")))?;
                    let arr = OutputArray::from_digits(bits, w, h)
                        .ok_or_else(|| err(format!("bad array {bits:?} for {dims}")))?;
                    if arr.cells().iter().any(|&s| s as usize >= c.k) {
                        return Err(err(format!("symbol out of range in {bits:?}")));
                    }
                    let n: u64 = n.parse().map_err(|_| err(format!("bad count {n:?}")))?;
                    if c.outputs.insert(arr, n).is_some() {
                        return Err(err(format!("duplicate output {bits}")));
                    }
                }
            }
        }
        let census = census.ok_or_else(|| Error::parse(origin, 0, "missing #meta line"))?;
        let sum: u64 = census.runtimes.values().sum();
        if sum != census.halting {
            return Err(Error::parse(
                origin,
                0,
                format!("runtime histogram sums to {sum}, meta says halting={}", census.halting),
            ));
        }
        Ok(census)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RuntimeCensus::from_tsv(&text, &path.display().to_string())
    }
}

fn parse_meta(rest: &str) -> std::result::Result<RuntimeCensus, String> {
    let mut kv = BTreeMap::new();
    for field in rest.split('\t').filter(|f| !f.is_empty()) {
        let (key, value) = field.split_once('=').ok_or(format!("bad meta field {field:?}"))?;
        kv.insert(key, value);
    }
    let get = |key: &str| kv.get(key).copied().ok_or(format!("meta is missing {key}"));
    let num = |key: &str| -> std::result::Result<u64, String> {
        get(key)?.parse().map_err(|_| format!("meta {key} is not an integer"))
    };
    let mut c = RuntimeCensus::empty(
        num("n")? as usize,
        num("k")? as usize,
        num("cutoff")?,
        num("max_side")? as usize,
    );
    let shards = get("shards")?;
    if !shards.is_empty() {
        for s in shards.split(',') {
            c.shards.push(parse_range(s)?);
        }
    }
    c.total = num("total")?;
    c.halting = num("halting")?;
    Ok(c)
}

/// Parses `A..B` into a half-open range.
pub fn parse_range(s: &str) -> std::result::Result<Range<u64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or(format!("range {s:?} is not of the form A..B"))?;
    let a: u64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: u64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("range {s:?} is reversed"));
    }
    Ok(a..b)
}

fn coalesce(mut ranges: Vec<Range<u64>>) -> Vec<Range<u64>> {
    ranges.retain(|r| r.start < r.end);
    ranges.sort_by_key(|r| r.start);
    let mut out: Vec<Range<u64>> = Vec::with_capacity(ranges.len());
    for r in ranges {
        match out.last_mut() {
            Some(last) if last.end == r.start => last.end = r.end,
            _ => out.push(r),
        }
    }
    out
}

/// Runs every machine with index in `shard` and tallies halting runtimes and
/// small square outputs. Work is split into chunks processed in parallel;
/// the reduction is a commutative sum so the result does not depend on
/// scheduling.
pub fn enumerate_census(n: usize, k: usize, cutoff: u64, shard: Range<u64>, max_side: usize) -> Result<RuntimeCensus> {
    let bound = check_space(n, k)?;
    if shard.start > shard.end || shard.end > bound {
        return Err(Error::InvalidShard(format!(
            "{}..{} is not within 0..{bound}",
            shard.start, shard.end
        )));
    }
    if max_side == 0 {
        return Err(Error::InvalidShard("max side must be at least 1".into()));
    }
    if cutoff == 0 {
        return Err(Error::InvalidShard("cutoff must be at least 1".into()));
    }

    let chunks: Vec<Range<u64>> = (shard.start..shard.end)
        .step_by(CHUNK as usize)
        .map(|s| s..(s + CHUNK).min(shard.end))
        .collect();

    let mut census = chunks
        .into_par_iter()
        .map_init(Simulator::new, |sim, range| {
            let mut part = RuntimeCensus::empty(n, k, cutoff, max_side);
            for idx in range.clone() {
                let tm = TuringMachine2D::from_index(idx, n, k).expect("index within bound");
                part.total += 1;
                if !tm.can_halt() {
                    continue;
                }
                let res = sim.run(&tm, cutoff);
                if !res.halted {
                    continue;
                }
                part.halting += 1;
                *part.runtimes.entry(res.steps).or_default() += 1;
                if let Some(out) = res.output {
                    if out.is_square() && out.width() <= max_side {
                        *part.outputs.entry(out).or_default() += 1;
                    }
                }
            }
            part
        })
        .reduce(
            || RuntimeCensus::empty(n, k, cutoff, max_side),
            |a, b| a.merge_counts(b),
        );
    census.shards = coalesce(vec![shard]);
    Ok(census)
}

impl RuntimeCensus {
    fn merge_counts(mut self, other: RuntimeCensus) -> RuntimeCensus {
        self.total += other.total;
        self.halting += other.halting;
        for (t, c) in other.runtimes {
            *self.runtimes.entry(t).or_default() += c;
        }
        for (a, c) in other.outputs {
            *self.outputs.entry(a).or_default() += c;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_one_counts_first_transition_halters() {
        let c = enumerate_census(2, 2, 1, 0..331_776, 3).unwrap();
        assert_eq!(c.halting, 8 * 24u64.pow(3));
        assert_eq!(c.runtimes.len(), 1);
        assert_eq!(c.runtimes[&1], 110_592);
        // all of them produce a 1x1 array
        assert_eq!(c.outputs.values().sum::<u64>(), 110_592);
    }

    #[test]
    fn split_shards_merge_to_whole() {
        let whole = enumerate_census(2, 2, 60, 1000..9000, 3).unwrap();
        let a = enumerate_census(2, 2, 60, 1000..4321, 3).unwrap();
        let b = enumerate_census(2, 2, 60, 4321..9000, 3).unwrap();
        assert_eq!(b.clone().merge(a.clone()).unwrap(), whole);
        assert_eq!(a.merge(b).unwrap(), whole);
    }

    #[test]
    fn overlapping_merge_rejected() {
        let a = enumerate_census(2, 2, 20, 0..100, 2).unwrap();
        let b = enumerate_census(2, 2, 20, 50..150, 2).unwrap();
        assert!(matches!(a.merge(b), Err(Error::CensusMerge(_))));
    }

    #[test]
    fn mismatched_merge_rejected() {
        let a = enumerate_census(2, 2, 20, 0..100, 2).unwrap();
        let b = enumerate_census(2, 2, 21, 100..200, 2).unwrap();
        assert!(matches!(a.merge(b), Err(Error::CensusMerge(_))));
    }

    #[test]
    fn shard_bounds_checked() {
        assert!(enumerate_census(2, 2, 10, 0..331_777, 2).is_err());
        assert!(enumerate_census(2, 2, 10, 0..10, 0).is_err());
    }

    #[test]
    fn tsv_round_trip() {
        let c = enumerate_census(2, 2, 50, 0..5000, 3).unwrap();
        let back = RuntimeCensus::from_tsv(&c.to_tsv(), "mem").unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn tsv_rejects_inconsistent_histogram() {
        let text =
            "#meta\tn=2\tk=2\tcutoff=5\tmax_side=2\tshards=0..10\ttotal=10\thalting=3\n#runtimes\n1\t2\n#outputs\n";
        assert!(RuntimeCensus::from_tsv(text, "mem").is_err());
    }

    #[test]
    fn quantiles() {
        let c = enumerate_census(2, 2, 100, 0..20_000, 2).unwrap();
        assert_eq!(c.runtime_quantile(1.0), c.max_runtime());
        assert!(c.runtime_quantile(0.5) <= c.runtime_quantile(0.99));
    }
}
