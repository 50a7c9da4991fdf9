//! Coding-theorem frequency tables over d x d binary blocks.
//!
//! A [`BlockDistribution`] maps each block produced by an enumerated machine
//! space to its output frequency and to `km = -log2(frequency)`, the
//! algorithmic-probability estimate of its complexity in bits.

mod block;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

pub use block::{Block, MAX_SIDE};

use crate::ctm::RuntimeCensus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Enumerated,
    Imported,
}

impl Source {
    fn as_str(self) -> &'static str {
        match self {
            Source::Enumerated => "enumerated",
            Source::Imported => "imported",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMeta {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub cutoff: Option<u64>,
    /// Denominator of the frequencies: every halting machine, square output
    /// or not.
    pub halting_total: Option<u64>,
    pub symmetrized: bool,
    pub source: Source,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry {
    pub count: Option<u64>,
    pub frequency: f64,
    pub km: f64,
}

/// Result of a table lookup. `fallback` is set when the block was never
/// produced and `km` is the pessimistic stand-in `max_km + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KmLookup {
    pub km: f64,
    pub fallback: bool,
}

/// Extra bits charged to a block absent from the table.
pub const FALLBACK_PENALTY: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BlockDistribution {
    d: usize,
    /// Indexed by block bits.
    slots: Vec<Option<Entry>>,
    len: usize,
    min_km: f64,
    max_km: f64,
    /// km of every block of the side, absent ones at the fallback, descending.
    ranked: Vec<f64>,
    meta: TableMeta,
}

impl BlockDistribution {
    fn from_entries(d: usize, entries: BTreeMap<u16, Entry>, meta: TableMeta) -> Self {
        let mut slots = vec![None; 1usize << (d * d)];
        let mut min_km = f64::INFINITY;
        let mut max_km = f64::NEG_INFINITY;
        for (&bits, e) in &entries {
            slots[bits as usize] = Some(*e);
            min_km = min_km.min(e.km);
            max_km = max_km.max(e.km);
        }
        let mut ranked = Vec::new();
        if !entries.is_empty() {
            let fallback = max_km + FALLBACK_PENALTY;
            ranked = slots.iter().map(|s| s.map_or(fallback, |e| e.km)).collect();
            ranked.sort_by(|a: &f64, b| b.total_cmp(a));
        }
        BlockDistribution {
            d,
            slots,
            len: entries.len(),
            min_km,
            max_km,
            ranked,
            meta,
        }
    }

    /// Selects the d x d outputs of a binary census. Frequencies are taken
    /// over all halting machines.
    pub fn from_census(census: &RuntimeCensus, d: usize) -> Result<Self> {
        check_side(d)?;
        if census.k != 2 {
            return Err(Error::InvalidMachineSpace(format!(
                "block tables need binary machines, census has k={}",
                census.k
            )));
        }
        if census.halting == 0 {
            return Err(Error::EmptyTable { d });
        }
        let total = census.halting as f64;
        let mut entries = BTreeMap::new();
        for (arr, &count) in &census.outputs {
            if arr.width() != d || arr.height() != d {
                continue;
            }
            let block = Block::from_fn(d, |r, c| arr.get(r, c) == 1);
            let frequency = count as f64 / total;
            entries.insert(
                block.bits(),
                Entry {
                    count: Some(count),
                    frequency,
                    km: -frequency.log2(),
                },
            );
        }
        if entries.is_empty() {
            return Err(Error::EmptyTable { d });
        }
        let meta = TableMeta {
            n: Some(census.n),
            k: Some(census.k),
            cutoff: Some(census.cutoff),
            halting_total: Some(census.halting),
            symmetrized: false,
            source: Source::Enumerated,
        };
        Ok(BlockDistribution::from_entries(d, entries, meta))
    }

    pub fn side(&self) -> usize {
        self.d
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Fraction of the 2^(d²) possible blocks present in the table.
    pub fn coverage(&self) -> f64 {
        self.len as f64 / self.slots.len() as f64
    }

    pub fn min_km(&self) -> f64 {
        self.min_km
    }

    pub fn max_km(&self) -> f64 {
        self.max_km
    }

    pub fn fallback_km(&self) -> f64 {
        self.max_km + FALLBACK_PENALTY
    }

    /// km of all 2^(d²) blocks, highest first; empty for an empty table.
    pub fn ranked_km(&self) -> &[f64] {
        &self.ranked
    }

    pub fn entry(&self, block: Block) -> Option<&Entry> {
        self.slots.get(block.bits() as usize)?.as_ref()
    }

    /// Stored (block, entry) pairs in increasing block order.
    pub fn entries(&self) -> impl Iterator<Item = (Block, &Entry)> + '_ {
        let d = self.d;
        self.slots
            .iter()
            .enumerate()
            .filter_map(move |(bits, e)| e.as_ref().map(|e| (Block::new(d, bits as u16), e)))
    }

    pub fn km_block(&self, block: Block) -> Result<KmLookup> {
        if block.side() != self.d {
            return Err(Error::BlockSize {
                expected: self.d,
                got: block.side(),
            });
        }
        Ok(self.km_bits(block.bits()))
    }

    /// Lookup by packed bits; the caller guarantees the side matches.
    #[inline]
    pub fn km_bits(&self, bits: u16) -> KmLookup {
        match self.slots[bits as usize] {
            Some(e) => KmLookup {
                km: e.km,
                fallback: false,
            },
            None => KmLookup {
                km: self.fallback_km(),
                fallback: true,
            },
        }
    }

    /// Closes the table under block complement and the 8 dihedral
    /// transforms. Each class takes the smallest km among its present
    /// members; members that were absent are added with that value.
    pub fn symmetrize(&self) -> BlockDistribution {
        let mut entries: BTreeMap<u16, Entry> = BTreeMap::new();
        let mut done = vec![false; self.slots.len()];
        for (block, _) in self.entries() {
            if done[block.bits() as usize] {
                continue;
            }
            let class = block.symmetry_class();
            let best = class
                .iter()
                .filter_map(|b| self.entry(*b))
                .copied()
                .min_by(|a, b| a.km.total_cmp(&b.km))
                .expect("class contains the seed block");
            for b in class {
                done[b.bits() as usize] = true;
                entries.insert(b.bits(), best);
            }
        }
        let meta = TableMeta {
            symmetrized: true,
            ..self.meta.clone()
        };
        BlockDistribution::from_entries(self.d, entries, meta)
    }

    pub fn meta_line(&self) -> String {
        let mut line = format!("#meta\td={}", self.d);
        let m = &self.meta;
        if let Some(n) = m.n {
            let _ = write!(line, "\tn={n}");
        }
        if let Some(k) = m.k {
            let _ = write!(line, "\tk={k}");
        }
        if let Some(c) = m.cutoff {
            let _ = write!(line, "\tcutoff={c}");
        }
        if let Some(h) = m.halting_total {
            let _ = write!(line, "\thalting={h}");
        }
        let _ = write!(line, "\tsymmetrized={}\tsource={}", m.symmetrized, m.source.as_str());
        line
    }

    /// Native form: meta line, then `hex<TAB>km[<TAB>count]` per block.
    pub fn to_tsv(&self) -> String {
        let mut out = self.meta_line();
        out.push('\n');
        for (block, e) in self.entries() {
            match e.count {
                Some(c) => {
                    let _ = writeln!(out, "{}\t{}\t{}", block.hex(), e.km, c);
                }
                None => {
                    let _ = writeln!(out, "{}\t{}", block.hex(), e.km);
                }
            }
        }
        out
    }

    pub fn from_tsv(text: &str, origin: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines
            .next()
            .ok_or_else(|| Error::parse(origin, 1, "empty table file"))?;
        let (d, mut meta) = parse_meta(head).map_err(|m| Error::parse(origin, 1, m))?;
        let mut entries = BTreeMap::new();
        for (i, line) in lines {
            let lineno = i + 1;
            let err = |msg: String| Error::parse(origin, lineno, msg);
            if line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(err(format!(
                    "expected 2 or 3 tab-separated fields, got {}",
                    fields.len()
                )));
            }
            let block = Block::from_hex(d, fields[0])
                .ok_or_else(|| err(format!("{:?} is not a {d}x{d} block in hex", fields[0])))?;
            let km: f64 = fields[1].parse().map_err(|_| err(format!("bad km {:?}", fields[1])))?;
            if !km.is_finite() || km < 0.0 {
                return Err(err(format!("km must be finite and >= 0, got {km}")));
            }
            let count = match fields.get(2) {
                Some(c) => Some(c.parse::<u64>().map_err(|_| err(format!("bad count {c:?}")))?),
                None => None,
            };
            let frequency = match (count, meta.halting_total) {
                (Some(c), Some(h)) => c as f64 / h as f64,
                _ => (-km).exp2(),
            };
            if entries.insert(block.bits(), Entry { count, frequency, km }).is_some() {
                return Err(err(format!("duplicate block {}", fields[0])));
            }
        }
        if entries.is_empty() {
            return Err(Error::EmptyTable { d });
        }
        if entries.values().any(|e| e.count.is_none()) {
            meta.source = Source::Imported;
        }
        Ok(BlockDistribution::from_entries(d, entries, meta))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_tsv()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        BlockDistribution::from_tsv(&text, &path.display().to_string())
    }

    /// Reads an externally published table. The result is always marked
    /// `source=imported`; frequencies without counts are `2^-km` and are not
    /// normalized.
    pub fn import_external(path: impl AsRef<Path>) -> Result<Self> {
        let mut t = BlockDistribution::load(path)?;
        t.meta.source = Source::Imported;
        Ok(t)
    }

    pub fn import_str(text: &str) -> Result<Self> {
        let mut t = BlockDistribution::from_tsv(text, "<input>")?;
        t.meta.source = Source::Imported;
        Ok(t)
    }
}

const DESK_TABLE: &str = include_str!("../../fixtures/table_3_2_d3_sym.tsv");

/// Name recorded for the built-in table in experiment headers.
pub const DESK_TABLE_NAME: &str = "built-in table_3_2_d3_sym";

/// The built-in d=3 table: every (3,2) machine at cutoff 1000, symmetrized.
pub fn desk_table() -> BlockDistribution {
    BlockDistribution::from_tsv(DESK_TABLE, "table_3_2_d3_sym.tsv").expect("built-in table parses")
}

fn check_side(d: usize) -> Result<()> {
    if (2..=MAX_SIDE).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedSide(d))
    }
}

fn parse_meta(line: &str) -> std::result::Result<(usize, TableMeta), String> {
    let rest = line.strip_prefix("#meta").ok_or("first line must be a #meta header")?;
    let mut d = None;
    let mut meta = TableMeta {
        n: None,
        k: None,
        cutoff: None,
        halting_total: None,
        symmetrized: false,
        source: Source::Imported,
    };
    for field in rest.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or(format!("bad meta field {field:?}"))?;
        let bad = || format!("bad meta value {field:?}");
        match key {
            "d" => d = Some(value.parse::<usize>().map_err(|_| bad())?),
            "n" => meta.n = Some(value.parse().map_err(|_| bad())?),
            "k" => meta.k = Some(value.parse().map_err(|_| bad())?),
            "cutoff" => meta.cutoff = Some(value.parse().map_err(|_| bad())?),
            "halting" => meta.halting_total = Some(value.parse().map_err(|_| bad())?),
            "symmetrized" => meta.symmetrized = value.parse().map_err(|_| bad())?,
            "source" => {
                meta.source = match value {
                    "enumerated" => Source::Enumerated,
                    "imported" => Source::Imported,
                    _ => return Err(bad()),
                }
            }
            _ => {}
        }
    }
    let d = d.ok_or("meta header needs d=")?;
    if !(2..=MAX_SIDE).contains(&d) {
        return Err(format!("d={d} is not in 2..={MAX_SIDE}"));
    }
    Ok((d, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> BlockDistribution {
        let text = "#meta d=2\n0\t1.5\nf\t3.0\n1\t5.0\n2\t4.0\n";
        BlockDistribution::import_str(text).unwrap()
    }

    #[test]
    fn minimal_import() {
        let t = BlockDistribution::import_str("#meta d=2\n0\t1.0\n9\t4.5\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.meta().source, Source::Imported);
        let hit = t.km_block(Block::new(2, 9)).unwrap();
        assert_eq!(
            hit,
            KmLookup {
                km: 4.5,
                fallback: false
            }
        );
        let miss = t.km_block(Block::new(2, 3)).unwrap();
        assert_eq!(
            miss,
            KmLookup {
                km: 5.5,
                fallback: true
            }
        );
        assert!((t.entry(Block::zeros(2)).unwrap().frequency - 0.5).abs() < 1e-15);
    }

    #[test]
    fn import_errors_name_lines() {
        let dup = BlockDistribution::import_str("#meta d=2\n0\t1.0\n0\t2.0\n").unwrap_err();
        assert!(dup.to_string().contains(":3:"), "{dup}");
        assert!(dup.to_string().contains("duplicate block 0"), "{dup}");
        let neg = BlockDistribution::import_str("#meta d=2\n0\t-1.0\n").unwrap_err();
        assert!(neg.to_string().contains(":2:"), "{neg}");
        assert!(BlockDistribution::import_str("#meta d=2\n0\n").is_err());
        assert!(BlockDistribution::import_str("#meta d=2\n10\t1\n").is_err());
        assert!(BlockDistribution::import_str("0\t1\n").is_err());
        assert!(BlockDistribution::import_str("#meta d=7\n0\t1\n").is_err());
    }

    #[test]
    fn wrong_block_side_rejected() {
        let t = toy();
        assert!(matches!(t.km_block(Block::zeros(3)), Err(Error::BlockSize { .. })));
    }

    #[test]
    fn symmetrize_takes_class_minimum() {
        let t = toy().symmetrize();
        // all-0 and all-1 share the smaller value
        assert_eq!(t.km_block(Block::zeros(2)).unwrap().km, 1.5);
        assert_eq!(t.km_block(Block::ones(2)).unwrap().km, 1.5);
        // single-cell blocks 1 and 2 are rotations of each other
        assert_eq!(t.km_block(Block::new(2, 1)).unwrap().km, 4.0);
        assert_eq!(t.km_block(Block::new(2, 8)).unwrap().km, 4.0);
        // their complements (three ones) join the class
        assert_eq!(t.km_block(Block::new(2, 0b1110)).unwrap().km, 4.0);
        assert!(t.meta().symmetrized);
        assert_eq!(t.symmetrize(), t);
    }

    #[test]
    fn symmetrize_never_raises_km() {
        let raw = toy();
        let sym = raw.symmetrize();
        for (b, e) in raw.entries() {
            assert!(sym.entry(b).unwrap().km <= e.km);
        }
    }

    #[test]
    fn native_round_trip_is_bit_exact() {
        let t = toy().symmetrize();
        let back = BlockDistribution::from_tsv(&t.to_tsv(), "mem").unwrap();
        assert_eq!(back, t);
    }
}
