use std::fmt;

/// A d x d binary block, d in 1..=4, packed row-major with cell (0,0) in the
/// most significant of the d² used bits. The hex form of `bits` is the
/// row-major bit string read as a big-endian number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    d: u8,
    bits: u16,
}

pub const MAX_SIDE: usize = 4;

impl Block {
    pub fn new(d: usize, bits: u16) -> Self {
        assert!((1..=MAX_SIDE).contains(&d), "block side must be 1..=4");
        let cells = d * d;
        assert!(cells == 16 || bits >> cells == 0, "bits exceed d*d cells");
        Block { d: d as u8, bits }
    }

    pub fn zeros(d: usize) -> Self {
        Block::new(d, 0)
    }

    pub fn ones(d: usize) -> Self {
        Block::new(d, mask(d))
    }

    pub fn from_fn(d: usize, mut cell: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = 0u16;
        for r in 0..d {
            for c in 0..d {
                bits = (bits << 1) | cell(r, c) as u16;
            }
        }
        Block::new(d, bits)
    }

    pub fn side(&self) -> usize {
        self.d as usize
    }

    pub fn bits(&self) -> u16 {
        self.bits
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        let d = self.side();
        (self.bits >> (d * d - 1 - (r * d + c))) & 1 == 1
    }

    pub fn popcount(&self) -> u32 {
        self.bits.count_ones()
    }

    pub fn complement(&self) -> Self {
        Block {
            d: self.d,
            bits: !self.bits & mask(self.side()),
        }
    }

    pub fn rotate(&self) -> Self {
        let d = self.side();
        Block::from_fn(d, |r, c| self.get(d - 1 - c, r))
    }

    pub fn transpose(&self) -> Self {
        Block::from_fn(self.side(), |r, c| self.get(c, r))
    }

    /// The 8 dihedral images of this block (with repeats for symmetric
    /// blocks).
    pub fn dihedral(&self) -> [Block; 8] {
        let mut out = [*self; 8];
        let mut cur = *self;
        for i in 0..4 {
            out[i] = cur;
            out[i + 4] = cur.transpose();
            cur = cur.rotate();
        }
        out
    }

    /// Dihedral images of the block and of its complement.
    pub fn symmetry_class(&self) -> Vec<Block> {
        let mut class: Vec<Block> = self
            .dihedral()
            .into_iter()
            .chain(self.complement().dihedral())
            .collect();
        class.sort_unstable();
        class.dedup();
        class
    }

    pub fn hex(&self) -> String {
        let width = (self.side() * self.side()).div_ceil(4);
        format!("{:0width$x}", self.bits)
    }

    pub fn from_hex(d: usize, hex: &str) -> Option<Self> {
        if !(1..=MAX_SIDE).contains(&d) || hex.is_empty() || hex.len() > 4 {
            return None;
        }
        let bits = u16::from_str_radix(hex, 16).ok()?;
        (d * d == 16 || bits >> (d * d) == 0).then(|| Block::new(d, bits))
    }

    /// Every block of side d, in increasing bit order.
    pub fn all(d: usize) -> impl Iterator<Item = Block> {
        (0..=mask(d) as u32).map(move |b| Block::new(d, b as u16))
    }
}

pub(crate) fn mask(d: usize) -> u16 {
    if d * d == 16 {
        u16::MAX
    } else {
        (1u16 << (d * d)) - 1
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.side();
        for r in 0..d {
            if r > 0 {
                f.write_str("/")?;
            }
            for c in 0..d {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}
