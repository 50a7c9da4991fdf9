use crate::rng::SplitMix64;

/// Square binary matrix stored as packed 64-bit row words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            data: vec![0; n * words],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn from_fn(n: usize, mut cell: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                if cell(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Every cell an independent fair coin.
    pub fn random(n: usize, rng: &mut SplitMix64) -> Self {
        BitMatrix::from_fn(n, |_, _| rng.next_u64() & 1 == 1)
    }

    pub fn side(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.data[r * self.words + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row_ones(&self, r: usize) -> usize {
        self.data[r * self.words..(r + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Flips every cell, diagonal included.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        let tail = self.n % 64;
        for r in 0..self.n {
            let row = &mut out.data[r * self.words..(r + 1) * self.words];
            for w in row.iter_mut() {
                *w = !*w;
            }
            if tail != 0 {
                row[self.words - 1] &= (1u64 << tail) - 1;
            }
        }
        out
    }

    /// Conjugates by the vertex map `perm`: cell (i, j) moves to
    /// (perm[i], perm[j]). `perm` must be a bijection on 0..n.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.n);
        let mut out = BitMatrix::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                if self.get(r, c) {
                    out.set(perm[r], perm[c], true);
                }
            }
        }
        out
    }

    /// The d x d block with top-left corner (r0, c0), packed row-major with
    /// the first cell in the most significant bit.
    #[inline]
    pub fn block_bits(&self, r0: usize, c0: usize, d: usize) -> u16 {
        let mut bits = 0u16;
        for r in r0..r0 + d {
            let w = self.data[r * self.words + c0 / 64];
            let shift = c0 % 64;
            let chunk = if shift + d <= 64 {
                w >> shift
            } else {
                (w >> shift) | (self.data[r * self.words + c0 / 64 + 1] << (64 - shift))
            };
            for c in 0..d {
                bits = (bits << 1) | ((chunk >> c) & 1) as u16;
            }
        }
        bits
    }

    /// Row-major bit packing, 8 cells per byte, first cell in the most
    /// significant bit. The final byte is zero-padded.
    pub fn pack_bytes(&self) -> Vec<u8> {
        let cells = self.n * self.n;
        let mut out = vec![0u8; cells.div_ceil(8)];
        let mut i = 0;
        for r in 0..self.n {
            for c in 0..self.n {
                if self.get(r, c) {
                    out[i / 8] |= 0x80 >> (i % 8);
                }
                i += 1;
            }
        }
        out
    }

    /// Row-major bit vector, one bool per cell.
    pub fn bits(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(self.n * self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                out.push(self.get(r, c));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_respects_width() {
        for n in [1, 5, 63, 64, 65, 130] {
            let m = BitMatrix::zeros(n).complement();
            assert_eq!(m.count_ones(), n * n);
            assert_eq!(m.complement(), BitMatrix::zeros(n));
        }
    }

    #[test]
    fn block_bits_across_word_boundary() {
        let mut rng = SplitMix64::new(11);
        let m = BitMatrix::random(70, &mut rng);
        for &(r0, c0) in &[(0, 0), (3, 61), (10, 62), (66, 63), (1, 60)] {
            let mut expect = 0u16;
            for r in r0..r0 + 4 {
                for c in c0..c0 + 4 {
                    expect = (expect << 1) | m.get(r, c) as u16;
                }
            }
            assert_eq!(m.block_bits(r0, c0, 4), expect);
        }
    }

    #[test]
    fn pack_bytes_layout() {
        let m = BitMatrix::from_fn(3, |r, c| r == 0 && c == 0 || r == 2 && c == 2);
        // 9 cells: 100 000 001 -> 1000_0000 1000_0000
        assert_eq!(m.pack_bytes(), vec![0x80, 0x80]);
    }
}
