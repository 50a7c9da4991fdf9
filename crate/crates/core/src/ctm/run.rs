use std::fmt;

use super::machine::{Next, TuringMachine2D};

/// A rectangular array of symbols in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutputArray {
    height: usize,
    width: usize,
    cells: Vec<u8>,
}

impl OutputArray {
    pub fn new(width: usize, height: usize, cells: Vec<u8>) -> Self {
        assert_eq!(cells.len(), width * height, "cell count must equal width*height");
        OutputArray { height, width, cells }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.width + col]
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }

    /// Row-major digit string, one character per cell.
    pub fn digits(&self) -> String {
        self.cells
            .iter()
            .map(|&c| char::from_digit(c as u32, 36).expect("symbol below 36"))
            .collect()
    }

    pub fn from_digits(digits: &str, width: usize, height: usize) -> Option<Self> {
        if digits.len() != width * height {
            return None;
        }
        let cells = digits
            .chars()
            .map(|ch| ch.to_digit(36).map(|v| v as u8))
            .collect::<Option<Vec<u8>>>()?;
        Some(OutputArray::new(width, height, cells))
    }
}

impl fmt::Display for OutputArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.width) {
            for c in row {
                write!(f, "{c}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub halted: bool,
    pub steps: u64,
    /// Bounding rectangle of every visited cell; present iff `halted`.
    pub output: Option<OutputArray>,
}

#[derive(Clone, Copy)]
struct FlatRule {
    write: u8,
    dr: i64,
    dc: i64,
    /// `u8::MAX` means halt.
    next: u8,
}

/// Reusable simulator. Holds a grid that grows on demand and is cleared
/// back to blank over the visited rectangle after every run, so one
/// instance per worker thread amortises allocation over a whole shard.
pub struct Simulator {
    blank: u8,
    half: i64,
    side: usize,
    cells: Vec<u8>,
    rules: Vec<FlatRule>,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator::new()
    }
}

impl Simulator {
    pub fn new() -> Self {
        Simulator::with_blank(0)
    }

    /// Simulator whose unwritten cells read as `blank` instead of 0.
    pub fn with_blank(blank: u8) -> Self {
        let half = 32;
        let side = (2 * half + 1) as usize;
        Simulator {
            blank,
            half,
            side,
            cells: vec![blank; side * side],
            rules: Vec::new(),
        }
    }

    fn load(&mut self, tm: &TuringMachine2D) {
        self.rules.clear();
        self.rules.extend(tm.rules().iter().map(|r| {
            let (dr, dc) = r.mv.delta();
            FlatRule {
                write: r.write,
                dr,
                dc,
                next: match r.next {
                    Next::Halt => u8::MAX,
                    Next::State(s) => s,
                },
            }
        }));
    }

    fn grow(&mut self, need: i64) {
        let mut half = self.half;
        while half < need {
            half *= 2;
        }
        let side = (2 * half + 1) as usize;
        let mut cells = vec![self.blank; side * side];
        let shift = (half - self.half) as usize;
        for r in 0..self.side {
            let src = &self.cells[r * self.side..(r + 1) * self.side];
            let dst = (r + shift) * side + shift;
            cells[dst..dst + self.side].copy_from_slice(src);
        }
        self.half = half;
        self.side = side;
        self.cells = cells;
    }

    #[inline]
    fn offset(&self, r: i64, c: i64) -> usize {
        ((r + self.half) as usize) * self.side + (c + self.half) as usize
    }

    /// Runs `tm` from state 0 at the origin of a blank grid for at most
    /// `cutoff` transitions. A halting transition writes its symbol and
    /// stops without moving.
    pub fn run(&mut self, tm: &TuringMachine2D, cutoff: u64) -> RunResult {
        self.run_inner(tm, cutoff, true)
    }

    /// Like [`run`](Self::run) but skips building the output array.
    pub fn run_steps(&mut self, tm: &TuringMachine2D, cutoff: u64) -> RunResult {
        self.run_inner(tm, cutoff, false)
    }

    fn run_inner(&mut self, tm: &TuringMachine2D, cutoff: u64, want_output: bool) -> RunResult {
        assert!(cutoff >= 1, "cutoff must be at least 1");
        self.load(tm);
        let k = tm.symbols();
        let (mut r, mut c) = (0i64, 0i64);
        let (mut r0, mut r1, mut c0, mut c1) = (0i64, 0i64, 0i64, 0i64);
        let mut state = 0usize;
        let mut steps = 0u64;
        let blank = self.blank as usize;
        if self.rules[blank].next == 0 {
            // state 0 loops on blank cells: the head never meets a written cell
            return self.finish(false, cutoff, (0, 0, 0, 0), false);
        }
        let halted = loop {
            if steps == cutoff {
                break false;
            }
            let at = self.offset(r, c);
            let rule = self.rules[state * k + self.cells[at] as usize];
            self.cells[at] = rule.write;
            steps += 1;
            if rule.next == u8::MAX {
                break true;
            }
            r += rule.dr;
            c += rule.dc;
            if r.abs() > self.half || c.abs() > self.half {
                self.grow(r.abs().max(c.abs()));
            }
            let next = self.rules[rule.next as usize * k + blank];
            if next.next == rule.next
                && ((r < r0 && next.dr <= 0)
                    || (r > r1 && next.dr >= 0)
                    || (c < c0 && next.dc <= 0)
                    || (c > c1 && next.dc >= 0))
            {
                // on a fresh cell outside the visited frame, looping on blank
                // while moving away from or along the frame: never halts
                r0 = r0.min(r);
                r1 = r1.max(r);
                c0 = c0.min(c);
                c1 = c1.max(c);
                steps = cutoff;
                break false;
            }
            r0 = r0.min(r);
            r1 = r1.max(r);
            c0 = c0.min(c);
            c1 = c1.max(c);
            state = rule.next as usize;
        };
        self.finish(halted, steps, (r0, r1, c0, c1), want_output)
    }

    fn finish(&mut self, halted: bool, steps: u64, frame: (i64, i64, i64, i64), want_output: bool) -> RunResult {
        let (r0, r1, c0, c1) = frame;
        let output = (halted && want_output).then(|| {
            let width = (c1 - c0 + 1) as usize;
            let height = (r1 - r0 + 1) as usize;
            let mut cells = Vec::with_capacity(width * height);
            for row in r0..=r1 {
                let start = self.offset(row, c0);
                cells.extend_from_slice(&self.cells[start..start + width]);
            }
            OutputArray::new(width, height, cells)
        });

        for row in r0..=r1 {
            let start = self.offset(row, c0);
            let end = self.offset(row, c1) + 1;
            self.cells[start..end].fill(self.blank);
        }

        RunResult { halted, steps, output }
    }
}

/// One-shot convenience wrapper around [`Simulator::run`].
pub fn run_machine(tm: &TuringMachine2D, cutoff: u64) -> RunResult {
    Simulator::new().run(tm, cutoff)
}
