use std::fmt;

use crate::error::{Error, Result};

/// Head movement on the 2D grid. `Up` decreases the row index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Up,
    Down,
    Left,
    Right,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Up, Move::Down, Move::Left, Move::Right];

    /// (drow, dcol)
    pub fn delta(self) -> (i64, i64) {
        match self {
            Move::Up => (-1, 0),
            Move::Down => (1, 0),
            Move::Left => (0, -1),
            Move::Right => (0, 1),
        }
    }

    fn code(self) -> u64 {
        self as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Next {
    Halt,
    State(u8),
}

/// One transition: what to write, where to move and which state follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rule {
    pub write: u8,
    pub mv: Move,
    pub next: Next,
}

/// A 2-dimensional Turing machine in Busy Beaver form: `n` working states
/// plus a halt state, `k` symbols with 0 as the blank.
///
/// Rules are stored at `state * k + read`. The canonical enumeration treats
/// each rule as a digit in base `4·k·(n+1)`, rule 0 being the most
/// significant, and orders the options within a digit lexicographically by
/// (write, move, next) with `Halt` before every state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TuringMachine2D {
    n: usize,
    k: usize,
    rules: Vec<Rule>,
}

/// Size of the (n,k) machine space, or `None` if it does not fit in a u64.
pub fn machine_space_size(n: usize, k: usize) -> Option<u64> {
    let options = rule_options(n, k)?;
    let digits = u32::try_from(n.checked_mul(k)?).ok()?;
    options.checked_pow(digits)
}

fn rule_options(n: usize, k: usize) -> Option<u64> {
    (4u64).checked_mul(k as u64)?.checked_mul(n as u64 + 1)
}

pub(crate) fn check_space(n: usize, k: usize) -> Result<u64> {
    if n == 0 || n > 255 {
        return Err(Error::InvalidMachineSpace(format!(
            "state count {n} must be in 1..=255"
        )));
    }
    if !(2..=255).contains(&k) {
        return Err(Error::InvalidMachineSpace(format!(
            "symbol count {k} must be in 2..=255"
        )));
    }
    machine_space_size(n, k)
        .ok_or_else(|| Error::InvalidMachineSpace(format!("({n},{k}) machine space exceeds 2^64 machines")))
}

impl TuringMachine2D {
    pub fn new(n: usize, k: usize, rules: Vec<Rule>) -> Result<Self> {
        check_space(n, k)?;
        if rules.len() != n * k {
            return Err(Error::InvalidMachineSpace(format!(
                "expected {} rules, got {}",
                n * k,
                rules.len()
            )));
        }
        for r in &rules {
            if r.write as usize >= k {
                return Err(Error::InvalidMachineSpace(format!("symbol {} >= k={k}", r.write)));
            }
            if let Next::State(s) = r.next {
                if s as usize >= n {
                    return Err(Error::InvalidMachineSpace(format!("state {s} >= n={n}")));
                }
            }
        }
        Ok(TuringMachine2D { n, k, rules })
    }

    pub fn from_index(index: u64, n: usize, k: usize) -> Result<Self> {
        let bound = check_space(n, k)?;
        if index >= bound {
            return Err(Error::IndexOutOfRange { index, n, k, bound });
        }
        let options = rule_options(n, k).expect("checked above");
        let mut rules = vec![
            Rule {
                write: 0,
                mv: Move::Up,
                next: Next::Halt
            };
            n * k
        ];
        let mut rest = index;
        for slot in rules.iter_mut().rev() {
            *slot = decode_rule((rest % options) as usize, n);
            rest /= options;
        }
        Ok(TuringMachine2D { n, k, rules })
    }

    pub fn to_index(&self) -> u64 {
        let options = rule_options(self.n, self.k).expect("validated at construction");
        self.rules
            .iter()
            .fold(0u64, |acc, r| acc * options + encode_rule(r, self.n))
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn symbols(&self) -> usize {
        self.k
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, state: usize, read: u8) -> Rule {
        self.rules[state * self.k + read as usize]
    }

    /// False when no halting rule is reachable from state 0 in the state
    /// transition graph, in which case the machine provably never halts.
    pub fn can_halt(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for r in &self.rules[s * self.k..(s + 1) * self.k] {
                match r.next {
                    Next::Halt => return true,
                    Next::State(t) if !seen[t as usize] => {
                        seen[t as usize] = true;
                        stack.push(t as usize);
                    }
                    Next::State(_) => {}
                }
            }
        }
        false
    }

    /// Machine with symbols 0 and 1 exchanged in both the read index and the
    /// written symbol. Only meaningful for k = 2.
    pub fn swap_binary_symbols(&self) -> Self {
        assert_eq!(self.k, 2, "symbol swap is defined for binary machines");
        let mut rules = self.rules.clone();
        for s in 0..self.n {
            rules.swap(s * 2, s * 2 + 1);
        }
        for r in &mut rules {
            r.write = 1 - r.write;
        }
        TuringMachine2D {
            n: self.n,
            k: self.k,
            rules,
        }
    }
}

fn decode_rule(code: usize, n: usize) -> Rule {
    let next_code = code % (n + 1);
    let rest = code / (n + 1);
    let mv = Move::ALL[rest % 4];
    let write = (rest / 4) as u8;
    let next = if next_code == 0 {
        Next::Halt
    } else {
        Next::State((next_code - 1) as u8)
    };
    Rule { write, mv, next }
}

fn encode_rule(r: &Rule, n: usize) -> u64 {
    let next_code = match r.next {
        Next::Halt => 0,
        Next::State(s) => s as u64 + 1,
    };
    ((r.write as u64) * 4 + r.mv.code()) * (n as u64 + 1) + next_code
}

impl fmt::Display for TuringMachine2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let mv = match r.mv {
                Move::Up => 'U',
                Move::Down => 'D',
                Move::Left => 'L',
                Move::Right => 'R',
            };
            match r.next {
                Next::Halt => write!(f, "{}{}H", r.write, mv)?,
                Next::State(s) => write!(f, "{}{}{}", r.write, mv, s)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn space_size_22() {
        assert_eq!(machine_space_size(2, 2), Some(331_776));
        assert_eq!(machine_space_size(3, 2), Some(32u64.pow(6)));
    }

    #[test]
    fn first_and_last_machines() {
        let first = TuringMachine2D::from_index(0, 2, 2).unwrap();
        assert!(first.rules().iter().all(|r| *r
            == Rule {
                write: 0,
                mv: Move::Up,
                next: Next::Halt
            }));

        let last = TuringMachine2D::from_index(331_775, 2, 2).unwrap();
        assert!(last.rules().iter().all(|r| *r
            == Rule {
                write: 1,
                mv: Move::Right,
                next: Next::State(1)
            }));
        assert_eq!(last.to_index(), 331_775);
    }

    #[test]
    fn out_of_range_reports_bound() {
        match TuringMachine2D::from_index(331_776, 2, 2) {
            Err(Error::IndexOutOfRange { bound, .. }) => assert_eq!(bound, 331_776),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(TuringMachine2D::from_index(0, 0, 2).is_err());
        assert!(TuringMachine2D::from_index(0, 2, 1).is_err());
    }

    #[test]
    fn halting_reachability() {
        let spin = Rule {
            write: 0,
            mv: Move::Left,
            next: Next::State(0),
        };
        let halt = Rule {
            write: 0,
            mv: Move::Left,
            next: Next::Halt,
        };
        let to1 = Rule {
            write: 1,
            mv: Move::Up,
            next: Next::State(1),
        };
        // state 1 halts but is unreachable
        let tm = TuringMachine2D::new(2, 2, vec![spin, spin, halt, halt]).unwrap();
        assert!(!tm.can_halt());
        let tm = TuringMachine2D::new(2, 2, vec![spin, to1, halt, spin]).unwrap();
        assert!(tm.can_halt());
    }

    #[test]
    fn swap_is_involution() {
        let tm = TuringMachine2D::from_index(123_456, 2, 2).unwrap();
        assert_eq!(tm.swap_binary_symbols().swap_binary_symbols(), tm);
    }
}
