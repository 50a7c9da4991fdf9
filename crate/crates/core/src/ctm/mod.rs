//! Exhaustive enumeration of 2-dimensional Turing machines.

mod census;
mod machine;
mod run;

pub use census::{enumerate_census, parse_range, RuntimeCensus};
pub use machine::{machine_space_size, Move, Next, Rule, TuringMachine2D};
pub use run::{run_machine, OutputArray, RunResult, Simulator};

/// Default step cutoff for the (2,2) space.
pub const DEFAULT_CUTOFF: u64 = 1000;
