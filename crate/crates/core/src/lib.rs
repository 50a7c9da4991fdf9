pub mod aut;
pub mod bdm;
pub mod compress;
pub mod ctm;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod matrix;
pub mod rng;
pub mod stats;
pub mod table;

pub use error::{Error, Result};
