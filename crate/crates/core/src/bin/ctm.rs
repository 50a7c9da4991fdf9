use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use graphk::ctm::{enumerate_census, machine_space_size, parse_range, RuntimeCensus};
use graphk::table::BlockDistribution;

/// Shards above this many machines need `--long-running`.
const LONG_RUN_THRESHOLD: u64 = 100_000_000;

#[derive(Parser)]
#[command(name = "ctm", version, about = "2D Turing machine enumeration and CTM tables")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every machine in a shard and write its halting census.
    Enumerate {
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        symbols: usize,
        #[arg(long, default_value_t = graphk::ctm::DEFAULT_CUTOFF)]
        cutoff: u64,
        /// Index range A..B; defaults to the whole machine space.
        #[arg(long)]
        shard: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_side: usize,
        /// Required for shards larger than 10^8 machines.
        #[arg(long)]
        long_running: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Merge census files from disjoint shards.
    Merge {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// CTM table operations.
    Table {
        #[command(subcommand)]
        cmd: TableCommand,
    },
}

#[derive(Subcommand)]
enum TableCommand {
    /// Build a d x d block table from a census.
    Build {
        #[arg(long)]
        census: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Close a table under complement and the dihedral group.
    Symmetrize {
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Import an external `hex<TAB>km` table and re-save it in native form.
    Import {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print table metadata and coverage.
    Info {
        #[arg(long)]
        table: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.cmd {
        Command::Enumerate {
            states,
            symbols,
            cutoff,
            shard,
            max_side,
            long_running,
            out,
        } => {
            let bound = machine_space_size(states, symbols)
                .ok_or_else(|| format!("({states},{symbols}) machine space does not fit in 64 bits"))?;
            let range = match shard {
                Some(s) => parse_range(&s)?,
                None => 0..bound,
            };
            let size = range.end.saturating_sub(range.start);
            if size > LONG_RUN_THRESHOLD && !long_running {
                return Err(format!(
                    "shard holds {size} machines; pass --long-running to confirm or split it with --shard"
                )
                .into());
            }
            let census = enumerate_census(states, symbols, cutoff, range, max_side)?;
            census.save(&out)?;
            eprintln!(
                "{} machines, {} halting ({:.6}), max runtime {:?}",
                census.total,
                census.halting,
                census.halting_fraction(),
                census.max_runtime()
            );
        }
        Command::Merge { inputs, out } => {
            let mut iter = inputs.iter();
            let first = iter.next().expect("clap requires one input");
            let mut merged = RuntimeCensus::load(first)?;
            for p in iter {
                merged = merged.merge(RuntimeCensus::load(p)?)?;
            }
            merged.save(&out)?;
        }
        Command::Table { cmd } => match cmd {
            TableCommand::Build { census, d, out } => {
                let census = RuntimeCensus::load(&census)?;
                let table = BlockDistribution::from_census(&census, d)?;
                table.save(&out)?;
                eprintln!("{} blocks, coverage {:.4}", table.len(), table.coverage());
            }
            TableCommand::Symmetrize { table, out } => {
                BlockDistribution::load(&table)?.symmetrize().save(&out)?;
            }
            TableCommand::Import { input, out } => {
                BlockDistribution::import_external(&input)?.save(&out)?;
            }
            TableCommand::Info { table } => {
                let t = BlockDistribution::load(&table)?;
                println!("{}", t.meta_line());
                println!("blocks\t{}", t.len());
                println!("coverage\t{:.6}", t.coverage());
                println!("min_km\t{}", t.min_km());
                println!("max_km\t{}", t.max_km());
            }
        },
    }
    Ok(())
}
