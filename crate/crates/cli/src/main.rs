use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

mod commands;

use commands::Outcome;

const DEFAULT_SEED: u64 = nakayama_bimod::bimodule::DEFAULT_SEED;
/// Largest `n` for which matrices are printed as human-readable tables.
const TABLE_LIMIT: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "nakayama", version, about = "Bimodules over radical-square-zero Nakayama algebras")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for the randomized isomorphism and split-pair searches.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write JSON to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Directory for JSON output when --output is not given.
    #[arg(long, global = true, env = "NAKAYAMA_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quiver presentation of Λ_n and of the torus algebra.
    Algebra {
        #[arg(long)]
        n: usize,
    },
    /// Indecomposable bimodules with at most K valleys.
    Catalog {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        max_valleys: usize,
    },
    /// Decompose the tensor product of two catalog bimodules.
    Tensor {
        #[arg(long)]
        n: usize,
        /// Left factor, e.g. `N:1|2:k=1`.
        left: String,
        /// Right factor.
        right: String,
        /// Catalog bound for the decomposition (default: sum of valleys plus one).
        #[arg(long)]
        max_valleys: Option<usize>,
    },
    /// Check every product of two J_k generators against the multiplication table.
    Multable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Left, right and two-sided cells with egg-boxes and the two-sided order.
    Cells {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        max_valleys: usize,
    },
    /// Restriction and Λ-dual of every S^(k)_{i|j}.
    Adjunction {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// The cell birepresentation of J_k on a left cell.
    Cellrep {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        j: usize,
    },
    /// Contract arrows of the cell birepresentation.
    Localize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        j: usize,
        /// Components to contract, e.g. `1,3`.
        #[arg(long, value_delimiter = ',')]
        contract: Vec<usize>,
    },
    /// Localize at every subset and tabulate simple transitive birepresentations.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Algebra { .. } => "algebra",
            Command::Catalog { .. } => "catalog",
            Command::Tensor { .. } => "tensor",
            Command::Multable { .. } => "multable",
            Command::Cells { .. } => "cells",
            Command::Adjunction { .. } => "adjunction",
            Command::Cellrep { .. } => "cellrep",
            Command::Localize { .. } => "localize",
            Command::Classify { .. } => "classify",
        }
    }

    fn n(&self) -> usize {
        match *self {
            Command::Algebra { n }
            | Command::Catalog { n, .. }
            | Command::Tensor { n, .. }
            | Command::Multable { n, .. }
            | Command::Cells { n, .. }
            | Command::Adjunction { n, .. }
            | Command::Cellrep { n, .. }
            | Command::Localize { n, .. }
            | Command::Classify { n, .. } => n,
        }
    }

    fn prints_matrices(&self) -> bool {
        matches!(self, Command::Cellrep { .. } | Command::Localize { .. } | Command::Cells { .. })
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let seed = cli.common.seed;
    let outcome = match &cli.command {
        Command::Algebra { n } => commands::algebra(*n)?,
        Command::Catalog { n, max_valleys } => commands::catalog(*n, *max_valleys)?,
        Command::Tensor { n, left, right, max_valleys } => commands::tensor(*n, left, right, *max_valleys)?,
        Command::Multable { n, k } => commands::multable(*n, *k)?,
        Command::Cells { n, max_valleys } => commands::cells(*n, *max_valleys)?,
        Command::Adjunction { n, k } => commands::adjunction(*n, *k, seed)?,
        Command::Cellrep { n, k, j } => commands::cellrep(*n, *k, *j, seed)?,
        Command::Localize { n, k, j, contract } => commands::localize(*n, *k, *j, contract, seed)?,
        Command::Classify { n, k } => commands::classify(*n, *k, seed)?,
    };
    Ok(outcome)
}

fn emit(cli: &Cli, outcome: &Outcome) -> anyhow::Result<()> {
    if !cli.common.json && cli.common.output.is_none() {
        print!("{}", outcome.text);
        return Ok(());
    }
    let text = serde_json::to_string_pretty(&outcome.json)? + "\n";
    let path = match (&cli.common.output, &cli.common.output_dir) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(dir.join(format!("{}.json", cli.command.name()))),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            if !cli.common.json {
                print!("{}", outcome.text);
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn validate(cli: &Cli) -> anyhow::Result<()> {
    let n = cli.command.n();
    if n == 0 {
        bail!("--n must be at least 1");
    }
    if cli.command.prints_matrices() && !cli.common.json && n > TABLE_LIMIT {
        bail!("tables are limited to n <= {TABLE_LIMIT}; use --json for larger runs");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = validate(&cli) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli).and_then(|o| emit(&cli, &o).map(|_| o)) {
        Ok(o) if o.ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
