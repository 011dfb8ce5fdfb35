//! `blindlab`: exact experiments on DQC1 reductions, delegation schemes and
//! advice-based extraction.
//!
//! Exit status is 0 when every check passes, 1 when a check fails, and 2 on
//! a usage, input, budget or I/O error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use report::{write_report, Format};

#[derive(Parser, Debug)]
#[command(name = "blindlab", version, about = "Exact experiments on blind delegation of DQC1 computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Largest circuit width simulated exactly.
    #[arg(long, global = true, env = "BLINDLAB_BUDGET_N", default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    pub budget_n: u32,
    /// Largest coin string enumerated exactly.
    #[arg(long, global = true, env = "BLINDLAB_BUDGET_COINS", default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub budget_coins: u32,
    /// Number of sampled runs for commands that sample.
    #[arg(long, global = true, env = "BLINDLAB_SAMPLES", default_value_t = 100_000)]
    pub samples: u64,
    /// Seed for every random choice. Overrides the experiment descriptor.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Report file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Selectors shared by `scheme-audit` and `extract`. Flags take precedence
/// over an experiment descriptor passed with `--config`.
#[derive(Args, Debug, Clone, Default)]
pub struct ProtocolArgs {
    /// JSON experiment descriptor with keys scheme, server, family, xs,
    /// epsilon, seed and mode.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// leaky, constant, otp, local[:bits] or flagged:<scheme>.
    #[arg(long)]
    pub scheme: Option<String>,
    /// honest, fixed:<q1> or padded:<extra>[:<server>].
    #[arg(long)]
    pub server: Option<String>,
    /// gates, parity or fixed (with --circuit).
    #[arg(long)]
    pub family: Option<String>,
    /// Circuit file for the fixed family.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Comma-separated parameters, such as 00,01,10.
    #[arg(long, value_delimiter = ',')]
    pub xs: Option<Vec<String>>,
    /// Use every parameter of this length when --xs is absent.
    #[arg(long)]
    pub length: Option<usize>,
    /// Multiplicative error as a rational, such as 1/4 or 0.25.
    #[arg(long)]
    pub epsilon: Option<String>,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub scheme: Option<String>,
    pub server: Option<String>,
    pub family: Option<String>,
    pub xs: Option<Vec<String>>,
    pub epsilon: Option<String>,
    pub seed: Option<u64>,
    pub mode: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// `p_V(1)` for the pure input `|0^n⟩`.
    Pure,
    /// First qubit clean, the others maximally mixed.
    Dqc1,
    /// Marginal of an IQP circuit `H^⊗n · D · H^⊗n`.
    Iqp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    W,
    Dqc1,
    Iqp,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact output distribution of a circuit file.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = Model::Dqc1)]
        model: Model,
        /// Number of leading qubits whose all-ones event is reported (IQP).
        #[arg(long, default_value_t = 1)]
        marginal: usize,
    },
    /// Compile a circuit into its W, DQC1 and postselected IQP circuits.
    Reduce {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = Target::All)]
        target: Target,
        /// Also write the selected circuit in text form to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Check both reduction identities on one circuit or a seeded corpus.
    VerifyReductions {
        #[arg(long, conflicts_with = "corpus")]
        circuit: Option<PathBuf>,
        /// Number of random circuits.
        #[arg(long)]
        corpus: Option<usize>,
        #[arg(long, default_value_t = 4)]
        max_qubits: usize,
        #[arg(long, default_value_t = 10)]
        max_gates: usize,
    },
    /// Exact correctness and blindness audits of a delegation scheme.
    SchemeAudit {
        #[command(flatten)]
        protocol: ProtocolArgs,
    },
    /// Decide family members from advice built against a fixed transcript.
    Extract {
        #[command(flatten)]
        protocol: ProtocolArgs,
        /// single (one response probability) or poly (full distribution).
        #[arg(long)]
        mode: Option<String>,
    },
    /// Decide any truth table with probabilistic advice.
    AllDemo {
        /// Values in input order, each 0, 1 or x for undefined.
        #[arg(long, group = "table_source")]
        table: Option<String>,
        /// Parity on this many bits.
        #[arg(long, group = "table_source")]
        parity: Option<usize>,
        /// Random table on this many bits, drawn with the seed.
        #[arg(long, group = "table_source")]
        random: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        xs: Option<Vec<String>>,
    },
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let common = cli.common;
    let (name, config, outcome) = match cli.command {
        Command::Simulate { circuit, model, marginal } => commands::simulate(&common, &circuit, model, marginal)?,
        Command::Reduce { circuit, target, emit } => commands::reduce(&common, &circuit, target, emit.as_deref())?,
        Command::VerifyReductions { circuit, corpus, max_qubits, max_gates } => {
            commands::verify_reductions(&common, circuit.as_deref(), corpus, max_qubits, max_gates)?
        }
        Command::SchemeAudit { protocol } => commands::scheme_audit(&common, &protocol)?,
        Command::Extract { protocol, mode } => commands::extract(&common, &protocol, mode.as_deref())?,
        Command::AllDemo { table, parity, random, xs } => {
            commands::all_demo(&common, table.as_deref(), parity, random, xs.as_deref())?
        }
    };
    write_report(name, config, &outcome, common.format, common.out.as_deref())?;
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
