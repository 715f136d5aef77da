//! `condmodel`: evaluate formula files, run the verification suites, and
//! solve scenario-based minimization problems.
//!
//! Exit codes: 0 success, 1 evaluation or suite failure, 2 formula syntax
//! error, 3 configuration error, 4 malformed scenario or sequence input.

mod commands;
mod error;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "condmodel", version, about = "Boolean-valued conditional model of second-order arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Space file: `{"weights": ["1/2", "1/2"]}`.
    #[arg(long)]
    space: Option<PathBuf>,
    /// Quantifier bounds `B,Bset`.
    #[arg(long, value_name = "B,BSET")]
    bounds: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every formula of a formula file.
    Eval {
        #[command(flatten)]
        common: Common,
        /// Assignment file for the free variables.
        #[arg(long)]
        assign: Option<PathBuf>,
        /// One formula per line; `#` starts a comment.
        formulas: PathBuf,
    },
    /// Run one of the randomized or exhaustive verification suites.
    Suite {
        #[command(flatten)]
        common: Common,
        suite: Option<SuiteKind>,
        #[arg(long, conflicts_with_all = ["rules", "boolean_laws"])]
        axioms: bool,
        #[arg(long, conflicts_with = "boolean_laws")]
        rules: bool,
        #[arg(long)]
        boolean_laws: bool,
        /// Sampled assignments (per rule instance for `rules`).
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per rule.
        #[arg(long, default_value_t = 20)]
        instances: usize,
        /// Largest atom count for `boolean-laws`.
        #[arg(long, default_value_t = 2)]
        atoms: usize,
        /// Fiber universe for `boolean-laws`.
        #[arg(long, default_value_t = 4)]
        universe: u32,
        /// Fiber universe for the three-variable laws of `boolean-laws`.
        #[arg(long, default_value_t = 2)]
        ternary_universe: u32,
    },
    /// Grid-exact minimization over a scenario table (CSV or JSON).
    Argmin {
        #[command(flatten)]
        common: Common,
        scenario: PathBuf,
    },
    /// Limsup estimate and convergent subsequence of a conditional sequence.
    Bw {
        #[command(flatten)]
        common: Common,
        /// Sequence file, see the README.
        sequence: PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SuiteKind {
    Axioms,
    Rules,
    BooleanLaws,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Eval { common, assign, formulas } => commands::eval(&common, assign.as_deref(), &formulas),
        Command::Suite {
            common,
            suite,
            axioms,
            rules,
            boolean_laws,
            trials,
            seed,
            instances,
            atoms,
            universe,
            ternary_universe,
        } => {
            let flagged =
                [(axioms, SuiteKind::Axioms), (rules, SuiteKind::Rules), (boolean_laws, SuiteKind::BooleanLaws)]
                    .into_iter()
                    .find_map(|(on, kind)| on.then_some(kind));
            let kind = match (suite, flagged) {
                (Some(a), Some(b)) if a != b => return Err(CliError::config("conflicting suite selections")),
                (Some(k), _) | (None, Some(k)) => k,
                (None, None) => return Err(CliError::config("choose a suite: axioms, rules or boolean-laws")),
            };
            let opts = commands::SuiteOptions { trials, seed, instances, atoms, universe, ternary_universe };
            match kind {
                SuiteKind::Axioms => commands::axioms(&common, &opts),
                SuiteKind::Rules => commands::rules(&common, &opts),
                SuiteKind::BooleanLaws => commands::boolean_laws(&common, &opts),
            }
        }
        Command::Argmin { common, scenario } => commands::argmin(&common, &scenario),
        Command::Bw { common, sequence } => commands::bw(&common, &sequence),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(error::CONFIG),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(error::FAILURE),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
