//! `lil`: command-line front end. Every command prints one JSON report on
//! stdout; exit status 0 = pass, 1 = a checked property failed, 2 = bad input.

mod commands;
mod report;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{Caps, InputError};

#[derive(Debug, Parser)]
#[command(name = "lil", version, about = "Lie ideals of digraph algebras: classification and exact checks")]
struct Cli {
    /// Indent the JSON report.
    #[arg(long, global = true)]
    pretty: bool,

    /// Cap on the number of strict block pairs for ideal enumeration.
    #[arg(long, global = true, default_value_t = lil_core::ideals::DEFAULT_MAX_STRICT_PAIRS)]
    max_pairs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a pattern file and print its block structure.
    Validate { pattern: PathBuf },
    /// Associative off-diagonal ideals.
    #[command(subcommand)]
    Ideals(IdealsCmd),
    /// Lie ideals: membership, generation, decomposition, addends.
    #[command(subcommand)]
    Lie(LieCmd),
    /// Similarity invariance of a Lie ideal.
    #[command(subcommand)]
    Sim(SimCmd),
    /// Towers of digraph algebras.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Analytic paths in nest algebras.
    #[command(subcommand)]
    Nest(NestCmd),
    /// Run the full acceptance suite.
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Smaller randomized sample sizes; a smoke test, not the acceptance run.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Subcommand)]
enum IdealsCmd {
    /// List every off-diagonal ideal.
    Enumerate { pattern: PathBuf },
    /// Smallest ideal containing the given block pairs, e.g. "(1,2);(2,3)".
    Close {
        pattern: PathBuf,
        #[arg(long)]
        seed: String,
    },
}

#[derive(Debug, Args)]
struct SubspaceArg {
    pattern: PathBuf,
    /// Subspace JSON: {"ambient_dim": n*n, "basis": [[...], ...]}.
    #[arg(long)]
    subspace: PathBuf,
}

#[derive(Debug, Subcommand)]
enum LieCmd {
    /// Is the subspace a Lie ideal? Classifies it when it is.
    Check(SubspaceArg),
    /// Lie ideal generated by a list of matrices.
    Generate {
        pattern: PathBuf,
        /// JSON list of matrices (rows of rationals).
        #[arg(long)]
        gens: PathBuf,
    },
    /// Split a Lie ideal into its diagonal addend and associative part.
    Decompose(SubspaceArg),
    /// Largest Lie addend for an off-diagonal ideal.
    MaxAddend {
        pattern: PathBuf,
        #[arg(long, default_value = "")]
        ideal: String,
    },
    /// Decide whether a diagonal subspace is a Lie addend for an ideal.
    Classify {
        pattern: PathBuf,
        #[arg(long, default_value = "")]
        ideal: String,
        #[arg(long)]
        addend: PathBuf,
    },
    /// Enumerate Lie-ideal descriptors over an off-diagonal ideal.
    Enumerate {
        pattern: PathBuf,
        #[arg(long, default_value = "")]
        ideal: String,
        #[arg(long, default_value_t = 8)]
        max_units: usize,
    },
}

#[derive(Debug, Subcommand)]
enum SimCmd {
    /// Conjugate by seeded random invertibles and check membership.
    Check {
        pattern: PathBuf,
        #[arg(long)]
        lie: PathBuf,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Accept any subspace; report invariance instead of requiring it.
        #[arg(long)]
        probe: bool,
    },
}

#[derive(Debug, Subcommand)]
enum TowerCmd {
    /// Build a tower and check the structure of Lie ideals at its top.
    Run {
        tower: PathBuf,
        /// JSON list of generators at the top level; random sets otherwise.
        #[arg(long)]
        gens: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random generator sets when --gens is absent.
        #[arg(long, default_value_t = 10)]
        sets: usize,
    },
}

#[derive(Debug, Subcommand)]
enum NestCmd {
    /// Boundary, norm, inverse, grading and optional CSL checks.
    Check {
        /// Atom sizes, e.g. 1,2,1.
        #[arg(long, value_delimiter = ',', required = true)]
        atoms: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pattern file of a CSL algebra containing the nest.
        #[arg(long)]
        csl: Option<PathBuf>,
    },
}

fn dispatch(cli: &Cli, caps: &Caps) -> Result<report::Report, InputError> {
    use commands::*;
    match &cli.command {
        Command::Validate { pattern } => validate(caps, pattern),
        Command::Ideals(IdealsCmd::Enumerate { pattern }) => ideals_enumerate(caps, pattern),
        Command::Ideals(IdealsCmd::Close { pattern, seed }) => ideals_close(caps, pattern, seed),
        Command::Lie(LieCmd::Check(a)) => lie_check(caps, &a.pattern, &a.subspace),
        Command::Lie(LieCmd::Generate { pattern, gens }) => lie_generate(caps, pattern, gens),
        Command::Lie(LieCmd::Decompose(a)) => lie_decompose(caps, &a.pattern, &a.subspace),
        Command::Lie(LieCmd::MaxAddend { pattern, ideal }) => lie_max_addend(caps, pattern, ideal),
        Command::Lie(LieCmd::Classify { pattern, ideal, addend }) => lie_classify(caps, pattern, ideal, addend),
        Command::Lie(LieCmd::Enumerate { pattern, ideal, max_units }) => {
            lie_enumerate(caps, pattern, ideal, *max_units)
        }
        Command::Sim(SimCmd::Check { pattern, lie, trials, seed, probe }) => {
            sim_check(caps, pattern, lie, *trials, *seed, *probe)
        }
        Command::Tower(TowerCmd::Run { tower, gens, seed, sets }) => {
            tower_run(caps, tower, gens.as_deref(), *seed, *sets)
        }
        Command::Nest(NestCmd::Check { atoms, samples, seed, csl }) => {
            nest_check(caps, atoms, *samples, *seed, csl.as_deref())
        }
        Command::Suite { seed, quick } => suite(*seed, *quick),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = match Caps::from_env(cli.max_pairs) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli, &caps) {
        Ok(r) => {
            let mut out = io::stdout().lock();
            if let Err(e) = writeln!(out, "{}", r.render(cli.pretty)) {
                if e.kind() != io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing report: {e}");
                    return ExitCode::from(2);
                }
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: {} reported a failed check", r.command);
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
