use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ssr_cli::commands::{self, Cutoff, StateName, StateParams, UsageError};
use ssr_cli::suite::{self, SuiteConfig, DEFAULT_SEED};
use ssr_cli::table::{Format, Table};
use ssr_core::Tolerances;

#[derive(Parser)]
#[command(name = "ssr-sim", version, about = "Simulator for data hiding under particle-number superselection")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Profile::Default)]
    tolerance_profile: Profile,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Default,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite; exits 1 if any claim fails.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Decoding sweeps for the hidden bit.
    Hiding {
        #[command(subcommand)]
        resource: Resource,
    },
    /// Dephased differences of the multiparty hiding states over every bipartition.
    Multiparty {
        #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4])]
        parties: Vec<usize>,
    },
    /// Teleport seeded random dual-rail qubits.
    TeleportDemo {
        #[arg(long, default_value_t = 20)]
        qubits: usize,
    },
    /// Print a named state and its diagnostics.
    State {
        #[command(subcommand)]
        action: StateAction,
    },
}

#[derive(Subcommand)]
enum Resource {
    /// Shared |Psi> with N particles.
    Entangled {
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
    },
    /// Phase-averaged coherent pair.
    Coherent {
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 5.0])]
        alphas: Vec<f64>,
        /// `auto` or a fixed per-register cutoff.
        #[arg(long, default_value = "auto")]
        cutoff: Cutoff,
    },
}

#[derive(Subcommand)]
enum StateAction {
    Show {
        #[arg(value_enum)]
        name: StateName,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        bit: u8,
        #[arg(long, default_value_t = 3)]
        parties: usize,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<ssr_core::Error> for Failure {
    fn from(e: ssr_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Runtime(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let tolerances = match cli.tolerance_profile {
        Profile::Default => Tolerances::DEFAULT,
        Profile::Strict => Tolerances::STRICT,
    };
    let table = |t: Table| t.render(cli.format);
    let (text, ok) = match cli.command {
        Command::Verify { suite: Suite::Paper } => {
            let report = suite::run(&SuiteConfig { seed: cli.seed, tolerances })?;
            let text = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
                Format::Text => report.to_text(),
            };
            (text, report.all_pass())
        }
        Command::Hiding { resource: Resource::Entangled { n_min, n_max } } => {
            (table(commands::hiding_entangled(n_min, n_max)?), true)
        }
        Command::Hiding { resource: Resource::Coherent { alphas, cutoff } } => {
            (table(commands::hiding_coherent(&alphas, cutoff)?), true)
        }
        Command::Multiparty { parties } => (table(commands::multiparty(&parties)?), true),
        Command::TeleportDemo { qubits } => (table(commands::teleport_demo(qubits, cli.seed)?), true),
        Command::State { action: StateAction::Show { name, alpha, cutoff, n, bit, parties } } => {
            let params = StateParams { alpha, cutoff, n, bit, parties };
            (commands::state_show(name, params, &tolerances)?.render(cli.format), true)
        }
    };
    emit(&text, &cli.output)?;
    Ok(ok)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
