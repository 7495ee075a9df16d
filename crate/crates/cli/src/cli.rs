use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{CliError, EXIT_INPUT, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::verify::Suite;
use crate::{generate, report, statefile, sweep, verify};

#[derive(Debug, Parser)]
#[command(name = "spinsqueeze", version, about = "Spin-squeezing and entanglement analysis of multiqubit states")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for random generation and verification suites.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// Pretty-printed JSON.
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute every squeezing parameter and witness for a state file.
    Analyze { input: PathBuf },
    /// Write a state file.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Tabulate parameters over a one-parameter family as CSV.
    Sweep {
        #[command(subcommand)]
        kind: SweepKind,
    },
    /// Run a property suite; exits 1 if any property fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenerateKind {
    /// Coherent spin state (Dicke representation).
    Css {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        phi: f64,
    },
    /// One-axis twisted coherent state.
    Twisted {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
    },
    /// Product state, one `--bloch THETA,PHI` (Bloch-sphere angles) per qubit.
    Product {
        #[arg(long = "bloch", value_parser = generate::parse_angles, allow_hyphen_values = true, required = true)]
        bloch: Vec<(f64, f64)>,
    },
    /// Mixture of random product states; reproducible from --seed.
    RandomSeparable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        terms: usize,
    },
    /// Dicke state with k qubits in |0>.
    Dicke {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SweepKind {
    /// cos(theta)|00> + sin(theta)|11>, theta from --from to --to (default 0 to pi/4).
    Schmidt {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        from: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = std::f64::consts::FRAC_PI_4)]
        to: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
    },
    /// One-axis twisted states of n qubits over the twisting strength.
    Twisted {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        from: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.5)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source }),
        None => io::stdout().write_all(bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<u8, CliError> {
    let output = cli.output.as_deref();
    match cli.command {
        Command::Analyze { input } => {
            let bytes = read(&input)?;
            let text = std::str::from_utf8(&bytes)
                .map_err(|e| CliError::Field { field: "document".into(), reason: e.to_string() })?;
            let state = statefile::from_json(text)?;
            let r = report::analyze(&state, &bytes)?;
            let rendered = match cli.format {
                Format::Text => report::to_text(&r),
                Format::Machine => report::to_machine(&r),
            };
            emit(output, rendered.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Generate { kind } => {
            let state = match kind {
                GenerateKind::Css { n, theta, phi } => generate::css(n, theta, phi)?,
                GenerateKind::Twisted { n, mu } => generate::twisted(n, mu)?,
                GenerateKind::Product { bloch } => generate::product(&bloch)?,
                GenerateKind::RandomSeparable { n, terms } => {
                    generate::random_separable(n, terms, cli.seed.unwrap_or(0))?
                }
                GenerateKind::Dicke { n, k } => generate::dicke(n, k)?,
            };
            emit(output, statefile::to_json(&state).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Sweep { kind } => {
            let rows = match kind {
                SweepKind::Schmidt { from, to, points } => sweep::schmidt(&sweep::grid(from, to, points)?)?,
                SweepKind::Twisted { n, from, to, points } => sweep::twisted(n, &sweep::grid(from, to, points)?)?,
            };
            let mut buf = Vec::new();
            sweep::write_csv(&rows, &mut buf)?;
            emit(output, &buf)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite } => {
            let r = verify::run(suite, cli.seed.unwrap_or(1))?;
            let rendered = match cli.format {
                Format::Text => r.to_text(),
                Format::Machine => serde_json::to_string_pretty(&r).expect("suite report serializes") + "\n",
            };
            emit(output, rendered.as_bytes())?;
            Ok(if r.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}

pub fn main() -> ExitCode {
    // clap exits with 2 on usage errors by itself
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
