use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 20_240_417;

#[derive(Debug, Parser)]
#[command(
    name = "landau-coulomb",
    version,
    about = "Coulomb impurity in the Landau basis: matrices, spectra, bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the critical coupling Zc and the constants C0, C1
    Zc(OutputArgs),
    /// Dump the kinetic diagonal and both Coulomb matrices of one sector
    Elements(ElementsArgs),
    /// Lowest eigenvalues of one truncated sector Hamiltonian
    Spectrum(SpectrumArgs),
    /// Lowest eigenvalues over a grid of Z, m and n_max
    Scan(ScanArgs),
    /// Run an inequality suite; exits 1 on any violation
    Verify(VerifyArgs),
    /// Trial-sequence energies and the fitted log N slope
    Trial(TrialArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for randomized suites; echoed in JSON output
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ElementsArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub m: i64,
    #[arg(long, default_value_t = 16)]
    pub nmax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    pub m: i64,
    #[arg(long = "Z", allow_negative_numbers = true)]
    pub z: f64,
    #[arg(long, default_value_t = 256)]
    pub nmax: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Sectors, comma separated
    #[arg(
        long,
        allow_hyphen_values = true,
        value_delimiter = ',',
        default_value = "0"
    )]
    pub m: Vec<i64>,
    /// Explicit couplings, comma separated (instead of a range)
    #[arg(long = "Z", allow_hyphen_values = true, value_delimiter = ',', conflicts_with_all = ["z_min", "z_max", "z_steps"])]
    pub z: Vec<f64>,
    #[arg(long = "Z-min", allow_negative_numbers = true, requires = "z_max")]
    pub z_min: Option<f64>,
    #[arg(long = "Z-max", allow_negative_numbers = true, requires = "z_min")]
    pub z_max: Option<f64>,
    /// Number of evenly spaced couplings, endpoints included
    #[arg(long = "Z-steps", default_value_t = 11)]
    pub z_steps: usize,
    /// Truncations, comma separated
    #[arg(long, value_delimiter = ',', default_value = "64")]
    pub nmax: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    LemmaPre,
    Lemma2,
    Gautschi,
    LiebYau,
    Oracle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(
        value_enum,
        required_unless_present = "suite",
        conflicts_with = "suite"
    )]
    pub name: Option<Suite>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Largest |m| (lemma suites: 20, oracle: 5)
    #[arg(long)]
    pub m: Option<u32>,
    /// Largest index (lemma suites: 40, oracle: 20, lieb-yau truncation: 4096)
    #[arg(long)]
    pub nmax: Option<usize>,
    /// lieb-yau only: number of random sequences
    #[arg(long, default_value_t = 1000)]
    pub k: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl VerifyArgs {
    pub fn suite(&self) -> Suite {
        self.name.or(self.suite).unwrap_or(Suite::Gautschi)
    }
}

#[derive(Debug, Args)]
pub struct TrialArgs {
    /// Coupling for the total energy column and the slope fit
    #[arg(long = "Z", allow_negative_numbers = true, default_value_t = 0.0)]
    pub z: f64,
    /// Largest cutoff; smaller cutoffs run over decades from 100
    #[arg(long = "Nmax", default_value_t = 20_000)]
    pub n_max: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}
