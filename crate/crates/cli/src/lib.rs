//! Command-line front end: descriptor ingestion, subcommand dispatch and
//! CSV/JSON/SVG emission.

pub mod commands;
pub mod input;
pub mod output;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use expsub_core::{Convention, Error};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Descriptor(String),
    Io(String),
    Usage(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Descriptor(m) | CliError::Io(m) | CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Undecided(_)) => EXIT_UNDECIDED,
            CliError::Core(Error::Resource(_)) => EXIT_RESOURCE,
            _ => EXIT_VALIDATION,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "expsub", version, about = "Periodic points, zeta functions and expansive subdynamics of algebraic Z^d-actions")]
pub struct RunConfig {
    /// Starting working precision in bits.
    #[arg(long, global = true, env = "EXPSUB_PRECISION", default_value_t = 128)]
    pub precision: u32,
    /// Precision cap in bits for escalating certifications.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_precision: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Portrait, zeta summary and validation report in one JSON document.
    Analyze(AnalyzeArgs),
    /// Periodic-point counts over a box of directions.
    Periodic(PeriodicArgs),
    /// Zeta factorization for one direction.
    Zeta(ZetaArgs),
    /// Non-expansive hyperplanes, crossing set and sampled branches.
    Portrait(PortraitArgs),
    /// Raw table of sampled Ω values.
    Omega(OmegaArgs),
}

#[derive(Args, Debug)]
pub struct Common {
    /// Descriptor file, or the name of a bundled fixture.
    pub input: String,
    /// Write to this file instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    InverseRoot,
    RootLocation,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::InverseRoot => Convention::InverseRoot,
            ConventionArg::RootLocation => Convention::RootLocation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Layout {
    /// d = 2 only: rows n2 descending, columns n1 ascending.
    Table,
    /// One row per lattice point.
    Long,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PortraitFormat {
    Json,
    Svg,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "inverse-root")]
    pub convention: ConventionArg,
    /// Count terms verified for each zeta factorization.
    #[arg(long = "jmax", default_value_t = 8)]
    pub j_max: usize,
}

#[derive(Args, Debug)]
pub struct PeriodicArgs {
    #[command(flatten)]
    pub common: Common,
    /// Inclusive ranges per coordinate, e.g. -5..5,0..5.
    #[arg(long, allow_hyphen_values = true)]
    pub range: String,
    /// Period multiple: counts |Fix(α^{jn})|.
    #[arg(short, long, default_value_t = 1)]
    pub j: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    #[arg(long, value_enum, default_value = "table")]
    pub layout: Layout,
}

#[derive(Args, Debug)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub common: Common,
    /// Direction, e.g. 1,-1.
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    /// Number of count terms verified against the factorization.
    #[arg(long = "jmax", default_value_t = 8)]
    pub j_max: usize,
    /// Fit even where rationality is not guaranteed.
    #[arg(long)]
    pub force: bool,
    #[arg(long, value_enum, default_value = "inverse-root")]
    pub convention: ConventionArg,
}

#[derive(Args, Debug)]
pub struct PortraitArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "json")]
    pub format: PortraitFormat,
    /// Also write the SVG diagram here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Directions sampled on the circle (d = 2).
    #[arg(long, default_value_t = 720)]
    pub samples: usize,
    /// θ×φ grid on the sphere (d = 3).
    #[arg(long, default_value = "180x180")]
    pub grid: String,
    #[arg(long, value_enum, default_value = "inverse-root")]
    pub convention: ConventionArg,
}

#[derive(Args, Debug)]
pub struct OmegaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 360)]
    pub samples: usize,
    #[arg(long, default_value = "180x180")]
    pub grid: String,
    #[arg(long, value_enum, default_value = "inverse-root")]
    pub convention: ConventionArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.precision < 32 {
            return Err(CliError::Usage("--precision must be at least 32".into()));
        }
        if self.precision > self.max_precision {
            return Err(CliError::Usage(format!(
                "--precision {} exceeds --max-precision {}",
                self.precision, self.max_precision
            )));
        }
        let j_max = match &self.command {
            Command::Analyze(a) => a.j_max,
            Command::Zeta(z) => z.j_max,
            _ => 1,
        };
        if j_max == 0 {
            return Err(CliError::Usage("--jmax must be at least 1".into()));
        }
        Ok(())
    }
}

/// Run a parsed configuration; diagnostics go to `err`. Returns the exit code.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = cfg.validate().and_then(|_| commands::dispatch(cfg, out, err));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parse arguments and run; usage errors exit with the validation code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(&cfg, &mut stdout.lock(), &mut stderr.lock())
}
