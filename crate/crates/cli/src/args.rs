use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use landauer_core::compress::CodecKind;
use landauer_core::synth::FrameMode;
use landauer_core::thermo::DEFAULT_TEMPERATURE;
use num_rational::BigRational;
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "landauer", version, about = "Reversible circuits, compression with helper and work/erasure bounds")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Json)]
    pub report: ReportFormat,

    /// Seed for every pseudorandom choice; sub-results use named sub-streams.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Bath temperature in kelvin for joule conversions.
    #[arg(long, global = true, default_value_t = DEFAULT_TEMPERATURE, value_parser = parse_temperature)]
    pub temperature: f64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Compile a netlist with Bennett's construction, or build the
    /// reversible compressor for a codec and helper.
    Compile(CompileArgs),
    /// Run a reversible circuit on one input.
    Simulate(SimulateArgs),
    /// Compress a bit string read from a file or stdin.
    Compress(CodecArgs),
    /// Invert `compress`.
    Decompress(CodecArgs),
    /// Work value and erasure cost intervals for S given X.
    Bounds(BoundsArgs),
    /// Run a demon scenario on a tape.
    Demon(DemonArgs),
    /// Weight-couple imbalance experiment over random Fredkin circuits.
    Clausius(ClausiusArgs),
    /// PR-box quadruple and its complexity-rate proxies.
    Prbox(PrboxArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Store incompressible blocks raw behind an escape bit.
    Escape,
    /// Fail when a code does not fit the block.
    Strict,
}

impl From<Mode> for FrameMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Escape => FrameMode::Escape,
            Mode::Strict => FrameMode::Strict,
        }
    }
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["netlist", "fig1"])))]
pub struct CompileArgs {
    /// Netlist JSON to compile.
    #[arg(long)]
    pub netlist: Option<PathBuf>,

    /// Build the reversible compressor instead.
    #[arg(long, requires = "helper")]
    pub fig1: bool,

    #[arg(long, default_value = "lz78")]
    pub codec: CodecKind,

    #[arg(long, default_value_t = 8)]
    pub block: usize,

    /// Helper bits for the compressor.
    #[arg(long)]
    pub helper: Option<String>,

    #[arg(long, value_enum, default_value_t = Mode::Escape)]
    pub mode: Mode,

    /// Ancilla budget per source gate.
    #[arg(long, default_value_t = 4)]
    pub ancilla_factor: usize,

    /// Hard cap on the number of junk lines.
    #[arg(long)]
    pub max_lines: Option<usize>,

    /// Rewrite NOT and CNOT gates as Toffoli gates with constant lines.
    #[arg(long)]
    pub toffoli_only: bool,

    /// Check the compiled map against its source on every input.
    #[arg(long)]
    pub verify: bool,

    /// Where to write the circuit JSON; embedded in the report when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("in").required(true).args(["input", "input_file"])))]
pub struct SimulateArgs {
    /// Circuit JSON.
    #[arg(long)]
    pub circuit: PathBuf,

    /// Input state as a 0/1 string.
    #[arg(long)]
    pub input: Option<String>,

    #[arg(long)]
    pub input_file: Option<PathBuf>,

    /// Include every intermediate state.
    #[arg(long)]
    pub trajectory: bool,

    /// Include estimated complexity drift along the trajectory.
    #[arg(long)]
    pub drift: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct CodecArgs {
    #[arg(long, default_value = "lz78")]
    pub codec: CodecKind,

    /// File holding the helper bits; empty helper when omitted.
    #[arg(long)]
    pub helper_file: Option<PathBuf>,

    /// Input file; stdin when omitted.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub s_file: PathBuf,

    /// Side information; empty when omitted.
    #[arg(long)]
    pub x_file: Option<PathBuf>,

    #[arg(long, default_value = "lz78")]
    pub codec: CodecKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Extract,
    XorCopy,
    ExtractErase,
    EraseExtract,
}

#[derive(Debug, Args, Serialize)]
pub struct DemonArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,

    #[arg(long)]
    pub s_file: PathBuf,

    #[arg(long)]
    pub x_file: Option<PathBuf>,

    /// Codec for the compressing scenarios; xor-copy ignores it.
    #[arg(long, default_value = "lz78")]
    pub codec: CodecKind,

    #[arg(long, value_enum, default_value_t = Mode::Escape)]
    pub mode: Mode,
}

#[derive(Debug, Args, Serialize)]
pub struct ClausiusArgs {
    /// Half-width; circuits act on 2n lines.
    #[arg(long, default_value_t = 6)]
    pub n: usize,

    #[arg(long, default_value = "1/2", value_parser = parse_rational)]
    pub w: String,

    #[arg(long, default_value = "1/3", value_parser = parse_rational)]
    pub delta: String,

    #[arg(long, default_value_t = 100)]
    pub circuits: usize,

    #[arg(long, default_value_t = 40)]
    pub gates: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PrboxArgs {
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
}

fn parse_temperature(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if t.is_finite() && t > 0.0 {
        Ok(t)
    } else {
        Err(format!("temperature must be a positive number of kelvin, got {s}"))
    }
}

/// Validates a `p/q` or integer literal and returns it in lowest terms.
fn parse_rational(s: &str) -> Result<String, String> {
    let r: BigRational = s.trim().parse().map_err(|_| format!("`{s}` is not a rational number p/q"))?;
    Ok(r.to_string())
}
