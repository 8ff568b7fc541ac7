use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use effcomm::CodecKind;

mod cmd;
mod config;
mod error;
mod output;

#[derive(Parser)]
#[command(name = "effcomm", version, about = "Effective-communication handover toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the closed-loop sender/receiver simulation.
    Simulate(SimulateArgs),
    /// Transfer entropy from a trace column to the handover decisions.
    Te(TeArgs),
    /// Encode a trace with a raw or delta codec and report bit counts.
    Encode(EncodeArgs),
    /// Toy handover scenario: viability with and without measurement data.
    Viability(ViabilityArgs),
    /// Bit-rate and delay requirements for sensory replication.
    Sensory(SensoryArgs),
    /// Validate, convert or generate RSRP traces.
    #[command(subcommand)]
    Trace(TraceCommand),
}

#[derive(Args)]
pub struct SimulateArgs {
    /// JSON config file; defaults are used for missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory for report.json and the CSV series.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run a range of seeds in parallel, e.g. `1..50` (inclusive).
    #[arg(long)]
    pub sweep: Option<String>,
    /// Print the effective config as JSON and exit.
    #[arg(long)]
    pub print_config: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TeTarget {
    /// Handover slots recorded in the trace's event column.
    Events,
    /// Decisions of the A3 rule run on the trace.
    A3,
    /// Decisions of the A2/A4 rule run on the trace.
    A2a4,
}

#[derive(Args)]
pub struct TeArgs {
    pub trace: PathBuf,
    /// `margin` (strongest neighbour minus serving) or a cell column name.
    #[arg(long, default_value = "margin")]
    pub source: String,
    #[arg(long, value_enum, default_value = "a3")]
    pub target: TeTarget,
    /// Target history length.
    #[arg(short, default_value_t = 1)]
    pub k: usize,
    /// Source history length.
    #[arg(short, default_value_t = 1)]
    pub l: usize,
    #[arg(long, default_value_t = 4)]
    pub bins: usize,
    /// Lower edge of the binning range (dB or dBm).
    #[arg(long, allow_negative_numbers = true)]
    pub lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    /// Also report the Miller-Madow corrected estimate.
    #[arg(long)]
    pub miller_madow: bool,
    /// Write the windowed series here as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct EncodeArgs {
    pub trace: PathBuf,
    #[arg(long, default_value = "raw", value_parser = parse_codec)]
    pub codec: CodecKind,
    /// Bits per sample.
    #[arg(long, default_value_t = 8)]
    pub bits: u32,
    /// Quantizer step in dB.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
    /// Decode the log and check it matches the quantized trace exactly.
    #[arg(long)]
    pub verify: bool,
    /// Per-slot cumulative bits as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Full message log as JSON.
    #[arg(long)]
    pub log: Option<PathBuf>,
}

fn parse_codec(s: &str) -> Result<CodecKind, String> {
    match s {
        "raw" => Ok(CodecKind::Raw),
        "delta" => Ok(CodecKind::Delta),
        _ => Err(format!("unknown codec {s:?}; expected raw or delta")),
    }
}

#[derive(Args)]
pub struct ViabilityArgs {
    #[arg(long, default_value_t = 5)]
    pub horizon: usize,
    /// Last slot at which the handover can still be made.
    #[arg(long, default_value_t = 3)]
    pub deadline: usize,
    #[arg(long, default_value_t = 4)]
    pub candidates: usize,
    #[arg(long, default_value_t = -100.0, allow_negative_numbers = true)]
    pub penalty: f64,
    #[arg(long, default_value_t = 4.0)]
    pub max_bits: f64,
    #[arg(long, default_value_t = 0.25)]
    pub bits_step: f64,
    /// Directory for the curve CSVs.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SensoryArgs {
    /// Span of the sensed quantity (e.g. 40 degrees C).
    #[arg(long, default_value_t = 40.0)]
    pub range: f64,
    #[arg(long, default_value_t = 0.02)]
    pub resolution: f64,
    #[arg(long, default_value_t = 48_000.0)]
    pub receptors: f64,
    /// Samples per second per receptor.
    #[arg(long, default_value_t = 50.0)]
    pub rate: f64,
    /// Signal path length in meters.
    #[arg(long, default_value_t = 2.0)]
    pub distance: f64,
    /// Nerve conduction speed in m/s.
    #[arg(long, default_value_t = 30.0)]
    pub speed: f64,
    /// Print the published rate table instead.
    #[arg(long)]
    pub fixtures: bool,
}

#[derive(Subcommand)]
pub enum TraceCommand {
    /// Parse a trace CSV and print a summary.
    Validate { trace: PathBuf },
    /// Rewrite a trace as CSV or JSON (chosen by the output extension).
    Convert { input: PathBuf, output: PathBuf },
    /// Generate a synthetic trace from a config.
    Generate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => cmd::simulate::execute(a),
        Command::Te(a) => cmd::te::execute(a),
        Command::Encode(a) => cmd::encode::execute(a),
        Command::Viability(a) => cmd::viability::execute(a),
        Command::Sensory(a) => cmd::sensory::execute(a),
        Command::Trace(c) => cmd::trace::execute(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
