//! `causet`: generate causal sets, quantify them against observer frames and
//! run the self checks.
//!
//! Exit codes: 0 success, 1 a verification or validation check failed,
//! 2 invalid flags or input data, 3 I/O failure, 4 frame chains not
//! synchronized, 5 frames not coordinated, 6 events fail a data precondition
//! (not at equal time, or not quantifiable).

mod commands;
mod failure;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "causet", version, about = "Causal set quantification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sprinkle a box of flat spacetime and write the causal set JSON.
    Gen(GenArgs),
    /// Quantify events in a frame and write a CSV table.
    Quantify(QuantifyArgs),
    /// Measure how a second frame's ticks appear in a first frame.
    Frames(FramesArgs),
    /// Apply a change of frame to a pair, coordinates, or a CSV table.
    Transform(TransformArgs),
    /// Check the orthogonal decomposition of a spatial interval.
    Pythagoras(PythagorasArgs),
    /// Run the self-contained check suites.
    Validate(ValidateArgs),
    /// Write one of the fixed constructions to a directory.
    Scenario(ScenarioArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Spacetime dimension, 2 or 3.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Box corners: t0,x0,t1,x1 or t0,x0,y0,t1,x1,y1.
    #[arg(
        long = "box",
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    bounds: Vec<f64>,
    /// Expected events per unit volume.
    #[arg(long)]
    density: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
}

/// Where a frame comes from: a frame JSON file or two chains named in the
/// causal set file.
#[derive(Args, Debug)]
struct FrameSource {
    /// Frame JSON file.
    #[arg(long, conflicts_with = "chains")]
    frame: Option<PathBuf>,
    /// Names of the P and Q chains in the causal set file, as P,Q.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    chains: Vec<String>,
}

#[derive(Args, Debug)]
struct QuantifyArgs {
    /// Causal set JSON file.
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    frame: FrameSource,
    /// Event (marker name or id) that interval pairs are measured from.
    #[arg(long)]
    origin: Option<String>,
    /// Events to quantify (marker names or ids); all events by default.
    #[arg(long, value_delimiter = ',')]
    events: Vec<String>,
    /// CSV output; unquantified events go to `<output>.unquantified.json`.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args, Debug)]
struct FramesArgs {
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    frame: FrameSource,
    /// Frame JSON file of the frame being measured.
    #[arg(long, conflicts_with = "chains2")]
    frame2: Option<PathBuf>,
    /// Chain names of the frame being measured, as P,Q.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    chains2: Vec<String>,
    /// Largest relative spread of tick projections for coordinated frames.
    #[arg(long, default_value_t = causet::frames::COORDINATION_TOLERANCE)]
    tolerance: f64,
    /// Report JSON; printed to standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TransformArgs {
    /// Pair p,q to transform.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["coords", "input"])]
    pair: Vec<f64>,
    /// Coordinates t,x to transform.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "input"
    )]
    coords: Vec<f64>,
    /// Quantification CSV whose rows are transformed.
    #[arg(long, requires = "output")]
    input: Option<PathBuf>,
    /// Pair ratio ρ of the change of frame.
    #[arg(long, conflicts_with_all = ["beta", "relation"])]
    rho: Option<f64>,
    /// Relative speed β of the change of frame.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "relation")]
    beta: Option<f64>,
    /// Frame relation report JSON (from `frames`) supplying ρ and σ.
    #[arg(long)]
    relation: Option<PathBuf>,
    /// Label scale σ; taken from the relation report when one is given.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PythagorasArgs {
    #[arg(long)]
    input: PathBuf,
    /// Configuration JSON naming the D, X and Y frames and events e1, e2, e3.
    #[arg(long)]
    config: PathBuf,
    /// Largest accepted residual |Δd² − Δx² − Δy²|.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Run only these suites.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON summary; printed to standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// One of fig2b, fig3, fig5, fig6, fig7.
    #[arg(long)]
    scenario: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    density: Option<f64>,
    /// Speed of the moving frame (fig6).
    #[arg(long, allow_hyphen_values = true)]
    velocity: Option<f64>,
    /// Directory for causet.json, scenario.json and one frame file per frame.
    #[arg(long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => commands::gen(args),
        Command::Quantify(args) => commands::quantify(args),
        Command::Frames(args) => commands::frames(args),
        Command::Transform(args) => commands::transform(args),
        Command::Pythagoras(args) => commands::pythagoras(args),
        Command::Validate(args) => commands::validate(args),
        Command::Scenario(args) => commands::scenario(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.code())
        }
    }
}
