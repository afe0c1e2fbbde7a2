//! `bsmaj`: majorization analysis of beam-splitter output states.

mod args;
mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use args::{parse_angle, parse_catalyst, parse_vec_source, CatalystArg, VecSource};

#[derive(Debug, Parser)]
#[command(
    name = "bsmaj",
    version,
    about = "Majorization analysis of beam-splitter output states"
)]
pub struct Cli {
    /// Output format; defaults to csv for figure-data and json elsewhere.
    #[arg(long, global = true, value_enum)]
    pub out: Option<Format>,
    /// Comparison tolerance for majorize, photon-chain and birkhoff.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schmidt spectrum of |k,0> after the beam splitter.
    Spectrum(SpectrumArgs),
    /// Compare two vectors, or a random mixture of q against q.
    Majorize(MajorizeArgs),
    /// Check P(k+1) < P(k) for k = 0..k-max.
    PhotonChain(ChainArgs),
    /// Crossover angles and ordering regions on [0, pi/4).
    Regions(RegionsArgs),
    /// Accumulation derivatives and the infinitesimal verdict.
    Infinitesimal(PointArgs),
    /// Renyi entropies over a theta grid.
    EntropyCurve(CurveArgs),
    /// Entropy tables behind the two- and three-photon figures.
    FigureData(FigureArgs),
    /// Run the k+1 -> k conversion protocol and check it against majorization.
    LoccVerify(PointArgs),
    /// Catalyzed majorization checks and catalyst search.
    #[command(subcommand)]
    Catalysis(CatalysisCommand),
    /// Birkhoff-von Neumann decomposition of a doubly stochastic matrix.
    Birkhoff(BirkhoffArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    /// Sort into non-increasing order.
    #[arg(long)]
    pub sorted: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct MajorizeArgs {
    /// bs:K,THETA | file:PATH | comma-separated literal. Omit with --random.
    #[arg(long, value_parser = parse_vec_source, required_unless_present = "random")]
    pub p: Option<VecSource>,
    #[arg(long, value_parser = parse_vec_source)]
    pub q: VecSource,
    /// Replace p by a random mixture of this many permutations of q.
    #[arg(long, conflicts_with = "p")]
    pub random: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ChainArgs {
    #[arg(long)]
    pub k_max: usize,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RegionsArgs {
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct PointArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct CurveArgs {
    #[arg(long)]
    pub k: usize,
    /// Comma-separated orders; `inf` for the min-entropy.
    #[arg(long, default_value = "1,10,inf")]
    pub alphas: String,
    #[arg(long, value_parser = parse_angle, default_value = "0", allow_hyphen_values = true)]
    pub theta_min: f64,
    #[arg(long, value_parser = parse_angle, default_value = "pi/4", allow_hyphen_values = true)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// Two-photon entropy curves.
    Fig4,
    /// Three-photon entropy curves.
    Fig5,
}

#[derive(Debug, Args, Serialize)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    #[arg(long, default_value_t = 500)]
    pub steps: usize,
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Subcommand)]
pub enum CatalysisCommand {
    /// Check one catalyst.
    Check(CheckArgs),
    /// Scan a catalyst family on a grid.
    Search(SearchArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_parser = parse_vec_source)]
    pub p: VecSource,
    #[arg(long, value_parser = parse_vec_source)]
    pub q: VecSource,
    /// single-photon:THETA | tmsv:R[,N] | file:PATH
    #[arg(long, value_parser = parse_catalyst)]
    pub catalyst: CatalystArg,
    /// Squeezed-vacuum truncation tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tail_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    SinglePhoton,
    Tmsv,
}

#[derive(Debug, Args, Serialize)]
pub struct SearchArgs {
    #[arg(long, value_parser = parse_vec_source)]
    pub p: VecSource,
    #[arg(long, value_parser = parse_vec_source)]
    pub q: VecSource,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// Grid step in radians (single-photon) or squeezing units (tmsv).
    #[arg(long, default_value_t = 1e-2)]
    pub grid: f64,
    /// Upper end of the squeezing scan.
    #[arg(long, default_value_t = 3.0)]
    pub r_max: f64,
    /// Report every successful grid point instead of the first.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BirkhoffArgs {
    /// Decompose the beam-splitter witness D(k+1) for this k.
    #[arg(long, requires = "theta", conflicts_with = "matrix")]
    pub k: Option<usize>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// JSON array of rows, or file:PATH containing one.
    #[arg(long, required_unless_present = "k")]
    pub matrix: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match commands::run(&cli) {
        Ok((text, status)) => {
            print!("{text}");
            status
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
