use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "shearchaos",
    version,
    about = "Lyapunov exponents of a noisy limit cycle with shear"
)]
pub struct Cli {
    /// Flat key=value file supplying defaults for any flag; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form exponents, regime and critical noise at one point.
    Lyapunov(PointArgs),
    /// The universal constant c0.
    C0 {
        /// Root tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// sigma0(alpha, b) over an alpha grid.
    Bifurcation(CurveArgs),
    /// Exponents over an (alpha, b, sigma) grid.
    Sweep(SweepArgs),
    /// Monte Carlo and time-average estimators at one point.
    Simulate(SimulateArgs),
    /// Stationary angle density and the exponent it implies.
    Fp(FpArgs),
    /// Pullback point cloud under shared noise.
    Attractor(AttractorArgs),
    /// Re-emit a JSON artifact as CSV, JSON or SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args, Default)]
pub struct Point {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Args, Default)]
pub struct Output {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv, json or svg (guessed from --out, else csv).
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args, Default)]
pub struct Sampling {
    /// tent, trig or sine4.
    #[arg(long)]
    pub coupling: Option<String>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Simulated time per trajectory.
    #[arg(long = "T")]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub n_traj: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub point: Point,
    /// Quadrature tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// text or json.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Alpha grid: a,b,c or start:stop:step.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long)]
    pub sigma: Option<String>,
    /// analytic, montecarlo or both.
    #[arg(long)]
    pub mode: Option<String>,
    /// phase-diagram or sigma-scan; grids default to the preset.
    #[arg(long)]
    pub preset: Option<String>,
    /// Classification tolerance on |lambda1|.
    #[arg(long)]
    pub tol: Option<f64>,
    #[command(flatten)]
    pub sampling: Sampling,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub point: Point,
    #[command(flatten)]
    pub sampling: Sampling,
    /// mc, fk or both.
    #[arg(long)]
    pub estimator: Option<String>,
    /// Also write one sampled trajectory (stream 0) as CSV.
    #[arg(long, value_name = "FILE")]
    pub trajectory: Option<PathBuf>,
    #[arg(long)]
    pub sample_every: Option<usize>,
    /// text or json.
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct FpArgs {
    #[command(flatten)]
    pub point: Point,
    /// Number of grid cells.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct AttractorArgs {
    #[command(flatten)]
    pub point: Point,
    #[command(flatten)]
    pub sampling: Sampling,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub sample_every: Option<usize>,
    /// Also write the final cloud as `y,theta` CSV.
    #[arg(long, value_name = "FILE")]
    pub points: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// JSON file written by another subcommand.
    #[arg(long)]
    pub input: PathBuf,
    /// sweep, curve, density or diameter.
    #[arg(long)]
    pub kind: String,
    #[command(flatten)]
    pub output: Output,
}
