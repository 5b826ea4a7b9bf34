//! Command-line interface: closed-form evaluation, simulation, quadrature,
//! simplex scans and SVG rendering.
//!
//! Exit codes: 0 success, 2 usage or validation error, 3 numeric accuracy
//! failure, 4 empty sample.

mod commands;
mod config;

use clap::{Parser, Subcommand};

use config::{CommonOpts, RenderOpts, SampleCellOpts, ScanOpts, SimulateOpts};

#[derive(Parser)]
#[command(
    name = "tricell",
    version,
    about = "Vertex-number statistics of the typical cell in a tri-directional line tessellation",
    after_help = "Weights accept exact fractions (\"1/3\") or decimals (\"0.25\"); fraction \
                  input routes the formula path through exact rational arithmetic.\n\
                  All commands are deterministic given their full flag set including --seed \
                  (default 0x5EEDCE11)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the closed-form distribution, its 4-gon split, mean and variance
    Formula(CommonOpts),
    /// Monte Carlo estimate over simulated realizations, with analytic z-scores
    Simulate(SimulateOpts),
    /// Per-configuration probabilities by adaptive quadrature
    Integrate(CommonOpts),
    /// Evaluate the distribution over a simplex grid (CSV or SVG heatmap)
    Scan(ScanOpts),
    /// Render one clipped realization with faces tinted by vertex count
    RenderTessellation(RenderOpts),
    /// Draw typical cells from the conditional side-length density
    SampleCell(SampleCellOpts),
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Formula(opts) => commands::formula(opts),
        Command::Simulate(opts) => commands::simulate(opts),
        Command::Integrate(opts) => commands::integrate(opts),
        Command::Scan(opts) => commands::scan(opts),
        Command::RenderTessellation(opts) => commands::render_tessellation(opts),
        Command::SampleCell(opts) => commands::sample_cell(opts),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(exit_code(&err));
    }
}

fn exit_code(err: &tricell::Error) -> i32 {
    use tricell::Error::*;
    match err {
        InvalidWeights { .. } | InvalidConfig(_) | InadmissibleAngle(_) => 2,
        QuadratureAccuracy { .. } => 3,
        EmptySample(_) => 4,
        _ => 1,
    }
}
