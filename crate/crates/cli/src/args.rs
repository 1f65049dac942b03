use clap::{Args, Parser, Subcommand};
use qzzb_core::sweep::{Format, GridSpec};
use qzzb_core::{BoundKind, LossRegime, Quantity, Scenario, StatsConvention};
use std::path::PathBuf;

/// Ziv-Zakai and Heisenberg-limit bounds for amplified coherent probes.
#[derive(Debug, Parser)]
#[command(name = "qzzb", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for tables.
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<Format>,

    /// Quadrature tolerance (absolute and relative).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Maximum bisection depth of the adaptive quadrature.
    #[arg(long, global = true)]
    pub max_depth: Option<u32>,

    /// Search interval for the purification parameter mu, as `lo,hi`.
    #[arg(long, global = true, value_parser = parse_pair, allow_hyphen_values = true)]
    pub mu_range: Option<[f64; 2]>,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate bounds at a single parameter point.
    Bound(BoundArgs),
    /// Evaluate bounds over a parameter grid.
    Sweep(SweepArgs),
    /// Generate the data behind a figure preset (or `all`).
    Figure(FigureArgs),
    /// Locate gains where two bounds cross.
    Crossover(CrossoverArgs),
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(value_parser = parse_scenario)]
    pub scenario: Scenario,
    #[arg(long, default_value_t = 4.0)]
    pub n_alpha: f64,
    #[arg(long, conflicts_with = "transmissivity")]
    pub gain: Option<f64>,
    /// Catalysis transmissivity T; sets g = (1 - 2T) / sqrt(T).
    #[arg(long)]
    pub transmissivity: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Bound kinds, comma separated; defaults to every kind of the scenario.
    #[arg(long, value_delimiter = ',', value_parser = parse_kind)]
    pub bound: Vec<BoundKind>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML sweep configuration; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_scenario)]
    pub scenario: Option<Scenario>,
    /// Quantities, comma separated (bound kinds or `gen-fidelity`).
    #[arg(long, value_delimiter = ',', value_parser = parse_quantity)]
    pub quantities: Vec<Quantity>,
    /// Grids are `a,b,c` lists or `start:stop:count` ranges.
    #[arg(long, value_parser = parse_grid)]
    pub n_alpha: Option<GridSpec>,
    #[arg(long, value_parser = parse_grid)]
    pub gain: Option<GridSpec>,
    #[arg(long, value_parser = parse_grid)]
    pub transmissivity: Option<GridSpec>,
    #[arg(long, value_parser = parse_grid)]
    pub eta: Option<GridSpec>,
    #[arg(long, value_parser = parse_grid)]
    pub kappa: Option<GridSpec>,
    #[arg(long, value_parser = parse_grid)]
    pub tau: Option<GridSpec>,
    /// Add baseline/difference columns against this gain.
    #[arg(long)]
    pub baseline_gain: Option<f64>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Preset name (fig2 ... fig9) or `all`.
    pub preset: String,
    /// Directory receiving `<preset>.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CrossoverArgs {
    #[arg(long, value_parser = parse_kind)]
    pub a: BoundKind,
    #[arg(long, value_parser = parse_kind)]
    pub b: BoundKind,
    #[arg(long)]
    pub g_min: f64,
    #[arg(long)]
    pub g_max: f64,
    #[arg(long, value_parser = parse_scenario, default_value = "photon-loss")]
    pub scenario: Scenario,
    #[arg(long, default_value_t = 4.0)]
    pub n_alpha: f64,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 400)]
    pub scan_points: usize,
    /// Width of the final bisection bracket.
    #[arg(long, default_value_t = 1e-3)]
    pub bisect_tol: f64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Branch of the photon-loss surrogate used by PL-type bounds.
    #[arg(long, value_parser = parse_regime)]
    pub regime: Option<LossRegime>,
    /// Photon statistics fed to the ML/MT bounds.
    #[arg(long, value_parser = parse_stats)]
    pub stats: Option<StatsConvention>,
    /// Width of the uniform prior window.
    #[arg(long)]
    pub prior_width: Option<f64>,
}

fn parse_with<T: std::str::FromStr<Err = qzzb_core::Error>>(s: &str) -> Result<T, String> {
    s.parse().map_err(|e: qzzb_core::Error| e.to_string())
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    parse_with(s)
}

fn parse_kind(s: &str) -> Result<BoundKind, String> {
    parse_with(s)
}

fn parse_quantity(s: &str) -> Result<Quantity, String> {
    parse_with(s)
}

fn parse_regime(s: &str) -> Result<LossRegime, String> {
    parse_with(s)
}

fn parse_stats(s: &str) -> Result<StatsConvention, String> {
    parse_with(s)
}

fn parse_format(s: &str) -> Result<Format, String> {
    parse_with(s)
}

fn parse_number(s: &str) -> Result<f64, String> {
    s.trim().parse().map_err(|_| format!("not a number: '{s}'"))
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    match s.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?[..] {
        [lo, hi] => Ok([lo, hi]),
        _ => Err(format!("expected 'lo,hi', got '{s}'")),
    }
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    if let [start, stop, count] = s.split(':').collect::<Vec<_>>()[..] {
        let count = count
            .trim()
            .parse()
            .map_err(|_| format!("bad point count in '{s}'"))?;
        return Ok(GridSpec::Range {
            start: parse_number(start)?,
            stop: parse_number(stop)?,
            count,
        });
    }
    let values = s.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?;
    Ok(GridSpec::List(values))
}
