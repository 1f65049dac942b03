mod args;

use args::{Cli, Command, CommonArgs, CrossoverArgs, FigureArgs, SweepArgs};
use clap::Parser;
use qzzb_core::sweep::{
    locate_crossovers, run_figure_preset, run_sweep, write_csv, write_json, write_rows,
    CrossoverSpec, Format, GridSpec, Preset, PresetOptions, SweepConfig,
};
use qzzb_core::{Error, Quantity, Result, Scenario, SweepRow};
use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Bound(a) => {
            let scenario = a.scenario;
            let quantities = if a.bound.is_empty() {
                qzzb_core::BoundKind::ALL
                    .into_iter()
                    .map(Quantity::Bound)
                    .filter(|&q| scenario.supports(q))
                    .collect()
            } else {
                a.bound.iter().copied().map(Quantity::Bound).collect()
            };
            let config = SweepConfig {
                scenario: Some(scenario),
                quantities: Some(quantities),
                n_alpha: Some(GridSpec::Scalar(a.n_alpha)),
                gain: a.gain.map(GridSpec::Scalar),
                transmissivity: a.transmissivity.map(GridSpec::Scalar),
                eta: a.eta.map(GridSpec::Scalar),
                kappa: a.kappa.map(GridSpec::Scalar),
                ..common_config(cli, &a.common)
            };
            let spec = config.into_spec()?;
            emit(&run_sweep(&spec, cli.threads)?, cli.format.unwrap_or_default())
        }
        Command::Sweep(a) => sweep(cli, a),
        Command::Figure(a) => figure(cli, a),
        Command::Crossover(a) => crossover(cli, a),
    }
}

// Settings shared by every subcommand that evaluates bounds.
fn common_config(cli: &Cli, c: &CommonArgs) -> SweepConfig {
    SweepConfig {
        regime: c.regime,
        stats: c.stats,
        prior_width: c.prior_width,
        tol: cli.tol,
        max_depth: cli.max_depth,
        mu_range: cli.mu_range,
        format: cli.format,
        ..SweepConfig::default()
    }
}

fn sweep(cli: &Cli, a: &SweepArgs) -> Result<()> {
    let flags = SweepConfig {
        scenario: a.scenario,
        quantities: (!a.quantities.is_empty()).then(|| a.quantities.clone()),
        n_alpha: a.n_alpha.clone(),
        gain: a.gain.clone(),
        transmissivity: a.transmissivity.clone(),
        eta: a.eta.clone(),
        kappa: a.kappa.clone(),
        tau: a.tau.clone(),
        baseline_gain: a.baseline_gain,
        output: a.out.clone(),
        ..common_config(cli, &a.common)
    };
    let config = match &a.config {
        Some(path) => flags.or(SweepConfig::from_file(path)?),
        None => flags,
    };
    let spec = config.into_spec()?;
    let rows = run_sweep(&spec, cli.threads)?;
    match &spec.output {
        Some(path) => write_rows(path, spec.format, &rows),
        None => emit(&rows, spec.format),
    }
}

fn figure(cli: &Cli, a: &FigureArgs) -> Result<()> {
    if cli.format == Some(Format::Json) {
        return Err(Error::validation("format", "figure presets are written as CSV"));
    }
    let presets = match a.preset.as_str() {
        "all" => Preset::ALL.to_vec(),
        name => vec![name.parse()?],
    };
    let opts = PresetOptions {
        threads: cli.threads,
        overrides: SweepConfig {
            tol: cli.tol,
            max_depth: cli.max_depth,
            mu_range: cli.mu_range,
            ..SweepConfig::default()
        },
    };
    for p in presets {
        for path in run_figure_preset(p, &a.out, &opts)? {
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn crossover(cli: &Cli, a: &CrossoverArgs) -> Result<()> {
    let channel = match (a.scenario, a.eta, a.kappa) {
        (Scenario::PhotonLoss, Some(eta), None) => eta,
        (Scenario::PhaseDiffusion, None, Some(kappa)) => kappa,
        (Scenario::PhotonLoss, _, _) => {
            return Err(Error::validation("eta", "photon-loss crossovers need --eta (and no --kappa)"))
        }
        (Scenario::PhaseDiffusion, _, _) => {
            return Err(Error::validation(
                "kappa",
                "phase-diffusion crossovers need --kappa (and no --eta)",
            ))
        }
    };
    // Reuse the sweep validation for the shared evaluation settings.
    let ctx = SweepConfig {
        scenario: Some(a.scenario),
        quantities: Some(vec![Quantity::Bound(a.a), Quantity::Bound(a.b)]),
        n_alpha: Some(GridSpec::Scalar(a.n_alpha)),
        eta: a.eta.map(GridSpec::Scalar),
        kappa: a.kappa.map(GridSpec::Scalar),
        ..common_config(cli, &a.common)
    }
    .into_spec()?
    .ctx;
    let spec = CrossoverSpec {
        scan_points: a.scan_points,
        tol: a.bisect_tol,
        ctx,
        ..CrossoverSpec::new(a.scenario, a.n_alpha, channel, a.a, a.b, a.g_min, a.g_max)
    };
    let gains = locate_crossovers(&spec, cli.threads)?;
    let stdout_err = |e: io::Error| Error::io("<stdout>", &e);
    let mut out = io::stdout().lock();
    match cli.format.unwrap_or_default() {
        Format::Csv => {
            writeln!(out, "gain").map_err(stdout_err)?;
            for g in &gains {
                writeln!(out, "{g:.16e}").map_err(stdout_err)?;
            }
        }
        Format::Json => writeln!(out, "{gains:?}").map_err(stdout_err)?,
    }
    Ok(())
}

fn emit(rows: &[SweepRow], format: Format) -> Result<()> {
    let out = io::stdout().lock();
    match format {
        Format::Csv => write_csv(out, rows),
        Format::Json => write_json(out, rows),
    }
    .map_err(|e| Error::io("<stdout>", &e))
}
