//! Parameter sweeps: Cartesian grids over probe and channel parameters,
//! evaluated in parallel and emitted as CSV or JSON rows in a fixed order.

mod config;
mod crossover;
mod output;
mod preset;

pub use config::{GridSpec, PresetFile, SweepConfig};
pub use crossover::{locate_crossovers, CrossoverSpec};
pub use output::{read_json, write_csv, write_json, write_rows, Format, CSV_COLUMNS};
pub use preset::{run_figure_preset, Preset, PresetOptions};

use crate::bounds::{
    combined_pd, combined_pl, heisenberg_pd, heisenberg_pl, ml_mt_phase_diffusion,
    ml_mt_photon_loss, photon_loss_fidelity, qzzb_phase_diffusion, qzzb_photon_loss_closed,
    qzzb_photon_loss_quad, qzzb_tight, BoundKind, BoundMeta, Method, MuRange, StatsConvention,
    WindowPrior,
};
use crate::error::{Error, Result};
use crate::fidelity::{
    f_l2_coherent, generalized_fidelity_1, generalized_fidelity_2_window, DiffusionParams,
    LossParams, LossRegime,
};
use crate::numerics::{OptConfig, QuadConfig};
use crate::probe::{catalysis_gain, ProbeSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    PhotonLoss,
    PhaseDiffusion,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::PhotonLoss => "photon-loss",
            Scenario::PhaseDiffusion => "phase-diffusion",
        }
    }

    /// Whether `quantity` is defined for this scenario.
    pub fn supports(&self, quantity: Quantity) -> bool {
        use BoundKind::*;
        match quantity {
            Quantity::GenFidelity => true,
            Quantity::Bound(kind) => match self {
                Scenario::PhotonLoss => {
                    matches!(kind, QzzbPl | QzzbTight | PlType | MlType | MtType | CombinedPl)
                }
                Scenario::PhaseDiffusion => {
                    matches!(kind, QzzbPd | QzzbTight | PdType | MlType | MtType | CombinedPd)
                }
            },
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "photon-loss" | "pl" => Ok(Scenario::PhotonLoss),
            "phase-diffusion" | "pd" => Ok(Scenario::PhaseDiffusion),
            _ => Err(Error::validation(
                "scenario",
                format!("expected 'photon-loss' or 'phase-diffusion', got '{s}'"),
            )),
        }
    }
}

/// What a sweep row reports: one of the bounds, or the generalized-fidelity
/// integrand at a phase difference `tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Quantity {
    Bound(BoundKind),
    GenFidelity,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Bound(kind) => kind.as_str(),
            Quantity::GenFidelity => "gen-fidelity",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "gen-fidelity" {
            return Ok(Quantity::GenFidelity);
        }
        s.parse::<BoundKind>()
            .map(Quantity::Bound)
            .map_err(|_| Error::validation("quantities", format!("unknown quantity '{s}'")))
    }
}

impl From<Quantity> for String {
    fn from(q: Quantity) -> String {
        q.as_str().to_owned()
    }
}

impl TryFrom<String> for Quantity {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Noise channel at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    Loss(LossParams),
    Diffusion(DiffusionParams),
}

/// Settings shared by every evaluation in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalContext {
    pub regime: LossRegime,
    pub stats: StatsConvention,
    pub prior: WindowPrior,
    pub quad: QuadConfig,
    pub opt: OptConfig,
}

/// Result of evaluating one quantity at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub value: f64,
    pub method: Option<Method>,
    pub meta: BoundMeta,
}

impl Outcome {
    fn from_bound(v: crate::bounds::BoundValue) -> Self {
        Outcome {
            value: v.value,
            method: Some(v.method),
            meta: v.meta,
        }
    }
}

/// Evaluates `quantity` for `probe` sent through `channel`. `tau` is only read
/// by [`Quantity::GenFidelity`].
pub fn evaluate(
    quantity: Quantity,
    probe: &ProbeSpec,
    channel: Channel,
    tau: Option<f64>,
    ctx: &EvalContext,
) -> Result<Outcome> {
    use BoundKind::*;
    let (q, o, p) = (&ctx.quad, &ctx.opt, &ctx.prior);
    let bound = match (quantity, channel) {
        (Quantity::GenFidelity, channel) => {
            let tau = tau.ok_or_else(|| Error::validation("tau", "required for gen-fidelity"))?;
            let n = probe.n_gamma();
            return Ok(match channel {
                Channel::Loss(loss) => Outcome {
                    value: generalized_fidelity_1(n, loss, tau, p.width),
                    method: Some(Method::ClosedForm),
                    meta: BoundMeta::default(),
                },
                Channel::Diffusion(diff) => {
                    let (value, mu) = generalized_fidelity_2_window(n, diff, tau, p.width, o)?;
                    Outcome {
                        value,
                        method: Some(Method::ClosedForm),
                        meta: BoundMeta {
                            mu_opt: Some(MuRange { min: mu, max: mu }),
                            ..BoundMeta::default()
                        },
                    }
                }
            });
        }
        (Quantity::Bound(kind), Channel::Loss(loss)) => match kind {
            QzzbPl if p.width == TAU => qzzb_photon_loss_closed(probe, loss)?,
            QzzbPl => qzzb_photon_loss_quad(probe, loss, p, q)?,
            QzzbTight => qzzb_tight(photon_loss_fidelity(probe, loss), p, q)?,
            PlType => heisenberg_pl(probe, loss, ctx.regime, q, o)?,
            MlType => ml_mt_photon_loss(&ctx.stats.stats(probe), loss).0,
            MtType => ml_mt_photon_loss(&ctx.stats.stats(probe), loss).1,
            CombinedPl => combined_pl(probe, loss, ctx.regime, ctx.stats, q, o)?,
            _ => return Err(unsupported(kind, Scenario::PhotonLoss)),
        },
        (Quantity::Bound(kind), Channel::Diffusion(diff)) => match kind {
            QzzbPd => qzzb_phase_diffusion(probe, diff, p, q, o)?,
            QzzbTight => {
                let n = probe.n_gamma();
                qzzb_tight(
                    |tau| f_l2_coherent(n, diff, tau, o).map_or(f64::NAN, |e| e.value),
                    p,
                    q,
                )?
            }
            PdType => heisenberg_pd(probe, diff, q, o)?,
            MlType => ml_mt_phase_diffusion(&ctx.stats.stats(probe), diff, o)?.0,
            MtType => ml_mt_phase_diffusion(&ctx.stats.stats(probe), diff, o)?.1,
            CombinedPd => combined_pd(probe, diff, ctx.stats, q, o)?,
            _ => return Err(unsupported(kind, Scenario::PhaseDiffusion)),
        },
    };
    Ok(Outcome::from_bound(bound))
}

fn unsupported(kind: BoundKind, scenario: Scenario) -> Error {
    Error::validation("quantities", format!("{kind} is not defined for {scenario}"))
}

/// Validated sweep description. Build one from a [`SweepConfig`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub scenario: Scenario,
    pub quantities: Vec<Quantity>,
    pub n_alpha: Vec<f64>,
    /// Either explicit gains or catalysis transmissivities mapped to gains.
    pub gain: GainAxis,
    /// `eta` values for photon loss, `kappa` values for phase diffusion.
    pub channel: Vec<f64>,
    pub tau: Option<Vec<f64>>,
    pub baseline_gain: Option<f64>,
    pub ctx: EvalContext,
    pub output: Option<PathBuf>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GainAxis {
    Gain(Vec<f64>),
    Transmissivity(Vec<f64>),
}

impl GainAxis {
    fn len(&self) -> usize {
        match self {
            GainAxis::Gain(v) | GainAxis::Transmissivity(v) => v.len(),
        }
    }

    // (transmissivity, gain) at index i.
    fn at(&self, i: usize) -> Result<(Option<f64>, f64)> {
        match self {
            GainAxis::Gain(v) => Ok((None, v[i])),
            GainAxis::Transmissivity(v) => Ok((Some(v[i]), catalysis_gain(v[i])?)),
        }
    }
}

/// One output record: echoed inputs, the evaluated quantity, and diagnostics.
///
/// `status` is `ok`, `infinite` (a flagged vacuous bound) or `error: <message>`
/// when the point failed numerically; failures do not abort the sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep: String,
    pub scenario: Scenario,
    pub quantity: Quantity,
    #[serde(with = "output::float")]
    pub n_alpha: f64,
    #[serde(with = "output::float")]
    pub gain: f64,
    #[serde(with = "output::float")]
    pub n_gamma: f64,
    #[serde(with = "output::opt_float")]
    pub transmissivity: Option<f64>,
    #[serde(with = "output::opt_float")]
    pub eta: Option<f64>,
    #[serde(with = "output::opt_float")]
    pub kappa: Option<f64>,
    #[serde(with = "output::opt_float")]
    pub tau: Option<f64>,
    pub regime: Option<LossRegime>,
    pub stats: StatsConvention,
    #[serde(with = "output::float")]
    pub value: f64,
    pub method: Option<Method>,
    #[serde(with = "output::opt_float")]
    pub mu_min: Option<f64>,
    #[serde(with = "output::opt_float")]
    pub mu_max: Option<f64>,
    #[serde(with = "output::opt_float")]
    pub err_est: Option<f64>,
    pub argmax: Option<BoundKind>,
    #[serde(with = "output::opt_float")]
    pub baseline: Option<f64>,
    #[serde(with = "output::opt_float")]
    pub difference: Option<f64>,
    pub status: String,
}

struct Job {
    n_alpha: f64,
    gain_index: usize,
    channel: f64,
    tau: Option<f64>,
    quantity: Quantity,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.quantities.is_empty() {
            return Err(Error::validation("quantities", "at least one quantity is required"));
        }
        for &q in &self.quantities {
            if !self.scenario.supports(q) {
                return Err(Error::validation(
                    "quantities",
                    format!("{q} is not defined for {}", self.scenario),
                ));
            }
        }
        let has_fidelity = self.quantities.contains(&Quantity::GenFidelity);
        match (&self.tau, has_fidelity) {
            (None, true) => return Err(Error::validation("tau", "required for gen-fidelity")),
            (Some(_), false) => {
                return Err(Error::validation("tau", "only used by gen-fidelity"))
            }
            (Some(_), true) if self.quantities.len() > 1 => {
                return Err(Error::validation(
                    "quantities",
                    "gen-fidelity cannot be mixed with bounds in one sweep",
                ))
            }
            _ => {}
        }
        check_grid("n_alpha", &self.n_alpha, |x| x >= 0.0 && x.is_finite(), "must be finite and >= 0")?;
        match &self.gain {
            GainAxis::Gain(g) => check_grid("gain", g, |x| x > 0.0 && x.is_finite(), "must be finite and > 0")?,
            GainAxis::Transmissivity(t) => {
                check_grid("transmissivity", t, |x| x > 0.0 && x < 0.5, "must lie in (0, 1/2)")?
            }
        }
        match self.scenario {
            Scenario::PhotonLoss => {
                check_grid("eta", &self.channel, |x| (0.0..=1.0).contains(&x), "must lie in [0, 1]")?
            }
            Scenario::PhaseDiffusion => check_grid("kappa", &self.channel, |x| x > 0.0, "must be > 0")?,
        }
        if let Some(tau) = &self.tau {
            check_grid("tau", tau, f64::is_finite, "must be finite")?;
        }
        if let Some(g) = self.baseline_gain {
            if !(g > 0.0 && g.is_finite()) {
                return Err(Error::validation("baseline_gain", "must be finite and > 0"));
            }
        }
        self.ctx.prior.validate()?;
        self.ctx.quad.validate()?;
        self.ctx.opt.validate()?;
        Ok(())
    }

    /// Number of rows the sweep produces.
    pub fn row_count(&self) -> usize {
        self.n_alpha.len()
            * self.gain.len()
            * self.channel.len()
            * self.tau.as_ref().map_or(1, Vec::len)
            * self.quantities.len()
    }

    // Row order: n_alpha, gain (or transmissivity), eta/kappa, tau, quantity;
    // each axis in the order given.
    fn jobs(&self) -> Vec<Job> {
        let taus: Vec<Option<f64>> = match &self.tau {
            Some(t) => t.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let mut jobs = Vec::with_capacity(self.row_count());
        for &n_alpha in &self.n_alpha {
            for gain_index in 0..self.gain.len() {
                for &channel in &self.channel {
                    for &tau in &taus {
                        for &quantity in &self.quantities {
                            jobs.push(Job {
                                n_alpha,
                                gain_index,
                                channel,
                                tau,
                                quantity,
                            });
                        }
                    }
                }
            }
        }
        jobs
    }

    fn channel(&self, value: f64) -> Result<Channel> {
        Ok(match self.scenario {
            Scenario::PhotonLoss => Channel::Loss(LossParams::new(value)?),
            Scenario::PhaseDiffusion => Channel::Diffusion(DiffusionParams::new(value)?),
        })
    }

    fn row(&self, job: &Job) -> SweepRow {
        let at = self.gain.at(job.gain_index);
        let gain = at.as_ref().map_or(f64::NAN, |&(_, g)| g);
        let (eta, kappa) = match self.scenario {
            Scenario::PhotonLoss => (Some(job.channel), None),
            Scenario::PhaseDiffusion => (None, Some(job.channel)),
        };
        let mut row = SweepRow {
            sweep: self.label.clone(),
            scenario: self.scenario,
            quantity: job.quantity,
            n_alpha: job.n_alpha,
            gain,
            n_gamma: gain * gain * job.n_alpha,
            transmissivity: match &self.gain {
                GainAxis::Transmissivity(t) => Some(t[job.gain_index]),
                GainAxis::Gain(_) => None,
            },
            eta,
            kappa,
            tau: job.tau,
            regime: (self.scenario == Scenario::PhotonLoss).then_some(self.ctx.regime),
            stats: self.ctx.stats,
            value: f64::NAN,
            method: None,
            mu_min: None,
            mu_max: None,
            err_est: None,
            argmax: None,
            baseline: None,
            difference: None,
            status: String::new(),
        };

        let eval = |g: f64| -> Result<Outcome> {
            let probe = ProbeSpec::new(job.n_alpha, g)?;
            evaluate(job.quantity, &probe, self.channel(job.channel)?, job.tau, &self.ctx)
        };
        let outcome = at.and_then(|(_, g)| eval(g));
        match outcome {
            Ok(o) => {
                row.value = o.value;
                row.method = o.method;
                row.mu_min = o.meta.mu_opt.map(|m| m.min);
                row.mu_max = o.meta.mu_opt.map(|m| m.max);
                row.err_est = o.meta.err_est;
                row.argmax = o.meta.argmax;
                row.status = if o.value.is_infinite() { "infinite" } else { "ok" }.to_owned();
            }
            Err(e) => row.status = format!("error: {e}"),
        }
        if let Some(g0) = self.baseline_gain {
            match eval(g0) {
                Ok(b) => {
                    row.baseline = Some(b.value);
                    row.difference = Some(b.value - row.value);
                }
                Err(e) if row.status == "ok" || row.status == "infinite" => {
                    row.status = format!("error: baseline: {e}")
                }
                Err(_) => {}
            }
        }
        row
    }
}

fn check_grid(field: &str, grid: &[f64], ok: impl Fn(f64) -> bool, reason: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::validation(field, "grid is empty"));
    }
    match grid.iter().find(|&&x| !ok(x)) {
        Some(bad) => Err(Error::validation(field, format!("{reason}, got {bad}"))),
        None => Ok(()),
    }
}

/// Builds a worker pool; `threads = 0` lets rayon choose.
pub(crate) fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::validation("threads", e.to_string()))
}

/// Evaluates every grid point of `spec` on `threads` workers (0 = automatic).
/// Rows come back in grid order regardless of the thread count.
pub fn run_sweep(spec: &SweepSpec, threads: usize) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let jobs = spec.jobs();
    Ok(pool(threads)?.install(|| jobs.par_iter().map(|job| spec.row(job)).collect()))
}
