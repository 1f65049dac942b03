use super::{Format, GainAxis, Quantity, Scenario, SweepSpec};
use crate::bounds::{StatsConvention, WindowPrior};
use crate::error::{Error, Result};
use crate::fidelity::LossRegime;
use crate::numerics::{OptConfig, QuadConfig};
use serde::Deserialize;
use std::path::{Path, PathBuf};

/// A grid axis: a single value, an explicit list, or `count` evenly spaced
/// points from `start` to `stop` inclusive.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Scalar(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, count: usize },
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        match *self {
            GridSpec::Scalar(x) => vec![x],
            GridSpec::List(ref v) => v.clone(),
            GridSpec::Range { start, stop, count } => (0..count)
                .map(|i| match i {
                    0 => start,
                    i if i + 1 == count => stop,
                    i => start + (stop - start) * i as f64 / (count - 1) as f64,
                })
                .collect(),
        }
    }
}

/// Flat key-value sweep configuration, as read from TOML or assembled from
/// command-line flags.
///
/// ```toml
/// label = "gain-sweep"            # optional; echoed in the `sweep` column
/// scenario = "photon-loss"        # or "phase-diffusion"
/// quantities = ["qzzb-pl", "pl-type"]
/// n_alpha = 4.0                   # default 4
/// gain = { start = 1.0, stop = 3.0, count = 21 }   # default 1; or transmissivity = [...]
/// eta = [0.5, 1.0]                # photon loss only, default 1
/// # kappa = [0.1, 0.2]            # phase diffusion only, required there
/// # tau = { start = 0.0, stop = 6.283185307179586, count = 101 }  # gen-fidelity only
/// regime = "small-loss"           # PL-type surrogate branch
/// stats = "amplified"             # or "input": photon statistics for ML/MT
/// prior_width = 6.283185307179586
/// baseline_gain = 1.0             # adds baseline/difference columns
/// tol = 1e-10                     # quadrature abs and rel tolerance
/// mu_range = [-1.0, 2.0]
/// mu_points = 401
/// output = "out.csv"
/// format = "csv"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub label: Option<String>,
    pub scenario: Option<Scenario>,
    pub quantities: Option<Vec<Quantity>>,
    pub n_alpha: Option<GridSpec>,
    pub gain: Option<GridSpec>,
    pub transmissivity: Option<GridSpec>,
    pub eta: Option<GridSpec>,
    pub kappa: Option<GridSpec>,
    pub tau: Option<GridSpec>,
    pub regime: Option<LossRegime>,
    pub stats: Option<StatsConvention>,
    pub prior_width: Option<f64>,
    pub prior_mean: Option<f64>,
    pub baseline_gain: Option<f64>,
    pub tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_depth: Option<u32>,
    pub mu_range: Option<[f64; 2]>,
    pub mu_points: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::validation("config", e.message().to_owned()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path).map_err(|e| Error::io(path, &e))?)
    }

    /// Fills every field left unset here from `other`.
    pub fn or(self, other: SweepConfig) -> SweepConfig {
        macro_rules! merge {
            ($($f:ident),*) => { SweepConfig { $($f: self.$f.or(other.$f)),* } };
        }
        merge!(
            label, scenario, quantities, n_alpha, gain, transmissivity, eta, kappa, tau, regime,
            stats, prior_width, prior_mean, baseline_gain, tol, abs_tol, rel_tol, max_depth,
            mu_range, mu_points, output, format
        )
    }

    pub fn into_spec(self) -> Result<SweepSpec> {
        let scenario = self
            .scenario
            .ok_or_else(|| Error::validation("scenario", "required"))?;
        let gain = match (self.gain, self.transmissivity) {
            (Some(_), Some(_)) => {
                return Err(Error::validation(
                    "transmissivity",
                    "give either gain or transmissivity, not both",
                ))
            }
            (_, Some(t)) => GainAxis::Transmissivity(t.points()),
            (g, None) => GainAxis::Gain(g.map_or(vec![1.0], |g| g.points())),
        };
        let channel = match scenario {
            Scenario::PhotonLoss => {
                if self.kappa.is_some() {
                    return Err(Error::validation("kappa", "not used by photon-loss"));
                }
                self.eta.map_or(vec![1.0], |g| g.points())
            }
            Scenario::PhaseDiffusion => {
                if self.eta.is_some() {
                    return Err(Error::validation("eta", "not used by phase-diffusion"));
                }
                self.kappa
                    .ok_or_else(|| Error::validation("kappa", "required for phase-diffusion"))?
                    .points()
            }
        };

        let mut quad = QuadConfig::default();
        if let Some(t) = self.tol {
            quad.abs_tol = t;
            quad.rel_tol = t;
        }
        quad.abs_tol = self.abs_tol.unwrap_or(quad.abs_tol);
        quad.rel_tol = self.rel_tol.unwrap_or(quad.rel_tol);
        quad.max_depth = self.max_depth.unwrap_or(quad.max_depth);

        let mut opt = OptConfig::default();
        if let Some([lo, hi]) = self.mu_range {
            opt.lo = lo;
            opt.hi = hi;
        }
        opt.coarse_points = self.mu_points.unwrap_or(opt.coarse_points);

        let default_prior = WindowPrior::default();
        let spec = SweepSpec {
            label: self.label.unwrap_or_default(),
            scenario,
            quantities: self.quantities.unwrap_or_default(),
            n_alpha: self.n_alpha.map_or(vec![4.0], |g| g.points()),
            gain,
            channel,
            tau: self.tau.map(|g| g.points()),
            baseline_gain: self.baseline_gain,
            ctx: super::EvalContext {
                regime: self.regime.unwrap_or(LossRegime::SmallLoss),
                stats: self.stats.unwrap_or_default(),
                prior: WindowPrior {
                    width: self.prior_width.unwrap_or(default_prior.width),
                    mean: self.prior_mean.unwrap_or(default_prior.mean),
                },
                quad,
                opt,
            },
            output: self.output,
            format: self.format.unwrap_or_default(),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A figure preset: a name, a description and one or more sweeps whose rows
/// are concatenated into a single CSV.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetFile {
    pub name: String,
    pub description: String,
    pub sweep: Vec<SweepConfig>,
}

impl PresetFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::validation("preset", e.message().to_owned()))
    }
}
