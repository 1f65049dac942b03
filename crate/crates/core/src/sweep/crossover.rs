use super::{evaluate, pool, Channel, EvalContext, Quantity, Scenario};
use crate::bounds::BoundKind;
use crate::error::{Error, Result};
use crate::fidelity::{DiffusionParams, LossParams};
use crate::numerics::find_crossover;
use crate::probe::ProbeSpec;
use rayon::prelude::*;
use std::cell::RefCell;

/// Where two bounds trade places as the gain varies at fixed input photon
/// number and channel strength.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverSpec {
    pub scenario: Scenario,
    pub n_alpha: f64,
    /// `eta` for photon loss, `kappa` for phase diffusion.
    pub channel: f64,
    pub kind_a: BoundKind,
    pub kind_b: BoundKind,
    pub g_min: f64,
    pub g_max: f64,
    /// Points in the bracketing scan.
    pub scan_points: usize,
    /// Final bisection bracket width.
    pub tol: f64,
    pub ctx: EvalContext,
}

impl CrossoverSpec {
    pub fn new(
        scenario: Scenario,
        n_alpha: f64,
        channel: f64,
        kind_a: BoundKind,
        kind_b: BoundKind,
        g_min: f64,
        g_max: f64,
    ) -> Self {
        Self {
            scenario,
            n_alpha,
            channel,
            kind_a,
            kind_b,
            g_min,
            g_max,
            scan_points: 400,
            tol: 1e-3,
            ctx: EvalContext::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        for kind in [self.kind_a, self.kind_b] {
            if !self.scenario.supports(Quantity::Bound(kind)) {
                return Err(Error::validation(
                    "kind",
                    format!("{kind} is not defined for {}", self.scenario),
                ));
            }
        }
        if !(self.g_min > 0.0 && self.g_min < self.g_max && self.g_max.is_finite()) {
            return Err(Error::validation(
                "gain",
                format!("need 0 < g_min < g_max, got [{}, {}]", self.g_min, self.g_max),
            ));
        }
        if self.scan_points < 2 {
            return Err(Error::validation("scan_points", "must be at least 2"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::validation("tol", "must be positive"));
        }
        self.channel_params().map(|_| ())
    }

    fn channel_params(&self) -> Result<Channel> {
        Ok(match self.scenario {
            Scenario::PhotonLoss => Channel::Loss(LossParams::new(self.channel)?),
            Scenario::PhaseDiffusion => Channel::Diffusion(DiffusionParams::new(self.channel)?),
        })
    }

    fn value(&self, kind: BoundKind, gain: f64) -> Result<f64> {
        let probe = ProbeSpec::new(self.n_alpha, gain)?;
        let channel = self.channel_params()?;
        Ok(evaluate(Quantity::Bound(kind), &probe, channel, None, &self.ctx)?.value)
    }

    // bound_a - bound_b, with coinciding infinities counted as equal.
    fn difference(&self, gain: f64) -> Result<f64> {
        let (a, b) = (self.value(self.kind_a, gain)?, self.value(self.kind_b, gain)?);
        Ok(if a == b { 0.0 } else { a - b })
    }

    fn grid(&self, i: usize) -> f64 {
        let n = self.scan_points;
        if i + 1 == n {
            self.g_max
        } else {
            self.g_min + (self.g_max - self.g_min) * i as f64 / (n - 1) as f64
        }
    }
}

/// Gains in `[g_min, g_max]` where `bound_a - bound_b` changes sign, in
/// increasing order. Sign changes are bracketed on a uniform scan and then
/// bisected; an exact zero on the scan between opposite signs is reported
/// as-is. Identical curves give an empty list.
pub fn locate_crossovers(spec: &CrossoverSpec, threads: usize) -> Result<Vec<f64>> {
    spec.validate()?;
    let diffs: Vec<f64> = pool(threads)?.install(|| {
        (0..spec.scan_points)
            .into_par_iter()
            .map(|i| spec.difference(spec.grid(i)))
            .collect::<Result<_>>()
    })?;
    if let Some(i) = diffs.iter().position(|d| d.is_nan()) {
        return Err(Error::domain(
            "locate_crossovers",
            format!("bound difference is NaN at g = {}", spec.grid(i)),
        ));
    }

    let mut crossings = Vec::new();
    let mut last: Option<usize> = None;
    for (i, &d) in diffs.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        if let Some(j) = last {
            if diffs[j].signum() != d.signum() {
                crossings.push(if j + 1 == i {
                    bisect(spec, spec.grid(j), spec.grid(i))?
                } else {
                    spec.grid(j + 1)
                });
            }
        }
        last = Some(i);
    }
    Ok(crossings)
}

fn bisect(spec: &CrossoverSpec, lo: f64, hi: f64) -> Result<f64> {
    let failure = RefCell::new(None);
    let diff = |g: f64| {
        spec.difference(g).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    };
    let root = find_crossover(diff, |_| 0.0, lo, hi, spec.tol);
    match failure.into_inner() {
        Some(e) => Err(e),
        None => root,
    }
}
