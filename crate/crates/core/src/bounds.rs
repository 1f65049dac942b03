//! Mean-square-error lower bounds for phase estimation with an amplified
//! coherent probe: relaxed and tight Ziv-Zakai bounds under photon loss and
//! phase diffusion, the surrogate-fidelity Heisenberg limits, the
//! speed-limit (ML/MT) bounds and their pointwise maxima.

use crate::error::{Error, Result};
use crate::fidelity::{
    f_l1_coherent, generalized_fidelity_1, generalized_fidelity_2_window, max_f_ddot_q1_coherent,
    max_f_ddot_q2_coherent, DiffusionParams, LossParams, LossRegime, MU_ANCHORS,
};
use crate::numerics::{integrate, minimize_anchored, Integral, OptConfig, QuadConfig};
use crate::probe::{coherent_stats, PhotonStats, ProbeSpec};
use crate::specfun::dawson;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

// Both prefactors are stored correctly rounded; evaluating the formulas in
// f64 is off by an ulp or two (the MT one cancels).

/// Margolus-Levitin prefactor `1 / (80 lambda^2)`.
pub const C_ML: f64 = 0.023_807_475_913_119_550;
/// Mandelstam-Tamm prefactor `pi^2 / 16 - 1/2`.
pub const C_MT: f64 = 0.116_850_275_068_084_91;
/// Variance of a uniform prior of width `2 pi`; no Ziv-Zakai-type bound can exceed it.
pub const PRIOR_VARIANCE_2PI: f64 = PI * PI / 3.0;

// Below this eta * N_gamma the closed form switches to its first-order series.
const SMALL_PRODUCT: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    QzzbPl,
    QzzbPd,
    QzzbTight,
    PlType,
    PdType,
    MlType,
    MtType,
    CombinedPl,
    CombinedPd,
}

impl BoundKind {
    pub const ALL: [BoundKind; 9] = [
        BoundKind::QzzbPl,
        BoundKind::QzzbPd,
        BoundKind::QzzbTight,
        BoundKind::PlType,
        BoundKind::PdType,
        BoundKind::MlType,
        BoundKind::MtType,
        BoundKind::CombinedPl,
        BoundKind::CombinedPd,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::QzzbPl => "qzzb-pl",
            BoundKind::QzzbPd => "qzzb-pd",
            BoundKind::QzzbTight => "qzzb-tight",
            BoundKind::PlType => "pl-type",
            BoundKind::PdType => "pd-type",
            BoundKind::MlType => "ml-type",
            BoundKind::MtType => "mt-type",
            BoundKind::CombinedPl => "combined-pl",
            BoundKind::CombinedPd => "combined-pd",
        }
    }

    /// Whether the bound is built from a fidelity integrated against the
    /// window prior, and therefore capped by the prior variance.
    pub fn is_prior_limited(&self) -> bool {
        matches!(
            self,
            BoundKind::QzzbPl
                | BoundKind::QzzbPd
                | BoundKind::QzzbTight
                | BoundKind::PlType
                | BoundKind::PdType
        )
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::validation("bound", format!("unknown bound kind '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Quadrature => "quadrature",
        }
    }
}

/// Range of the optimal purification parameter seen across quadrature nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuRange {
    pub min: f64,
    pub max: f64,
}

impl MuRange {
    fn include(range: &mut Option<MuRange>, mu: f64) {
        match range {
            Some(r) => {
                r.min = r.min.min(mu);
                r.max = r.max.max(mu);
            }
            None => *range = Some(MuRange { min: mu, max: mu }),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundMeta {
    /// Quadrature error estimate.
    pub err_est: Option<f64>,
    /// Optimal `mu` (single value for ML/MT minimizations, range for integrals).
    pub mu_opt: Option<MuRange>,
    /// For combined bounds, the component that attained the maximum.
    pub argmax: Option<BoundKind>,
}

/// A computed lower bound on the mean-square phase error, in rad^2.
///
/// An infinite `value` flags a vacuous configuration (no photons, no
/// transmission, or a degenerate speed-limit denominator).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub value: f64,
    pub method: Method,
    pub meta: BoundMeta,
}

impl BoundValue {
    fn closed(kind: BoundKind, value: f64) -> Self {
        Self {
            kind,
            value,
            method: Method::ClosedForm,
            meta: BoundMeta::default(),
        }
    }

    fn quadrature(kind: BoundKind, integral: Integral, mu_opt: Option<MuRange>) -> Self {
        Self {
            kind,
            value: integral.value,
            method: Method::Quadrature,
            meta: BoundMeta {
                err_est: Some(integral.err_est),
                mu_opt,
                argmax: None,
            },
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// Uniform prior window of width `y` centred on `mean`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WindowPrior {
    pub width: f64,
    pub mean: f64,
}

impl Default for WindowPrior {
    fn default() -> Self {
        Self {
            width: TAU,
            mean: 0.0,
        }
    }
}

impl WindowPrior {
    pub fn new(width: f64, mean: f64) -> Result<Self> {
        let prior = Self { width, mean };
        prior.validate()?;
        Ok(prior)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width > 0.0) || !self.width.is_finite() {
            return Err(Error::validation(
                "prior.width",
                format!("must be positive and finite, got {}", self.width),
            ));
        }
        Ok(())
    }

    /// Variance `y^2 / 12` of the prior.
    pub fn variance(&self) -> f64 {
        self.width * self.width / 12.0
    }
}

/// Which photon statistics feed the ML/MT bounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatsConvention {
    /// Statistics of the amplified probe, `<n> = Var(n) = g^2 N_alpha`.
    #[default]
    Amplified,
    /// Statistics of the input state before amplification.
    Input,
}

impl StatsConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            StatsConvention::Amplified => "amplified",
            StatsConvention::Input => "input",
        }
    }

    pub fn stats(&self, spec: &ProbeSpec) -> PhotonStats {
        match self {
            StatsConvention::Amplified => coherent_stats(spec),
            StatsConvention::Input => coherent_stats(&spec.unamplified()),
        }
    }
}

impl std::str::FromStr for StatsConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplified" => Ok(StatsConvention::Amplified),
            "input" => Ok(StatsConvention::Input),
            _ => Err(Error::validation(
                "stats",
                format!("expected 'amplified' or 'input', got '{s}'"),
            )),
        }
    }
}

/// Closed-form relaxed Ziv-Zakai bound under photon loss for the `2 pi` window,
/// `pi^{3/2} e^{-4x} erfi(2 sqrt x) / (8 sqrt x)` with `x = eta N_gamma`.
///
/// The decaying exponential is folded into Dawson's function,
/// `pi / (4 sqrt x) D(2 sqrt x)`, so nothing overflows for large `x`.
pub fn qzzb_photon_loss_closed(spec: &ProbeSpec, loss: LossParams) -> Result<BoundValue> {
    let x = loss.eta() * spec.n_gamma();
    let value = if x <= SMALL_PRODUCT {
        PI / 2.0 * (1.0 - 8.0 * x / 3.0)
    } else {
        let a = x.sqrt();
        PI / (4.0 * a) * dawson(2.0 * a)?
    };
    Ok(BoundValue::closed(BoundKind::QzzbPl, value))
}

/// Relaxed Ziv-Zakai bound under photon loss by quadrature, for any window.
pub fn qzzb_photon_loss_quad(
    spec: &ProbeSpec,
    loss: LossParams,
    prior: &WindowPrior,
    cfg: &QuadConfig,
) -> Result<BoundValue> {
    prior.validate()?;
    let n = spec.n_gamma();
    let y = prior.width;
    let integral = integrate(|tau| generalized_fidelity_1(n, loss, tau, y), 0.0, y, cfg)?;
    Ok(BoundValue::quadrature(BoundKind::QzzbPl, integral, None))
}

/// Ziv-Zakai bound without the two relaxations:
/// `int_0^y (tau/2)(1 - tau/y)[1 - sqrt(1 - F(tau))] dtau`.
pub fn qzzb_tight<F>(mut fidelity: F, prior: &WindowPrior, cfg: &QuadConfig) -> Result<BoundValue>
where
    F: FnMut(f64) -> f64,
{
    prior.validate()?;
    let y = prior.width;
    let integral = integrate(
        |tau| {
            let f = fidelity(tau).clamp(0.0, 1.0);
            // 1 - sqrt(1 - f) without cancellation at small f.
            let gap = f / (1.0 + (1.0 - f).sqrt());
            0.5 * tau * (1.0 - tau / y) * gap
        },
        0.0,
        y,
        cfg,
    )?;
    Ok(BoundValue::quadrature(BoundKind::QzzbTight, integral, None))
}

// Integrates an integrand that also reports the optimal mu at each node.
fn integrate_optimized<F>(
    mut integrand: F,
    upper: f64,
    cfg: &QuadConfig,
) -> Result<(Integral, Option<MuRange>)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut mu_range = None;
    let mut failure = None;
    let result = integrate(
        |tau| match integrand(tau) {
            Ok((value, mu)) => {
                MuRange::include(&mut mu_range, mu);
                value
            }
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        upper,
        cfg,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((result?, mu_range))
}

/// Relaxed Ziv-Zakai bound under phase diffusion; `mu` is re-optimized at
/// every quadrature node.
pub fn qzzb_phase_diffusion(
    spec: &ProbeSpec,
    diff: DiffusionParams,
    prior: &WindowPrior,
    cfg: &QuadConfig,
    opt: &OptConfig,
) -> Result<BoundValue> {
    prior.validate()?;
    let n = spec.n_gamma();
    let y = prior.width;
    let (integral, mu) = integrate_optimized(
        |tau| generalized_fidelity_2_window(n, diff, tau, y, opt),
        y,
        cfg,
    )?;
    Ok(BoundValue::quadrature(BoundKind::QzzbPd, integral, mu))
}

/// Photon-loss Heisenberg limit (PL-type bound):
/// `(pi/8) int_0^{2pi} max_mu F''_Q1(tau) sin(tau/2) dtau`.
pub fn heisenberg_pl(
    spec: &ProbeSpec,
    loss: LossParams,
    regime: LossRegime,
    cfg: &QuadConfig,
    opt: &OptConfig,
) -> Result<BoundValue> {
    let n = spec.n_gamma();
    let (integral, mu) = integrate_optimized(
        |tau| {
            let best = max_f_ddot_q1_coherent(n, loss, tau, regime, opt)?;
            Ok((PI / 8.0 * best.value * (0.5 * tau).sin(), best.arg))
        },
        TAU,
        cfg,
    )?;
    Ok(BoundValue::quadrature(BoundKind::PlType, integral, mu))
}

/// Phase-diffusion Heisenberg limit (PD-type bound).
pub fn heisenberg_pd(
    spec: &ProbeSpec,
    diff: DiffusionParams,
    cfg: &QuadConfig,
    opt: &OptConfig,
) -> Result<BoundValue> {
    let n = spec.n_gamma();
    let (integral, mu) = integrate_optimized(
        |tau| {
            let best = max_f_ddot_q2_coherent(n, diff, tau, opt)?;
            Ok((PI / 8.0 * best.value * (0.5 * tau).sin(), best.arg))
        },
        TAU,
        cfg,
    )?;
    Ok(BoundValue::quadrature(BoundKind::PdType, integral, mu))
}

fn speed_limit(kind: BoundKind, constant: f64, denominator: f64, mu_opt: Option<f64>) -> BoundValue {
    let value = if denominator > 0.0 && denominator.is_finite() {
        constant / denominator
    } else {
        f64::INFINITY
    };
    let mut bound = BoundValue::closed(kind, value);
    bound.meta.mu_opt = mu_opt.map(|m| MuRange { min: m, max: m });
    bound
}

/// Margolus-Levitin and Mandelstam-Tamm bounds under photon loss.
pub fn ml_mt_photon_loss(stats: &PhotonStats, loss: LossParams) -> (BoundValue, BoundValue) {
    let eta = loss.eta();
    let (mean, var) = (stats.mean, stats.variance);
    let ml = speed_limit(BoundKind::MlType, C_ML, (eta * mean).powi(2), None);
    let mt_denominator = eta * mean * var / ((1.0 - eta) * var + eta * mean);
    let mt = speed_limit(BoundKind::MtType, C_MT, mt_denominator, None);
    (ml, mt)
}

/// Margolus-Levitin and Mandelstam-Tamm bounds under phase diffusion, with the
/// generator moments minimized over `mu`.
pub fn ml_mt_phase_diffusion(
    stats: &PhotonStats,
    diff: DiffusionParams,
    opt: &OptConfig,
) -> Result<(BoundValue, BoundValue)> {
    let k = diff.kappa();
    let energy = |mu: f64| {
        stats.mean * (1.0 - mu).abs() + mu.abs() / (2.0 * (2.0 * PI).sqrt() * k)
    };
    let spread = |mu: f64| stats.variance * (1.0 - mu).powi(2) + mu * mu / (8.0 * k * k);
    // Anchoring mu = 0 and 1 makes the vacuum and infinite-kappa minima
    // exactly zero, so those bounds come out flagged infinite.
    let e = minimize_anchored(energy, opt, &MU_ANCHORS)?;
    let s = minimize_anchored(spread, opt, &MU_ANCHORS)?;
    Ok((
        speed_limit(BoundKind::MlType, C_ML, e.value * e.value, Some(e.arg)),
        speed_limit(BoundKind::MtType, C_MT, s.value, Some(s.arg)),
    ))
}

fn combine(kind: BoundKind, parts: [BoundValue; 3]) -> BoundValue {
    let mut best = parts[0];
    for p in &parts[1..] {
        if p.value > best.value {
            best = *p;
        }
    }
    BoundValue {
        kind,
        value: best.value,
        method: best.method,
        meta: BoundMeta {
            argmax: Some(best.kind),
            ..best.meta
        },
    }
}

/// Largest of the ML, MT and PL-type bounds under photon loss.
pub fn combined_pl(
    spec: &ProbeSpec,
    loss: LossParams,
    regime: LossRegime,
    stats: StatsConvention,
    cfg: &QuadConfig,
    opt: &OptConfig,
) -> Result<BoundValue> {
    let (ml, mt) = ml_mt_photon_loss(&stats.stats(spec), loss);
    let pl = heisenberg_pl(spec, loss, regime, cfg, opt)?;
    Ok(combine(BoundKind::CombinedPl, [ml, mt, pl]))
}

/// Largest of the ML, MT and PD-type bounds under phase diffusion.
pub fn combined_pd(
    spec: &ProbeSpec,
    diff: DiffusionParams,
    stats: StatsConvention,
    cfg: &QuadConfig,
    opt: &OptConfig,
) -> Result<BoundValue> {
    let (ml, mt) = ml_mt_phase_diffusion(&stats.stats(spec), diff, opt)?;
    let pd = heisenberg_pd(spec, diff, cfg, opt)?;
    Ok(combine(BoundKind::CombinedPd, [ml, mt, pd]))
}

/// Photon-loss fidelity `F_L1` as a closure, for [`qzzb_tight`].
pub fn photon_loss_fidelity(spec: &ProbeSpec, loss: LossParams) -> impl Fn(f64) -> f64 {
    let n = spec.n_gamma();
    move |tau| f_l1_coherent(n, loss, tau)
}
