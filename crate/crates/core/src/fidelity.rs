//! Fidelity lower bounds between neighbouring phase-shifted probe states under
//! photon loss and phase diffusion, including the surrogates used for the
//! Heisenberg-limit bounds.

use crate::error::{Error, Result};
use crate::numerics::{maximize_anchored, Extremum, OptConfig};
use crate::probe::FockVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Speed-limit constant shared by the Heisenberg-limit surrogates and the
/// Margolus-Levitin bound, to the four digits it is quoted with.
pub const LAMBDA: f64 = 0.7246;

/// Photon-loss channel with transmissivity `eta` (1 ideal, 0 full absorption).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossParams {
    eta: f64,
}

impl LossParams {
    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::validation("eta", format!("must lie in [0, 1], got {eta}")));
        }
        Ok(Self { eta })
    }

    pub const IDEAL: Self = Self { eta: 1.0 };

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `(1 - eta) / eta`.
    pub fn loss_ratio(&self) -> f64 {
        (1.0 - self.eta) / self.eta
    }
}

/// Phase-diffusion channel of strength `kappa > 0`. `kappa = +inf` is the
/// completely dephasing limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiffusionParams {
    kappa: f64,
}

impl DiffusionParams {
    pub fn new(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::validation("kappa", format!("must be > 0, got {kappa}")));
        }
        Ok(Self { kappa })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Environment penalty `phi(kappa, tau, mu) = exp(-tau^2 mu^2 / (8 kappa^2))`.
    pub fn penalty(&self, tau: f64, mu: f64) -> f64 {
        let k = self.kappa;
        (-(tau * mu) * (tau * mu) / (8.0 * k * k)).exp()
    }
}

/// Purification settings always tried exactly by the `mu` optimizers: no
/// purification and full purification. Under weak diffusion the optimum sits
/// in a peak around `mu = 0` far narrower than any practical scan grid.
pub const MU_ANCHORS: [f64; 2] = [0.0, 1.0];

/// Which asymptotic branch of the photon-loss surrogate to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossRegime {
    /// eta close to 1.
    #[default]
    SmallLoss,
    /// eta close to 0.
    LargeLoss,
}

impl LossRegime {
    pub fn as_str(&self) -> &'static str {
        match self {
            LossRegime::SmallLoss => "small-loss",
            LossRegime::LargeLoss => "large-loss",
        }
    }
}

impl std::str::FromStr for LossRegime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small-loss" | "small" => Ok(LossRegime::SmallLoss),
            "large-loss" | "large" => Ok(LossRegime::LargeLoss),
            _ => Err(Error::validation("regime", format!("unknown loss regime '{s}'"))),
        }
    }
}

/// Photon-loss fidelity bound of the coherent probe for purification `mu`:
/// `exp[2N(eta cos tau + (1 - eta) cos(tau mu) - 1)]`.
pub fn f_q1_coherent(n_gamma: f64, loss: LossParams, mu: f64, tau: f64) -> f64 {
    let eta = loss.eta;
    (2.0 * n_gamma * (eta * tau.cos() + (1.0 - eta) * (tau * mu).cos() - 1.0)).exp()
}

/// [`f_q1_coherent`] maximized over `mu` (attained at `mu = 0`).
pub fn f_l1_coherent(n_gamma: f64, loss: LossParams, tau: f64) -> f64 {
    let x = loss.eta * n_gamma;
    (2.0 * x * (tau.cos() - 1.0)).exp()
}

/// Photon-loss fidelity bound of an arbitrary pure probe,
/// `|sum_n |c_n|^2 z^n|^2` with `z = eta e^{-i tau} + (1 - eta) e^{i tau mu}`.
pub fn f_q1_fock(psi: &FockVector, loss: LossParams, mu: f64, tau: f64) -> f64 {
    let eta = loss.eta;
    let z = Complex64::from_polar(eta, -tau) + Complex64::from_polar(1.0 - eta, tau * mu);
    let mut zn = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for p in psi.probabilities() {
        acc += zn * p;
        zn *= z;
    }
    acc.norm_sqr()
}

/// Phase-diffusion fidelity bound of the coherent probe for purification `mu`.
pub fn f_q2_coherent(n_gamma: f64, diff: DiffusionParams, mu: f64, tau: f64) -> f64 {
    let phase = -2.0 * n_gamma * (1.0 - (tau * (mu - 1.0)).cos());
    diff.penalty(tau, mu) * phase.exp()
}

/// [`f_q2_coherent`] maximized over `mu`; `arg` is the optimal `mu`.
pub fn f_l2_coherent(
    n_gamma: f64,
    diff: DiffusionParams,
    tau: f64,
    opt: &OptConfig,
) -> Result<Extremum> {
    maximize_anchored(|mu| f_q2_coherent(n_gamma, diff, mu, tau), opt, &MU_ANCHORS)
}

/// Unclamped Heisenberg-limit surrogate for photon loss. May be negative far
/// from the regime it is derived for; see [`f_ddot_q1_coherent`].
pub fn f_ddot_q1_coherent_raw(
    n_gamma: f64,
    loss: LossParams,
    mu: f64,
    tau: f64,
    regime: LossRegime,
) -> f64 {
    let eta = loss.eta;
    let n = n_gamma;
    let b0 = 2.0 * eta * n * tau.cos();
    let c0 = 2.0 * (1.0 - eta) * n * (tau * mu).cos();
    match regime {
        LossRegime::SmallLoss => {
            let d0 = ((1.0 - eta) * n).powi(2);
            (-2.0 * n + b0).exp() * (1.0 + c0 + d0)
        }
        LossRegime::LargeLoss => {
            let d1 = (eta * n).powi(2);
            (-2.0 * n + c0).exp() * (1.0 + b0 + d1)
        }
    }
}

/// Heisenberg-limit surrogate for photon loss, clamped below at 0.
pub fn f_ddot_q1_coherent(
    n_gamma: f64,
    loss: LossParams,
    mu: f64,
    tau: f64,
    regime: LossRegime,
) -> f64 {
    f_ddot_q1_coherent_raw(n_gamma, loss, mu, tau, regime).max(0.0)
}

/// Unclamped Heisenberg-limit surrogate for phase diffusion.
pub fn f_ddot_q2_coherent_raw(n_gamma: f64, diff: DiffusionParams, mu: f64, tau: f64) -> f64 {
    diff.penalty(tau, mu) * (1.0 - 2.0 * LAMBDA * tau * (mu - 1.0).abs() * n_gamma)
}

/// Heisenberg-limit surrogate for phase diffusion, clamped below at 0.
pub fn f_ddot_q2_coherent(n_gamma: f64, diff: DiffusionParams, mu: f64, tau: f64) -> f64 {
    f_ddot_q2_coherent_raw(n_gamma, diff, mu, tau).max(0.0)
}

/// [`f_ddot_q1_coherent`] maximized over `mu` at fixed `tau`.
pub fn max_f_ddot_q1_coherent(
    n_gamma: f64,
    loss: LossParams,
    tau: f64,
    regime: LossRegime,
    opt: &OptConfig,
) -> Result<Extremum> {
    maximize_anchored(
        |mu| f_ddot_q1_coherent(n_gamma, loss, mu, tau, regime),
        opt,
        &MU_ANCHORS,
    )
}

/// [`f_ddot_q2_coherent`] maximized over `mu` at fixed `tau`.
pub fn max_f_ddot_q2_coherent(
    n_gamma: f64,
    diff: DiffusionParams,
    tau: f64,
    opt: &OptConfig,
) -> Result<Extremum> {
    maximize_anchored(|mu| f_ddot_q2_coherent(n_gamma, diff, mu, tau), opt, &MU_ANCHORS)
}

/// Relaxed Ziv-Zakai integrand for photon loss over a window of width `y`:
/// `(y / 16) sin(pi tau / y) F_L1(tau)`.
pub fn generalized_fidelity_1(n_gamma: f64, loss: LossParams, tau: f64, y: f64) -> f64 {
    y / 16.0 * (PI * tau / y).sin() * f_l1_coherent(n_gamma, loss, tau)
}

/// Relaxed Ziv-Zakai integrand for phase diffusion over the full `2 pi`
/// window: `(pi / 8) F_L2(tau) sin(tau / 2)`.
pub fn generalized_fidelity_2(
    n_gamma: f64,
    diff: DiffusionParams,
    tau: f64,
    opt: &OptConfig,
) -> Result<f64> {
    generalized_fidelity_2_window(n_gamma, diff, tau, TAU, opt).map(|(v, _)| v)
}

// Window-width form of the diffusion integrand; also returns the optimal mu.
pub(crate) fn generalized_fidelity_2_window(
    n_gamma: f64,
    diff: DiffusionParams,
    tau: f64,
    y: f64,
    opt: &OptConfig,
) -> Result<(f64, f64)> {
    let best = f_l2_coherent(n_gamma, diff, tau, opt)?;
    Ok((y / 16.0 * (PI * tau / y).sin() * best.value, best.arg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::maximize_scalar;
    use crate::probe::ProbeSpec;

    fn loss(eta: f64) -> LossParams {
        LossParams::new(eta).unwrap()
    }
    fn diff(kappa: f64) -> DiffusionParams {
        DiffusionParams::new(kappa).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(LossParams::new(1.01).is_err());
        assert!(LossParams::new(f64::NAN).is_err());
        assert!(DiffusionParams::new(0.0).is_err());
        assert!(DiffusionParams::new(-1.0).is_err());
        assert!(DiffusionParams::new(f64::INFINITY).is_ok());
        assert_eq!("large-loss".parse::<LossRegime>().unwrap(), LossRegime::LargeLoss);
        assert!("medium".parse::<LossRegime>().is_err());
    }

    #[test]
    fn q1_examples() {
        assert_eq!(f_q1_coherent(4.0, loss(0.3), 0.7, 0.0), 1.0);
        assert_eq!(f_q1_coherent(0.0, loss(0.3), 0.7, 2.0), 1.0);
        let v = f_q1_coherent(4.0, loss(1.0), 1.234, PI);
        assert!((v - (-16.0f64).exp()).abs() < 1e-20);
        assert!((v - 1.125_35e-7).abs() < 1e-11);
    }

    #[test]
    fn l1_examples() {
        for tau in [0.0, 1.0, PI, 5.0] {
            assert_eq!(f_l1_coherent(4.0, loss(0.0), tau), 1.0);
        }
        let v = f_l1_coherent(4.0, loss(0.5), PI);
        assert!((v - (-8.0f64).exp()).abs() < 1e-18);
    }

    #[test]
    fn l1_is_max_of_q1_over_mu() {
        let opt = OptConfig::default();
        for &n in &[0.5, 4.0, 12.0] {
            for &eta in &[0.05, 0.5, 0.95] {
                for i in 0..=12 {
                    let tau = TAU * i as f64 / 12.0;
                    let best = maximize_scalar(|mu| f_q1_coherent(n, loss(eta), mu, tau), &opt).unwrap();
                    let closed = f_l1_coherent(n, loss(eta), tau);
                    assert!((best.value - closed).abs() < 1e-9, "n={n} eta={eta} tau={tau}");
                }
            }
        }
    }

    #[test]
    fn fock_matches_coherent_closed_form() {
        let psi = FockVector::coherent(&ProbeSpec::amplified(4.0).unwrap(), 1e-14).unwrap();
        for &eta in &[0.0, 0.2, 0.7, 1.0] {
            for &mu in &[-1.0, 0.0, 0.5, 2.0] {
                for i in 0..=10 {
                    let tau = TAU * i as f64 / 10.0;
                    let a = f_q1_fock(&psi, loss(eta), mu, tau);
                    let b = f_q1_coherent(4.0, loss(eta), mu, tau);
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn fock_trivial_cases() {
        let vac = FockVector::from_amplitudes(vec![Complex64::new(1.0, 0.0)], 0.0).unwrap();
        assert_eq!(f_q1_fock(&vac, loss(0.4), 0.3, 1.7), 1.0);
        let psi = FockVector::coherent(&ProbeSpec::amplified(3.0).unwrap(), 1e-13).unwrap();
        assert!((f_q1_fock(&psi, loss(0.4), 0.3, 0.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fock_global_phase_invariance() {
        let psi = FockVector::coherent(&ProbeSpec::amplified(5.0).unwrap(), 1e-13).unwrap();
        let rotated = psi.with_global_phase(1.1);
        for i in 0..20 {
            let tau = 0.3 * i as f64;
            let a = f_q1_fock(&psi, loss(0.6), 0.2, tau);
            let b = f_q1_fock(&rotated, loss(0.6), 0.2, tau);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn q2_examples() {
        let d = diff(0.3);
        assert_eq!(f_q2_coherent(4.0, d, 0.8, 0.0), 1.0);
        let tau = 1.3;
        assert!((f_q2_coherent(4.0, d, 1.0, tau) - (-tau * tau / (8.0 * 0.09)).exp()).abs() < 1e-15);
        let ideal = (-2.0 * 4.0 * (1.0 - tau.cos())).exp();
        assert!((f_q2_coherent(4.0, d, 0.0, tau) - ideal).abs() < 1e-15);
    }

    #[test]
    fn l2_examples() {
        let opt = OptConfig::default();
        assert_eq!(f_l2_coherent(4.0, diff(0.2), 0.0, &opt).unwrap().value, 1.0);
        let wide = f_l2_coherent(4.0, diff(1e3), 1.0, &opt).unwrap();
        assert!((wide.value - (-1.0 / (8.0 * 1e6f64)).exp()).abs() < 1e-9);
        assert!((wide.arg - 1.0).abs() < 1e-3);
        for tau in [0.5, 2.0, 4.0] {
            let v = f_l2_coherent(4.0, diff(0.2), tau, &opt).unwrap().value;
            let floor = f_q2_coherent(4.0, diff(0.2), 0.0, tau).max(f_q2_coherent(4.0, diff(0.2), 1.0, tau));
            assert!(v >= floor - 1e-9);
        }
    }

    #[test]
    fn ddot_q1_examples() {
        let (n, eta) = (4.0f64, 0.8f64);
        let at0 = f_ddot_q1_coherent(n, loss(eta), 0.0, 0.0, LossRegime::SmallLoss);
        let want = (-2.0 * n + 2.0 * eta * n).exp()
            * (1.0 + 2.0 * (1.0 - eta) * n + ((1.0 - eta) * n).powi(2));
        assert!((at0 - want).abs() < 1e-15);
        assert_eq!(f_ddot_q1_coherent(n, loss(1.0), 0.4, 0.0, LossRegime::SmallLoss), 1.0);
        for tau in [0.3, 1.0, 2.5] {
            let v = f_ddot_q1_coherent(n, loss(1.0), 0.7, tau, LossRegime::SmallLoss);
            assert!((v - f_l1_coherent(n, loss(1.0), tau)).abs() < 1e-15);
        }
        let v = f_ddot_q1_coherent(4.0, loss(0.95), 0.0, PI / 2.0, LossRegime::SmallLoss);
        assert!((v - 4.830_661_841_796_17e-4).abs() < 1e-15);
    }

    #[test]
    fn ddot_q1_brackets_never_negative() {
        // 1 + 2x cos + x^2 >= (1 - x)^2, so neither loss branch needs the clamp.
        for &n in &[0.5, 1.0, 1.0 / 0.9, 20.0] {
            for &eta in &[0.0, 0.1, 0.9, 1.0] {
                for i in 0..=24 {
                    let tau = TAU * i as f64 / 24.0;
                    for regime in [LossRegime::SmallLoss, LossRegime::LargeLoss] {
                        assert!(f_ddot_q1_coherent_raw(n, loss(eta), 0.37, tau, regime) >= 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn ddot_q2_examples() {
        let d = diff(0.2);
        assert!((f_ddot_q2_coherent(4.0, d, 1.0, 0.7) - (-0.49 / 0.32f64).exp()).abs() < 1e-15);
        assert_eq!(f_ddot_q2_coherent(4.0, d, 0.3, 0.0), 1.0);
        let v = f_ddot_q2_coherent(4.0, d, 0.9, 0.1);
        assert!((v - 0.918_486_075_296_719).abs() < 1e-13);
        assert!(f_ddot_q2_coherent_raw(4.0, d, -1.0, 3.0) < 0.0);
        assert_eq!(f_ddot_q2_coherent(4.0, d, -1.0, 3.0), 0.0);
    }

    #[test]
    fn generalized_fidelity_examples() {
        let y = TAU;
        assert_eq!(generalized_fidelity_1(4.0, loss(0.5), 0.0, y), 0.0);
        assert!(generalized_fidelity_1(4.0, loss(0.5), y, y).abs() < 1e-16);
        assert!((generalized_fidelity_1(4.0, loss(0.0), PI, y) - PI / 8.0).abs() < 1e-15);

        let opt = OptConfig::default();
        assert_eq!(generalized_fidelity_2(4.0, diff(0.2), 0.0, &opt).unwrap(), 0.0);
        assert!(generalized_fidelity_2(4.0, diff(0.2), TAU, &opt).unwrap().abs() < 1e-15);
        let v = generalized_fidelity_2(4.0, diff(1e9), PI, &opt).unwrap();
        assert!(v <= PI / 8.0 && v > 0.0);
    }

    #[test]
    fn l1_symmetry_and_product_collapse() {
        for i in 0..=100 {
            let tau = TAU * i as f64 / 100.0;
            let a = f_l1_coherent(3.0, loss(0.4), tau);
            let b = f_l1_coherent(3.0, loss(0.4), TAU - tau);
            assert!((a - b).abs() < 1e-15);
            let c = f_l1_coherent(0.4 * 3.0, loss(1.0), tau);
            assert!((a - c).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn l1_strictly_decreasing_in_product() {
        for i in 1..=20 {
            let tau = PI * i as f64 / 20.0;
            let mut prev = f_l1_coherent(0.0, loss(1.0), tau);
            for k in 1..=50 {
                let v = f_l1_coherent(0.2 * k as f64, loss(1.0), tau);
                assert!(v < prev);
                prev = v;
            }
        }
    }

    #[test]
    fn surrogate_below_exact_fidelity_at_small_loss() {
        let l = loss(0.999);
        let opt = OptConfig::default();
        for &n in &[1.0, 4.0, 9.0] {
            for i in 0..=40 {
                let tau = TAU * i as f64 / 40.0;
                let s = f_ddot_q1_coherent_raw(n, l, 0.0, tau, LossRegime::SmallLoss);
                if s <= 0.0 {
                    continue;
                }
                assert!(s <= f_q1_coherent(n, l, 0.0, tau) + 1e-9);
                let best = maximize_scalar(|mu| f_ddot_q1_coherent(n, l, mu, tau, LossRegime::SmallLoss), &opt)
                    .unwrap();
                assert!(best.value <= f_l1_coherent(n, l, tau) + 1e-9);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn fidelities_in_unit_interval(
                n in 0.0f64..30.0,
                eta in 0.0f64..=1.0,
                kappa in 0.01f64..5.0,
                mu in -1.0f64..2.0,
                tau in 0.0f64..TAU,
            ) {
                let l = loss(eta);
                let d = diff(kappa);
                let values = [
                    f_q1_coherent(n, l, mu, tau),
                    f_l1_coherent(n, l, tau),
                    f_q2_coherent(n, d, mu, tau),
                    f_ddot_q1_coherent(n, l, mu, tau, LossRegime::SmallLoss),
                    f_ddot_q1_coherent(n, l, mu, tau, LossRegime::LargeLoss),
                    f_ddot_q2_coherent(n, d, mu, tau),
                ];
                for v in values {
                    prop_assert!((0.0..=1.0 + 1e-15).contains(&v), "{v}");
                }
            }

            #[test]
            fn l1_dominates_q1(n in 0.0f64..30.0, eta in 0.0f64..=1.0, mu in -1.0f64..2.0, tau in 0.0f64..TAU) {
                prop_assert!(f_l1_coherent(n, loss(eta), tau) >= f_q1_coherent(n, loss(eta), mu, tau));
            }
        }
    }
}
