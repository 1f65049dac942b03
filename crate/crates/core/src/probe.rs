//! Coherent probe states, ideal noiseless linear amplification and the
//! single-photon-catalysis gain law.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Input coherent-state photon number plus amplifier gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSpec {
    n_alpha: f64,
    gain: f64,
}

impl ProbeSpec {
    pub fn new(n_alpha: f64, gain: f64) -> Result<Self> {
        if !(n_alpha >= 0.0) || !n_alpha.is_finite() {
            return Err(Error::validation("n_alpha", format!("must be finite and >= 0, got {n_alpha}")));
        }
        if !(gain > 0.0) || !gain.is_finite() {
            return Err(Error::validation("gain", format!("must be finite and > 0, got {gain}")));
        }
        Ok(Self { n_alpha, gain })
    }

    /// A probe with already-amplified photon number `n_gamma` and unit gain.
    pub fn amplified(n_gamma: f64) -> Result<Self> {
        Self::new(n_gamma, 1.0)
    }

    pub fn n_alpha(&self) -> f64 {
        self.n_alpha
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Mean photon number after amplification, `g^2 N_alpha`.
    pub fn n_gamma(&self) -> f64 {
        self.gain * self.gain * self.n_alpha
    }

    /// The same input state without amplification.
    pub fn unamplified(&self) -> Self {
        Self {
            n_alpha: self.n_alpha,
            gain: 1.0,
        }
    }
}

/// Mean and variance of the photon-number operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonStats {
    pub mean: f64,
    pub variance: f64,
}

impl PhotonStats {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !(mean >= 0.0) || !(variance >= 0.0) {
            return Err(Error::validation(
                "photon stats",
                format!("mean and variance must be >= 0, got {mean}, {variance}"),
            ));
        }
        Ok(Self { mean, variance })
    }
}

/// Poissonian statistics of the amplified coherent probe.
pub fn coherent_stats(spec: &ProbeSpec) -> PhotonStats {
    let n = spec.n_gamma();
    PhotonStats {
        mean: n,
        variance: n,
    }
}

/// Squared norm of `g^{n} |alpha>`, i.e. `exp((g^2 - 1) N_alpha)`.
///
/// Reported as metadata only; no bound depends on it.
pub fn nla_success_probability(spec: &ProbeSpec) -> Result<f64> {
    let exponent = (spec.gain * spec.gain - 1.0) * spec.n_alpha;
    let p = exponent.exp();
    if p.is_finite() {
        Ok(p)
    } else {
        Err(Error::Range {
            value: exponent,
            threshold: f64::MAX.ln(),
        })
    }
}

/// Effective amplifier gain `(1 - 2T) / sqrt(T)` of single-photon catalysis
/// through a beam splitter of transmissivity `T`.
pub fn catalysis_gain(transmissivity: f64) -> Result<f64> {
    let t = transmissivity;
    if !(t > 0.0 && t < 0.5) {
        return Err(Error::domain(
            "catalysis_gain",
            format!("transmissivity must lie in the open interval (0, 1/2), got {t}"),
        ));
    }
    Ok((1.0 - 2.0 * t) / t.sqrt())
}

/// Truncated Fock expansion of a pure probe.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
    tail_mass: f64,
}

// Hard ceiling on the cutoff; far beyond any photon number the bounds use.
const MAX_CUTOFF: usize = 1 << 20;

impl FockVector {
    /// Builds a state from explicit amplitudes. `tail_mass` is the probability
    /// weight left out of the truncation.
    pub fn from_amplitudes(amps: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::validation("amps", "need at least one amplitude"));
        }
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (norm + tail_mass - 1.0).abs() > 1e-12 {
            return Err(Error::validation(
                "amps",
                format!("norm {norm} plus tail {tail_mass} differs from 1"),
            ));
        }
        Ok(Self { amps, tail_mass })
    }

    /// Coherent state `|gamma>` with real `gamma = sqrt(N_gamma)`, truncated
    /// at the first cutoff whose Poisson tail mass drops below `eps`.
    pub fn coherent(spec: &ProbeSpec, eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::validation("eps", format!("must be > 0, got {eps}")));
        }
        let n = spec.n_gamma();
        if n == 0.0 {
            return Ok(Self {
                amps: vec![Complex64::new(1.0, 0.0)],
                tail_mass: 0.0,
            });
        }
        let ln_n = n.ln();
        let mut amps = Vec::new();
        let mut ln_factorial = 0.0;
        let mut total = 0.0;
        for k in 0..MAX_CUTOFF {
            if k > 0 {
                ln_factorial += (k as f64).ln();
            }
            let ln_p = -n + k as f64 * ln_n - ln_factorial;
            let p = ln_p.exp();
            amps.push(Complex64::new((0.5 * ln_p).exp(), 0.0));
            let before = total;
            total += p;
            let tail = (1.0 - total).max(0.0);
            if tail < eps {
                return Ok(Self {
                    amps,
                    tail_mass: tail,
                });
            }
            // Past the mode the sum has stopped moving: eps is below what
            // f64 can resolve.
            if k as f64 > n && total == before {
                return Err(Error::Capacity { eps, cutoff: k });
            }
        }
        Err(Error::Capacity {
            eps,
            cutoff: MAX_CUTOFF,
        })
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.amps.iter().map(|c| c.norm_sqr())
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.probabilities()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    /// Multiplies every amplitude by `e^{i theta}`.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self {
            amps: self.amps.iter().map(|c| c * phase).collect(),
            tail_mass: self.tail_mass,
        }
    }
}

/// `fock_coherent` under its operation name.
pub fn fock_coherent(spec: &ProbeSpec, eps: f64) -> Result<FockVector> {
    FockVector::coherent(spec, eps)
}
