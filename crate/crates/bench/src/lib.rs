//! Benchmark workloads for qzzb-core: representative operating points shared
//! by the criterion benches.

use qzzb_core::{DiffusionParams, LossParams, ProbeSpec};

/// Input photon number used throughout the figures.
pub const N_ALPHA: f64 = 4.0;

pub fn probe(gain: f64) -> ProbeSpec {
    ProbeSpec::new(N_ALPHA, gain).expect("valid benchmark probe")
}

pub fn loss(eta: f64) -> LossParams {
    LossParams::new(eta).expect("valid loss")
}

pub fn diffusion(kappa: f64) -> DiffusionParams {
    DiffusionParams::new(kappa).expect("valid diffusion")
}
