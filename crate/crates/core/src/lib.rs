//! Lower bounds on phase-estimation error for coherent probes boosted by a
//! noiseless linear amplifier and sent through photon-loss or phase-diffusion
//! channels: the quantum Ziv-Zakai bound, its Heisenberg-limit surrogates and
//! the Margolus-Levitin / Mandelstam-Tamm speed-limit bounds, plus the sweep
//! machinery that turns them into tables.

pub mod bounds;
pub mod error;
pub mod fidelity;
pub mod numerics;
pub mod probe;
pub mod specfun;
pub mod sweep;

pub use bounds::{BoundKind, BoundMeta, BoundValue, Method, MuRange, StatsConvention, WindowPrior};
pub use error::{Error, Result};
pub use fidelity::{DiffusionParams, LossParams, LossRegime};
pub use numerics::{OptConfig, QuadConfig};
pub use probe::{FockVector, PhotonStats, ProbeSpec};
pub use sweep::{Quantity, Scenario, SweepRow, SweepSpec};
