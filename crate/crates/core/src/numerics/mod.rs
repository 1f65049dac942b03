//! Adaptive quadrature, bounded scalar optimization and crossover bisection.

mod optimize;
mod quad;
mod root;

pub use optimize::{maximize_anchored, maximize_scalar, minimize_anchored, minimize_scalar, Extremum, OptConfig};
pub use quad::{integrate, Integral, QuadConfig};
pub use root::find_crossover;
