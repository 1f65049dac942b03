use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Search domain and effort for [`maximize_scalar`] / [`minimize_scalar`].
///
/// The default interval `[-1, 2]` is the search range used for the
/// purification parameter `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptConfig {
    pub lo: f64,
    pub hi: f64,
    pub coarse_points: usize,
    pub refine_iters: usize,
    pub refine_tol: f64,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            lo: -1.0,
            hi: 2.0,
            coarse_points: 401,
            refine_iters: 80,
            refine_tol: 1e-12,
        }
    }
}

impl OptConfig {
    pub fn with_interval(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo >= self.hi {
            return Err(Error::validation(
                "opt.interval",
                format!("need finite lo < hi, got [{}, {}]", self.lo, self.hi),
            ));
        }
        if self.coarse_points < 3 {
            return Err(Error::validation("opt.coarse_points", "must be at least 3"));
        }
        if !(self.refine_tol > 0.0) {
            return Err(Error::validation("opt.refine_tol", "must be positive"));
        }
        Ok(())
    }

    fn grid_point(&self, i: usize) -> f64 {
        if i + 1 == self.coarse_points {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.coarse_points - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub arg: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Global maximum of `f` over the configured interval.
///
/// A uniform coarse scan picks the best cell (first one on ties, so plateaus
/// resolve to the smallest argument); golden-section search then refines
/// inside the two neighbouring cells. The refined point replaces the coarse
/// one only when strictly better.
pub fn maximize_scalar<F>(f: F, cfg: &OptConfig) -> Result<Extremum>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_nan() {
            Err(Error::domain("maximize_scalar", format!("objective is NaN at {x}")))
        } else {
            Ok(y)
        }
    };

    let mut best_i = 0;
    let mut best = eval(cfg.lo)?;
    for i in 1..cfg.coarse_points {
        let y = eval(cfg.grid_point(i))?;
        if y > best {
            best = y;
            best_i = i;
        }
    }
    let coarse = Extremum {
        arg: cfg.grid_point(best_i),
        value: best,
    };

    let mut a = cfg.grid_point(best_i.saturating_sub(1));
    let mut b = cfg.grid_point((best_i + 1).min(cfg.coarse_points - 1));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    for _ in 0..cfg.refine_iters {
        if b - a <= cfg.refine_tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2)?;
        }
    }
    let refined = if f1 >= f2 {
        Extremum { arg: x1, value: f1 }
    } else {
        Extremum { arg: x2, value: f2 }
    };

    Ok(if refined.value > coarse.value {
        refined
    } else {
        coarse
    })
}

/// Global minimum of `f`; [`maximize_scalar`] applied to `-f`.
pub fn minimize_scalar<F>(f: F, cfg: &OptConfig) -> Result<Extremum>
where
    F: Fn(f64) -> f64,
{
    let m = maximize_scalar(|x| -f(x), cfg)?;
    Ok(Extremum {
        arg: m.arg,
        value: -m.value,
    })
}

/// [`maximize_scalar`], additionally evaluating each anchor inside the interval.
///
/// Peaks much narrower than the coarse grid spacing are invisible to the scan;
/// when their location is known in advance (e.g. `mu = 0` for a strongly
/// penalized purification) the anchors catch them. Ties keep the scan result.
pub fn maximize_anchored<F>(f: F, cfg: &OptConfig, anchors: &[f64]) -> Result<Extremum>
where
    F: Fn(f64) -> f64,
{
    let mut best = maximize_scalar(&f, cfg)?;
    for &x in anchors.iter().filter(|&&x| x >= cfg.lo && x <= cfg.hi) {
        let y = f(x);
        if y.is_nan() {
            return Err(Error::domain("maximize_scalar", format!("objective is NaN at {x}")));
        }
        if y > best.value {
            best = Extremum { arg: x, value: y };
        }
    }
    Ok(best)
}

pub fn minimize_anchored<F>(f: F, cfg: &OptConfig, anchors: &[f64]) -> Result<Extremum>
where
    F: Fn(f64) -> f64,
{
    let m = maximize_anchored(|x| -f(x), cfg, anchors)?;
    Ok(Extremum {
        arg: m.arg,
        value: -m.value,
    })
}
