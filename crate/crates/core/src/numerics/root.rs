use crate::error::{Error, Result};

/// Locates a point where `f` and `g` cross inside `[lo, hi]` by bisection.
///
/// The sign of `f - g` must differ at the two ends. Bisection stops once the
/// bracket is no wider than `tol`; the bracket end with the smaller `|f - g|`
/// is returned.
pub fn find_crossover<F, G>(f: F, g: G, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if !(tol > 0.0) || !(lo <= hi) {
        return Err(Error::domain(
            "find_crossover",
            format!("need lo <= hi and tol > 0, got [{lo}, {hi}], tol {tol}"),
        ));
    }
    let d = |x: f64| f(x) - g(x);
    let (mut a, mut b) = (lo, hi);
    let (mut da, mut db) = (d(a), d(b));
    if da == 0.0 {
        return Ok(a);
    }
    if db == 0.0 {
        return Ok(b);
    }
    if da.is_nan() || db.is_nan() || da.signum() == db.signum() {
        return Err(Error::Bracket { lo, hi });
    }
    while b - a > tol {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let dm = d(mid);
        if dm == 0.0 {
            return Ok(mid);
        }
        if dm.signum() == da.signum() {
            a = mid;
            da = dm;
        } else {
            b = mid;
            db = dm;
        }
    }
    Ok(if da.abs() <= db.abs() { a } else { b })
}
