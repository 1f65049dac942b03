//! Dawson's integral and the imaginary error function on the real line.
//!
//! `erfi` is evaluated as `(2/sqrt(pi)) e^{x^2} D(x)` so the only growth comes
//! from the explicit exponential; callers that multiply by a decaying factor
//! should use [`dawson`] directly and fuse the exponents.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_2_SQRT_PI;

/// Largest |x| accepted by [`erfi`]: `e^{x^2}` overflows `f64` just above
/// `sqrt(709.78) ~ 26.64`.
pub const ERFI_MAX_ARG: f64 = 26.6;

/// Below this the Maclaurin series is used; above it Rybicki's sum.
const SERIES_CUTOFF: f64 = 0.5;

// Rybicki sampling step. The discretization error is ~exp(-(pi / 2h)^2),
// about 1e-27 at h = 0.2, so the sum is limited by rounding only.
const RYBICKI_H: f64 = 0.2;
const RYBICKI_TERMS: usize = 40;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Dawson's integral `D(x) = e^{-x^2} \int_0^x e^{t^2} dt`.
pub fn dawson(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("dawson", format!("non-finite argument {x}")));
    }
    let ax = x.abs();
    let d = if ax < SERIES_CUTOFF {
        dawson_series(ax)
    } else {
        dawson_rybicki(ax)
    };
    Ok(if x.is_sign_negative() { -d } else { d })
}

/// Imaginary error function `erfi(x) = -i erf(ix) = (2/sqrt(pi)) \int_0^x e^{t^2} dt`.
pub fn erfi(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain("erfi", format!("non-finite argument {x}")));
    }
    if x.abs() > ERFI_MAX_ARG {
        return Err(Error::Range {
            value: x,
            threshold: ERFI_MAX_ARG,
        });
    }
    let d = dawson(x)?;
    Ok(FRAC_2_SQRT_PI * (x * x).exp() * d)
}

// D(x) = sum_k (-1)^k 2^k x^{2k+1} / (2k+1)!!
fn dawson_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for k in 0..60 {
        term *= -2.0 * x2 / (2 * k + 3) as f64;
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

// Rybicki: D(x) = lim_{h->0} pi^{-1/2} sum_{n odd} e^{-(x - nh)^2} / n, recentred
// on the even multiple of h nearest to x so only a few terms matter.
fn dawson_rybicki(x: f64) -> f64 {
    let n0 = 2.0 * (0.5 * x / RYBICKI_H).round();
    let xp = x - n0 * RYBICKI_H;
    let mut sum = 0.0;
    for k in 0..RYBICKI_TERMS {
        let n = (2 * k + 1) as f64;
        let up = (-(xp - n * RYBICKI_H).powi(2)).exp();
        let down = (-(xp + n * RYBICKI_H).powi(2)).exp();
        sum += up / (n0 + n) + down / (n0 - n);
    }
    sum * FRAC_1_SQRT_PI
}


#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 40-digit quadrature of e^{-x^2} \int_0^x e^{t^2} dt.
    const DAWSON_REF: &[(f64, f64)] = &[
        (0.1, 0.099_335_992_397_852_861),
        (0.5, 0.424_436_383_502_022_30),
        (1.0, 0.538_079_506_912_768_42),
        (1.5, 0.428_249_071_085_398_63),
        (2.0, 0.301_340_388_923_791_97),
        (3.0, 0.178_271_030_610_558_29),
        (5.0, 0.102_134_074_424_276_84),
        (10.0, 0.050_253_847_187_598_528),
        (25.0, 0.020_016_038_554_466_408),
        (50.0, 0.010_002_001_201_201_683),
    ];

    const ERFI_REF: &[(f64, f64)] = &[
        (0.3, 0.348_949_338_758_936_18),
        (1.0, 1.650_425_758_797_542_9),
        (2.0, 18.564_802_414_575_553),
        (5.0, 8_298_273_880.676_803_5),
        (10.0, 1.524_307_422_708_669_7e42),
        (20.0, 1.474_797_539_628_786_2e172),
        (25.0, 6.135_986_249_821_951_3e269),
    ];

    // Term-by-term erfi(x) = 2/sqrt(pi) sum x^{2k+1} / (k! (2k+1)); all terms
    // positive, so it is accurate wherever it converges in f64.
    fn erfi_series(x: f64) -> f64 {
        let mut power = x;
        let mut sum = x;
        for k in 1..400 {
            power *= x * x / k as f64;
            let term = power / (2 * k + 1) as f64;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
        }
        FRAC_2_SQRT_PI * sum
    }

    #[test]
    fn dawson_matches_reference() {
        for &(x, want) in DAWSON_REF {
            let got = dawson(x).unwrap();
            assert!((got - want).abs() <= 1e-13, "D({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn dawson_at_origin_and_odd() {
        assert_eq!(dawson(0.0).unwrap(), 0.0);
        assert_eq!(dawson(-1.3).unwrap(), -dawson(1.3).unwrap());
        assert!((dawson(1.0).unwrap() - 0.538_079_506_9).abs() < 1e-10);
    }

    #[test]
    fn dawson_continuous_across_branch_switch() {
        for x in [0.3, SERIES_CUTOFF, 0.7] {
            assert!((dawson_series(x) - dawson_rybicki(x)).abs() < 1e-15);
        }
    }

    #[test]
    fn erfi_matches_reference() {
        for &(x, want) in ERFI_REF {
            let got = erfi(x).unwrap();
            assert!(((got - want) / want).abs() <= 1e-12, "erfi({x}) = {got:e}, want {want:e}");
        }
    }

    #[test]
    fn erfi_basic_values() {
        assert_eq!(erfi(0.0).unwrap(), 0.0);
        assert_eq!(erfi(-0.7).unwrap(), -erfi(0.7).unwrap());
        assert!((erfi(1.0).unwrap() - 1.650_425_758_8).abs() < 1e-10);
    }

    #[test]
    fn erfi_agrees_with_direct_series_on_grid() {
        for i in 0..500 {
            let x = 5.0 * i as f64 / 499.0;
            let a = erfi(x).unwrap();
            let b = erfi_series(x);
            let scale = b.abs().max(f64::MIN_POSITIVE);
            assert!(((a - b) / scale).abs() <= 1e-10 || (a == 0.0 && b == 0.0), "x = {x}: {a} vs {b}");
        }
    }

    #[test]
    fn erfi_strictly_increasing() {
        let mut prev = erfi(-ERFI_MAX_ARG).unwrap();
        for i in 1..=2000 {
            let x = -ERFI_MAX_ARG + 2.0 * ERFI_MAX_ARG * i as f64 / 2000.0;
            let v = erfi(x).unwrap();
            assert!(v > prev, "not increasing at {x}");
            prev = v;
        }
    }

    #[test]
    fn erfi_small_argument_slope() {
        for x in [1e-9, 1e-8, 1e-7] {
            let ratio = erfi(x).unwrap() / x;
            assert!((ratio / FRAC_2_SQRT_PI - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(dawson(f64::NAN), Err(Error::Domain { .. })));
        assert!(matches!(erfi(f64::INFINITY), Err(Error::Domain { .. })));
        match erfi(27.0) {
            Err(Error::Range { threshold, .. }) => assert_eq!(threshold, ERFI_MAX_ARG),
            other => panic!("expected range error, got {other:?}"),
        }
        assert!(erfi(ERFI_MAX_ARG).unwrap().is_finite());
        assert!(erfi(-ERFI_MAX_ARG).unwrap().is_finite());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn odd_symmetry_is_exact(x in -50.0f64..50.0) {
                prop_assert_eq!(dawson(-x).unwrap(), -dawson(x).unwrap());
                if x.abs() <= ERFI_MAX_ARG {
                    prop_assert_eq!(erfi(-x).unwrap(), -erfi(x).unwrap());
                }
            }
        }
    }
}
