//! Voltage-dependent ZIP load evaluation and its affine surrogate in
//! squared-voltage variables.
//!
//! The exact model scales nominal demand by
//! `kz (v/vr)^2 + ki (v/vr) + kp`. The conic model works in `v^2`, where the
//! impedance and power terms are already affine; the current term is replaced
//! by the tangent of `sqrt` at the midpoint of the expected voltage band,
//! `v ~= (v_ref^2 + v_sq) / (2 v_ref)`. The surrogate's worst-case error over
//! the band is reported so callers can budget for it.

use crate::case::ZipTriple;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ZipError {
    #[error("voltage must be positive (got {0})")]
    NonPositiveVoltage(f64),
    #[error("invalid voltage range [{0}, {1}]")]
    InvalidRange(f64, f64),
}

/// Evaluate the exact active ZIP load at voltage magnitude `v`.
pub fn eval_zip_p(v: f64, p_nominal: f64, zip: ZipTriple, v_rated: f64) -> Result<f64, ZipError> {
    if !(v > 0.0) {
        return Err(ZipError::NonPositiveVoltage(v));
    }
    let r = v / v_rated;
    Ok(p_nominal * (zip.z * r * r + zip.i * r + zip.p))
}

/// Evaluate the exact reactive ZIP load at voltage magnitude `v`.
pub fn eval_zip_q(v: f64, q_nominal: f64, zip: ZipTriple, v_rated: f64) -> Result<f64, ZipError> {
    eval_zip_p(v, q_nominal, zip, v_rated)
}

/// Affine load surrogate `load = nominal * (slope * v_sq + intercept)`,
/// valid over voltage magnitudes `[v_lo, v_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineLoadInVsq {
    pub slope: f64,
    pub intercept: f64,
    pub v_lo: f64,
    pub v_hi: f64,
    /// Sup-norm of the surrogate error over the band, per unit of nominal load.
    pub max_error: f64,
}

impl AffineLoadInVsq {
    /// Evaluate the surrogate (per unit of nominal) at a squared voltage.
    pub fn eval_vsq(&self, v_sq: f64) -> f64 {
        self.slope * v_sq + self.intercept
    }
}

/// Linearize a ZIP triple in squared-voltage space over `[v_lo, v_hi]`.
///
/// The impedance term is exact (`kz / vr^2 * v_sq`), the power term passes
/// through, and the current term uses the tangent of `sqrt` at
/// `v_ref = (v_lo + v_hi) / 2`. Exact (zero error) whenever `ki = 0`.
pub fn linearize_zip_in_vsq(
    zip: ZipTriple,
    v_rated: f64,
    v_lo: f64,
    v_hi: f64,
) -> Result<AffineLoadInVsq, ZipError> {
    if !(v_lo > 0.0 && v_lo < v_hi) {
        return Err(ZipError::InvalidRange(v_lo, v_hi));
    }
    let v_ref = 0.5 * (v_lo + v_hi);
    let slope = zip.z / (v_rated * v_rated) + zip.i / (2.0 * v_ref * v_rated);
    let intercept = zip.p + zip.i * v_ref / (2.0 * v_rated);
    // error of (v_ref^2 + v^2)/(2 v_ref) vs v is (v - v_ref)^2 / (2 v_ref),
    // maximal at the band endpoints
    let dev = (v_hi - v_ref).max(v_ref - v_lo);
    let max_error = zip.i / v_rated * dev * dev / (2.0 * v_ref);
    Ok(AffineLoadInVsq { slope, intercept, v_lo, v_hi, max_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CI: ZipTriple = ZipTriple::CONSTANT_IMPEDANCE;
    const CC: ZipTriple = ZipTriple::CONSTANT_CURRENT;
    const CP: ZipTriple = ZipTriple::CONSTANT_POWER;

    #[test]
    fn rated_voltage_returns_nominal() {
        let mixed = ZipTriple { z: 0.4, i: 0.3, p: 0.3 };
        for t in [CI, CC, CP, mixed] {
            assert!((eval_zip_p(1.0, 2.5, t, 1.0).unwrap() - 2.5).abs() < 1e-15);
        }
    }

    #[test]
    fn constant_impedance_squares() {
        assert!((eval_zip_p(0.95, 1.0, CI, 1.0).unwrap() - 0.9025).abs() < 1e-15);
    }

    #[test]
    fn mixed_triple_value() {
        // 0.4 * 0.9025 + 0.3 * 0.95 + 0.3 = 0.946
        let t = ZipTriple { z: 0.4, i: 0.3, p: 0.3 };
        assert!((eval_zip_p(0.95, 1.0, t, 1.0).unwrap() - 0.946).abs() < 1e-15);
    }

    #[test]
    fn reactive_mirrors_active() {
        // 0.5 * 1.1025 + 0.25 * 1.05 + 0.25 = 1.06375
        let t = ZipTriple { z: 0.5, i: 0.25, p: 0.25 };
        assert!((eval_zip_q(1.05, 1.0, t, 1.0).unwrap() - 1.06375).abs() < 1e-15);
        assert!((eval_zip_q(0.9, 1.0, CI, 1.0).unwrap() - 0.81).abs() < 1e-15);
    }

    #[test]
    fn non_positive_voltage_rejected() {
        assert_eq!(eval_zip_p(0.0, 1.0, CP, 1.0), Err(ZipError::NonPositiveVoltage(0.0)));
        assert!(eval_zip_p(-0.5, 1.0, CP, 1.0).is_err());
    }

    #[test]
    fn linearization_exact_for_impedance_and_power() {
        let a = linearize_zip_in_vsq(CI, 1.0, 0.9, 1.05).unwrap();
        assert!((a.slope - 1.0).abs() < 1e-15);
        assert!(a.intercept.abs() < 1e-15);
        assert_eq!(a.max_error, 0.0);

        let a = linearize_zip_in_vsq(CP, 1.0, 0.9, 1.05).unwrap();
        assert_eq!(a.slope, 0.0);
        assert!((a.intercept - 1.0).abs() < 1e-15);
        assert_eq!(a.max_error, 0.0);
    }

    #[test]
    fn current_term_tangent_value_and_error() {
        // band [0.90, 1.05], v_ref = 0.975: at v = 0.95 the surrogate gives
        // (0.975^2 + 0.95^2) / (2 * 0.975) while the truth is 0.95
        let a = linearize_zip_in_vsq(CC, 1.0, 0.90, 1.05).unwrap();
        let v = 0.95f64;
        let approx = a.eval_vsq(v * v);
        let expected = (0.975f64.powi(2) + v * v) / (2.0 * 0.975);
        assert!((approx - expected).abs() < 1e-15);
        assert!((approx - 0.9503205128205128).abs() < 1e-12);
        assert!((approx - v - 3.205128205e-4).abs() < 1e-10);

        // sup-norm error over the band, scanned on a fine grid
        let mut worst = 0.0f64;
        let mut v = 0.90;
        while v <= 1.05 + 1e-12 {
            worst = worst.max((a.eval_vsq(v * v) - v).abs());
            v += 1e-3;
        }
        assert!(worst <= a.max_error + 1e-12);
        assert!(a.max_error <= (1.05f64 - 0.90).powi(2) / (8.0 * 0.90) + 1e-12);
    }

    #[test]
    fn invalid_range_rejected() {
        assert!(linearize_zip_in_vsq(CC, 1.0, 1.05, 0.9).is_err());
        assert!(linearize_zip_in_vsq(CC, 1.0, 0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn nominal_recovered_for_random_triples(z in 0.0..1.0f64, i in 0.0..1.0f64, v in 0.5..1.5f64, nom in 0.0..10.0f64) {
            prop_assume!(z + i <= 1.0);
            let t = ZipTriple { z, i, p: 1.0 - z - i };
            let at_rated = eval_zip_p(1.0, nom, t, 1.0).unwrap();
            prop_assert!((at_rated - nom).abs() <= 1e-12 * nom.max(1.0));
            // monotone nondecreasing in v for nonnegative coefficients
            let lo = eval_zip_p(v, nom, t, 1.0).unwrap();
            let hi = eval_zip_p(v + 1e-3, nom, t, 1.0).unwrap();
            prop_assert!(hi >= lo - 1e-12);
        }

        #[test]
        fn secant_error_within_analytic_bound(z in 0.0..1.0f64, i in 0.0..1.0f64,
                                              lo in 0.85..0.95f64, width in 0.05..0.25f64) {
            prop_assume!(z + i <= 1.0);
            let t = ZipTriple { z, i, p: 1.0 - z - i };
            let hi = lo + width;
            let a = linearize_zip_in_vsq(t, 1.0, lo, hi).unwrap();
            let bound = t.i * width * width / (8.0 * lo);
            prop_assert!(a.max_error <= bound + 1e-12);
            // grid check at 1e-3 resolution
            let mut v = lo;
            while v <= hi + 1e-12 {
                let err = (a.eval_vsq(v * v) - eval_zip_p(v, 1.0, t, 1.0).unwrap()).abs();
                prop_assert!(err <= bound + 1e-12);
                v += 1e-3;
            }
        }
    }
}
