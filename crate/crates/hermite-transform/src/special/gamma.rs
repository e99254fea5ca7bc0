//! Natural logarithm of the Gamma function for positive real arguments.
//!
//! Stirling's series with Bernoulli-number corrections, after shifting the
//! argument into the asymptotic zone with the recurrence
//! ln Γ(x) = ln Γ(x+1) − ln x.  Needed only at moderate-to-large arguments
//! (factorials in normalization prefactors), where this is accurate to
//! ≈ 1e-15 relative.

use crate::error::{Error, Result};

/// Stirling coefficients B_{2k} / ((2k)(2k−1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// ln(2π)/2
const HALF_LN_TWO_PI: f64 = 0.918938533204672741780329736406;

/// Arguments at or above this evaluate the Stirling series directly; the
/// truncation error there is below 2e-18 relative.
const STIRLING_MIN: f64 = 10.0;

/// ln Γ(x) for x > 0.
///
/// Returns exactly 0 at x = 1 and x = 2 (the integer roots of ln Γ);
/// elsewhere the relative error is ≤ 1e-14 for x ≥ 1.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "log_gamma requires finite x > 0, got {x}"
        )));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    // Shift up into the asymptotic zone, then remove the shift:
    // ln Γ(x) = ln Γ(x + m) − Σ_{i<m} ln(x + i).
    let mut shift = 0.0;
    let mut y = x;
    while y < STIRLING_MIN {
        shift += y.ln();
        y += 1.0;
    }
    let r = 1.0 / (y * y);
    let mut series = STIRLING[7];
    for c in STIRLING[..7].iter().rev() {
        series = series * r + c;
    }
    Ok((y - 0.5) * y.ln() - y + HALF_LN_TWO_PI + series / y - shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(x: f64, want: f64, tol: f64) {
        let got = log_gamma(x).unwrap();
        let err = (got - want).abs() / want.abs().max(1.0);
        assert!(err <= tol, "x = {x}: got {got:e}, want {want:e}, err {err:e}");
    }

    #[test]
    fn integer_roots_are_exact() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
    }

    #[test]
    fn matches_reference_values() {
        // Reference values computed with 60-digit arithmetic.
        check(0.5, 0.572364942924700087071713675677, 1e-14);
        check(1.5, -0.120782237635245222345518445782, 1e-14);
        check(3.0, 0.693147180559945309417232121458, 1e-14); // ln 2
        check(4.0, 1.79175946922805500081247735838, 1e-14); // ln 6
        check(10.0, 12.8018274800814696112077178746, 1e-14);
        check(11.0, 15.1044125730755152952257093293, 1e-14); // ln 10!
        check(100.0, 359.13420536957539877604401046, 1e-14);
        check(1000.5, 5908.67417584867748868387473406, 1e-14);
        check(1.0e6, 12815504.569147611659976971785, 1e-14);
    }

    #[test]
    fn recurrence_seam_is_smooth() {
        // Just below 10 takes one recurrence step; just at 10 none.
        check(9.999999999999998, 12.8018274800814651077025397411, 1e-14);
    }

    #[test]
    fn rejects_non_positive_and_non_finite() {
        for x in [0.0, -1.0, -0.5, f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
            assert!(log_gamma(x).is_err(), "x = {x} should be a domain error");
        }
    }
}
