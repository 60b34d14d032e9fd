//! Zeros of the truncated random Laurent series `1/μ - Σ_{j=1}^{M} c_j λ^j`,
//! `c_j` standard complex Gaussian.

use crate::error::{invalid, Result};
use crate::randgen::Stream;
use crate::spectral::roots_aberth;
use num_complex::Complex64;

/// Zeros inside `radius_cut` from one draw of the coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroSample {
    pub zeros: Vec<Complex64>,
    pub truncation_degree: usize,
    pub radius_cut: f64,
}

fn check(mu: Complex64, m: usize, radius_cut: f64) -> Result<()> {
    if m < 50 {
        return Err(invalid(
            "M",
            format!("truncation degree must be at least 50, got {m}"),
        ));
    }
    if !(radius_cut > 0.0 && radius_cut <= 0.95) {
        return Err(invalid(
            "radius_cut",
            format!("need 0 < radius_cut <= 0.95, got {radius_cut}"),
        ));
    }
    if mu.norm() == 0.0 || mu.re.is_nan() || mu.im.is_nan() {
        return Err(invalid("mu", "must be nonzero"));
    }
    Ok(())
}

/// Zeros for given coefficients `c_1..c_M`; `μ = ∞` drops the constant term.
pub fn laurent_zeros_from(
    mu: Complex64,
    coeffs: &[Complex64],
    radius_cut: f64,
) -> Result<ZeroSample> {
    check(mu, coeffs.len(), radius_cut)?;
    let constant = if mu.norm().is_finite() {
        1.0 / mu
    } else {
        Complex64::new(0.0, 0.0)
    };
    let mut poly = Vec::with_capacity(coeffs.len() + 1);
    poly.push(constant);
    poly.extend(coeffs.iter().map(|c| -c));
    let roots = roots_aberth(&poly)?;
    let zeros = roots
        .into_values()
        .into_iter()
        .filter(|z| z.norm() < radius_cut)
        .collect();
    Ok(ZeroSample {
        zeros,
        truncation_degree: coeffs.len(),
        radius_cut,
    })
}

/// Draws `c_1..c_M` in order from `s` and returns the zeros inside
/// `radius_cut`. The truncation error is of order `radius_cut^M`.
pub fn laurent_zeros(
    s: &mut Stream,
    mu: Complex64,
    m: usize,
    radius_cut: f64,
) -> Result<ZeroSample> {
    check(mu, m, radius_cut)?;
    let coeffs: Vec<Complex64> = (0..m).map(|_| s.complex_gaussian()).collect();
    laurent_zeros_from(mu, &coeffs, radius_cut)
}
