//! Two-dimensional spectra: anti-Hermitian perturbation profiles,
//! sub-unitary truncations and random Laurent series zeros.

mod cue;
mod laurent;
mod profile;
mod sweep;

pub use cue::{cue_density, CueKind};
pub use laurent::{laurent_zeros, laurent_zeros_from, ZeroSample};
pub use profile::{
    kernel_planar, kernel_reproduction, mean_overlap, overlap_pdf, overlap_pdf_moments,
    profile_cdf, rho_profile,
};
pub use sweep::{parameter_sweep, SweepModel, SweepRow, SweepTable};

use crate::error::{invalid, Result};
use num_complex::Complex64;

/// Profile parameter `g = (α₀ + 1/α₀)/2`, its source `α₀`, and the Laurent
/// coupling `μ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarParams {
    pub profile_g: f64,
    pub alpha0: f64,
    pub mu: Complex64,
}

impl PlanarParams {
    pub fn new(alpha0: f64, mu: Complex64) -> Result<Self> {
        if !(alpha0 > 0.0) || !alpha0.is_finite() {
            return Err(invalid("alpha0", format!("must be positive, got {alpha0}")));
        }
        Ok(Self {
            profile_g: 0.5 * (alpha0 + 1.0 / alpha0),
            alpha0,
            mu,
        })
    }
}
