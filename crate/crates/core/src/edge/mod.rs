//! Soft-edge numerics: Airy functions, the Hastings–McLeod transcendent,
//! Tracy–Widom laws, the Lax-pair critical distributions, the deformed Airy
//! kernel with its Fredholm determinant, and PDE residual checks.

pub mod airy;

pub use airy::{ai, airy, airy_integral_from_zero, airy_tail_integral};
pub mod painleve;

pub use painleve::{
    default_table, hastings_mcleod, tw_cdf, tw_cdf_pdf, tw_curve, Beta, DistributionCurve,
    PainleveTable,
};
pub mod kernel;

pub use kernel::{airy_kernel, deformed_airy_kernel, deformed_tail, fredholm_f2w, FredholmConfig};
pub mod lax;

pub use lax::{crit_cdf, lax_propagate, lax_propagate_with, LaxField, LaxOptions};
pub mod pde;

pub use pde::{hard_residual_a0_analytic, linspace, pde_residual, GridFunction, PdeKind};
