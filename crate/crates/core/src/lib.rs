//! Random matrix ensembles with a rank-one perturbation: samplers,
//! eigensolvers, closed-form limits, soft-edge distributions and planar
//! profiles.
//!
//! Numerical kernels are generic over [`Real`] (`f32`/`f64`); the aliases
//! below fix the common `f64` instantiations.

pub mod edge;
pub mod ensembles;
pub mod error;
pub mod matrix;
pub mod planar;
pub mod quad;
pub mod randgen;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use scalar::{Field, Real};

use num_complex::Complex64;

pub type Tridiagonal = spectral::TridiagonalMatrix<f64>;
pub type Spectrum = spectral::RealSpectrum<f64>;
pub type CSpectrum = spectral::ComplexSpectrum<f64>;
pub type RMatrix = matrix::DenseMatrix<f64>;
pub type CMatrix = matrix::DenseMatrix<Complex64>;
