//! Eigensolvers and rank-one secular machinery.
//!
//! Everything here is generic over [`Real`] so the same code runs in `f32`
//! and `f64`; the crate root re-exports `f64` aliases.

mod aberth;
mod complex_eig;
mod hermitian;
mod scattering;
mod secular;
mod tridiag;

pub use aberth::roots_aberth;
pub use complex_eig::{eig_complex_dense, left_eigenvectors, ComplexEigen};
pub use hermitian::{
    eig_hermitian_dense, eig_hermitian_projections, HermitianEigen, HouseholderTridiagonal,
};
pub use scattering::{
    first_component_product, overlaps_from_eigs, overlaps_from_vectors, scattering_s, OverlapSet,
    Scattering,
};
pub use secular::{solve_secular_complex, solve_secular_real, Coupling, SecularProblem};
pub use tridiag::{
    eig_sym_tridiag, eig_tridiag_with_rows, ql_implicit, truncation_size, EigenMode,
    TridiagonalMatrix,
};

use crate::scalar::Real;
use num_complex::Complex;
use std::collections::BTreeMap;

/// Ensemble tag plus named parameters attached to a spectrum.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectrumMeta {
    pub ensemble: String,
    pub params: BTreeMap<String, f64>,
}

impl SpectrumMeta {
    pub fn new(ensemble: impl Into<String>) -> Self {
        Self {
            ensemble: ensemble.into(),
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }
}

/// Real eigenvalues sorted in descending order.
#[derive(Clone, Debug, PartialEq)]
pub struct RealSpectrum<T> {
    values: Vec<T>,
    pub meta: SpectrumMeta,
}

impl<T: Real> RealSpectrum<T> {
    /// Sorts `values` into descending order.
    pub fn new(mut values: Vec<T>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        Self {
            values,
            meta: SpectrumMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: SpectrumMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn largest(&self) -> Option<T> {
        self.values.first().copied()
    }

    pub fn sum(&self) -> T {
        self.values.iter().copied().sum()
    }

    /// Index pairs `(i, i + 1)` whose values are exactly equal.
    pub fn exact_ties(&self) -> Vec<usize> {
        self.values
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == w[1])
            .map(|(i, _)| i)
            .collect()
    }

    /// True when `self` and `inner` strictly alternate,
    /// `self[0] > inner[0] > self[1] > ...`.
    pub fn interlaces(&self, inner: &[T]) -> bool {
        let s = &self.values;
        if inner.len() + 1 != s.len() && inner.len() != s.len() {
            return false;
        }
        inner
            .iter()
            .enumerate()
            .all(|(j, &m)| s[j] > m && s.get(j + 1).map_or(true, |&next| m > next))
    }
}

/// Complex eigenvalues in solver order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexSpectrum<T> {
    values: Vec<Complex<T>>,
    pub meta: SpectrumMeta,
}

impl<T: Real> ComplexSpectrum<T> {
    pub fn new(values: Vec<Complex<T>>) -> Self {
        Self {
            values,
            meta: SpectrumMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: SpectrumMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Complex<T> {
        self.values
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |a, &b| a + b)
    }

    /// Sorted by descending real part, ties by imaginary part.
    pub fn sorted_by_real(&self) -> Vec<Complex<T>> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| {
            b.re.partial_cmp(&a.re)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
        });
        v
    }

    pub fn all_in_upper_half_plane(&self) -> bool {
        self.values.iter().all(|z| z.im > T::zero())
    }
}
