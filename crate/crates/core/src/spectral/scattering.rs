//! Scattering matrix and eigenvector overlaps of `A + i alpha v v^†`, and
//! the first-component identity for Hermitian rank-one updates.

use super::{ComplexSpectrum, RealSpectrum};
use crate::error::{invalid, Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{Field, Real};
use num_complex::Complex;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// `s(E)` evaluated from the resolvent and from the eigenvalue product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scattering<T> {
    pub resolvent: Complex<T>,
    pub product: Complex<T>,
}

impl<T: Real> Scattering<T> {
    pub fn relative_gap(&self) -> T {
        Field::modulus(self.resolvent - self.product)
            / Field::modulus(self.resolvent).max(T::min_positive_value())
    }
}

/// `s(E) = (1 + iK)/(1 - iK)` with `K = alpha sum_j w_j / (E - a_j)`, where
/// `a_j` are the eigenvalues of `A` and `w_j = |<a_j, v>|^2`; compared with
/// `prod_j (E - conj z_j)/(E - z_j)` over the supplied zeros `z_j`.
pub fn scattering_s<T: Real>(
    e: Complex<T>,
    alpha: T,
    a_eigs: &RealSpectrum<T>,
    weights: &[T],
    zeros: &ComplexSpectrum<T>,
) -> Result<Scattering<T>> {
    if weights.len() != a_eigs.len() {
        return Err(Error::Dimension(format!(
            "{} eigenvalues, {} weights",
            a_eigs.len(),
            weights.len()
        )));
    }
    let i = Complex::new(T::zero(), T::one());
    let mut k = Complex::<T>::zero();
    for (j, (&a, &w)) in a_eigs.values().iter().zip(weights).enumerate() {
        let d = e - Complex::from_real(a);
        if d == Complex::zero() {
            return Err(invalid("E", format!("coincides with pole {j}")));
        }
        k += d.inv().scale(w * alpha);
    }
    let resolvent = (Complex::<T>::one() + i * k) / (Complex::<T>::one() - i * k);
    let mut product = Complex::<T>::one();
    for (j, &z) in zeros.values().iter().enumerate() {
        let d = e - z;
        if d == Complex::zero() {
            return Err(invalid("E", format!("coincides with eigenvalue {j}")));
        }
        product *= (e - z.conj()) / d;
    }
    Ok(Scattering { resolvent, product })
}

/// Diagonal overlaps `O_nn` (real, `>= 1`) and optionally the off-diagonal
/// `O_mn`.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapSet<T> {
    pub records: Vec<(Complex<T>, T)>,
    pub off_diagonal: Option<BTreeMap<(usize, usize), Complex<T>>>,
}

/// Overlaps from the eigenvalues alone:
/// `O_mn = (z_n - z̄_n)(z_m - z̄_m)/(z_n - z̄_m)^2
///        * prod_{k≠n} (z_n - z̄_k)/(z_n - z_k) * prod_{k≠m} (z̄_m - z_k)/(z̄_m - z̄_k)`.
pub fn overlaps_from_eigs<T: Real>(
    spec: &ComplexSpectrum<T>,
    off_diagonal: bool,
) -> Result<OverlapSet<T>> {
    let z = spec.values();
    let n = z.len();
    if let Some(j) = z.iter().position(|x| x.im == T::zero()) {
        return Err(invalid("spectrum", format!("eigenvalue {j} is real")));
    }
    for a in 0..n {
        for b in a + 1..n {
            if z[a] == z[b] {
                return Err(Error::Coincident(a, b));
            }
        }
    }
    // prod_{k≠n} (z_n - z̄_k)/(z_n - z_k); its modulus squared is O_nn.
    let mut pn = vec![Complex::<T>::one(); n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                pn[a] *= (z[a] - z[b].conj()) / (z[a] - z[b]);
            }
        }
    }
    let records = (0..n).map(|a| (z[a], pn[a].norm_sqr())).collect();
    let off = off_diagonal.then(|| {
        let mut map = BTreeMap::new();
        for m in 0..n {
            for nn in 0..n {
                if m == nn {
                    continue;
                }
                let zn = z[nn];
                let zm = z[m];
                let pre =
                    (zn - zn.conj()) * (zm - zm.conj()) / ((zn - zm.conj()) * (zn - zm.conj()));
                let mut q = Complex::<T>::one();
                for k in 0..n {
                    if k != m {
                        q *= (zm.conj() - z[k]) / (zm.conj() - z[k].conj());
                    }
                }
                map.insert((m, nn), pre * pn[nn] * q);
            }
        }
        map
    });
    Ok(OverlapSet {
        records,
        off_diagonal: off,
    })
}

/// Overlaps `O_mn = (L_n · conj L_m)(conj R_m · R_n)` from right eigenvectors
/// (columns of `right`) and their dual rows `L = R^{-1}`.
pub fn overlaps_from_vectors<T: Real>(
    values: &ComplexSpectrum<T>,
    right: &DenseMatrix<Complex<T>>,
) -> Result<OverlapSet<T>> {
    let n = right.rows();
    let left = right.inverse()?;
    let gram_r = right.adjoint().matmul(right)?;
    let gram_l = left.matmul(&left.adjoint())?;
    let records = (0..n)
        .map(|k| (values.values()[k], (gram_l[(k, k)] * gram_r[(k, k)]).re))
        .collect();
    let mut map = BTreeMap::new();
    for m in 0..n {
        for k in 0..n {
            if m != k {
                map.insert((m, k), gram_l[(k, m)] * gram_r[(m, k)]);
            }
        }
    }
    Ok(OverlapSet {
        records,
        off_diagonal: Some(map),
    })
}

/// Squared first components of the eigenvectors of a Hermitian matrix with
/// eigenvalues `sigma` (N, descending) whose trailing `(N-1)` minor has
/// eigenvalues `mu`:
/// `|x_j|^2 = prod_i (sigma_j - mu_i) / prod_{i≠j} (sigma_j - sigma_i)`.
pub fn first_component_product<T: Real>(
    sigma: &RealSpectrum<T>,
    mu: &RealSpectrum<T>,
) -> Result<Vec<T>> {
    let s = sigma.values();
    let m = mu.values();
    if m.len() + 1 != s.len() {
        return Err(Error::Dimension(format!(
            "{} eigenvalues with a minor of size {}",
            s.len(),
            m.len()
        )));
    }
    for (j, &mj) in m.iter().enumerate() {
        if !(s[j] > mj && mj > s[j + 1]) {
            return Err(Error::Interlacing(j));
        }
    }
    Ok((0..s.len())
        .map(|j| {
            // Pair each minor eigenvalue with a gap to keep the running product O(1).
            let mut v = T::one();
            for (i, &si) in s.iter().enumerate() {
                let num = m.get(i).map_or(T::one(), |&mi| s[j] - mi);
                let den = if i == j { T::one() } else { s[j] - si };
                v *= num / den;
            }
            v
        })
        .collect())
}
