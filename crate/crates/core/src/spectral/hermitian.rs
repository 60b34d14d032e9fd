//! Dense Hermitian eigenproblems via Householder reduction to a real
//! symmetric tridiagonal matrix followed by implicit QL.

use super::tridiag::{eig_tridiag_with_rows, TridiagonalMatrix};
use super::RealSpectrum;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{Field, Real};
use num_traits::{Float, One, Zero};

/// `H = (Q D) T (Q D)^†` with `T` real tridiagonal, `Q` a product of
/// Householder reflectors and `D` a diagonal of unit phases.
#[derive(Clone, Debug)]
pub struct HouseholderTridiagonal<E: Field> {
    pub tridiagonal: TridiagonalMatrix<E::Real>,
    /// Reflector `k` acts on indices `k + 1..n`; empty when skipped.
    reflectors: Vec<Vec<E>>,
    phases: Vec<E>,
}

impl<E: Field> HouseholderTridiagonal<E> {
    pub fn new(h: &DenseMatrix<E>) -> Result<Self> {
        if !h.is_square() || h.rows() == 0 {
            return Err(Error::Dimension(
                "Hermitian reduction needs a non-empty square matrix".into(),
            ));
        }
        let n = h.rows();
        let scale = h
            .as_slice()
            .iter()
            .map(|x| x.modulus())
            .fold(E::Real::zero(), Float::max);
        let tol = E::Real::lit(1e-12).max(E::Real::epsilon() * E::Real::lit(64.0))
            * scale.max(E::Real::one());
        let defect = h.hermitian_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect.as_f64()));
        }
        let mut a = h.as_slice().to_vec();
        let two = E::Real::lit(2.0);
        let mut reflectors = Vec::with_capacity(n.saturating_sub(2));
        let mut p = vec![E::zero(); n];
        for k in 0..n.saturating_sub(2) {
            let m = n - k - 1;
            let mut v: Vec<E> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
            let alpha = v.iter().map(|x| x.norm_sqr()).sum::<E::Real>().sqrt();
            let tail = v[1..].iter().map(|x| x.norm_sqr()).sum::<E::Real>();
            if tail == E::Real::zero() {
                reflectors.push(Vec::new());
                continue;
            }
            let x0 = v[0];
            let ax0 = x0.modulus();
            let phase = if ax0 > E::Real::zero() {
                x0.scale(ax0.recip())
            } else {
                E::one()
            };
            v[0] += phase.scale(alpha);
            let vnorm = (two * alpha * (alpha + ax0)).sqrt();
            v.iter_mut().for_each(|x| *x = x.scale(vnorm.recip()));

            // Column k and row k become (-phase * alpha) e_1.
            let sub = -phase.scale(alpha);
            a[(k + 1) * n + k] = sub;
            a[k * n + k + 1] = sub.conj();
            for i in 1..m {
                a[(k + 1 + i) * n + k] = E::zero();
                a[k * n + k + 1 + i] = E::zero();
            }

            // Trailing block B <- B - 2 v w^† - 2 w v^†, with p = B v, w = p - (v^† p) v.
            let off = k + 1;
            for i in 0..m {
                let row = &a[(off + i) * n + off..(off + i) * n + n];
                let mut s = E::zero();
                for (bij, &vj) in row.iter().zip(&v) {
                    s += *bij * vj;
                }
                p[i] = s;
            }
            let mut kappa = E::zero();
            for i in 0..m {
                kappa += v[i].conj() * p[i];
            }
            let kappa = kappa.re();
            for i in 0..m {
                p[i] -= v[i].scale(kappa);
            }
            for i in 0..m {
                let vi2 = v[i].scale(two);
                let wi2 = p[i].scale(two);
                let row = &mut a[(off + i) * n + off..(off + i) * n + n];
                for j in 0..m {
                    row[j] -= vi2 * p[j].conj() + wi2 * v[j].conj();
                }
            }
            reflectors.push(v);
        }

        let diag: Vec<E::Real> = (0..n).map(|i| a[i * n + i].re()).collect();
        let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
        let mut phases = vec![E::one(); n];
        for k in 0..n.saturating_sub(1) {
            let s = a[(k + 1) * n + k];
            let r = s.modulus();
            offdiag.push(r);
            phases[k + 1] = if r > E::Real::zero() {
                phases[k] * s.scale(r.recip())
            } else {
                phases[k]
            };
        }
        Ok(Self {
            tridiagonal: TridiagonalMatrix { diag, offdiag },
            reflectors,
            phases,
        })
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// `(Q D)^† x`: coordinates of `x` in the tridiagonal basis.
    pub fn to_tridiagonal_basis(&self, x: &[E]) -> Vec<E> {
        let mut y = x.to_vec();
        for (k, v) in self.reflectors.iter().enumerate() {
            reflect(&mut y[k + 1..], v);
        }
        for (yi, d) in y.iter_mut().zip(&self.phases) {
            *yi = d.conj() * *yi;
        }
        y
    }

    /// `(Q D) z`: maps tridiagonal-basis coordinates back.
    pub fn from_tridiagonal_basis(&self, z: &[E]) -> Vec<E> {
        let mut x: Vec<E> = z.iter().zip(&self.phases).map(|(&zi, &d)| d * zi).collect();
        for (k, v) in self.reflectors.iter().enumerate().rev() {
            reflect(&mut x[k + 1..], v);
        }
        x
    }

    /// The unitary `Q D` as a dense matrix.
    pub fn basis(&self) -> DenseMatrix<E> {
        let n = self.len();
        let mut m = DenseMatrix::zeros(n, n);
        let mut e = vec![E::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = E::zero());
            e[j] = E::one();
            let col = self.from_tridiagonal_basis(&e);
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        m
    }
}

/// `y <- (I - 2 v v^†) y`.
fn reflect<E: Field>(y: &mut [E], v: &[E]) {
    if v.is_empty() {
        return;
    }
    let mut s = E::zero();
    for (vi, &yi) in v.iter().zip(y.iter()) {
        s += vi.conj() * yi;
    }
    let s2 = s.scale(E::Real::lit(2.0));
    for (yi, &vi) in y.iter_mut().zip(v) {
        *yi -= vi * s2;
    }
}

/// Eigenvalues and, optionally, orthonormal eigenvectors (as columns).
#[derive(Clone, Debug)]
pub struct HermitianEigen<E: Field> {
    pub spectrum: RealSpectrum<E::Real>,
    pub vectors: Option<DenseMatrix<E>>,
}

pub fn eig_hermitian_dense<E: Field>(
    h: &DenseMatrix<E>,
    want_vectors: bool,
) -> Result<HermitianEigen<E>> {
    let red = HouseholderTridiagonal::new(h)?;
    let n = red.len();
    if !want_vectors {
        let (values, _) = eig_tridiag_with_rows(&red.tridiagonal, Vec::new(), 0)?;
        return Ok(HermitianEigen {
            spectrum: RealSpectrum::new(values),
            vectors: None,
        });
    }
    let mut z = vec![E::Real::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = E::Real::one();
    }
    let (values, z) = eig_tridiag_with_rows(&red.tridiagonal, z, n)?;
    let basis = red.basis();
    let mut vecs = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let brow = basis.row(i);
        for k in 0..n {
            let b = brow[k];
            if b == E::zero() {
                continue;
            }
            let zrow = &z[k * n..(k + 1) * n];
            let out = vecs.row_mut(i);
            for (o, &zk) in out.iter_mut().zip(zrow) {
                *o += b.scale(zk);
            }
        }
    }
    Ok(HermitianEigen {
        spectrum: RealSpectrum::new(values),
        vectors: Some(vecs),
    })
}

/// Eigenvalues (descending) together with `<x_r, v_j>` for each probe
/// vector `x_r`, without forming eigenvectors. Costs `O(n^2)` beyond the
/// reduction.
pub fn eig_hermitian_projections<E: Field>(
    h: &DenseMatrix<E>,
    probes: &[Vec<E>],
) -> Result<(RealSpectrum<E::Real>, Vec<Vec<E>>)> {
    let red = HouseholderTridiagonal::new(h)?;
    let n = red.len();
    let parts = if E::IS_COMPLEX { 2 } else { 1 };
    let rows = parts * probes.len();
    let mut z = vec![E::Real::zero(); rows * n];
    for (r, x) in probes.iter().enumerate() {
        if x.len() != n {
            return Err(Error::Dimension(format!(
                "probe of length {} for n = {n}",
                x.len()
            )));
        }
        let y = red.to_tridiagonal_basis(x);
        for m in 0..n {
            // <x, v> = sum_m conj(y_m) z_m with z real.
            z[(parts * r) * n + m] = y[m].re();
            if parts == 2 {
                z[(parts * r + 1) * n + m] = -y[m].im();
            }
        }
    }
    let (values, z) = eig_tridiag_with_rows(&red.tridiagonal, z, rows)?;
    let projections = (0..probes.len())
        .map(|r| {
            (0..n)
                .map(|j| {
                    let re = z[(parts * r) * n + j];
                    let im = if parts == 2 {
                        z[(parts * r + 1) * n + j]
                    } else {
                        E::Real::zero()
                    };
                    E::from_parts(re, im)
                })
                .collect()
        })
        .collect();
    Ok((RealSpectrum::new(values), projections))
}
