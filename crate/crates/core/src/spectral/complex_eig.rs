//! General complex eigenproblem: Householder reduction to upper Hessenberg
//! form, then single-shift QR with complex Givens rotations.

use super::ComplexSpectrum;
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{Field, Real};
use num_complex::Complex;
use num_traits::{One, Zero};

const MAX_ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues in Schur order, plus unit-norm right eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct ComplexEigen<T: Real> {
    pub spectrum: ComplexSpectrum<T>,
    pub right: Option<DenseMatrix<Complex<T>>>,
}

pub fn eig_complex_dense<T: Real>(
    m: &DenseMatrix<Complex<T>>,
    want_vectors: bool,
) -> Result<ComplexEigen<T>> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::Dimension(
            "eigenproblem needs a non-empty square matrix".into(),
        ));
    }
    let n = m.rows();
    let mut h = m.clone();
    let mut z = if want_vectors {
        Some(DenseMatrix::identity(n))
    } else {
        None
    };
    hessenberg(&mut h, z.as_mut());
    schur_qr(&mut h, z.as_mut())?;
    let values: Vec<Complex<T>> = (0..n).map(|i| h[(i, i)]).collect();
    let right = z.map(|z| triangular_eigenvectors(&h, &z));
    Ok(ComplexEigen {
        spectrum: ComplexSpectrum::new(values),
        right,
    })
}

/// Rows of `R^{-1}`: row `n` is the left eigenvector dual to column `n` of
/// `right`, normalized so that `L R = I`.
pub fn left_eigenvectors<T: Real>(
    right: &DenseMatrix<Complex<T>>,
) -> Result<DenseMatrix<Complex<T>>> {
    right.inverse()
}

fn hessenberg<T: Real>(
    h: &mut DenseMatrix<Complex<T>>,
    mut q: Option<&mut DenseMatrix<Complex<T>>>,
) {
    let n = h.rows();
    let two = T::lit(2.0);
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<Complex<T>> = (0..m).map(|i| h[(k + 1 + i, k)]).collect();
        let tail: T = v[1..].iter().map(|x| x.norm_sqr()).sum();
        if tail == T::zero() {
            continue;
        }
        let alpha = (tail + v[0].norm_sqr()).sqrt();
        let a0 = Field::modulus(v[0]);
        let phase = if a0 > T::zero() {
            v[0].scale(a0.recip())
        } else {
            Complex::<T>::one()
        };
        v[0] += phase.scale(alpha);
        let vn = (two * alpha * (alpha + a0)).sqrt().recip();
        v.iter_mut().for_each(|x| *x = x.scale(vn));

        // Left: rows k+1.., columns k..
        for j in k..n {
            let mut s = Complex::<T>::zero();
            for i in 0..m {
                s += v[i].conj() * h[(k + 1 + i, j)];
            }
            let s = s.scale(two);
            for i in 0..m {
                let vi = v[i];
                h[(k + 1 + i, j)] -= vi * s;
            }
        }
        // Right: all rows, columns k+1..
        right_reflect(h, &v, k + 1);
        if let Some(q) = q.as_deref_mut() {
            right_reflect(q, &v, k + 1);
        }
        for i in k + 2..n {
            h[(i, k)] = Complex::zero();
        }
    }
}

/// `A <- A (I - 2 v v^†)` acting on columns `off..`.
fn right_reflect<T: Real>(a: &mut DenseMatrix<Complex<T>>, v: &[Complex<T>], off: usize) {
    let two = T::lit(2.0);
    for i in 0..a.rows() {
        let row = &mut a.row_mut(i)[off..];
        let mut s = Complex::<T>::zero();
        for (x, vj) in row.iter().zip(v) {
            s += *x * vj;
        }
        let s = s.scale(two);
        for (x, vj) in row.iter_mut().zip(v) {
            *x -= s * vj.conj();
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let aa = Field::modulus(a);
    let bb = Field::modulus(b);
    if bb == T::zero() {
        return (T::one(), Complex::zero());
    }
    if aa == T::zero() {
        return (T::zero(), b.conj().scale(bb.recip()));
    }
    let r = aa.hypot(bb);
    (aa / r, a.scale(aa.recip()) * b.conj().scale(r.recip()))
}

fn schur_qr<T: Real>(
    h: &mut DenseMatrix<Complex<T>>,
    mut z: Option<&mut DenseMatrix<Complex<T>>>,
) -> Result<()> {
    let n = h.rows();
    let full = z.is_some();
    let eps = T::epsilon();
    let norm = h.frobenius_norm();
    let floor = T::lit(1e-14).max(eps) * norm;
    let mut rot: Vec<(T, Complex<T>)> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = Field::modulus(h[(l, l - 1)]);
            let local = eps * (Field::modulus(h[(l - 1, l - 1)]) + Field::modulus(h[(l, l)]));
            if sub <= local.max(floor) {
                h[(l, l - 1)] = Complex::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                routine: "complex Hessenberg QR",
                iterations: iter,
            });
        }

        let shift = if iter % 10 == 0 {
            let extra = if hi >= 2 {
                Field::modulus(h[(hi - 1, hi - 2)])
            } else {
                T::zero()
            };
            h[(hi, hi)]
                + Complex::from_real(T::lit(0.75) * (Field::modulus(h[(hi, hi - 1)]) + extra))
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in l..=hi {
            h[(i, i)] -= shift;
        }
        let col_end = if full { n } else { hi + 1 };
        rot.clear();
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((c, s));
            for j in k..col_end {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x.scale(c) + s * y;
                h[(k + 1, j)] = y.scale(c) - s.conj() * x;
            }
        }
        let row_start = if full { 0 } else { l };
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            let row_end = (k + 2).min(hi);
            for i in row_start..=row_end {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x.scale(c) + s.conj() * y;
                h[(i, k + 1)] = y.scale(c) - s * x;
            }
            if let Some(z) = z.as_deref_mut() {
                for i in 0..n {
                    let x = z[(i, k)];
                    let y = z[(i, k + 1)];
                    z[(i, k)] = x.scale(c) + s.conj() * y;
                    z[(i, k + 1)] = y.scale(c) - s * x;
                }
            }
        }
        for i in l..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(())
}

/// Eigenvalue of the trailing 2x2 block closest to `d`.
fn wilkinson_shift<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let half = T::lit(0.5);
    let m = (a - d).scale(half);
    let disc = (m * m + b * c).sqrt();
    let mean = (a + d).scale(half);
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm_sqr() <= (l2 - d).norm_sqr() {
        l1
    } else {
        l2
    }
}

/// Eigenvectors of the upper-triangular Schur factor `t`, mapped back by `z`.
fn triangular_eigenvectors<T: Real>(
    t: &DenseMatrix<Complex<T>>,
    z: &DenseMatrix<Complex<T>>,
) -> DenseMatrix<Complex<T>> {
    let n = t.rows();
    let small = T::epsilon() * t.frobenius_norm().max(T::min_positive_value());
    let mut out = DenseMatrix::zeros(n, n);
    let mut y = vec![Complex::<T>::zero(); n];
    for k in 0..n {
        y.iter_mut().for_each(|v| *v = Complex::zero());
        y[k] = Complex::<T>::one();
        let lam = t[(k, k)];
        for i in (0..k).rev() {
            let mut s = Complex::<T>::zero();
            for j in i + 1..=k {
                s += t[(i, j)] * y[j];
            }
            let mut den = t[(i, i)] - lam;
            if Field::modulus(den) < small {
                den = Complex::from_real(small);
            }
            y[i] = -s / den;
        }
        let mut col = vec![Complex::<T>::zero(); n];
        for (i, c) in col.iter_mut().enumerate() {
            let zr = z.row(i);
            let mut s = Complex::<T>::zero();
            for j in 0..=k {
                s += zr[j] * y[j];
            }
            *c = s;
        }
        let nrm = col.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
        for (i, c) in col.into_iter().enumerate() {
            out[(i, k)] = c.scale(nrm.recip());
        }
    }
    out
}
