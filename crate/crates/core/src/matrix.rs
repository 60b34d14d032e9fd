//! Row-major dense matrices over a [`Field`] with the handful of kernels the
//! solvers need: products, adjoints and an LU factorization.

use crate::error::{Error, Result};
use crate::scalar::Field;
use num_traits::{Float, Zero};
use std::ops::{Index, IndexMut};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Field> DenseMatrix<E> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![E::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = E::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major data.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [E] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [E] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> E {
        let mut t = E::zero();
        for i in 0..self.rows.min(self.cols) {
            t += self[(i, i)];
        }
        t
    }

    pub fn frobenius_norm(&self) -> E::Real {
        self.data
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<E::Real>()
            .sqrt()
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> E::Real {
        let mut worst = E::Real::zero();
        for i in 0..self.rows {
            for j in 0..=i.min(self.cols.saturating_sub(1)) {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).modulus());
            }
        }
        worst
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == E::zero() {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[E]) -> Result<Vec<E>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{} columns, vector of {}",
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = E::zero();
                for (a, &b) in self.row(i).iter().zip(x) {
                    s += *a * b;
                }
                s
            })
            .collect())
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu<E>> {
        if !self.is_square() {
            return Err(Error::Dimension("LU of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0usize;
        let mut singular = false;
        for k in 0..n {
            let mut p = k;
            let mut best = a[(k, k)].modulus();
            for i in k + 1..n {
                let v = a[(i, k)].modulus();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == E::Real::zero() {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign_flips += 1;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let l = a[(i, k)] / pivot;
                a[(i, k)] = l;
                if l == E::zero() {
                    continue;
                }
                let (top, bottom) = a.data.split_at_mut(i * n);
                let krow = &top[k * n + k + 1..k * n + n];
                let irow = &mut bottom[k + 1..n];
                for (x, &y) in irow.iter_mut().zip(krow) {
                    *x -= l * y;
                }
            }
        }
        Ok(Lu {
            factors: a,
            perm,
            odd: sign_flips % 2 == 1,
            singular,
        })
    }

    pub fn determinant(&self) -> Result<E> {
        Ok(self.lu()?.determinant())
    }

    pub fn inverse(&self) -> Result<Self> {
        let lu = self.lu()?;
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        let mut e = vec![E::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|x| *x = E::zero());
            e[j] = E::one();
            let col = lu.solve(&e)?;
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        Ok(inv)
    }
}

impl<E> Index<(usize, usize)> for DenseMatrix<E> {
    type Output = E;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.cols + j]
    }
}

impl<E> IndexMut<(usize, usize)> for DenseMatrix<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.cols + j]
    }
}

/// Packed `PA = LU` factors.
#[derive(Clone, Debug)]
pub struct Lu<E> {
    factors: DenseMatrix<E>,
    perm: Vec<usize>,
    odd: bool,
    singular: bool,
}

impl<E: Field> Lu<E> {
    pub fn determinant(&self) -> E {
        if self.singular {
            return E::zero();
        }
        let mut d = if self.odd { -E::one() } else { E::one() };
        for i in 0..self.factors.rows {
            d *= self.factors[(i, i)];
        }
        d
    }

    /// `ln|det|` together with the unit-modulus phase of the determinant.
    pub fn log_abs_determinant(&self) -> (E::Real, E) {
        if self.singular {
            return (E::Real::neg_infinity(), E::zero());
        }
        let mut phase = if self.odd { -E::one() } else { E::one() };
        let mut log = E::Real::zero();
        for i in 0..self.factors.rows {
            let u = self.factors[(i, i)];
            let a = u.modulus();
            log += a.ln();
            phase *= u.scale(a.recip());
        }
        (log, phase)
    }

    pub fn solve(&self, b: &[E]) -> Result<Vec<E>> {
        if self.singular {
            return Err(Error::Singular);
        }
        let n = self.factors.rows;
        let mut x: Vec<E> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.factors[(i, k)] * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.factors[(i, k)] * x[k];
            }
            x[i] = s / self.factors[(i, i)];
        }
        Ok(x)
    }
}

/// Euclidean inner product `Σ conj(a_i) b_i`.
pub fn dot_conj<E: Field>(a: &[E], b: &[E]) -> E {
    let mut s = E::zero();
    for (x, &y) in a.iter().zip(b) {
        s += x.conj() * y;
    }
    s
}

pub fn norm2<E: Field>(a: &[E]) -> E::Real {
    a.iter().map(|x| x.norm_sqr()).sum::<E::Real>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn determinant_and_inverse() {
        let a =
            DenseMatrix::from_row_major(3, 3, vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0])
                .unwrap();
        assert!((a.determinant().unwrap() - 18.0).abs() < 1e-12);
        let inv = a.inverse().unwrap();
        let id = a.matmul(&inv).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)] - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn pivoting_needed() {
        let a = DenseMatrix::from_row_major(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(a.determinant().unwrap(), -1.0);
        let s = DenseMatrix::from_row_major(2, 2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert_eq!(s.determinant().unwrap(), 0.0);
        assert_eq!(s.inverse(), Err(Error::Singular));
    }

    #[test]
    fn complex_log_determinant() {
        let i = Complex64::i();
        let a =
            DenseMatrix::from_row_major(2, 2, vec![i, 1.0.into(), 0.0.into(), 2.0 * i]).unwrap();
        let lu = a.lu().unwrap();
        let (log, phase) = lu.log_abs_determinant();
        let d = phase * log.exp();
        assert!((d - Complex64::new(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn adjoint_and_hermitian_defect() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64));
        let h = DenseMatrix::from_fn(3, 3, |i, j| a[(i, j)] + a[(j, i)].conj());
        assert_eq!(h.hermitian_defect(), 0.0);
        assert!(a.hermitian_defect() > 0.0);
        assert_eq!(a.adjoint().adjoint(), a);
    }
}
