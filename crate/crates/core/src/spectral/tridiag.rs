//! Symmetric tridiagonal eigenvalues: implicit QL for full spectra and
//! Sturm-sequence bisection for a few extreme eigenvalues.

use super::RealSpectrum;
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Real symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalMatrix<T> {
    pub diag: Vec<T>,
    /// `offdiag[i]` couples rows `i` and `i + 1`.
    pub offdiag: Vec<T>,
}

/// Which eigenvalues to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenMode {
    /// Every eigenvalue, by implicit-shift QL.
    Full,
    /// The `k` largest, by bisection.
    Extreme(usize),
    /// The largest eigenvalue of the leading `truncation_size(n)` block.
    Truncated,
}

/// Leading block size `ceil(10 n^{1/3})`, capped at `n`.
pub fn truncation_size(n: usize) -> usize {
    let n0 = (10.0 * (n as f64).cbrt()).ceil() as usize;
    n0.clamp(1, n.max(1))
}

impl<T: Real> TridiagonalMatrix<T> {
    pub fn new(diag: Vec<T>, offdiag: Vec<T>) -> Result<Self> {
        if diag.is_empty() {
            return Err(invalid("diag", "matrix must be at least 1x1"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::Dimension(format!(
                "{} diagonal entries need {} off-diagonal entries, got {}",
                diag.len(),
                diag.len() - 1,
                offdiag.len()
            )));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn trace(&self) -> T {
        self.diag.iter().copied().sum()
    }

    /// The leading `k x k` block.
    pub fn leading_block(&self, k: usize) -> Self {
        let k = k.clamp(1, self.len());
        Self {
            diag: self.diag[..k].to_vec(),
            offdiag: self.offdiag[..k - 1].to_vec(),
        }
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (T, T) {
        let n = self.len();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 0..n {
            let r = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                T::zero()
            } + if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                T::zero()
            };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: T) -> usize {
        let tiny = T::min_positive_value().sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q == T::zero() {
            q = -tiny;
        }
        if q < T::zero() {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.offdiag[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q == T::zero() {
                q = -tiny;
            }
            if q < T::zero() {
                count += 1;
            }
        }
        count
    }

    /// The eigenvalue with `index` eigenvalues above it (0 = largest), by bisection.
    pub fn eigenvalue_from_top(&self, index: usize) -> T {
        let n = self.len();
        debug_assert!(index < n);
        let (mut lo, mut hi) = self.gershgorin();
        let floor = lo.abs().max(hi.abs()) * T::epsilon();
        let pad = (hi - lo).abs().max(T::one()) * T::epsilon();
        lo -= pad;
        hi += pad;
        // We want the smallest x with count_below(x) >= n - index.
        let target = n - index;
        let two = T::lit(2.0);
        for _ in 0..256 {
            let mid = (lo + hi) / two;
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= two * T::epsilon() * lo.abs().max(hi.abs()) + floor {
                break;
            }
        }
        (lo + hi) / two
    }

    pub fn largest_eigenvalue(&self) -> T {
        self.eigenvalue_from_top(0)
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix.
///
/// `d` holds the diagonal and is overwritten by the (unsorted) eigenvalues.
/// `e[i]` couples `i` and `i + 1`; `e` must have length `d.len()` and is
/// destroyed. `z` is a row-major `rows x n` block whose columns receive the
/// rotations, so passing the identity yields the eigenvectors and passing a
/// single row `x^T` yields the projections `x . v_j`.
pub fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], z: &mut [T], rows: usize) -> Result<()> {
    let n = d.len();
    if e.len() != n || z.len() != rows * n {
        return Err(Error::Dimension("ql_implicit work arrays".into()));
    }
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let eps = T::epsilon();
    let two = T::lit(2.0);
    const MAX_SWEEPS: usize = 60;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    routine: "tridiagonal QL",
                    iterations: MAX_SWEEPS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..rows {
                    let row = &mut z[k * n..(k + 1) * n];
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

/// Full eigendecomposition with the rotations applied to `rows` of `z`.
///
/// Returns eigenvalues in descending order and the matching permutation of
/// the columns of `z` (still row-major `rows x n`).
pub fn eig_tridiag_with_rows<T: Real>(
    t: &TridiagonalMatrix<T>,
    mut z: Vec<T>,
    rows: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let n = t.len();
    let mut d = t.diag.clone();
    let mut e = t.offdiag.clone();
    e.push(T::zero());
    ql_implicit(&mut d, &mut e, &mut z, rows)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].partial_cmp(&d[a]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&j| d[j]).collect();
    let mut zs = vec![T::zero(); rows * n];
    for k in 0..rows {
        for (jj, &j) in order.iter().enumerate() {
            zs[k * n + jj] = z[k * n + j];
        }
    }
    Ok((values, zs))
}

/// Eigenvalues of a symmetric tridiagonal matrix.
pub fn eig_sym_tridiag<T: Real>(
    t: &TridiagonalMatrix<T>,
    mode: EigenMode,
) -> Result<RealSpectrum<T>> {
    if t.is_empty() || t.offdiag.len() + 1 != t.len() {
        return Err(Error::Dimension("malformed tridiagonal matrix".into()));
    }
    match mode {
        EigenMode::Full => {
            let (values, _) = eig_tridiag_with_rows(t, Vec::new(), 0)?;
            Ok(RealSpectrum::new(values))
        }
        EigenMode::Extreme(k) => {
            if k == 0 || k > t.len() {
                return Err(invalid("k", format!("must be in 1..={}, got {k}", t.len())));
            }
            Ok(RealSpectrum::new(
                (0..k).map(|i| t.eigenvalue_from_top(i)).collect(),
            ))
        }
        EigenMode::Truncated => {
            let block = t.leading_block(truncation_size(t.len()));
            Ok(RealSpectrum::new(vec![block.largest_eigenvalue()]))
        }
    }
}
