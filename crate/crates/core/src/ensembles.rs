//! Samplers for the rank-one perturbed ensembles, dense and structured.
//!
//! Gaussian conventions: the unscaled GOE/GUE matrix `G` has weight
//! `exp(-Tr G^2 / 2)`, i.e. diagonal `N[0, 1]` and off-diagonal entries with
//! per-component variance `1/2` (real case: variance `1/2`). The
//! anti-Hermitian model instead uses weight `exp(-Tr A^2)`, which halves
//! every variance.

use crate::error::{invalid, Result};
use crate::matrix::DenseMatrix;
use crate::randgen::Stream;
use crate::spectral::{
    eig_hermitian_dense, eig_tridiag_with_rows, solve_secular_complex, solve_secular_real,
    ComplexSpectrum, Coupling, EigenMode, RealSpectrum, SecularProblem, SpectrumMeta,
    TridiagonalMatrix,
};
use crate::{CMatrix, RMatrix, Spectrum, Tridiagonal};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

/// A dense Gaussian sample: real symmetric for `beta = 1`, Hermitian for `beta = 2`.
#[derive(Clone, Debug)]
pub enum GaussianSample {
    Real(RMatrix),
    Complex(CMatrix),
}

impl GaussianSample {
    pub fn spectrum(&self) -> Result<Spectrum> {
        Ok(match self {
            GaussianSample::Real(m) => eig_hermitian_dense(m, false)?.spectrum,
            GaussianSample::Complex(m) => eig_hermitian_dense(m, false)?.spectrum,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            GaussianSample::Real(m) => m.rows(),
            GaussianSample::Complex(m) => m.rows(),
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 1 {
        return Err(invalid("N", "matrix size must be at least 1"));
    }
    Ok(())
}

/// `G / sqrt(2 N beta) + alpha 1̂ 1̂^T`, where `1̂ = (1, ..., 1)/sqrt(N)`.
pub fn sample_gaussian_dense(
    s: &mut Stream,
    beta: u8,
    n: usize,
    alpha: f64,
) -> Result<GaussianSample> {
    check_dim(n)?;
    let scale = 1.0 / (2.0 * n as f64 * beta as f64).sqrt();
    let shift = alpha / n as f64;
    match beta {
        1 => {
            let mut m = DenseMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = s.gaussian() * scale + shift;
                for j in 0..i {
                    let x = s.gaussian() * FRAC_1_SQRT_2 * scale + shift;
                    m[(i, j)] = x;
                    m[(j, i)] = x;
                }
            }
            Ok(GaussianSample::Real(m))
        }
        2 => {
            let mut m = DenseMatrix::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = Complex64::new(s.gaussian() * scale + shift, 0.0);
                for j in 0..i {
                    let z = s.complex_gaussian() * scale + shift;
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            Ok(GaussianSample::Complex(m))
        }
        _ => Err(invalid(
            "beta",
            format!("dense Gaussian ensembles need beta in {{1, 2}}, got {beta}"),
        )),
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(invalid("beta", format!("must be positive, got {beta}")));
    }
    Ok(())
}

/// `(C_0 + C_1 + C_1^T) / sqrt(2 beta N)` with `C_0[0] ~ N[alpha sqrt(2 beta N), 1]`,
/// other diagonal entries `N[0, 1]`, and superdiagonal `χ̃_{beta(N-1)}, ..., χ̃_beta`.
pub fn sample_tridiag(s: &mut Stream, beta: f64, n: usize, alpha: f64) -> Result<Tridiagonal> {
    sample_tridiag_leading(s, beta, n, alpha, n)
}

/// The leading `rows x rows` block of a [`sample_tridiag`] draw, sampled
/// without generating the rest of the matrix.
pub fn sample_tridiag_leading(
    s: &mut Stream,
    beta: f64,
    n: usize,
    alpha: f64,
    rows: usize,
) -> Result<Tridiagonal> {
    check_beta(beta)?;
    check_dim(n)?;
    let rows = rows.clamp(1, n);
    let root = (2.0 * beta * n as f64).sqrt();
    let mut diag = Vec::with_capacity(rows);
    let mut off = Vec::with_capacity(rows - 1);
    diag.push((s.gaussian() + alpha * root) / root);
    for k in 0..rows - 1 {
        off.push(s.chi(beta * (n - 1 - k) as f64)? / root);
        diag.push(s.gaussian() / root);
    }
    TridiagonalMatrix::new(diag, off)
}

/// Largest eigenvalue of a [`sample_tridiag`] draw using only the leading
/// `truncation_size(N)` block.
pub fn sample_tridiag_largest_truncated(
    s: &mut Stream,
    beta: f64,
    n: usize,
    alpha: f64,
) -> Result<f64> {
    let t = sample_tridiag_leading(s, beta, n, alpha, crate::spectral::truncation_size(n))?;
    Ok(crate::spectral::eig_sym_tridiag(&t, EigenMode::Extreme(1))?.values()[0])
}

/// The lower-bidiagonal `B_β^†` of the spiked Laguerre model, entries divided by `sqrt(beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BidiagonalModel {
    /// Diagonal; `main[0]` carries the `sqrt(b)` factor.
    pub main: Vec<f64>,
    /// Subdiagonal, `sub[i]` at position `(i + 1, i)`.
    pub sub: Vec<f64>,
    pub spike_b: f64,
    pub beta: f64,
    pub n: usize,
    pub big_n: usize,
}

impl BidiagonalModel {
    /// `B_β^† B_β` as a symmetric tridiagonal matrix.
    pub fn gram(&self) -> Tridiagonal {
        let m = self.main.len();
        let diag = (0..m)
            .map(|i| {
                self.main[i] * self.main[i]
                    + if i > 0 {
                        self.sub[i - 1] * self.sub[i - 1]
                    } else {
                        0.0
                    }
            })
            .collect();
        let off = (0..m.saturating_sub(1))
            .map(|i| self.sub[i] * self.main[i])
            .collect();
        TridiagonalMatrix { diag, offdiag: off }
    }

    pub fn eigenvalues(&self) -> Result<Spectrum> {
        crate::spectral::eig_sym_tridiag(&self.gram(), EigenMode::Full)
    }
}

pub fn sample_laguerre_bidiag(
    s: &mut Stream,
    beta: f64,
    n: usize,
    big_n: usize,
    b: f64,
) -> Result<BidiagonalModel> {
    check_beta(beta)?;
    check_dim(big_n)?;
    if n < big_n {
        return Err(invalid(
            "n",
            format!("need n >= N, got n = {n}, N = {big_n}"),
        ));
    }
    if !(b > 0.0) {
        return Err(invalid("b", "spike must be positive"));
    }
    let rb = beta.sqrt();
    let mut main = Vec::with_capacity(big_n);
    let mut sub = Vec::with_capacity(big_n - 1);
    for i in 0..big_n {
        let x = s.chi_standard(beta * (n - i) as f64)? / rb;
        main.push(if i == 0 { b.sqrt() * x } else { x });
    }
    for i in 0..big_n - 1 {
        sub.push(s.chi_standard(beta * (big_n - 1 - i) as f64)? / rb);
    }
    Ok(BidiagonalModel {
        main,
        sub,
        spike_b: b,
        beta,
        n,
        big_n,
    })
}

/// Spiked complex Wishart: `X` is `n x N` standard complex Gaussian and the
/// population covariance is `diag(1, ..., 1, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpikedWishartSpec {
    pub n: usize,
    pub big_n: usize,
    pub b: f64,
}

impl SpikedWishartSpec {
    pub fn new(n: usize, big_n: usize, b: f64) -> Result<Self> {
        check_dim(big_n)?;
        if n < big_n {
            return Err(invalid(
                "n",
                format!("need n >= N, got n = {n}, N = {big_n}"),
            ));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(invalid("b", "spike must be positive"));
        }
        Ok(Self { n, big_n, b })
    }

    /// `γ = n / N`.
    pub fn gamma(&self) -> f64 {
        self.n as f64 / self.big_n as f64
    }
}

pub fn sample_wishart_factor(s: &mut Stream, spec: &SpikedWishartSpec) -> CMatrix {
    DenseMatrix::from_fn(spec.n, spec.big_n, |_, _| s.complex_gaussian())
}

/// `X_1 X_1^† + b x x^†` (`n x n`), with `x` the last column of `X`.
pub fn wishart_outer(x: &CMatrix, b: f64) -> CMatrix {
    let (n, m) = (x.rows(), x.cols());
    DenseMatrix::from_fn(n, n, |i, j| {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..m {
            let w = if k + 1 == m { b } else { 1.0 };
            s += x[(i, k)] * x[(j, k)].conj() * w;
        }
        s
    })
}

/// `Σ^{1/2} X^† X Σ^{1/2}` (`N x N`).
pub fn wishart_gram(x: &CMatrix, b: f64) -> CMatrix {
    let (n, m) = (x.rows(), x.cols());
    let rb = b.sqrt();
    let mut g: CMatrix = DenseMatrix::zeros(m, m);
    for k in 0..n {
        let row = x.row(k);
        for i in 0..m {
            let xi = row[i].conj();
            for j in 0..=i {
                g[(i, j)] += xi * row[j];
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            g[(j, i)] = g[(i, j)].conj();
        }
    }
    for i in 0..m {
        g[(i, m - 1)] *= rb;
        g[(m - 1, i)] *= rb;
    }
    g
}

pub fn sample_spiked_wishart_dense(s: &mut Stream, spec: &SpikedWishartSpec) -> CMatrix {
    wishart_outer(&sample_wishart_factor(s, spec), spec.b)
}

/// The `N` nonzero eigenvalues of the spiked Wishart matrix via the secular
/// equation: poles are the eigenvalues of `X_1 X_1^†` (sampled from the
/// `beta = 2` bidiagonal model) together with `0`, with weights `Γ[1, 1]` and
/// `u_0 ~ Γ[n - N + 1, 1]`.
pub fn sample_spiked_wishart_secular(s: &mut Stream, spec: &SpikedWishartSpec) -> Result<Spectrum> {
    let m = spec.big_n - 1;
    let mut poles = Vec::new();
    if m > 0 {
        poles = sample_laguerre_bidiag(s, 2.0, spec.n, m, 1.0)?
            .eigenvalues()?
            .into_values();
    }
    let weights = (0..m)
        .map(|_| s.gamma(1.0, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let u0 = s.gamma((spec.n - spec.big_n + 1) as f64, 1.0)?;
    let p = if m > 0 {
        SecularProblem::new(poles, weights, Coupling::Real(spec.b))?.with_pole_at_zero(u0)?
    } else {
        // Only the origin pole: lambda = b u0.
        return Ok(RealSpectrum::new(vec![spec.b * u0]));
    };
    solve_secular_real(&p)
}

/// Haar unitary matrix from twice-iterated Gram–Schmidt on a complex
/// Gaussian matrix; positive `R` diagonal makes the law exactly Haar.
pub fn sample_haar_unitary(s: &mut Stream, n: usize) -> Result<CMatrix> {
    check_dim(n)?;
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| (0..n).map(|_| s.complex_gaussian()).collect())
        .collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let q = &done[k];
                let c = &mut rest[0];
                let proj: Complex64 = q.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
                for (ci, qi) in c.iter_mut().zip(q) {
                    *ci -= proj * qi;
                }
            }
        }
        let nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].iter_mut().for_each(|z| *z /= nrm);
    }
    Ok(DenseMatrix::from_fn(n, n, |i, j| cols[j][i]))
}

/// `U diag(a, 1, ..., 1)` with `U` Haar.
pub fn sample_subunitary(s: &mut Stream, n: usize, a: Complex64) -> Result<CMatrix> {
    if !(a.norm() < 1.0) {
        return Err(invalid("a", format!("need |a| < 1, got {}", a.norm())));
    }
    let mut u = sample_haar_unitary(s, n)?;
    for i in 0..n {
        u[(i, 0)] *= a;
    }
    Ok(u)
}

/// `A + i alpha e_1 e_1^T` with `A` from the `exp(-Tr A^2)` GUE.
pub fn sample_antiherm(s: &mut Stream, n: usize, alpha: f64) -> Result<CMatrix> {
    check_dim(n)?;
    if !(alpha > 0.0) {
        return Err(invalid("alpha", "must be positive"));
    }
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(s.gaussian() * FRAC_1_SQRT_2, 0.0);
        for j in 0..i {
            let z = s.complex_gaussian() * FRAC_1_SQRT_2;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m[(0, 0)] += Complex64::new(0.0, alpha);
    Ok(m)
}

/// Eigenvalues `mu` of an `exp(-Tr A^2)` GUE matrix and the squared first
/// components `w` of its eigenvectors (`sum w = 1`), from the `beta = 2`
/// tridiagonal model. These are the poles and weights of the secular
/// equation for `A + i alpha e_1 e_1^T`.
pub fn antiherm_poles(s: &mut Stream, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_dim(n)?;
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        diag.push(s.gaussian() * FRAC_1_SQRT_2);
        if k + 1 < n {
            off.push(s.chi(2.0 * (n - 1 - k) as f64)? * FRAC_1_SQRT_2);
        }
    }
    let t = TridiagonalMatrix::new(diag, off)?;
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let (mu, x) = eig_tridiag_with_rows(&t, e1, 1)?;
    let w: Vec<f64> = x.iter().map(|v| (v * v).max(f64::MIN_POSITIVE)).collect();
    Ok((mu, w))
}

/// Eigenvalues with the same law as [`sample_antiherm`], computed from the
/// `beta = 2` tridiagonal model and the complex secular equation. Costs
/// `O(N^2)` instead of `O(N^3)`.
pub fn sample_antiherm_spectrum(
    s: &mut Stream,
    n: usize,
    alpha: f64,
) -> Result<ComplexSpectrum<f64>> {
    check_dim(n)?;
    if !(alpha > 0.0) {
        return Err(invalid("alpha", "must be positive"));
    }
    let (mu, w) = antiherm_poles(s, n)?;
    let z = solve_secular_complex(&SecularProblem::new(mu, w, Coupling::Imaginary(alpha))?)?;
    Ok(z.with_meta(
        SpectrumMeta::new("antiherm")
            .with("N", n as f64)
            .with("alpha", alpha),
    ))
}

/// Spectra of `W_k = sum_{j <= k} v_j v_j^T`, `k = 1..=n_max`, for standard
/// real Gaussian `v_j` of length `N`.
pub fn wishart_update_stream(s: &mut Stream, n: usize, n_max: usize) -> Result<Vec<Spectrum>> {
    check_dim(n)?;
    if n_max < 1 {
        return Err(invalid("n_max", "need at least one update"));
    }
    let mut w: RMatrix = DenseMatrix::zeros(n, n);
    let mut out = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let v: Vec<f64> = (0..n).map(|_| s.gaussian()).collect();
        for i in 0..n {
            for j in 0..n {
                w[(i, j)] += v[i] * v[j];
            }
        }
        out.push(eig_hermitian_dense(&w, false)?.spectrum);
    }
    Ok(out)
}

/// Discretized Dyson Brownian motion started from `diag(alpha, 0, ..., 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DysonConfig {
    pub n: usize,
    pub alpha: f64,
    pub total_time: f64,
    pub steps: usize,
}

impl DysonConfig {
    pub fn new(n: usize, alpha: f64, total_time: f64, steps: usize) -> Result<Self> {
        check_dim(n)?;
        if steps < 1 {
            return Err(invalid("steps", "need at least one step"));
        }
        if !(total_time > 0.0) {
            return Err(invalid("total_time", "must be positive"));
        }
        Ok(Self {
            n,
            alpha,
            total_time,
            steps,
        })
    }
}

/// Eigenvalues after each step. Every step draws the next matrix from the
/// `beta = 1` heat kernel centred at the previous one: diagonal increments
/// `N[0, δt]`, off-diagonal increments `N[0, δt/2]`.
pub fn dyson_paths(s: &mut Stream, cfg: &DysonConfig) -> Result<Vec<Spectrum>> {
    let n = cfg.n;
    let dt = cfg.total_time / cfg.steps as f64;
    let (sd, so) = (dt.sqrt(), (dt / 2.0).sqrt());
    let mut h: RMatrix = DenseMatrix::zeros(n, n);
    h[(0, 0)] = cfg.alpha;
    let mut out = Vec::with_capacity(cfg.steps);
    for _ in 0..cfg.steps {
        for i in 0..n {
            h[(i, i)] += s.gaussian() * sd;
            for j in 0..i {
                let x = s.gaussian() * so;
                h[(i, j)] += x;
                h[(j, i)] += x;
            }
        }
        out.push(eig_hermitian_dense(&h, false)?.spectrum);
    }
    Ok(out)
}

/// `N x N` matrix of iid `Uniform[0, 1]` entries.
pub fn sample_iid_shifted(s: &mut Stream, n: usize) -> Result<RMatrix> {
    if n < 2 {
        return Err(invalid("N", "need N >= 2"));
    }
    Ok(DenseMatrix::from_fn(n, n, |_, _| s.uniform()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eig_complex_dense, eig_sym_tridiag};
    use crate::stats::{ks_two_sample, mean, variance};

    #[test]
    fn scalar_gaussian_variance() {
        let mut s = Stream::new(1);
        let x: Vec<f64> = (0..100_000)
            .map(
                |_| match sample_gaussian_dense(&mut s, 1, 1, 0.0).unwrap() {
                    GaussianSample::Real(m) => m[(0, 0)],
                    _ => unreachable!(),
                },
            )
            .collect();
        assert!((variance(&x) - 0.5).abs() < 0.01);
    }

    #[test]
    fn dense_samples_are_hermitian() {
        let mut s = Stream::new(2);
        for beta in [1u8, 2] {
            match sample_gaussian_dense(&mut s, beta, 7, 0.4).unwrap() {
                GaussianSample::Real(m) => assert_eq!(m.hermitian_defect(), 0.0),
                GaussianSample::Complex(m) => assert_eq!(m.hermitian_defect(), 0.0),
            }
        }
        assert!(sample_gaussian_dense(&mut s, 4, 3, 0.0).is_err());
    }

    #[test]
    fn goe_outlier_mean() {
        let mut s = Stream::new(3);
        let top: Vec<f64> = (0..200)
            .map(|_| {
                sample_gaussian_dense(&mut s, 1, 100, 1.5)
                    .unwrap()
                    .spectrum()
                    .unwrap()
                    .values()[0]
            })
            .collect();
        assert!((mean(&top) - 5.0 / 3.0).abs() < 0.05, "{}", mean(&top));
    }

    #[test]
    fn tridiagonal_matches_dense_goe() {
        let mut s = Stream::new(4);
        let reps = 10_000;
        let a: Vec<f64> = (0..reps)
            .map(|_| {
                sample_gaussian_dense(&mut s, 1, 8, 1.0)
                    .unwrap()
                    .spectrum()
                    .unwrap()
                    .values()[0]
            })
            .collect();
        let b: Vec<f64> = (0..reps)
            .map(|_| {
                eig_sym_tridiag(
                    &sample_tridiag(&mut s, 1.0, 8, 1.0).unwrap(),
                    EigenMode::Extreme(1),
                )
                .unwrap()
                .values()[0]
            })
            .collect();
        assert!(ks_two_sample(&a, &b) < 0.02);
    }

    #[test]
    fn tridiagonal_entries() {
        let mut s = Stream::new(5);
        let (beta, n) = (2.5, 6);
        let d0: Vec<f64> = (0..100_000)
            .map(|_| sample_tridiag(&mut s, beta, n, 0.0).unwrap().diag[0])
            .collect();
        assert!(mean(&d0).abs() < 0.01 * (2.0 * beta * n as f64).powf(-0.5));
        let t = sample_tridiag(&mut s, beta, 50, 0.3).unwrap();
        assert!(t.offdiag.iter().all(|&x| x > 0.0));
        assert!(sample_tridiag(&mut s, 0.0, 5, 0.0).is_err());
    }

    #[test]
    fn leading_block_has_matching_law() {
        let mut a = Stream::new(6);
        let mut b = Stream::new(6);
        let full = sample_tridiag(&mut a, 2.0, 40, 0.5).unwrap();
        let lead = sample_tridiag_leading(&mut b, 2.0, 40, 0.5, 10).unwrap();
        assert_eq!(full.diag[..10], lead.diag[..]);
        assert_eq!(full.offdiag[..9], lead.offdiag[..]);
    }

    #[test]
    fn bidiagonal_one_by_one_and_trace() {
        let mut s = Stream::new(7);
        let one: Vec<f64> = (0..100_000)
            .map(|_| {
                let m = sample_laguerre_bidiag(&mut s, 2.0, 5, 1, 1.5).unwrap();
                m.main[0] * m.main[0]
            })
            .collect();
        assert!((mean(&one) / 7.5 - 1.0).abs() < 0.01);
        let tr: Vec<f64> = (0..100_000)
            .map(|_| {
                sample_laguerre_bidiag(&mut s, 2.0, 2, 2, 1.0)
                    .unwrap()
                    .gram()
                    .trace()
            })
            .collect();
        assert!((mean(&tr) - 4.0).abs() < 0.05);
        assert!(sample_laguerre_bidiag(&mut s, 2.0, 1, 2, 1.0).is_err());
    }

    #[test]
    fn bbp_outlier_bidiagonal() {
        let mut s = Stream::new(8);
        let top: Vec<f64> = (0..100)
            .map(|_| {
                let m = sample_laguerre_bidiag(&mut s, 2.0, 400, 200, 3.0).unwrap();
                eig_sym_tridiag(&m.gram(), EigenMode::Extreme(1))
                    .unwrap()
                    .values()[0]
                    / 400.0
            })
            .collect();
        assert!((mean(&top) - 3.75).abs() < 0.1, "{}", mean(&top));
    }

    #[test]
    fn wishart_outer_and_gram_share_nonzero_eigenvalues() {
        let mut s = Stream::new(9);
        let spec = SpikedWishartSpec::new(12, 5, 2.5).unwrap();
        let x = sample_wishart_factor(&mut s, &spec);
        let outer = eig_hermitian_dense(&wishart_outer(&x, spec.b), false)
            .unwrap()
            .spectrum;
        let gram = eig_hermitian_dense(&wishart_gram(&x, spec.b), false)
            .unwrap()
            .spectrum;
        for (a, b) in outer.values().iter().zip(gram.values()) {
            assert!((a - b).abs() < 1e-10 * b.abs(), "{a} vs {b}");
        }
        assert!(outer.values()[5..]
            .iter()
            .all(|v| v.abs() < 1e-10 * outer.values()[0]));
    }

    #[test]
    fn secular_wishart_route_is_consistent() {
        let mut s = Stream::new(10);
        let spec = SpikedWishartSpec::new(30, 20, 2.0).unwrap();
        let reps = 2000;
        let mut direct = vec![Vec::new(); 20];
        let mut secular = vec![Vec::new(); 20];
        for _ in 0..reps {
            let x = sample_wishart_factor(&mut s, &spec);
            let d = eig_hermitian_dense(&wishart_gram(&x, spec.b), false)
                .unwrap()
                .spectrum;
            let r = sample_spiked_wishart_secular(&mut s, &spec).unwrap();
            for k in 0..20 {
                direct[k].push(d.values()[k]);
                secular[k].push(r.values()[k]);
            }
        }
        for k in 0..20 {
            assert!(
                ks_two_sample(&direct[k], &secular[k]) < 0.06,
                "order statistic {k}"
            );
        }
    }

    #[test]
    fn haar_unitary_properties() {
        let mut s = Stream::new(11);
        let u = sample_haar_unitary(&mut s, 6).unwrap();
        let uu = u.adjoint().matmul(&u).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((uu[(i, j)] - want).norm() < 1e-12);
            }
        }
        let m: Vec<f64> = (0..100_000)
            .map(|_| sample_haar_unitary(&mut s, 4).unwrap()[(0, 0)].norm_sqr())
            .collect();
        assert!((mean(&m) - 0.25).abs() < 0.005);
    }

    #[test]
    fn subunitary_determinant() {
        let mut s = Stream::new(12);
        let a = Complex64::new(0.3, -0.4);
        let m = sample_subunitary(&mut s, 5, a).unwrap();
        assert!((m.determinant().unwrap().norm() - a.norm()).abs() < 1e-12);
        let e = eig_complex_dense(&m, false).unwrap();
        let prod: f64 = e.spectrum.values().iter().map(|z| z.norm_sqr()).product();
        assert!((prod - a.norm_sqr()).abs() < 1e-10);
        let z = sample_subunitary(&mut s, 5, Complex64::new(0.0, 0.0)).unwrap();
        let e = eig_complex_dense(&z, false).unwrap();
        assert!(e.spectrum.values().iter().any(|v| v.norm() < 1e-12));
        assert!(sample_subunitary(&mut s, 3, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn antiherm_sum_rule_and_routes() {
        let mut s = Stream::new(13);
        let m = sample_antiherm(&mut s, 30, 2.0).unwrap();
        let e = eig_complex_dense(&m, false).unwrap();
        assert!(e.spectrum.all_in_upper_half_plane());
        assert!((e.spectrum.values().iter().map(|z| z.im).sum::<f64>() - 2.0).abs() < 1e-10);
        let z = sample_antiherm_spectrum(&mut s, 30, 2.0).unwrap();
        assert!((z.values().iter().map(|z| z.im).sum::<f64>() - 2.0).abs() < 1e-10);
        let one = sample_antiherm(&mut s, 1, 0.7).unwrap();
        let e1 = eig_complex_dense(&one, false).unwrap();
        assert_eq!(e1.spectrum.values()[0], one[(0, 0)]);
        assert_eq!(one[(0, 0)].im, 0.7);
    }

    #[test]
    fn antiherm_tridiagonal_route_matches_dense_in_law() {
        let mut s = Stream::new(14);
        let reps = 3000;
        let a: Vec<f64> = (0..reps)
            .map(|_| {
                let m = sample_antiherm(&mut s, 6, 1.0).unwrap();
                eig_complex_dense(&m, false)
                    .unwrap()
                    .spectrum
                    .values()
                    .iter()
                    .map(|z| z.im)
                    .fold(0.0, f64::max)
            })
            .collect();
        let b: Vec<f64> = (0..reps)
            .map(|_| {
                sample_antiherm_spectrum(&mut s, 6, 1.0)
                    .unwrap()
                    .values()
                    .iter()
                    .map(|z| z.im)
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(ks_two_sample(&a, &b) < 0.05);
    }

    #[test]
    fn update_stream_interlaces() {
        let mut s = Stream::new(15);
        let v = wishart_update_stream(&mut s, 10, 15).unwrap();
        assert_eq!(v[0].values().iter().filter(|x| x.abs() > 1e-9).count(), 1);
        for k in 1..v.len() {
            let big: Vec<f64> = v[k]
                .values()
                .iter()
                .copied()
                .filter(|x| x.abs() > 1e-9)
                .collect();
            let small: Vec<f64> = v[k - 1]
                .values()
                .iter()
                .copied()
                .filter(|x| x.abs() > 1e-9)
                .collect();
            if big.len() > small.len() {
                assert!(RealSpectrum::new(big).interlaces(&small));
            } else {
                for (j, &m) in small.iter().enumerate() {
                    assert!(m <= big[j] && (j + 1 >= big.len() || m >= big[j + 1]));
                }
            }
        }
    }

    #[test]
    fn rank_one_first_update() {
        let mut s = Stream::new(16);
        let mut t = Stream::new(16);
        let v: Vec<f64> = (0..5).map(|_| t.gaussian()).collect();
        let w = wishart_update_stream(&mut s, 5, 1).unwrap();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        assert!((w[0].values()[0] - norm2).abs() < 1e-12 * norm2);
    }

    #[test]
    fn dyson_single_step_variance() {
        let mut s = Stream::new(17);
        let cfg = DysonConfig::new(1, 0.0, 0.3, 1).unwrap();
        let x: Vec<f64> = (0..50_000)
            .map(|_| dyson_paths(&mut s, &cfg).unwrap()[0].values()[0])
            .collect();
        assert!((variance(&x) / 0.3 - 1.0).abs() < 0.02);
    }

    #[test]
    fn dyson_paths_stay_ordered() {
        let mut s = Stream::new(18);
        let cfg = DysonConfig::new(8, 1.2, 1.0 / 16.0, 40).unwrap();
        let p = dyson_paths(&mut s, &cfg).unwrap();
        assert_eq!(p.len(), 40);
        for sp in &p {
            assert!(sp.values().windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn iid_uniform_outlier() {
        let mut s = Stream::new(19);
        let m = sample_iid_shifted(&mut s, 100).unwrap();
        assert!(m.as_slice().iter().all(|x| (0.0..=1.0).contains(x)));
        let c = DenseMatrix::from_fn(100, 100, |i, j| Complex64::new(m[(i, j)], 0.0));
        let e = eig_complex_dense(&c, false).unwrap();
        let top = e
            .spectrum
            .values()
            .iter()
            .copied()
            .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
            .unwrap();
        assert!((top.re - 50.0).abs() < 2.0, "{top}");
        let scale = (100.0f64 / 12.0).sqrt();
        let inside = e
            .spectrum
            .values()
            .iter()
            .filter(|z| (**z - 0.0).norm() / scale <= 1.1)
            .count();
        assert!(inside >= 99);
    }
}
