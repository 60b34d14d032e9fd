//! Closed-form limits: bulk laws, Stieltjes transforms, outlier locations,
//! limiting overlaps, the `a = 0` hard-edge gap and the finite-`N` `β = 2`
//! determinant identities.
//!
//! Marchenko–Pastur conventions: `γ = n/N ≥ 1`, the law describes
//! eigenvalues divided by `N` of the `n × n` Wishart matrix (support
//! `((1 - √γ)², (1 + √γ)²)`, atom `1 - 1/γ` at zero). Outlier locations are
//! reported for eigenvalues divided by `n`.

use crate::error::{invalid, Error, Result};
use crate::matrix::DenseMatrix;
use crate::RMatrix;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BulkKind {
    Semicircle,
    MarchenkoPastur { gamma: f64 },
}

/// A limiting spectral law with optional atom at zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BulkLaw {
    pub kind: BulkKind,
    pub support: (f64, f64),
    pub atom_at_zero: f64,
}

impl BulkLaw {
    /// Density `(2/π) √(1 - x²)` on `(-1, 1)`.
    pub fn semicircle() -> Self {
        Self {
            kind: BulkKind::Semicircle,
            support: (-1.0, 1.0),
            atom_at_zero: 0.0,
        }
    }

    pub fn marchenko_pastur(gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0) || !gamma.is_finite() {
            return Err(invalid(
                "gamma",
                format!("aspect ratio must be finite and >= 1, got {gamma}"),
            ));
        }
        let r = gamma.sqrt();
        Ok(Self {
            kind: BulkKind::MarchenkoPastur { gamma },
            support: ((1.0 - r).powi(2), (1.0 + r).powi(2)),
            atom_at_zero: 1.0 - 1.0 / gamma,
        })
    }

    /// Continuous part of the density.
    pub fn density(&self, x: f64) -> f64 {
        let (c, d) = self.support;
        if x <= c || x >= d {
            return 0.0;
        }
        match self.kind {
            BulkKind::Semicircle => 2.0 / PI * (1.0 - x * x).sqrt(),
            BulkKind::MarchenkoPastur { gamma } => {
                ((x - c) * (d - x)).sqrt() / (2.0 * PI * gamma * x)
            }
        }
    }

    pub fn continuous_mass(&self) -> f64 {
        1.0 - self.atom_at_zero
    }

    /// `∫ ρ(x) / (y - x) dx` over the full measure (atom included), `y` above the support.
    pub fn stieltjes(&self, y: f64) -> Result<f64> {
        if !(y > self.support.1) {
            return Err(invalid(
                "y",
                format!("must exceed the upper support edge {}", self.support.1),
            ));
        }
        Ok(match self.kind {
            BulkKind::Semicircle => {
                // 2y(1 - sqrt(1 - 1/y²)) rewritten without cancellation.
                let s = (1.0 - 1.0 / (y * y)).sqrt();
                2.0 / (y * (1.0 + s))
            }
            BulkKind::MarchenkoPastur { gamma } => {
                let z = y;
                let disc =
                    (1.0 - 2.0 * (gamma + 1.0) / z + (gamma - 1.0).powi(2) / (z * z)).max(0.0);
                let cont = (1.0 - (gamma - 1.0) / z - disc.sqrt()) / (2.0 * gamma);
                cont + self.atom_at_zero / z
            }
        })
    }

    /// Limit of the Stieltjes transform at the upper edge.
    pub fn stieltjes_at_edge(&self) -> f64 {
        let d = self.support.1;
        match self.kind {
            BulkKind::Semicircle => 2.0,
            BulkKind::MarchenkoPastur { gamma } => {
                (1.0 - (gamma - 1.0) / d) / (2.0 * gamma) + self.atom_at_zero / d
            }
        }
    }
}

pub fn bulk_density(law: &BulkLaw, x: f64) -> f64 {
    law.density(x)
}

pub fn stieltjes(law: &BulkLaw, y: f64) -> Result<f64> {
    law.stieltjes(y)
}

/// Which normalization of the coupling the threshold and overlap formulas use.
///
/// `Nominal` keeps the reference formulas as stated: semicircle overlap
/// `1 - 1/α²` and Wishart threshold `1 + √γ` with overlap
/// `((b-1)² - γ)/((b-1)² + γ(b-1))`. `Matched` rescales them to the
/// sampler normalization used throughout this crate (`α → 2α`, `γ → 1/γ`),
/// which is continuous with the outlier location and agrees with simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CouplingScale {
    #[default]
    Nominal,
    Matched,
}

/// Threshold, location (if separated) and squared eigenvector overlap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutlierPrediction {
    pub threshold: f64,
    pub location: Option<f64>,
    pub overlap: f64,
}

pub fn outlier_prediction(law: &BulkLaw, coupling: f64) -> Result<OutlierPrediction> {
    outlier_prediction_with(law, coupling, CouplingScale::Nominal)
}

pub fn outlier_prediction_with(
    law: &BulkLaw,
    coupling: f64,
    scale: CouplingScale,
) -> Result<OutlierPrediction> {
    if !(coupling > 0.0) || !coupling.is_finite() {
        return Err(invalid(
            "coupling",
            format!("must be positive and finite, got {coupling}"),
        ));
    }
    Ok(match law.kind {
        BulkKind::Semicircle => {
            let a = coupling;
            let threshold = 0.5;
            let location = (a > threshold).then(|| a + 1.0 / (4.0 * a));
            let overlap = match scale {
                CouplingScale::Nominal => (1.0 - 1.0 / (a * a)).max(0.0),
                CouplingScale::Matched => (1.0 - 1.0 / (4.0 * a * a)).max(0.0),
            };
            OutlierPrediction {
                threshold,
                location,
                overlap,
            }
        }
        BulkKind::MarchenkoPastur { gamma } => {
            let b = coupling;
            let g = match scale {
                CouplingScale::Nominal => gamma,
                CouplingScale::Matched => 1.0 / gamma,
            };
            let threshold = 1.0 + g.sqrt();
            let above = b > threshold;
            let location = above.then(|| b * (1.0 + 1.0 / (gamma * (b - 1.0))));
            let overlap = if above {
                let e = b - 1.0;
                ((e * e - g) / (e * e + g * e)).max(0.0)
            } else {
                0.0
            };
            OutlierPrediction {
                threshold,
                location,
                overlap,
            }
        }
    })
}

/// Solves `G(y) = target` for `y > edge`, where `G` decreases from
/// `g_edge = G(edge⁺)` to zero. Returns `None` when `target >= g_edge`.
pub fn solve_outlier_equation(
    g: impl Fn(f64) -> f64,
    edge: f64,
    g_edge: f64,
    target: f64,
) -> Result<Option<f64>> {
    if !(target > 0.0) {
        return Err(invalid("target", "must be positive"));
    }
    if target >= g_edge {
        return Ok(None);
    }
    let scale = edge.abs().max(1.0);
    let mut lo = edge;
    let mut step = scale;
    let mut hi = edge + step;
    while g(hi) > target {
        lo = hi;
        step *= 2.0;
        hi = edge + step;
        if step > 1e300 {
            return Err(Error::NoConvergence {
                routine: "solve_outlier_equation",
                iterations: 1000,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Outlier location from the mean-field equation instead of the closed form.
///
/// Semicircle: `G(y) = 1/α`. Marchenko–Pastur: `G(λ) = 1/(bγ)` in the
/// eigenvalue/`N` scale, reported as `λ/γ` (eigenvalue/`n`).
pub fn outlier_location_numeric(law: &BulkLaw, coupling: f64) -> Result<Option<f64>> {
    if !(coupling > 0.0) {
        return Err(invalid("coupling", "must be positive"));
    }
    let edge = law.support.1;
    let g = |y: f64| law.stieltjes(y).unwrap_or(0.0);
    match law.kind {
        BulkKind::Semicircle => {
            solve_outlier_equation(g, edge, law.stieltjes_at_edge(), 1.0 / coupling)
        }
        BulkKind::MarchenkoPastur { gamma } => {
            let r =
                solve_outlier_equation(g, edge, law.stieltjes_at_edge(), 1.0 / (coupling * gamma))?;
            Ok(r.map(|l| l / gamma))
        }
    }
}

/// Hard-edge gap probability for `a = 0`: `exp(-(βx/2)(1/c + 1))`.
pub fn hard_edge_gap_a0(beta: f64, c: f64, x: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(invalid("beta", "must be positive"));
    }
    if !(c > 0.0) {
        return Err(invalid("c", "must be positive"));
    }
    if !(x >= 0.0) {
        return Err(invalid("x", "must be non-negative"));
    }
    let inv_c = if c.is_infinite() { 0.0 } else { 1.0 / c };
    Ok((-(beta * x / 2.0) * (inv_c + 1.0)).exp())
}

fn check_distinct(x: &[f64], min_gap: f64) -> Result<()> {
    for i in 0..x.len() {
        for j in 0..i {
            if (x[i] - x[j]).abs() < min_gap {
                return Err(Error::Coincident(j, i));
            }
        }
    }
    Ok(())
}

/// `Δ(x) = ∏_{i<j} (x_j - x_i)` as `(log|Δ|, sign)`.
fn log_vandermonde(x: &[f64]) -> (f64, f64) {
    let mut log = 0.0;
    let mut sign = 1.0;
    for j in 0..x.len() {
        for i in 0..j {
            let d = x[j] - x[i];
            log += d.abs().ln();
            if d < 0.0 {
                sign = -sign;
            }
        }
    }
    (log, sign)
}

/// `det[x_j^0, ..., x_j^{N-2}, exp(b x_j)]` as `(log|det|, sign)`, with the
/// exponential column scaled by `exp(-b max x)`.
fn log_det_exp_column(x: &[f64], b: f64) -> Result<(f64, f64)> {
    let n = x.len();
    let shift = x.iter().map(|&v| b * v).fold(f64::NEG_INFINITY, f64::max);
    let m: RMatrix = DenseMatrix::from_fn(n, n, |j, k| {
        if k + 1 < n {
            x[j].powi(k as i32)
        } else {
            (b * x[j] - shift).exp()
        }
    });
    let (log, sign) = m.lu()?.log_abs_determinant();
    Ok((log + shift, sign))
}

/// Logarithm of the unnormalized `β = 2` eigenvalue density
/// `∏ e^{-2Nλ²} · Δ(λ) · det[λ^{k-1} | e^{4αNλ}]`.
///
/// The product of the two antisymmetric factors is symmetric and, for
/// `α > 0`, positive. At `α = 0` the determinant degenerates to zero.
pub fn log_jointpdf_beta2(lambdas: &[f64], alpha: f64, n: usize) -> Result<f64> {
    if lambdas.len() != n || n == 0 {
        return Err(Error::Dimension(format!(
            "expected {n} eigenvalues, got {}",
            lambdas.len()
        )));
    }
    check_distinct(lambdas, f64::MIN_POSITIVE)?;
    let nf = n as f64;
    let gauss: f64 = lambdas.iter().map(|l| -2.0 * nf * l * l).sum();
    let (lv, sv) = log_vandermonde(lambdas);
    let (ld, sd) = log_det_exp_column(lambdas, 4.0 * alpha * nf)?;
    if sv * sd <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(gauss + lv + ld)
}

pub fn jointpdf_beta2(lambdas: &[f64], alpha: f64, n: usize) -> Result<f64> {
    Ok(log_jointpdf_beta2(lambdas, alpha, n)?.exp())
}

/// Rank-one HCIZ integrand evaluated two ways: determinant over Vandermonde,
/// `det[a_j^{k-1} | e^{b a_j}] / Δ(a)`, and the residue sum
/// `Σ_j e^{b a_j} / ∏_{k≠j} (a_j - a_k)`.
pub fn hciz_rank1_check(a: &[f64], b: f64) -> Result<(f64, f64)> {
    if a.is_empty() {
        return Err(invalid("a", "must be non-empty"));
    }
    check_distinct(a, 1e-8)?;
    let (lv, sv) = log_vandermonde(a);
    // Unshifted column keeps the two forms comparable without rescaling.
    let n = a.len();
    let m: RMatrix = DenseMatrix::from_fn(n, n, |j, k| {
        if k + 1 < n {
            a[j].powi(k as i32)
        } else {
            (b * a[j]).exp()
        }
    });
    let (ld, sd) = m.lu()?.log_abs_determinant();
    let det_form = sv * sd * (ld - lv).exp();
    let residue_form = a
        .iter()
        .enumerate()
        .map(|(j, &aj)| {
            let p: f64 = a
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != j)
                .map(|(_, &ak)| aj - ak)
                .product();
            (b * aj).exp() / p
        })
        .sum();
    Ok((det_form, residue_form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_adaptive;

    #[test]
    fn semicircle_peak_value() {
        let w = BulkLaw::semicircle();
        assert!((w.density(0.0) - 2.0 / PI).abs() < 1e-15);
        assert_eq!(w.density(1.5), 0.0);
    }

    #[test]
    fn normalization() {
        let w = BulkLaw::semicircle();
        let v = integrate_adaptive(|x| w.density(x), -1.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        for gamma in [1.0, 2.0, 5.0] {
            let mp = BulkLaw::marchenko_pastur(gamma).unwrap();
            let (c, d) = mp.support;
            let v = integrate_adaptive(|x| mp.density(x), c, d, 1e-13).unwrap();
            assert!(
                (v + mp.atom_at_zero - 1.0).abs() < 1e-10,
                "gamma={gamma}: {v}"
            );
        }
    }

    #[test]
    fn mp_gamma_two_continuous_mass() {
        let mp = BulkLaw::marchenko_pastur(2.0).unwrap();
        let (c, d) = mp.support;
        let v = integrate_adaptive(|x| mp.density(x), c, d, 1e-13).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
        assert!((mp.continuous_mass() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn semicircle_stieltjes_examples() {
        let w = BulkLaw::semicircle();
        assert!((w.stieltjes(2.0).unwrap() - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-14);
        assert!((w.stieltjes(1.0 + 1e-12).unwrap() - 2.0).abs() < 1e-5);
        let g = w.stieltjes(100.0).unwrap();
        assert!((g * 100.0 - 1.0).abs() < 0.01);
        assert!(w.stieltjes(0.5).is_err());
    }

    #[test]
    fn stieltjes_matches_quadrature() {
        for law in [
            BulkLaw::semicircle(),
            BulkLaw::marchenko_pastur(2.0).unwrap(),
            BulkLaw::marchenko_pastur(1.0).unwrap(),
        ] {
            let (c, d) = law.support;
            for k in 0..=10 {
                let y = d + 0.1 + k as f64 * 0.99;
                let q = integrate_adaptive(|x| law.density(x) / (y - x), c, d, 1e-14).unwrap()
                    + law.atom_at_zero / y;
                let g = law.stieltjes(y).unwrap();
                assert!((g - q).abs() < 1e-8, "{law:?} y={y}: {g} vs {q}");
            }
        }
    }

    #[test]
    fn semicircle_location_example() {
        let p = outlier_prediction(&BulkLaw::semicircle(), 1.5).unwrap();
        assert!((p.location.unwrap() - 5.0 / 3.0).abs() < 1e-14);
        assert_eq!(p.threshold, 0.5);
        assert!(outlier_prediction(&BulkLaw::semicircle(), 0.4)
            .unwrap()
            .location
            .is_none());
    }

    #[test]
    fn wishart_location_example() {
        let mp = BulkLaw::marchenko_pastur(2.0).unwrap();
        let p = outlier_prediction(&mp, 3.0).unwrap();
        assert!((p.location.unwrap() - 3.75).abs() < 1e-14);
        assert!((p.threshold - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        let m = outlier_prediction_with(&mp, 3.0, CouplingScale::Matched).unwrap();
        assert!((m.threshold - (1.0 + 0.5f64.sqrt())).abs() < 1e-15);
        assert!((m.overlap - 0.7).abs() < 1e-14);
    }

    #[test]
    fn overlap_conventions() {
        let w = BulkLaw::semicircle();
        assert!((outlier_prediction(&w, 2.0).unwrap().overlap - 0.75).abs() < 1e-15);
        assert!(
            (outlier_prediction_with(&w, 2.0, CouplingScale::Matched)
                .unwrap()
                .overlap
                - 0.9375)
                .abs()
                < 1e-15
        );
        assert_eq!(outlier_prediction(&w, 0.3).unwrap().overlap, 0.0);
        let mp = BulkLaw::marchenko_pastur(2.0).unwrap();
        assert!((outlier_prediction(&mp, 3.0).unwrap().overlap - 0.25).abs() < 1e-15);
        assert!(outlier_prediction(&w, 0.0).is_err());
        assert!(outlier_prediction(&w, -1.0).is_err());
    }

    #[test]
    fn threshold_continuity() {
        let w = BulkLaw::semicircle();
        let p = outlier_prediction(&w, 0.5 + 1e-7).unwrap();
        assert!((p.location.unwrap() - 1.0).abs() < 1e-6);
        for gamma in [1.0, 2.0, 4.0] {
            let mp = BulkLaw::marchenko_pastur(gamma).unwrap();
            let p =
                outlier_prediction_with(&mp, 1.0 + gamma.powf(-0.5) + 1e-7, CouplingScale::Matched)
                    .unwrap();
            let edge_n = mp.support.1 / gamma;
            assert!((p.location.unwrap() - edge_n).abs() < 1e-6, "gamma={gamma}");
            assert!(p.overlap < 1e-5);
        }
    }

    #[test]
    fn root_solve_reproduces_closed_forms() {
        let w = BulkLaw::semicircle();
        for a in [0.6, 1.0, 1.5, 3.0, 10.0] {
            let y = outlier_location_numeric(&w, a).unwrap().unwrap();
            assert!((y - (a + 1.0 / (4.0 * a))).abs() < 1e-10, "alpha={a}");
        }
        assert!(outlier_location_numeric(&w, 0.4).unwrap().is_none());
        for gamma in [1.0, 2.0, 3.0] {
            let mp = BulkLaw::marchenko_pastur(gamma).unwrap();
            for b in [2.5, 3.0, 6.0] {
                let y = outlier_location_numeric(&mp, b).unwrap().unwrap();
                let p = outlier_prediction_with(&mp, b, CouplingScale::Matched).unwrap();
                assert!(
                    (y - p.location.unwrap()).abs() < 1e-10,
                    "gamma={gamma} b={b}"
                );
            }
        }
        let mp = BulkLaw::marchenko_pastur(2.0).unwrap();
        assert!((outlier_location_numeric(&mp, 3.0).unwrap().unwrap() - 3.75).abs() < 1e-10);
    }

    #[test]
    fn hard_edge_examples() {
        assert!((hard_edge_gap_a0(2.0, 1.0, 1.0).unwrap() - (-2f64).exp()).abs() < 1e-16);
        assert!(
            (hard_edge_gap_a0(4.0, f64::INFINITY, 0.7).unwrap() - (-1.4f64).exp()).abs() < 1e-16
        );
        assert!((hard_edge_gap_a0(1.0, 1e12, 0.7).unwrap() - (-0.35f64).exp()).abs() < 1e-12);
        assert_eq!(hard_edge_gap_a0(1.0, 0.3, 0.0).unwrap(), 1.0);
        assert!(hard_edge_gap_a0(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn jointpdf_one_by_one() {
        let a = 0.37;
        let base = jointpdf_beta2(&[0.0], a, 1).unwrap();
        for l in [-1.0, 0.2, 0.9, 2.0] {
            let r = jointpdf_beta2(&[l], a, 1).unwrap() / base;
            let want = (-2.0 * l * l + 4.0 * a * l).exp();
            assert!((r - want).abs() < 1e-13 * want);
        }
    }

    #[test]
    fn jointpdf_symmetric_and_large_n_finite() {
        let l = [0.3, -0.5, 0.9, 0.1];
        let p = log_jointpdf_beta2(&l, 0.8, 4).unwrap();
        let q = log_jointpdf_beta2(&[0.9, 0.1, -0.5, 0.3], 0.8, 4).unwrap();
        assert!((p - q).abs() < 1e-10);
        let big: Vec<f64> = (0..40).map(|i| -1.0 + i as f64 * 0.05).collect();
        assert!(log_jointpdf_beta2(&big, 3.0, 40).unwrap().is_finite());
        assert!(jointpdf_beta2(&[0.1, 0.1], 1.0, 2).is_err());
    }

    #[test]
    fn hciz_examples() {
        let (d, r) = hciz_rank1_check(&[0.0, 1.0], 1.0).unwrap();
        assert!((r - (1f64.exp() - 1.0)).abs() < 1e-15);
        assert!((d - r).abs() < 1e-14);
        let (_, r0) = hciz_rank1_check(&[-0.7, 0.1, 0.4, 0.9, 1.3], 0.0).unwrap();
        assert!(r0.abs() < 1e-10);
        assert!(hciz_rank1_check(&[0.0, 1e-9], 1.0).is_err());
    }
}
