//! Correlations of the eigenvalues of `U diag(a, 1, ..., 1)`, `U` Haar.
//!
//! For `k <= 2` points the `k`-point function is
//! `π^{-k} c Σ_l q_l (d/dx · x)^l h(x)` at `x = ∏|z_i|²`, where `q_l` is the
//! coefficient of `s^l` in `det[s φ(z_i z̄_j) + x φ'(x)|_{z_i z̄_j}]`.

use crate::error::{invalid, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which correlation to evaluate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CueKind {
    /// Finite `N` with coupling `a`; `φ(x) = (x^N - 1)/(x - 1)`.
    Finite { n: usize, a: Complex64 },
    /// `N → ∞` at `a = 0`: `det[1/(1 - z_i z̄_j)²] / π^k`.
    Kac,
    /// `N → ∞` with `a = 1/(μ√N)`; `φ(x) = 1/(1 - x)`.
    Scaled { mu: Complex64 },
}

/// `(φ, xφ')` at complex `x` for the kind's generating function.
fn phi_pair(kind: CueKind, x: Complex64) -> (Complex64, Complex64) {
    match kind {
        CueKind::Finite { n, .. } => {
            let (mut p, mut dp, mut pow) = (
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            );
            for m in 0..n {
                p += pow;
                dp += pow * m as f64;
                pow *= x;
            }
            (p, dp)
        }
        CueKind::Kac | CueKind::Scaled { .. } => {
            let r = 1.0 / (1.0 - x);
            (r, x * r * r)
        }
    }
}

/// Coefficients `[s^l] det[s φ_ij + ψ_ij]`, `l = 0..=k`, by evaluating the
/// determinant at `s = 0, 1, 2` and interpolating.
fn s_coefficients(kind: CueKind, z: &[Complex64]) -> Vec<f64> {
    let k = z.len();
    let det_at = |s: f64| -> Complex64 {
        let e = |i: usize, j: usize| {
            let (p, dp) = phi_pair(kind, z[i] * z[j].conj());
            p * s + dp
        };
        match k {
            1 => e(0, 0),
            _ => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        }
    };
    // The matrix is Hermitian, so the determinant is real.
    let p: Vec<f64> = (0..=k).map(|s| det_at(s as f64).re).collect();
    match k {
        1 => vec![p[0], p[1] - p[0]],
        _ => {
            let q2 = 0.5 * (p[2] - 2.0 * p[1] + p[0]);
            vec![p[0], p[1] - p[0] - q2, q2]
        }
    }
}

/// `[h, Dh, D²h]` with `D = (d/dx) x`, `h = x^{-1}(1 - A/x)^{N-1}`.
fn finite_h(n: usize, big_a: f64, x: f64) -> [f64; 3] {
    let nm1 = (n - 1) as f64;
    let u = 1.0 - big_a / x;
    // u^p with the convention 0^0 = 1 and vanishing coefficient for p < 0.
    let pw = |p: i64| if p < 0 { 0.0 } else { u.powi(p as i32) };
    let n = n as i64;
    let h = pw(n - 1) / x;
    let dh = nm1 * pw(n - 2) * big_a / (x * x);
    let d2h = nm1 * big_a * ((nm1 - 1.0) * pw(n - 3) * big_a / (x * x * x) - pw(n - 2) / (x * x));
    [h, dh, d2h]
}

/// `[h̃, Dh̃, D²h̃]` with `h̃ = x^{-1} e^{-1/(mx)}`, `m = |μ|²`.
fn scaled_h(m_inv: f64, x: f64) -> [f64; 3] {
    let e = (-m_inv / x).exp();
    [
        e / x,
        e * m_inv / (x * x),
        e * (m_inv * m_inv / (x * x * x) - m_inv / (x * x)),
    ]
}

/// `k`-point correlation, `k = z.len() ∈ {1, 2}`, at points inside the unit disk.
pub fn cue_density(kind: CueKind, z: &[Complex64]) -> Result<f64> {
    let k = z.len();
    if !(1..=2).contains(&k) {
        return Err(invalid("points", format!("k must be 1 or 2, got {k}")));
    }
    if let Some(p) = z.iter().find(|p| !(p.norm() < 1.0)) {
        return Err(invalid("points", format!("need |z| < 1, got {p}")));
    }
    let pik = PI.powi(k as i32);
    let x: f64 = z.iter().map(|p| p.norm_sqr()).product();
    match kind {
        CueKind::Kac => {
            let e = |i: usize, j: usize| {
                let w = 1.0 - z[i] * z[j].conj();
                1.0 / (w * w)
            };
            let det = if k == 1 {
                e(0, 0)
            } else {
                e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)
            };
            Ok(det.re / pik)
        }
        CueKind::Finite { n, a } => {
            if n < 2 {
                return Err(invalid("N", "need N >= 2"));
            }
            let big_a = a.norm_sqr();
            if !(big_a < 1.0) {
                return Err(invalid("a", "need |a| < 1"));
            }
            if x < big_a {
                return Err(invalid(
                    "points",
                    format!("product of |z|² is {x}, below |a|² = {big_a}"),
                ));
            }
            let q = s_coefficients(kind, z);
            let hs = finite_h(n, big_a, x);
            let sum: f64 = q.iter().zip(hs).map(|(q, h)| q * h).sum();
            Ok((1.0 - big_a).powi(1 - n as i32) * sum / pik)
        }
        CueKind::Scaled { mu } => {
            if mu.norm() == 0.0 || mu.re.is_nan() || mu.im.is_nan() {
                return Err(invalid("mu", "must be nonzero"));
            }
            if x == 0.0 {
                // Essential singularity: the density vanishes to all orders.
                return Ok(0.0);
            }
            let m_inv = if mu.norm().is_finite() {
                1.0 / mu.norm_sqr()
            } else {
                0.0
            };
            let q = s_coefficients(kind, z);
            let hs = scaled_h(m_inv, x);
            let sum: f64 = q.iter().zip(hs).map(|(q, h)| q * h).sum();
            Ok(m_inv.exp() * sum / pik)
        }
    }
}
