//! Hastings–McLeod solution of `q'' = s q + 2 q³` and the Tracy–Widom laws.
//!
//! The boundary-value problem is discretized with Numerov's scheme and
//! solved by damped Newton iteration (tridiagonal Jacobian). Right boundary
//! `q = Ai`, left boundary the three-term asymptote of `√(-s/2)`.

use super::airy::{airy, airy_tail_integral};
use crate::error::{invalid, Error, Result};
use std::sync::OnceLock;

/// Tabulated transcendent with the integrals entering the soft-edge laws.
///
/// `i1 = ∫_s^∞ q`, `q0 = ∫_s^∞ q²`, `i2 = ∫_s^∞ (x - s) q²`.
#[derive(Clone, Debug)]
pub struct PainleveTable {
    pub s_grid: Vec<f64>,
    pub q: Vec<f64>,
    pub q_prime: Vec<f64>,
    pub i1: Vec<f64>,
    pub q0: Vec<f64>,
    pub i2: Vec<f64>,
    step: f64,
}

/// Interpolated values at one point.
#[derive(Clone, Copy, Debug)]
pub struct PainlevePoint {
    pub q: f64,
    pub q_prime: f64,
    pub i1: f64,
    pub q0: f64,
    pub i2: f64,
}

fn left_asymptote(s: f64) -> f64 {
    let s3 = s * s * s;
    (-s / 2.0).sqrt() * (1.0 + 1.0 / (8.0 * s3) - 73.0 / (128.0 * s3 * s3))
}

/// Solves `a_i x_{i-1} + b_i x_i + c_i x_{i+1} = d_i` in place (Thomas algorithm).
fn solve_tridiagonal(a: &[f64], b: &[f64], c: &[f64], d: &mut [f64]) -> Result<()> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut denom = b[0];
    if denom == 0.0 {
        return Err(Error::Singular);
    }
    cp[0] = c[0] / denom;
    d[0] /= denom;
    for i in 1..n {
        denom = b[i] - a[i] * cp[i - 1];
        if denom == 0.0 {
            return Err(Error::Singular);
        }
        cp[i] = c[i] / denom;
        d[i] = (d[i] - a[i] * d[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        d[i] -= cp[i] * d[i + 1];
    }
    Ok(())
}

fn numerov_residual(s: &[f64], y: &[f64], h: f64, out: &mut [f64]) -> f64 {
    let f = |i: usize| s[i] * y[i] + 2.0 * y[i].powi(3);
    let c = h * h / 12.0;
    let mut norm: f64 = 0.0;
    for i in 1..y.len() - 1 {
        let r = y[i + 1] - 2.0 * y[i] + y[i - 1] - c * (f(i + 1) + 10.0 * f(i) + f(i - 1));
        out[i - 1] = r;
        norm = norm.max(r.abs());
    }
    norm
}

/// Builds the table on `[s_min, s_max]` with spacing `step` (rounded so the
/// grid ends exactly at `s_max`).
pub fn hastings_mcleod(s_min: f64, s_max: f64, step: f64) -> Result<PainleveTable> {
    if !(s_max >= 8.0) {
        return Err(invalid("s_max", "must be at least 8"));
    }
    if !(s_min >= -12.0) || s_min >= s_max {
        return Err(invalid("s_min", "must lie in [-12, s_max)"));
    }
    if !(step > 0.0) || step > 0.05 {
        return Err(invalid("step", "must lie in (0, 0.05]"));
    }
    let n_int = ((s_max - s_min) / step).round() as usize;
    let h = (s_max - s_min) / n_int as f64;
    let n = n_int + 1;
    let s: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                s_max
            } else {
                s_min + i as f64 * h
            }
        })
        .collect();

    let mut y: Vec<f64> = s
        .iter()
        .map(|&x| {
            let a = airy(x).0;
            (a * a + (-x).max(0.0) / 2.0).sqrt()
        })
        .collect();
    y[n - 1] = airy(s_max).0;
    y[0] = if s_min <= -11.0 {
        left_asymptote(s_min)
    } else {
        // Shorter tables take their left value from the reference table.
        reference_table_value(s_min)?
    };

    let m = n - 2;
    let c = h * h / 12.0;
    let mut res = vec![0.0; m];
    let mut norm = numerov_residual(&s, &y, h, &mut res);
    let (mut lo, mut di, mut up) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    let mut converged = false;
    for _ in 0..100 {
        if norm < 1e-15 {
            converged = true;
            break;
        }
        let fp = |i: usize| s[i] + 6.0 * y[i] * y[i];
        for k in 0..m {
            let i = k + 1;
            lo[k] = 1.0 - c * fp(i - 1);
            di[k] = -2.0 - 10.0 * c * fp(i);
            up[k] = 1.0 - c * fp(i + 1);
        }
        let mut delta: Vec<f64> = res.iter().map(|r| -r).collect();
        solve_tridiagonal(&lo, &di, &up, &mut delta)?;
        let mut t = 1.0;
        let mut trial = y.clone();
        let mut trial_res = vec![0.0; m];
        loop {
            for k in 0..m {
                trial[k + 1] = y[k + 1] + t * delta[k];
            }
            let tn = numerov_residual(&s, &trial, h, &mut trial_res);
            if tn < norm || t < 1e-6 {
                let small_step = delta.iter().fold(0.0f64, |a, d| a.max(d.abs())) * t < 1e-15;
                y.copy_from_slice(&trial);
                res.copy_from_slice(&trial_res);
                norm = tn;
                if small_step {
                    converged = true;
                }
                break;
            }
            t *= 0.5;
        }
        if converged {
            break;
        }
    }
    if !converged && norm > 1e-13 {
        return Err(Error::NoConvergence {
            routine: "hastings_mcleod",
            iterations: 100,
        });
    }
    if y.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::NoConvergence {
            routine: "hastings_mcleod (left the positive branch)",
            iterations: 100,
        });
    }

    // q' by five-point stencils; one-sided at the two ends of each side.
    let mut qp = vec![0.0; n];
    for i in 0..n {
        qp[i] = if i >= 2 && i + 2 < n {
            (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h)
        } else if i < 2 {
            (-25.0 * y[i] + 48.0 * y[i + 1] - 36.0 * y[i + 2] + 16.0 * y[i + 3] - 3.0 * y[i + 4])
                / (12.0 * h)
        } else {
            (25.0 * y[i] - 48.0 * y[i - 1] + 36.0 * y[i - 2] - 16.0 * y[i - 3] + 3.0 * y[i - 4])
                / (12.0 * h)
        };
    }
    qp[n - 1] = airy(s_max).1;

    // Cumulative tail integrals by the endpoint-corrected trapezoid rule.
    let (a_s, ap_s) = airy(s_max);
    let mut i1 = vec![0.0; n];
    let mut q0 = vec![0.0; n];
    let mut q1 = vec![0.0; n];
    i1[n - 1] = airy_tail_integral(s_max);
    q0[n - 1] = ap_s * ap_s - s_max * a_s * a_s;
    q1[n - 1] = (s_max * ap_s * ap_s - s_max * s_max * a_s * a_s - a_s * ap_s) / 3.0;
    let panel = |f0: f64, f1: f64, d0: f64, d1: f64| h / 2.0 * (f0 + f1) + h * h / 12.0 * (d0 - d1);
    for i in (0..n - 1).rev() {
        let j = i + 1;
        i1[i] = i1[j] + panel(y[i], y[j], qp[i], qp[j]);
        let g = |k: usize| (y[k] * y[k], 2.0 * y[k] * qp[k]);
        let (g0, dg0) = g(i);
        let (g1, dg1) = g(j);
        q0[i] = q0[j] + panel(g0, g1, dg0, dg1);
        let xg = |k: usize| (s[k] * y[k] * y[k], y[k] * y[k] + 2.0 * s[k] * y[k] * qp[k]);
        let (x0, dx0) = xg(i);
        let (x1, dx1) = xg(j);
        q1[i] = q1[j] + panel(x0, x1, dx0, dx1);
    }
    let i2 = (0..n).map(|i| q1[i] - s[i] * q0[i]).collect();
    Ok(PainleveTable {
        s_grid: s,
        q: y,
        q_prime: qp,
        i1,
        q0,
        i2,
        step: h,
    })
}

fn reference_table_value(s: f64) -> Result<f64> {
    Ok(default_table().at(s)?.q)
}

/// Shared table on `[-12, 8]` with spacing `1/256`.
pub fn default_table() -> &'static PainleveTable {
    static TABLE: OnceLock<PainleveTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        hastings_mcleod(-12.0, 8.0, 1.0 / 256.0).expect("reference Hastings–McLeod table")
    })
}

fn hermite(h: f64, t: f64, f0: f64, f1: f64, d0: f64, d1: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * f0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * f1
        + (t3 - t2) * h * d1
}

impl PainleveTable {
    pub fn s_min(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn s_max(&self) -> f64 {
        *self.s_grid.last().expect("non-empty table")
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    /// Cubic Hermite interpolation of all tabulated quantities.
    pub fn at(&self, s: f64) -> Result<PainlevePoint> {
        let (lo, hi) = (self.s_min(), self.s_max());
        if !(s >= lo - 1e-12 && s <= hi + 1e-12) {
            return Err(Error::OutOfRange(format!("s = {s} outside [{lo}, {hi}]")));
        }
        let h = self.step;
        let k = (((s - lo) / h).floor() as usize).min(self.len() - 2);
        let t = ((s - self.s_grid[k]) / h).clamp(0.0, 1.0);
        let (a, b) = (k, k + 1);
        let q2 = |i: usize| self.s_grid[i] * self.q[i] + 2.0 * self.q[i].powi(3);
        Ok(PainlevePoint {
            q: hermite(h, t, self.q[a], self.q[b], self.q_prime[a], self.q_prime[b]),
            q_prime: hermite(h, t, self.q_prime[a], self.q_prime[b], q2(a), q2(b)),
            i1: hermite(h, t, self.i1[a], self.i1[b], -self.q[a], -self.q[b]),
            q0: hermite(
                h,
                t,
                self.q0[a],
                self.q0[b],
                -self.q[a].powi(2),
                -self.q[b].powi(2),
            ),
            i2: hermite(h, t, self.i2[a], self.i2[b], -self.q0[a], -self.q0[b]),
        })
    }

    /// Maximum of `|q'' - s q - 2 q³|` with a fourth-order second difference.
    pub fn ode_residual(&self) -> f64 {
        let h = self.step;
        let y = &self.q;
        let mut worst: f64 = 0.0;
        for i in 2..y.len() - 2 {
            let d2 = (-y[i - 2] + 16.0 * y[i - 1] - 30.0 * y[i] + 16.0 * y[i + 1] - y[i + 2])
                / (12.0 * h * h);
            worst = worst.max((d2 - self.s_grid[i] * y[i] - 2.0 * y[i].powi(3)).abs());
        }
        worst
    }
}

/// Soft-edge symmetry class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Beta {
    One,
    Two,
    Four,
}

impl Beta {
    pub fn from_u8(b: u8) -> Result<Self> {
        match b {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            _ => Err(invalid("beta", format!("must be 1, 2 or 4, got {b}"))),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Beta::One => 1.0,
            Beta::Two => 2.0,
            Beta::Four => 4.0,
        }
    }
}

/// `(cdf, pdf)` of the Tracy–Widom law. `E₁` uses `exp(-I1/2)`, the sign
/// consistent with `F_{2,0} = E₁²`.
pub fn tw_cdf_pdf(table: &PainleveTable, beta: Beta, s: f64) -> Result<(f64, f64)> {
    let p = table.at(s)?;
    let e2 = (-p.i2).exp();
    let r2 = e2.sqrt();
    Ok(match beta {
        Beta::Two => (e2, e2 * p.q0),
        Beta::One => {
            let e1 = r2 * (-p.i1 / 2.0).exp();
            (e1, e1 * (p.q0 + p.q) / 2.0)
        }
        Beta::Four => {
            let (ch, sh) = ((p.i1 / 2.0).cosh(), (p.i1 / 2.0).sinh());
            (r2 * ch, r2 * (p.q0 / 2.0 * ch - p.q / 2.0 * sh))
        }
    })
}

pub fn tw_cdf(table: &PainleveTable, beta: Beta, s: f64) -> Result<f64> {
    Ok(tw_cdf_pdf(table, beta, s)?.0)
}

/// Tabulated distribution function with optional density.
#[derive(Clone, Debug)]
pub struct DistributionCurve {
    pub s_grid: Vec<f64>,
    pub cdf: Vec<f64>,
    pub pdf: Option<Vec<f64>>,
}

impl DistributionCurve {
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.cdf.windows(2).all(|w| w[1] >= w[0] - slack)
    }
}

/// Tracy–Widom curve sampled on the table nodes in `[lo, hi]`.
pub fn tw_curve(table: &PainleveTable, beta: Beta, lo: f64, hi: f64) -> Result<DistributionCurve> {
    let mut s_grid = Vec::new();
    let mut cdf = Vec::new();
    let mut pdf = Vec::new();
    for &s in table.s_grid.iter().filter(|&&s| s >= lo && s <= hi) {
        let (c, p) = tw_cdf_pdf(table, beta, s)?;
        s_grid.push(s);
        cdf.push(c);
        pdf.push(p);
    }
    Ok(DistributionCurve {
        s_grid,
        cdf,
        pdf: Some(pdf),
    })
}
