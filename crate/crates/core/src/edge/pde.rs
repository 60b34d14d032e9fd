//! Residuals of the characterising PDEs.
//!
//! Soft edge, in `(x, w)`: `F_x + (2/β) F_ww + (x - w²) F_w = 0`.
//! Hard edge, in `(x, c)`:
//! `-x F_x + (2/β) c² F_cc + (((2/β)(a + 2) - 1) c - c² - x) F_c = 0`.

use crate::error::{invalid, Result};

/// Values `F(x_i, y_j)` on a uniform rectangular grid, `values[i * ny + j]`.
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn tabulate(
        x: Vec<f64>,
        y: Vec<f64>,
        mut f: impl FnMut(f64, f64) -> Result<f64>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(x.len() * y.len());
        for &a in &x {
            for &b in &y {
                values.push(f(a, b)?);
            }
        }
        Ok(Self { x, y, values })
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.y.len() + j]
    }
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn uniform_step(v: &[f64], name: &'static str) -> Result<f64> {
    if v.len() < 5 {
        return Err(invalid(name, "at least 5 points per axis are needed"));
    }
    let h = (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64;
    if !(h > 0.0)
        || v.windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0))
    {
        return Err(invalid(name, "grid must be ascending and uniformly spaced"));
    }
    Ok(h)
}

/// Which PDE to check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PdeKind {
    Soft,
    Hard { a: f64 },
}

/// Pointwise hard-edge residual from given derivatives.
#[allow(clippy::too_many_arguments)]
pub fn hard_residual_point(beta: f64, a: f64, x: f64, c: f64, fx: f64, fc: f64, fcc: f64) -> f64 {
    let k = 2.0 / beta;
    -x * fx + k * c * c * fcc + ((k * (a + 2.0) - 1.0) * c - c * c - x) * fc
}

/// Pointwise soft-edge residual from given derivatives.
pub fn soft_residual_point(beta: f64, x: f64, w: f64, fx: f64, fw: f64, fww: f64) -> f64 {
    fx + 2.0 / beta * fww + (x - w * w) * fw
}

/// Maximum absolute residual over interior nodes, with second-order
/// central differences.
pub fn pde_residual(kind: PdeKind, beta: f64, grid: &GridFunction) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(invalid("beta", "must be positive"));
    }
    let hx = uniform_step(&grid.x, "x grid")?;
    let hy = uniform_step(&grid.y, "second grid")?;
    if grid.values.len() != grid.x.len() * grid.y.len() {
        return Err(invalid(
            "values",
            "length must equal the product of the axis lengths",
        ));
    }
    let mut worst: f64 = 0.0;
    for i in 1..grid.x.len() - 1 {
        for j in 1..grid.y.len() - 1 {
            let fx = (grid.at(i + 1, j) - grid.at(i - 1, j)) / (2.0 * hx);
            let fy = (grid.at(i, j + 1) - grid.at(i, j - 1)) / (2.0 * hy);
            let fyy = (grid.at(i, j + 1) - 2.0 * grid.at(i, j) + grid.at(i, j - 1)) / (hy * hy);
            let (x, y) = (grid.x[i], grid.y[j]);
            let r = match kind {
                PdeKind::Soft => soft_residual_point(beta, x, y, fx, fy, fyy),
                PdeKind::Hard { a } => hard_residual_point(beta, a, x, y, fx, fy, fyy),
            };
            worst = worst.max(r.abs());
        }
    }
    Ok(worst)
}

/// Hard-edge residual of `exp(-(βx/2)(1/c + 1))` (the `a = 0` solution)
/// with exact derivatives, maximised over the given points.
pub fn hard_residual_a0_analytic(beta: f64, xs: &[f64], cs: &[f64]) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(invalid("beta", "must be positive"));
    }
    let mut worst: f64 = 0.0;
    for &x in xs {
        for &c in cs {
            if !(c > 0.0) || !(x >= 0.0) {
                return Err(invalid("grid", "need x >= 0 and c > 0"));
            }
            let f = (-(beta * x / 2.0) * (1.0 / c + 1.0)).exp();
            let fx = -(beta / 2.0) * (1.0 / c + 1.0) * f;
            let u = beta * x / (2.0 * c * c);
            let fc = u * f;
            let fcc = (u * u - beta * x / (c * c * c)) * f;
            worst = worst.max(hard_residual_point(beta, 0.0, x, c, fx, fc, fcc).abs());
        }
    }
    Ok(worst)
}
