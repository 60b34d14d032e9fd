//! Deformed Airy kernel `K_Ai(x, y) + Ai(y) ∫_{-∞}^x e^{-w(x-t)} Ai(t) dt`
//! and the Fredholm determinant `det(I - K)` on `(s, ∞)`.

use super::airy::{airy, airy_tail_integral};
use crate::error::{invalid, Result};
use crate::matrix::DenseMatrix;
use crate::quad::GaussLegendre;
use crate::RMatrix;
use std::sync::OnceLock;

fn panel_rule() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(16))
}

/// Undeformed Airy kernel; the diagonal is `Ai'(x)² - x Ai(x)²`.
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    let (ax, dx) = airy(x);
    let (ay, dy) = airy(y);
    airy_kernel_from(x, ax, dx, y, ay, dy)
}

fn airy_kernel_from(x: f64, ax: f64, dx: f64, y: f64, ay: f64, dy: f64) -> f64 {
    let d = x - y;
    if d.abs() < 1e-7 {
        // Second-order accurate midpoint evaluation of the diagonal formula.
        let m = 0.5 * (x + y);
        let (am, dm) = airy(m);
        return dm * dm - m * am * am;
    }
    (ax * dy - ay * dx) / d
}

/// `J(x, w) = ∫_{-∞}^x e^{-w(x-t)} Ai(t) dt` for `w >= 0`.
pub fn deformed_tail(x: f64, w: f64) -> Result<f64> {
    if !(w >= 0.0) {
        return Err(invalid(
            "w",
            "the deformed kernel is defined for w >= 0 only",
        ));
    }
    if w == 0.0 {
        return Ok(1.0 - airy_tail_integral(x));
    }
    let gl = panel_rule();
    let lead = w * w * w / 3.0 - w * x;
    if w < 0.5 && lead < 8.0 {
        // J = e^{w³/3 - wx} - ∫_x^∞ e^{w(t-x)} Ai(t) dt; used only for small w,
        // where the direct form below would need a long range.
        let width = 0.5;
        let mut a = x;
        let mut tail = 0.0;
        loop {
            let part = gl.integrate(a, a + width, |t| (w * (t - x)).exp() * airy(t).0);
            tail += part;
            a += width;
            let edge = (w * (a - x)).exp() * airy(a).0;
            if a > w * w && edge.abs() < 1e-20 * (1.0 + tail.abs()) {
                break;
            }
        }
        Ok(lead.exp() - tail)
    } else {
        // Direct form ∫_0^∞ e^{-wu} Ai(x - u) du; |Ai| <= 1 bounds the truncation.
        let width = (2.0 / w).min(0.5);
        let mut u = 0.0;
        let mut total = 0.0;
        while w * u < 50.0 {
            total += gl.integrate(u, u + width, |v| (-w * v).exp() * airy(x - v).0);
            u += width;
        }
        Ok(total)
    }
}

/// `K^{soft,c}(x, y; w)`.
pub fn deformed_airy_kernel(x: f64, y: f64, w: f64) -> Result<f64> {
    let j = deformed_tail(x, w)?;
    Ok(airy_kernel(x, y) + airy(y).0 * j)
}

/// Nyström discretization parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FredholmConfig {
    pub quad_order: usize,
    pub domain_length: f64,
}

impl Default for FredholmConfig {
    fn default() -> Self {
        Self {
            quad_order: 64,
            domain_length: 12.0,
        }
    }
}

impl FredholmConfig {
    pub fn new(quad_order: usize, domain_length: f64) -> Result<Self> {
        let c = Self {
            quad_order,
            domain_length,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.quad_order < 8 {
            return Err(invalid("quad_order", "must be at least 8"));
        }
        if !(self.domain_length >= 6.0) {
            return Err(invalid("domain_length", "must be at least 6"));
        }
        Ok(())
    }
}

/// `det(I - K)` for the deformed kernel on `(s, s + L)`, Gauss–Legendre
/// Nyström with square-root weight symmetrization.
pub fn fredholm_f2w(w: f64, s: f64, cfg: &FredholmConfig) -> Result<f64> {
    cfg.validate()?;
    if !(w >= 0.0) {
        return Err(invalid("w", "must be non-negative"));
    }
    let gl = GaussLegendre::new(cfg.quad_order);
    let (x, wt) = gl.on_interval(s, s + cfg.domain_length);
    let m = x.len();
    let ai: Vec<(f64, f64)> = x.iter().map(|&v| airy(v)).collect();
    let tails = x
        .iter()
        .map(|&v| deformed_tail(v, w))
        .collect::<Result<Vec<f64>>>()?;
    let sw: Vec<f64> = wt.iter().map(|v| v.sqrt()).collect();
    let a: RMatrix = DenseMatrix::from_fn(m, m, |i, j| {
        let k =
            airy_kernel_from(x[i], ai[i].0, ai[i].1, x[j], ai[j].0, ai[j].1) + ai[j].0 * tails[i];
        let id = if i == j { 1.0 } else { 0.0 };
        id - sw[i] * k * sw[j]
    });
    match a.lu() {
        Ok(lu) => Ok(lu.determinant().clamp(0.0, 1.0)),
        Err(crate::Error::Singular) => Ok(0.0),
        Err(e) => Err(e),
    }
}
