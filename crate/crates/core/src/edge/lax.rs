//! Lax-pair propagation in `w` and the critical-regime distributions
//! `F_{2,w}` and `F_{4,w}`.
//!
//! `∂_w (f, g) = [[q², -wq - q'], [-wq + q', w² - s - q²]] (f, g)` from
//! `f = g = E(s) = exp(-∫_s^∞ q)` at `w = 0`, integrated by classical RK4.
//!
//! The sought solution is the decaying mode of a system whose other mode
//! grows like `exp(w³/3 - sw)`, so forward propagation is reliable only for
//! moderate `w` (about `w <= 3` on `s >= -8`). Propagation reports an error
//! once `F₂` leaves `[0, 1]`.

use super::painleve::PainleveTable;
use crate::error::{invalid, Error, Result};

/// `f`, `g` on a rectangular `(s, w)` grid, stored row-major by `s`.
#[derive(Clone, Debug)]
pub struct LaxField {
    pub s_grid: Vec<f64>,
    pub w_grid: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    /// `E(s)` and `E₂(s)` at the `s` nodes.
    pub e: Vec<f64>,
    pub e2: Vec<f64>,
}

/// Propagation settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaxOptions {
    pub s_min: f64,
    pub s_max: f64,
    /// Keep every `s_stride`-th node of the Painlevé table.
    pub s_stride: usize,
    pub w_max: f64,
    pub dw: f64,
    /// Spacing of the stored `w` slices (rounded to a multiple of `dw`).
    pub w_store: f64,
}

impl LaxOptions {
    pub fn new(w_max: f64, dw: f64) -> Self {
        Self {
            s_min: f64::NEG_INFINITY,
            s_max: f64::INFINITY,
            s_stride: 1,
            w_max,
            dw,
            w_store: 0.01,
        }
    }

    pub fn s_range(mut self, lo: f64, hi: f64) -> Self {
        self.s_min = lo;
        self.s_max = hi;
        self
    }

    pub fn s_stride(mut self, k: usize) -> Self {
        self.s_stride = k.max(1);
        self
    }

    pub fn w_store(mut self, h: f64) -> Self {
        self.w_store = h;
        self
    }
}

/// Integrates the Lax system over `[0, w_max]` for every table node in range.
pub fn lax_propagate(table: &PainleveTable, w_max: f64, dw: f64) -> Result<LaxField> {
    lax_propagate_with(table, &LaxOptions::new(w_max, dw))
}

pub fn lax_propagate_with(table: &PainleveTable, opt: &LaxOptions) -> Result<LaxField> {
    if !(opt.w_max > 0.0) {
        return Err(invalid("w_max", "must be positive"));
    }
    if !(opt.dw > 0.0) || opt.dw > 1e-3 {
        return Err(invalid("dw", "must lie in (0, 1e-3]"));
    }
    let steps = (opt.w_max / opt.dw).ceil() as usize;
    let h = opt.w_max / steps as f64;
    let every = ((opt.w_store / h).round() as usize).clamp(1, steps);
    let mut w_grid: Vec<f64> = (0..=steps).step_by(every).map(|k| k as f64 * h).collect();
    if steps % every != 0 {
        w_grid.push(opt.w_max);
    }
    let idx: Vec<usize> = (0..table.len())
        .filter(|&i| table.s_grid[i] >= opt.s_min - 1e-12 && table.s_grid[i] <= opt.s_max + 1e-12)
        .step_by(opt.s_stride.max(1))
        .collect();
    if idx.len() < 2 {
        return Err(invalid("s_range", "fewer than two table nodes in range"));
    }
    let nw = w_grid.len();
    let mut f = Vec::with_capacity(idx.len() * nw);
    let mut g = Vec::with_capacity(idx.len() * nw);
    let mut e = Vec::with_capacity(idx.len());
    let mut e2 = Vec::with_capacity(idx.len());
    for &i in &idx {
        let s = table.s_grid[i];
        let q = table.q[i];
        let qp = table.q_prime[i];
        let e0 = (-table.i1[i]).exp();
        e.push(e0);
        e2.push((-table.i2[i]).exp());
        let rhs = |w: f64, y: [f64; 2]| -> [f64; 2] {
            [
                q * q * y[0] + (-w * q - qp) * y[1],
                (-w * q + qp) * y[0] + (w * w - s - q * q) * y[1],
            ]
        };
        let mut y = [e0, e0];
        f.push(y[0]);
        g.push(y[1]);
        for k in 0..steps {
            let w = k as f64 * h;
            let k1 = rhs(w, y);
            let k2 = rhs(
                w + h / 2.0,
                [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]],
            );
            let k3 = rhs(
                w + h / 2.0,
                [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]],
            );
            let k4 = rhs(w + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for c in 0..2 {
                y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
            }
            if !(y[0].is_finite() && y[1].is_finite()) {
                return Err(Error::OutOfRange(format!(
                    "Lax system overflowed at s = {s}, w = {}; shrink the s range or w_max",
                    w + h
                )));
            }
            if (k + 1) % every == 0 || k + 1 == steps {
                // The physical solution is subdominant; once the growing mode
                // takes over, F₂ = f E₂ leaves [0, 1].
                let f2 = y[0] * e2[e2.len() - 1];
                if !(-1e-6..=1.0 + 1e-6).contains(&f2) {
                    return Err(Error::OutOfRange(format!(
                        "Lax propagation lost stability at s = {s}, w = {:.3}; reduce w_max (the Fredholm route covers large w)",
                        (k + 1) as f64 * h
                    )));
                }
                f.push(y[0]);
                g.push(y[1]);
            }
        }
    }
    let s_grid = idx.iter().map(|&i| table.s_grid[i]).collect();
    Ok(LaxField {
        s_grid,
        w_grid,
        f,
        g,
        e,
        e2,
    })
}

/// Four-point Lagrange stencil around `x` on a (possibly non-uniform)
/// ascending grid: returns the start index and the weights.
fn stencil(grid: &[f64], x: f64) -> (usize, [f64; 4]) {
    let n = grid.len();
    let k = match grid.binary_search_by(|v| v.total_cmp(&x)) {
        Ok(i) => i,
        Err(i) => i.saturating_sub(1),
    }
    .min(n - 2);
    if n < 4 {
        let t = (x - grid[k]) / (grid[k + 1] - grid[k]);
        return (k, [1.0 - t, t, 0.0, 0.0]);
    }
    let start = k.saturating_sub(1).min(n - 4);
    let xs = &grid[start..start + 4];
    let mut wts = [0.0; 4];
    for (j, wj) in wts.iter_mut().enumerate() {
        let mut p = 1.0;
        for (m, &xm) in xs.iter().enumerate() {
            if m != j {
                p *= (x - xm) / (xs[j] - xm);
            }
        }
        *wj = p;
    }
    (start, wts)
}

impl LaxField {
    fn check(&self, s: f64, w: f64) -> Result<()> {
        let (s0, s1) = (self.s_grid[0], *self.s_grid.last().expect("non-empty"));
        let (w0, w1) = (self.w_grid[0], *self.w_grid.last().expect("non-empty"));
        if !(s >= s0 - 1e-12 && s <= s1 + 1e-12 && w >= w0 - 1e-12 && w <= w1 + 1e-12) {
            return Err(Error::OutOfRange(format!(
                "(s, w) = ({s}, {w}) outside [{s0}, {s1}] x [{w0}, {w1}]"
            )));
        }
        Ok(())
    }

    fn interp(&self, data: &[f64], s: f64, w: f64) -> f64 {
        let nw = self.w_grid.len();
        let (si, sw) = stencil(&self.s_grid, s);
        let (wi, ww) = stencil(&self.w_grid, w);
        let mut acc = 0.0;
        for (a, &ca) in sw.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in ww.iter().enumerate() {
                if cb != 0.0 {
                    acc += ca * cb * data[(si + a) * nw + wi + b];
                }
            }
        }
        acc
    }

    fn interp_s(&self, data: &[f64], s: f64) -> f64 {
        let (si, sw) = stencil(&self.s_grid, s);
        sw.iter()
            .enumerate()
            .filter(|(_, &c)| c != 0.0)
            .map(|(a, &c)| c * data[si + a])
            .sum()
    }

    /// `(f, g)` at `(s, w)`; exact at grid nodes.
    pub fn at(&self, s: f64, w: f64) -> Result<(f64, f64)> {
        self.check(s, w)?;
        Ok((self.interp(&self.f, s, w), self.interp(&self.g, s, w)))
    }

    /// `(E(s), E₂(s))`.
    pub fn e_values(&self, s: f64) -> Result<(f64, f64)> {
        self.check(s, self.w_grid[0])?;
        Ok((self.interp_s(&self.e, s), self.interp_s(&self.e2, s)))
    }

    pub fn node(&self, i_s: usize, i_w: usize) -> (f64, f64) {
        let k = i_s * self.w_grid.len() + i_w;
        (self.f[k], self.g[k])
    }
}

/// `F_{β,w}(s)` for `β ∈ {2, 4}`.
pub fn crit_cdf(field: &LaxField, beta: u8, w: f64, s: f64) -> Result<f64> {
    let (f, g) = field.at(s, w)?;
    let (e, e2) = field.e_values(s)?;
    match beta {
        2 => Ok(f * e2),
        4 => Ok(0.5 * ((f + g) / e.sqrt() + (f - g) * e.sqrt()) * e2.sqrt()),
        _ => Err(invalid(
            "beta",
            format!("critical distributions need beta in {{2, 4}}, got {beta}"),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::kernel::{fredholm_f2w, FredholmConfig};
    use crate::edge::painleve::{default_table, tw_cdf, Beta};
    use std::sync::OnceLock;

    fn field() -> &'static LaxField {
        static F: OnceLock<LaxField> = OnceLock::new();
        F.get_or_init(|| {
            lax_propagate_with(
                default_table(),
                &LaxOptions::new(3.0, 1e-3).s_range(-8.0, 4.0),
            )
            .unwrap()
        })
    }

    #[test]
    fn initial_slice_is_e() {
        let fl = field();
        for i in 0..fl.s_grid.len() {
            let (f, g) = fl.node(i, 0);
            assert!((f - fl.e[i]).abs() < 1e-10 && (g - fl.e[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn w_zero_identities() {
        let fl = field();
        let t = default_table();
        for s in [-6.0, -3.3, -1.0, 0.0, 2.5] {
            let e1 = tw_cdf(t, Beta::One, s).unwrap();
            assert!((crit_cdf(fl, 2, 0.0, s).unwrap() - e1 * e1).abs() < 1e-8);
            assert!((crit_cdf(fl, 4, 0.0, s).unwrap() - e1).abs() < 1e-8);
        }
    }

    #[test]
    fn step_halving() {
        let t = default_table();
        let a = lax_propagate_with(
            t,
            &LaxOptions::new(2.0, 1e-3).s_range(-4.0, 1.0).s_stride(64),
        )
        .unwrap();
        let b = lax_propagate_with(
            t,
            &LaxOptions::new(2.0, 5e-4).s_range(-4.0, 1.0).s_stride(64),
        )
        .unwrap();
        let worst =
            a.f.iter()
                .zip(&b.f)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn matches_fredholm() {
        let fl = field();
        let cfg = FredholmConfig::default();
        for w in [0.0, 0.5, 1.0, 2.0] {
            for k in 0..=8 {
                let s = -6.0 + k as f64;
                let a = crit_cdf(fl, 2, w, s).unwrap();
                let b = fredholm_f2w(w, s, &cfg).unwrap();
                assert!((a - b).abs() < 1e-3, "w={w} s={s}: lax {a} fredholm {b}");
            }
        }
    }

    #[test]
    fn rejects_out_of_grid() {
        let fl = field();
        assert!(crit_cdf(fl, 2, 3.5, 0.0).is_err());
        assert!(crit_cdf(fl, 2, 1.0, 5.0).is_err());
        assert!(crit_cdf(fl, 3, 1.0, 0.0).is_err());
        assert!(lax_propagate(default_table(), 1.0, 0.01).is_err());
        let far = LaxOptions::new(8.0, 1e-3).s_range(-6.0, 2.0).s_stride(64);
        assert!(matches!(
            lax_propagate_with(default_table(), &far),
            Err(Error::OutOfRange(_))
        ));
    }
}
