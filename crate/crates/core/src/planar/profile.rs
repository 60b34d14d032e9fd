//! Bulk-scaled profiles of `A + iα e₁e₁ᵀ`: kernel, density, mean diagonal
//! overlap and the overlap distribution. Throughout `S(Y) = sinh(2Y)/(2Y)`.

use crate::error::{invalid, Result};
use crate::quad::{integrate_adaptive, GaussLegendre};
use crate::special::bessel_i01_scaled;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn check_g(g: f64) -> Result<()> {
    if !(g > 1.0) || !g.is_finite() {
        return Err(invalid("g", format!("need g > 1, got {g}")));
    }
    Ok(())
}

fn check_y(y: f64) -> Result<()> {
    if !(y >= 0.0) || !y.is_finite() {
        return Err(invalid("Y", format!("need Y >= 0, got {y}")));
    }
    Ok(())
}

/// `sinh(x)/x - 1`, accurate near zero.
fn sinhc_m1(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let q = x * x;
        let (mut t, mut s) = (q / 6.0, q / 6.0);
        for k in 2..12 {
            t *= q / ((2 * k) as f64 * (2 * k + 1) as f64);
            s += t;
        }
        s
    } else {
        x.sinh() / x - 1.0
    }
}

/// `(S, S')` at `Y`, with the small-`Y` series for the derivative.
fn s_and_derivative(y: f64) -> (f64, f64) {
    let x = 2.0 * y;
    let s = 1.0 + sinhc_m1(x);
    // S'(Y) = 2 d/dx [sinh x / x] = 2 (x cosh x - sinh x) / x².
    let ds = if x < 0.5 {
        let q = x * x;
        // d/dx Σ x^{2k}/(2k+1)! = Σ 2k x^{2k-1}/(2k+1)!.
        let (mut t, mut sum) = (x / 3.0, x / 3.0);
        for k in 2..12 {
            let kf = k as f64;
            t *= q * (2.0 * kf) / ((2.0 * kf - 2.0) * (2.0 * kf) * (2.0 * kf + 1.0));
            sum += t;
        }
        2.0 * sum
    } else {
        2.0 * (x * x.cosh() - x.sinh()) / (x * x)
    };
    (s, ds)
}

/// `e^{-2gY} S(Y)` and `e^{-2gY} S'(Y)` without intermediate overflow.
fn damped_s(g: f64, y: f64) -> (f64, f64) {
    if y < 20.0 {
        let (s, ds) = s_and_derivative(y);
        let e = (-2.0 * g * y).exp();
        return (e * s, e * ds);
    }
    let up = ((2.0 - 2.0 * g) * y).exp();
    let down = ((-2.0 - 2.0 * g) * y).exp();
    let sh = 0.5 * (up - down);
    let ch = 0.5 * (up + down);
    let x = 2.0 * y;
    (sh / x, 2.0 * (x * ch - sh) / (x * x))
}

/// Density profile in the `Y` direction, `e^{-2gY}(2g S - S')`; value `2g`
/// at the origin and unit mass on `(0, ∞)`.
pub fn rho_profile(g: f64, y: f64) -> Result<f64> {
    check_g(g)?;
    check_y(y)?;
    let (s, ds) = damped_s(g, y);
    Ok((2.0 * g * s - ds).max(0.0))
}

/// Distribution function of [`rho_profile`]: since `ρ = -d/dY (e^{-2gY} S)`,
/// the mass on `(0, Y)` is `1 - e^{-2gY} S(Y)`.
pub fn profile_cdf(g: f64, y: f64) -> Result<f64> {
    check_g(g)?;
    check_y(y)?;
    Ok(1.0 - damped_s(g, y).0)
}

/// Mean diagonal overlap `e^{-4gY} d/dY (e^{2gY} S) = e^{-2gY}(2g S + S')`.
pub fn mean_overlap(g: f64, y: f64) -> Result<f64> {
    check_g(g)?;
    check_y(y)?;
    let (s, ds) = damped_s(g, y);
    Ok(2.0 * g * s + ds)
}

fn kernel_rule() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| GaussLegendre::new(32))
}

/// `e^{-g(Y₁+Y₂)} ∫_{-1}^{1} (g+s) e^{is(Z₁ - Z̄₂)} ds` for `Im Z₁, Im Z₂ >= 0`.
pub fn kernel_planar(g: f64, z1: Complex64, z2: Complex64) -> Complex64 {
    debug_assert!(z1.im >= 0.0 && z2.im >= 0.0);
    let zeta = z1 - z2.conj();
    let (x, t) = (zeta.re, zeta.im);
    // e^{isζ} e^{-gT} = e^{isX} e^{-(g+s)T}, kept as one exponent.
    let phase = |s: f64| Complex64::from_polar((-(g + s) * t).exp(), s * x);
    if zeta.norm() <= 8.0 {
        let gl = kernel_rule();
        let mut acc = Complex64::new(0.0, 0.0);
        for (&s, &w) in gl.nodes.iter().zip(&gl.weights) {
            acc += phase(s) * (w * (g + s));
        }
        acc
    } else {
        // Antiderivative (g+s)e^{isζ}/(iζ) + e^{isζ}/ζ².
        let i = Complex64::new(0.0, 1.0);
        let f = |s: f64| phase(s) * ((g + s) / (i * zeta) + 1.0 / (zeta * zeta));
        f(1.0) - f(-1.0)
    }
}

/// Distribution of `t = O_nn - 1` at height `Y`:
/// `(16/t³) e^{-2gY} 𝕃₂[Y² e^{-aY} I₀(κY)]` with `a = 2g(1 + 2/t)` and
/// `κ = (4/t)√((g²-1)(1+t))`, where
/// `𝕃₂h = (1 + S²)h + (1 - S₄)h'/(2Y) + (S² - 1)h''/4`, `S₄ = sinh(4Y)/(4Y)`.
pub fn overlap_pdf(g: f64, y: f64, t: f64) -> Result<f64> {
    check_g(g)?;
    if !(y > 0.0) || !y.is_finite() {
        return Err(invalid("Y", format!("need Y > 0, got {y}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid("t", format!("need t > 0, got {t}")));
    }
    let a = 2.0 * g * (1.0 + 2.0 / t);
    let kappa = 4.0 / t * ((g * g - 1.0) * (1.0 + t)).sqrt();
    let (i0, i1) = bessel_i01_scaled(kappa * y);
    // I₀'' = I₀ - I₁/z; at z = 0 the ratio I₁/z is 1/2.
    let z = kappa * y;
    let i1_over_z = if z < 1e-8 { 0.5 * (-z).exp() } else { i1 / z };
    // Common factor e^{-2gY} e^{(κ-a)Y} taken out of f, f', f''.
    let lead = ((kappa - a - 2.0 * g) * y).exp();
    if lead == 0.0 {
        return Ok(0.0);
    }
    let f = i0;
    let fp = -a * i0 + kappa * i1;
    let fpp = a * a * i0 - 2.0 * a * kappa * i1 + kappa * kappa * (i0 - i1_over_z);
    let h = y * y * f;
    let hp = 2.0 * y * f + y * y * fp;
    let hpp = 2.0 * f + 4.0 * y * fp + y * y * fpp;
    let s2m1 = {
        let s = sinhc_m1(2.0 * y);
        s * (2.0 + s)
    };
    let s4m1 = sinhc_m1(4.0 * y);
    let l = (2.0 + s2m1) * h - s4m1 / (2.0 * y) * hp + 0.25 * s2m1 * hpp;
    Ok((16.0 / (t * t * t) * lead * l).max(0.0))
}

/// `(∫P dt, ∫(1+t)P dt)` over `t > 0` for [`overlap_pdf`]: log-spaced
/// adaptive quadrature up to `t = 10⁴` plus the analytic `C/t³` tail,
/// with `C` read off at the cut.
pub fn overlap_pdf_moments(g: f64, y: f64) -> Result<(f64, f64)> {
    overlap_pdf(g, y, 1.0)?;
    let cut: f64 = 1e4;
    let p = |t: f64| overlap_pdf(g, y, t).unwrap_or(0.0);
    let lo = -12.0;
    let m0 = integrate_adaptive(|u| u.exp() * p(u.exp()), lo, cut.ln(), 1e-12)?;
    let m1 = integrate_adaptive(
        |u| {
            let t = u.exp();
            t * (1.0 + t) * p(t)
        },
        lo,
        cut.ln(),
        1e-12,
    )?;
    let c = cut.powi(3) * p(cut);
    Ok((
        m0 + c / (2.0 * cut * cut),
        m1 + c / cut + c / (2.0 * cut * cut),
    ))
}

/// `∫dX₂ ∫_0^∞ dY₂ K(Z₁, Z₂) K(Z₂, Z₃)` by Gauss–Legendre panels, with the
/// `X₂` range cut at `R ∈ {64π, 128π, 256π}` and Richardson-extrapolated in
/// `1/R` (at multiples of π the oscillating tail terms are also powers of `1/R`).
pub fn kernel_reproduction(g: f64, z1: Complex64, z3: Complex64) -> Result<Complex64> {
    check_g(g)?;
    if !(z1.im >= 0.0) || !(z3.im >= 0.0) {
        return Err(invalid(
            "Z",
            "points must lie in the closed upper half plane",
        ));
    }
    let gl = GaussLegendre::new(16);
    let gy = GaussLegendre::new(24);
    // Y₂ panels doubling in width until e^{-2(g-1)Y₂} is negligible.
    let y_max = 40.0 / (g - 1.0);
    let mut ys = Vec::new();
    let (mut lo, mut width) = (0.0, 0.5);
    while lo < y_max {
        let (x, w) = gy.on_interval(lo, lo + width);
        ys.extend(x.into_iter().zip(w));
        lo += width;
        width *= 2.0;
    }
    let shell = |a: f64, b: f64| -> Complex64 {
        let panels = ((b - a) / 0.5).ceil() as usize;
        let h = (b - a) / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let (xs, wx) = gl.on_interval(a + p as f64 * h, a + (p + 1) as f64 * h);
            for (&x2, &wx) in xs.iter().zip(&wx) {
                for &(y2, wy) in &ys {
                    let z2 = Complex64::new(x2, y2);
                    acc += kernel_planar(g, z1, z2) * kernel_planar(g, z2, z3) * (wx * wy);
                }
            }
        }
        acc
    };
    let centre = 0.5 * (z1.re + z3.re);
    let radii = [64.0 * PI, 128.0 * PI, 256.0 * PI];
    let mut partial = Vec::with_capacity(3);
    let mut total = shell(centre - radii[0], centre + radii[0]);
    partial.push(total);
    for k in 1..3 {
        total += shell(centre - radii[k], centre - radii[k - 1])
            + shell(centre + radii[k - 1], centre + radii[k]);
        partial.push(total);
    }
    let j1 = partial[1] * 2.0 - partial[0];
    let j2 = partial[2] * 2.0 - partial[1];
    Ok((j2 * 4.0 - j1) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_to_infinity;

    #[test]
    fn profile_origin_and_normalization() {
        for g in [1.25, 2.5] {
            assert!((rho_profile(g, 0.0).unwrap() - 2.0 * g).abs() < 1e-14);
            // Slope at the origin is O(g²).
            assert!((rho_profile(g, 1e-6).unwrap() - 2.0 * g).abs() < 1e-5 * g * g);
            let m = integrate_to_infinity(|y| rho_profile(g, y).unwrap(), 0.0, 1e-12).unwrap();
            assert!((m - 1.0).abs() < 1e-8, "g={g}: {m}");
        }
        assert!(rho_profile(1.0, 0.5).is_err());
        assert!(rho_profile(2.0, -0.1).is_err());
    }

    #[test]
    fn profile_cdf_integrates_density() {
        for g in [1.25, 2.5] {
            for y in [0.0, 0.1, 0.7, 3.0, 25.0] {
                let m = integrate_adaptive(|u| rho_profile(g, u).unwrap(), 0.0, y, 1e-13).unwrap();
                assert!(
                    (profile_cdf(g, y).unwrap() - m).abs() < 1e-11,
                    "g={g} y={y}"
                );
            }
        }
    }

    #[test]
    fn profile_decay_rate() {
        for g in [1.25, 2.5] {
            // Log-slope, taken where the 1/Y prefactor correction is below 1%.
            let y = 150.0 / (g - 1.0);
            let r = (rho_profile(g, y + 1.0).unwrap() / rho_profile(g, y).unwrap()).ln();
            assert!((r / (2.0 - 2.0 * g) - 1.0).abs() < 0.01, "g={g}: {r}");
        }
    }

    #[test]
    fn series_branches_continuous() {
        for x in [0.5 - 1e-12, 0.5 + 1e-12] {
            let (s, ds) = s_and_derivative(x / 2.0);
            let (s0, ds0) = s_and_derivative(0.25);
            assert!((s - s0).abs() < 1e-11 && (ds - ds0).abs() < 1e-11);
        }
        let (s, ds) = s_and_derivative(0.0);
        assert_eq!((s, ds), (1.0, 0.0));
        let a = damped_s(1.5, 20.0 - 1e-12);
        let b = damped_s(1.5, 20.0);
        assert!((a.0 - b.0).abs() < 1e-22 && (a.1 - b.1).abs() < 1e-22);
    }

    #[test]
    fn kernel_diagonal_is_profile() {
        for g in [1.25, 2.5, 7.0] {
            for y in [0.0, 0.05, 0.7, 3.0, 6.0] {
                let k = kernel_planar(g, Complex64::new(0.4, y), Complex64::new(0.4, y));
                assert!(k.im.abs() < 1e-12);
                assert!(
                    (k.re - rho_profile(g, y).unwrap()).abs() < 1e-10,
                    "g={g} y={y}"
                );
            }
        }
    }

    #[test]
    fn kernel_branches_agree_and_hermitian() {
        let g = 1.7;
        let z1 = Complex64::new(1.0, 0.3);
        // |ζ| straddles the switch at 8.
        for dx in [7.9, 8.1, 12.0] {
            let z2 = Complex64::new(1.0 - dx, 0.2);
            let zeta = z1 - z2.conj();
            let quad: Complex64 = {
                let gl = GaussLegendre::new(80);
                let i = Complex64::new(0.0, 1.0);
                gl.nodes
                    .iter()
                    .zip(&gl.weights)
                    .map(|(&s, &w)| (i * s * zeta).exp() * (w * (g + s)))
                    .sum::<Complex64>()
                    * (-g * (z1.im + z2.im)).exp()
            };
            let k = kernel_planar(g, z1, z2);
            assert!((k - quad).norm() < 1e-13, "dx={dx}");
            assert!((k - kernel_planar(g, z2, z1).conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn reproducing_up_to_pi() {
        // The double integral returns π K; K/π is the reproducing kernel.
        for (g, z1, z3) in [
            (1.25, Complex64::new(0.3, 0.2), Complex64::new(-0.5, 0.7)),
            (2.5, Complex64::new(0.0, 0.1), Complex64::new(1.5, 0.05)),
        ] {
            let r = kernel_reproduction(g, z1, z3).unwrap() / PI;
            let k = kernel_planar(g, z1, z3);
            assert!((r - k).norm() < 1e-6, "g={g}: {r} vs {k}");
        }
    }

    #[test]
    fn sine_kernel_degeneration() {
        // For g → ∞ on the real axis K ≈ 2g sin(X)/X.
        let g = 1e6;
        for x in [0.3, 1.1, 2.0, 4.4, 9.0] {
            let k = kernel_planar(g, Complex64::new(x, 0.0), Complex64::new(0.0, 0.0));
            let r = k.re / (2.0 * g * x.sin() / x);
            assert!((r - 1.0).abs() < 1e-5, "x={x}: {r}");
        }
    }

    #[test]
    fn overlap_origin_and_lower_bound() {
        for g in [1.25, 2.5] {
            assert!((mean_overlap(g, 0.0).unwrap() - rho_profile(g, 0.0).unwrap()).abs() < 1e-14);
            for k in 0..60 {
                let y = 0.1 * k as f64;
                assert!(mean_overlap(g, y).unwrap() >= rho_profile(g, y).unwrap());
            }
        }
    }

    #[test]
    fn overlap_pdf_tail_is_cubic() {
        for (g, y) in [(1.25, 0.3), (2.5, 0.5)] {
            let a = 1e3f64.powi(3) * overlap_pdf(g, y, 1e3).unwrap();
            let b = 1e4f64.powi(3) * overlap_pdf(g, y, 1e4).unwrap();
            assert!(a > 0.0 && (a / b - 1.0).abs() < 0.01, "g={g}: {a} {b}");
        }
        assert!(overlap_pdf(2.0, 0.0, 1.0).is_err());
        assert!(overlap_pdf(2.0, 0.5, 0.0).is_err());
        assert_eq!(bessel_i01_scaled(0.0), (1.0, 0.0));
    }

    #[test]
    fn overlap_pdf_moments_match_profiles() {
        // Zeroth moment is the density, first moment the mean overlap.
        for (g, y) in [(1.25, 0.3), (2.5, 0.5), (1.5, 1.0), (2.0, 0.05)] {
            let (m0, m1) = overlap_pdf_moments(g, y).unwrap();
            let (rho, o) = (rho_profile(g, y).unwrap(), mean_overlap(g, y).unwrap());
            assert!((m0 / rho - 1.0).abs() < 1e-6, "g={g} y={y}: {m0} {rho}");
            assert!((m1 / o - 1.0).abs() < 1e-6, "g={g} y={y}: {m1} {o}");
        }
    }
}
