//! Airy function `Ai` and its derivative.
//!
//! Three regimes: Taylor expansion about integer anchors on `[-12, 2.1)`,
//! the modified Bessel representation via Steed's continued fraction for
//! `x >= 2.1`, and the oscillatory asymptotic expansion for `x < -12`.

use crate::quad::GaussLegendre;
use std::f64::consts::PI;
use std::sync::OnceLock;

const AI0: f64 = 0.355_028_053_887_817_239;
const AIP0: f64 = -0.258_819_403_792_806_798;
const ANCHOR_MIN: i32 = -12;
const ANCHOR_MAX: i32 = 3;
const BESSEL_SWITCH: f64 = 2.1;
const ASYMPTOTIC_SWITCH: f64 = -12.0;

/// Sums the Taylor series of the Airy ODE solution with `(y, y')` at `x0`,
/// evaluated at `x0 + t`.
fn taylor_step(x0: f64, y: f64, yp: f64, t: f64) -> (f64, f64) {
    // y'' = x y, so (k+2)(k+1) a_{k+2} = x0 a_k + a_{k-1}.
    let (mut am1, mut a0, mut a1) = (0.0, y, yp);
    let mut val = a0 + a1 * t;
    let mut der = a1;
    let mut tk = t; // t^k for the current a_{k+1} term
    let mut quiet = 0;
    for k in 0..400 {
        let kf = k as f64;
        let a2 = (x0 * a0 + am1) / ((kf + 2.0) * (kf + 1.0));
        let dv = a2 * tk * t;
        let dd = (kf + 2.0) * a2 * tk;
        val += dv;
        der += dd;
        tk *= t;
        am1 = a0;
        a0 = a1;
        a1 = a2;
        if dv.abs() <= 1e-18 * val.abs().max(1e-300) && dd.abs() <= 1e-18 * der.abs().max(1e-300) {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (val, der)
}

/// Values at the integer anchors `ANCHOR_MIN..=ANCHOR_MAX`, built by
/// stepping outward from the origin in steps of `1/8`.
fn anchors() -> &'static Vec<(f64, f64)> {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let count = (ANCHOR_MAX - ANCHOR_MIN + 1) as usize;
        let mut out = vec![(0.0, 0.0); count];
        let zero = (-ANCHOR_MIN) as usize;
        out[zero] = (AI0, AIP0);
        let h = 0.125;
        for dir in [-1.0f64, 1.0] {
            let (mut x, mut y, mut yp) = (0.0, AI0, AIP0);
            let last = if dir < 0.0 { -ANCHOR_MIN } else { ANCHOR_MAX };
            for k in 1..=last {
                for _ in 0..8 {
                    (y, yp) = taylor_step(x, y, yp, dir * h);
                    x += dir * h;
                }
                let idx = (zero as i64 + (dir as i64) * k as i64) as usize;
                out[idx] = (y, yp);
            }
        }
        // Positive anchors are recomputed from the decaying representation,
        // which avoids the growth of the Bi component when stepping right.
        for k in 2..=ANCHOR_MAX {
            out[(k - ANCHOR_MIN) as usize] = airy_bessel(k as f64);
        }
        out
    })
}

/// `K_ν(x)` and `K_{ν+1}(x)` for `|ν| <= 1/2`, `x >= 2`, by Steed's CF2.
fn bessel_k_pair(nu: f64, x: f64) -> (f64, f64) {
    let mu2 = nu * nu;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu2;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k_nu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k_nu1 = k_nu * (nu + x + 0.5 - h) / x;
    (k_nu, k_nu1)
}

fn airy_bessel(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (k13, k43) = bessel_k_pair(1.0 / 3.0, zeta);
    let k23 = k43 - 2.0 / (3.0 * zeta) * k13;
    let ai = (x / 3.0).sqrt() * k13 / PI;
    let aip = -x / (PI * 3f64.sqrt()) * k23;
    (ai, aip)
}

fn airy_oscillatory(x: f64) -> (f64, f64) {
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    // u_k, v_k coefficients; accumulate the even/odd alternating sums.
    let (mut p_u, mut q_u, mut p_v, mut q_v) = (0.0, 0.0, 0.0, 0.0);
    let mut u = 1.0;
    let mut zk = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..200 {
        let kf = k as f64;
        if k > 0 {
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / (216.0 * kf * (2.0 * kf - 1.0));
            zk *= zeta;
        }
        let v = if k == 0 {
            1.0
        } else {
            -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u
        };
        let tu = u / zk;
        if tu.abs() > prev || tu.abs() < 1e-18 {
            break;
        }
        prev = tu.abs();
        let tv = v / zk;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p_u += sign * tu;
            p_v += sign * tv;
        } else {
            q_u += sign * tu;
            q_v += sign * tv;
        }
    }
    let th = zeta + PI / 4.0;
    let (sn, cs) = th.sin_cos();
    let pre = 1.0 / PI.sqrt();
    let ai = pre * z.powf(-0.25) * (sn * p_u - cs * q_u);
    let aip = -pre * z.powf(0.25) * (cs * p_v + sn * q_v);
    (ai, aip)
}

/// Returns `(Ai(x), Ai'(x))`.
pub fn airy(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if x >= BESSEL_SWITCH {
        if x > 105.0 {
            return (0.0, -0.0);
        }
        return airy_bessel(x);
    }
    if x < ASYMPTOTIC_SWITCH {
        return airy_oscillatory(x);
    }
    let k = x.round().clamp(ANCHOR_MIN as f64, ANCHOR_MAX as f64) as i32;
    let (y, yp) = anchors()[(k - ANCHOR_MIN) as usize];
    taylor_step(k as f64, y, yp, x - k as f64)
}

pub fn ai(x: f64) -> f64 {
    airy(x).0
}

/// `∫_0^x Ai(t) dt`, by Gauss–Legendre on unit panels.
pub fn airy_integral_from_zero(x: f64) -> f64 {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    let gl = GL.get_or_init(|| GaussLegendre::new(20));
    if x == 0.0 {
        return 0.0;
    }
    let panels = x.abs().ceil().max(1.0) as usize;
    let h = x / panels as f64;
    (0..panels)
        .map(|k| gl.integrate(k as f64 * h, (k + 1) as f64 * h, ai))
        .sum()
}

/// `∫_x^∞ Ai(t) dt`.
pub fn airy_tail_integral(x: f64) -> f64 {
    if x > 3.0 {
        // Direct quadrature avoids cancellation against 1/3.
        static GL: OnceLock<GaussLegendre> = OnceLock::new();
        let gl = GL.get_or_init(|| GaussLegendre::new(20));
        let (mut s, mut a) = (0.0, x);
        let step = 1.0 / x.sqrt();
        while a < x + 40.0 / x.sqrt() + 2.0 {
            s += gl.integrate(a, a + step, ai);
            a += step;
        }
        s
    } else {
        1.0 / 3.0 - airy_integral_from_zero(x)
    }
}
