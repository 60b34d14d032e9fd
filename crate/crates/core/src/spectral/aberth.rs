//! Simultaneous polynomial root finding by Aberth–Ehrlich iteration with
//! convex-hull starting radii.

use super::ComplexSpectrum;
use crate::error::{invalid, Error, Result};
use crate::scalar::{Field, Real};
use num_complex::Complex;
use num_traits::{One, Zero};

const MAX_SWEEPS: usize = 500;

/// All roots of `sum_i coeffs[i] z^i` (coefficients in ascending order).
pub fn roots_aberth<T: Real>(coeffs: &[Complex<T>]) -> Result<ComplexSpectrum<T>> {
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1] == Complex::zero() {
        hi -= 1;
    }
    if hi < 2 {
        return Err(invalid(
            "coeffs",
            "degree must be at least one with a nonzero leading coefficient",
        ));
    }
    if coeffs.len() != hi {
        return Err(invalid("coeffs", "leading coefficient is zero"));
    }
    if coeffs
        .iter()
        .any(|c| !c.re.is_finite() || !c.im.is_finite())
    {
        return Err(invalid("coeffs", "non-finite coefficient"));
    }
    let zeros_at_origin = coeffs.iter().take_while(|c| **c == Complex::zero()).count();
    let poly = &coeffs[zeros_at_origin..];
    let mut roots = vec![Complex::zero(); zeros_at_origin];
    if poly.len() > 1 {
        roots.extend(aberth(poly)?);
    }
    Ok(ComplexSpectrum::new(roots))
}

fn aberth<T: Real>(c: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let n = c.len() - 1;
    if n == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let abs: Vec<T> = c.iter().map(|x| Field::modulus(*x)).collect();
    let rev: Vec<Complex<T>> = c.iter().rev().copied().collect();
    let mut z = initial_guesses(&abs);
    let mut done = vec![false; n];
    let eps = T::epsilon();
    let nf = T::lit(n as f64);

    for _ in 0..MAX_SWEEPS {
        let mut active = 0;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let r = Field::modulus(zi);
            let (newton, resid, scale) = if r <= T::one() {
                let (p, dp) = horner(c, zi);
                (p / dp, Field::modulus(p), horner_abs(&abs, r))
            } else {
                let w = zi.inv();
                let (q, dq) = horner(&rev, w);
                let ratio = (w * (Complex::from_real(nf) - w * dq / q)).inv();
                let rw = r.recip();
                // |p(z)| = |z|^n |q(w)|; compared on the same footing.
                (ratio, Field::modulus(q), horner_abs_rev(&abs, rw))
            };
            if resid <= T::lit(4.0) * nf * eps * scale || !newton.re.is_finite() {
                done[i] = true;
                continue;
            }
            active += 1;
            let mut sum = Complex::<T>::zero();
            for (j, &zj) in z.iter().enumerate() {
                if j != i {
                    sum += (zi - zj).inv();
                }
            }
            let step = newton / (Complex::<T>::one() - newton * sum);
            z[i] = zi - step;
            if Field::modulus(step) <= eps * Field::modulus(z[i]) {
                done[i] = true;
            }
        }
        if active == 0 {
            break;
        }
    }

    let tol = T::lit(1e-10).max(T::lit(100.0) * nf * eps);
    for &zi in &z {
        let r = Field::modulus(zi);
        // Outside the unit disk z^n overflows for large n; test the reversed polynomial.
        let (resid, scale) = if r <= T::one() {
            (Field::modulus(horner(c, zi).0), horner_abs(&abs, r))
        } else {
            let w = zi.inv();
            (
                Field::modulus(horner(&rev, w).0),
                horner_abs_rev(&abs, r.recip()),
            )
        };
        let ok = resid <= tol * scale;
        if !ok || !zi.re.is_finite() || !zi.im.is_finite() {
            return Err(Error::NoConvergence {
                routine: "Aberth iteration",
                iterations: MAX_SWEEPS,
            });
        }
    }
    Ok(z)
}

/// `(p(z), p'(z))` for ascending coefficients.
fn horner<T: Real>(c: &[Complex<T>], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for &ci in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

fn horner_abs<T: Real>(a: &[T], r: T) -> T {
    a.iter().rev().fold(T::zero(), |s, &x| s * r + x)
}

/// `sum_i a[n - i] r^i`, the scale of the reversed polynomial.
fn horner_abs_rev<T: Real>(a: &[T], r: T) -> T {
    a.iter().fold(T::zero(), |s, &x| s * r + x)
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, ln|c_i|)`.
fn initial_guesses<T: Real>(abs: &[T]) -> Vec<Complex<T>> {
    let n = abs.len() - 1;
    let logs: Vec<f64> = abs
        .iter()
        .map(|a| {
            if *a > T::zero() {
                a.as_f64().ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if logs[i] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b as f64 - a as f64) * (logs[i] - logs[a])
                - (logs[b] - logs[a]) * (i as f64 - a as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let two_pi = std::f64::consts::TAU;
    let sigma = 0.7;
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let k = j - i;
        let radius = ((logs[i] - logs[j]) / k as f64).exp();
        for m in 0..k {
            let angle = two_pi * m as f64 / k as f64 + two_pi * i as f64 / n as f64 + sigma;
            out.push(Complex::new(
                T::lit(radius * angle.cos()),
                T::lit(radius * angle.sin()),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::Stream;
    use num_complex::Complex64;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn z_squared_plus_one() {
        let r = roots_aberth(&[c(1.0), c(0.0), c(1.0)]).unwrap();
        let mut v = r.values().to_vec();
        v.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((v[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((v[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn wilkinson_ten() {
        // Expand prod (z - k) in exact integer arithmetic.
        let mut p: Vec<i128> = vec![1];
        for k in 1..=10i128 {
            let mut q = vec![0i128; p.len() + 1];
            for (i, &a) in p.iter().enumerate() {
                q[i + 1] += a;
                q[i] -= k * a;
            }
            p = q;
        }
        let coeffs: Vec<Complex64> = p.iter().map(|&a| c(a as f64)).collect();
        let mut roots: Vec<f64> = roots_aberth(&coeffs)
            .unwrap()
            .values()
            .iter()
            .map(|z| z.re)
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, r) in roots.iter().enumerate() {
            assert!((r - (k + 1) as f64).abs() < 1e-6, "root {r}");
        }
    }

    #[test]
    fn random_degree_fifty_residuals() {
        let mut s = Stream::new(5);
        let coeffs: Vec<Complex64> = (0..=50).map(|_| s.complex_gaussian()).collect();
        let norm = coeffs.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        let roots = roots_aberth(&coeffs).unwrap();
        assert_eq!(roots.len(), 50);
        for &z in roots.values() {
            let (p, _) = horner(&coeffs, z);
            assert!(p.norm() / norm < 1e-9, "residual {}", p.norm() / norm);
        }
    }

    #[test]
    fn zero_roots_and_degree_one() {
        let r = roots_aberth(&[c(0.0), c(0.0), c(-2.0), c(1.0)]).unwrap();
        let mut v: Vec<f64> = r.values().iter().map(|z| z.re).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v, vec![0.0, 0.0, 2.0]);
        assert!(roots_aberth(&[c(1.0)]).is_err());
        assert!(roots_aberth(&[c(1.0), c(0.0)]).is_err());
    }

    #[test]
    fn widely_spread_moduli() {
        // Roots 1e-3, 1, 1e3.
        let coeffs = [c(-1.0), c(1e3 + 1.0 + 1e-3), c(-(1e3 + 1.0 + 1e-3)), c(1.0)];
        let mut v: Vec<f64> = roots_aberth(&coeffs)
            .unwrap()
            .values()
            .iter()
            .map(|z| z.re)
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(
            (v[0] - 1e-3).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-10 && (v[2] - 1e3).abs() < 1e-8
        );
    }

    #[test]
    fn large_roots_of_high_degree() {
        // A small leading coefficient puts a root near 1e6, where |z|^300 overflows.
        let mut s = Stream::new(9);
        let mut coeffs: Vec<Complex64> = (0..=300).map(|_| s.complex_gaussian()).collect();
        coeffs[300] *= 1e-6;
        let roots = roots_aberth(&coeffs).unwrap();
        assert_eq!(roots.len(), 300);
        let big = roots.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(big > 1e5, "largest modulus {big}");
    }
}
