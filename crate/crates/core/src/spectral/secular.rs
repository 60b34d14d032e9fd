//! Rank-one secular equations `1 = c * sum_j w_j / (z - mu_j)` for real and
//! purely imaginary couplings.

use super::{ComplexSpectrum, RealSpectrum};
use crate::error::{invalid, Error, Result};
use crate::scalar::{Field, Real};
use num_complex::Complex;
use num_traits::{One, Zero};

/// Strength of the rank-one term: real `c`, or `i * alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coupling<T> {
    Real(T),
    Imaginary(T),
}

/// Poles (sorted descending) with positive weights, plus an optional extra
/// pole at the origin carrying weight `pole_at_zero_weight`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecularProblem<T> {
    poles: Vec<T>,
    weights: Vec<T>,
    pub coupling: Coupling<T>,
    pub pole_at_zero_weight: Option<T>,
}

impl<T: Real> SecularProblem<T> {
    pub fn new(poles: Vec<T>, weights: Vec<T>, coupling: Coupling<T>) -> Result<Self> {
        if poles.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} poles, {} weights",
                poles.len(),
                weights.len()
            )));
        }
        if poles.is_empty() {
            return Err(invalid("poles", "at least one pole is required"));
        }
        if let Some(w) = weights
            .iter()
            .find(|w| !(**w > T::zero()) || !w.is_finite())
        {
            return Err(invalid(
                "weights",
                format!("weights must be positive and finite, got {w}"),
            ));
        }
        if poles.iter().any(|p| !p.is_finite()) {
            return Err(invalid("poles", "non-finite pole"));
        }
        let mut idx: Vec<usize> = (0..poles.len()).collect();
        idx.sort_by(|&a, &b| poles[b].partial_cmp(&poles[a]).unwrap());
        let sorted_poles: Vec<T> = idx.iter().map(|&i| poles[i]).collect();
        let sorted_weights: Vec<T> = idx.iter().map(|&i| weights[i]).collect();
        for (k, w) in sorted_poles.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::Coincident(idx[k], idx[k + 1]));
            }
        }
        Ok(Self {
            poles: sorted_poles,
            weights: sorted_weights,
            coupling,
            pole_at_zero_weight: None,
        })
    }

    /// Adds the origin as a pole with weight `u0 >= 0` (zero is ignored).
    pub fn with_pole_at_zero(mut self, u0: T) -> Result<Self> {
        if u0 < T::zero() || !u0.is_finite() {
            return Err(invalid("pole_at_zero_weight", "must be non-negative"));
        }
        if u0 > T::zero() {
            if let Some(i) = self.poles.iter().position(|&p| p == T::zero()) {
                return Err(Error::Coincident(i, self.poles.len()));
            }
        }
        self.pole_at_zero_weight = Some(u0);
        Ok(self)
    }

    pub fn poles(&self) -> &[T] {
        &self.poles
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// All poles including the origin term, sorted descending.
    pub fn effective_poles(&self) -> (Vec<T>, Vec<T>) {
        let mut p = self.poles.clone();
        let mut w = self.weights.clone();
        if let Some(u0) = self.pole_at_zero_weight.filter(|u| *u > T::zero()) {
            let at = p.iter().position(|&x| x < T::zero()).unwrap_or(p.len());
            p.insert(at, T::zero());
            w.insert(at, u0);
        }
        (p, w)
    }
}

/// `f(lam) = 1 - c sum_k w_k / (lam - p_k)` and `f'`, with
/// `lam - p_k = t + delta_k` evaluated from an offset `t` about a pole.
fn secular_at<T: Real>(c: T, w: &[T], delta: &[T], t: T) -> (T, T) {
    let mut s = T::zero();
    let mut ds = T::zero();
    for (&wk, &dk) in w.iter().zip(delta) {
        let r = (t + dk).recip();
        s += wk * r;
        ds += wk * r * r;
    }
    (T::one() - c * s, c * ds)
}

/// Zeros of the real secular function, one per gap between consecutive
/// poles and one above the top pole; they strictly interlace the poles.
pub fn solve_secular_real<T: Real>(p: &SecularProblem<T>) -> Result<RealSpectrum<T>> {
    let c = match p.coupling {
        Coupling::Real(c) if c > T::zero() && c.is_finite() => c,
        _ => {
            return Err(invalid(
                "coupling",
                "real secular solver needs a positive real coupling",
            ))
        }
    };
    let (poles, w) = p.effective_poles();
    let k = poles.len();
    let half = T::lit(0.5);
    let mut roots = Vec::with_capacity(k);
    let mut delta = vec![T::zero(); k];

    for j in 0..k {
        // Root between poles[j] (left) and poles[j - 1] (right), or above poles[0].
        let (origin, mut lo, mut hi) = if j == 0 {
            // The root lies in (0, c * total]; doubling keeps f > 0 at the end despite rounding.
            let total: T = w.iter().copied().sum();
            (poles[0], T::zero(), T::lit(2.0) * c * total)
        } else {
            let right = poles[j - 1];
            let left = poles[j];
            let gap = right - left;
            let mid = left + gap * half;
            for (d, &pk) in delta.iter_mut().zip(&poles) {
                *d = left - pk;
            }
            let (fm, _) = secular_at(c, &w, &delta, gap * half);
            if fm >= T::zero() {
                (left, T::zero(), mid - left)
            } else {
                (right, mid - right, T::zero())
            }
        };
        for (d, &pk) in delta.iter_mut().zip(&poles) {
            *d = origin - pk;
        }
        // Exact zero of delta at the origin pole keeps t = 0 excluded.
        let f_lo = if lo == T::zero() {
            -T::infinity()
        } else {
            secular_at(c, &w, &delta, lo).0
        };
        let f_hi = if hi == T::zero() {
            T::infinity()
        } else {
            secular_at(c, &w, &delta, hi).0
        };
        if f_lo > T::zero() || f_hi < T::zero() || f_lo.is_nan() || f_hi.is_nan() {
            return Err(Error::Interlacing(j));
        }
        let mut t = lo + (hi - lo) * half;
        for _ in 0..400 {
            let (f, df) = secular_at(c, &w, &delta, t);
            if f == T::zero() {
                break;
            }
            if f < T::zero() {
                lo = t;
            } else {
                hi = t;
            }
            let newton = t - f / df;
            let next = if newton > lo && newton < hi && df > T::zero() {
                newton
            } else {
                lo + (hi - lo) * half
            };
            let width = hi - lo;
            if width <= T::lit(2.0) * T::epsilon() * t.abs().max((origin + t).abs()) || next == t {
                t = next;
                break;
            }
            t = next;
        }
        roots.push(origin + t);
    }
    Ok(RealSpectrum::new(roots))
}

/// Zeros of `1 - i alpha sum_j w_j / (z - mu_j)`, i.e. the eigenvalues of
/// `diag(mu) + i alpha v v^T` with `|v_j|^2 = w_j`. All lie in the upper
/// half plane.
pub fn solve_secular_complex<T: Real>(p: &SecularProblem<T>) -> Result<ComplexSpectrum<T>> {
    let alpha = match p.coupling {
        Coupling::Imaginary(a) if a > T::zero() && a.is_finite() => a,
        _ => {
            return Err(invalid(
                "coupling",
                "complex secular solver needs coupling i*alpha with alpha > 0",
            ))
        }
    };
    let (mu, w) = p.effective_poles();
    let n = mu.len();
    let ia = Complex::new(T::zero(), alpha);
    if n == 1 {
        return Ok(ComplexSpectrum::new(vec![Complex::new(
            mu[0],
            alpha * w[0],
        )]));
    }
    // Each iterate is stored as an anchor pole plus an offset so that
    // distances to nearby poles keep full relative precision.
    let eps = T::epsilon();
    let mut anchor: Vec<usize> = (0..n).collect();
    let mut tau: Vec<Complex<T>> = w
        .iter()
        .map(|&wj| Complex::new(T::zero(), alpha * wj))
        .collect();
    let diff = |i: usize, a: &[usize], t: &[Complex<T>], pole: usize| {
        t[i] + Complex::from_real(mu[a[i]] - mu[pole])
    };
    let mut done = vec![false; n];
    let max_sweeps = 2000;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        sweeps += 1;
        let mut moved = false;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let mut s1 = Complex::<T>::zero();
            let mut s2 = Complex::<T>::zero();
            let mut sp = Complex::<T>::zero();
            for (j, &wj) in w.iter().enumerate() {
                let r = diff(i, &anchor, &tau, j).inv();
                s1 += r.scale(wj);
                s2 += (r * r).scale(wj);
                sp += r;
            }
            let f = Complex::<T>::one() - ia * s1;
            let df = ia * s2;
            // P = F * prod (z - mu): P'/P = F'/F + sum 1/(z - mu).
            let newton = (df / f + sp).inv();
            let mut rep = Complex::<T>::zero();
            for j in 0..n {
                if j != i {
                    rep +=
                        (tau[i] - tau[j] + Complex::from_real(mu[anchor[i]] - mu[anchor[j]])).inv();
                }
            }
            let step = newton / (Complex::<T>::one() - newton * rep);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            tau[i] -= step;
            moved = true;
            // Re-anchor at the nearest pole when the iterate has drifted.
            let z_re = mu[anchor[i]] + tau[i].re;
            let nearest = (0..n)
                .min_by(|&a, &b| {
                    (mu[a] - z_re)
                        .abs()
                        .partial_cmp(&(mu[b] - z_re).abs())
                        .unwrap()
                })
                .unwrap_or(anchor[i]);
            if nearest != anchor[i] {
                tau[i] += Complex::from_real(mu[anchor[i]] - mu[nearest]);
                anchor[i] = nearest;
            }
            if Field::modulus(step)
                <= T::lit(4.0) * eps * Field::modulus(tau[i]).max(T::min_positive_value())
            {
                done[i] = true;
            }
        }
        if !moved {
            break;
        }
    }

    let tol = T::lit(1e-9).max(T::lit(1000.0) * eps);
    let mut z = Vec::with_capacity(n);
    for i in 0..n {
        let mut s1 = Complex::<T>::zero();
        let mut mag = T::zero();
        for (j, &wj) in w.iter().enumerate() {
            let d = diff(i, &anchor, &tau, j);
            s1 += d.inv().scale(wj);
            mag += wj / Field::modulus(d);
        }
        let f = Complex::<T>::one() - ia * s1;
        let resid = Field::modulus(f) / (T::one() + alpha * mag);
        if !(resid <= tol) {
            return Err(Error::NoConvergence {
                routine: "complex secular solver",
                iterations: sweeps,
            });
        }
        let zi = Complex::new(mu[anchor[i]], T::zero()) + tau[i];
        if !(zi.im > T::zero()) {
            return Err(Error::OutOfRange(format!(
                "secular zero {zi} is not in the upper half plane"
            )));
        }
        z.push(zi);
    }
    Ok(ComplexSpectrum::new(z))
}
