//! Deterministic, splittable random streams and the primitive laws built on them.
//!
//! Every stream is addressed by `(seed, stream_id, counter)`. The underlying
//! ChaCha generator is counter based, so a stream can be positioned anywhere
//! without replaying earlier output, and replicas get disjoint streams simply
//! by using their index as `stream_id`.

use crate::error::{invalid, Result};
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Address of a position in a random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RngState {
    pub seed: u64,
    pub stream_id: u64,
    /// Position in 32-bit words from the start of the stream.
    pub counter: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            stream_id: 0,
            counter: 0,
        }
    }

    /// A fresh state on stream `id` of the same seed.
    pub fn split(self, id: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: id,
            counter: 0,
        }
    }

    pub fn stream(self) -> Stream {
        Stream::from_state(self)
    }
}

/// Real or complex entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Real,
    Complex,
}

/// A vector of unit Euclidean norm.
#[derive(Clone, Debug, PartialEq)]
pub enum UnitVector {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl UnitVector {
    pub fn len(&self) -> usize {
        match self {
            UnitVector::Real(v) => v.len(),
            UnitVector::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            UnitVector::Real(_) => FieldKind::Real,
            UnitVector::Complex(_) => FieldKind::Complex,
        }
    }

    /// Entries promoted to complex numbers.
    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            UnitVector::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            UnitVector::Complex(v) => v.clone(),
        }
    }

    /// Squared moduli of the entries.
    pub fn weights(&self) -> Vec<f64> {
        match self {
            UnitVector::Real(v) => v.iter().map(|x| x * x).collect(),
            UnitVector::Complex(v) => v.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.weights().iter().sum::<f64>().sqrt()
    }
}

/// A live generator positioned at some [`RngState`].
#[derive(Clone, Debug)]
pub struct Stream {
    rng: ChaCha8Rng,
    seed: u64,
}

impl Stream {
    pub fn from_state(state: RngState) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(state.seed);
        rng.set_stream(state.stream_id);
        rng.set_word_pos(state.counter as u128);
        Self {
            rng,
            seed: state.seed,
        }
    }

    pub fn new(seed: u64) -> Self {
        Self::from_state(RngState::new(seed))
    }

    /// Current position, suitable for resuming later.
    pub fn state(&self) -> RngState {
        RngState {
            seed: self.seed,
            stream_id: self.rng.get_stream(),
            counter: self.rng.get_word_pos() as u64,
        }
    }

    /// Uniform on `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Standard normal `N[0, 1]`.
    #[inline]
    pub fn gaussian(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Standard complex Gaussian: each component `N[0, 1/2]`, so `E|z|^2 = 1`.
    #[inline]
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(self.gaussian() * s, self.gaussian() * s)
    }

    /// Real or complex standard Gaussian, returned as a complex number.
    pub fn gaussian_of(&mut self, kind: FieldKind) -> Complex64 {
        match kind {
            FieldKind::Real => Complex64::new(self.gaussian(), 0.0),
            FieldKind::Complex => self.complex_gaussian(),
        }
    }

    /// `Gamma[shape, scale]` variate, any `shape > 0`.
    pub fn gamma(&mut self, shape: f64, scale: f64) -> Result<f64> {
        if !(shape > 0.0 && shape.is_finite()) {
            return Err(invalid("shape", format!("must be positive, got {shape}")));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("scale", format!("must be positive, got {scale}")));
        }
        let law = Gamma::new(shape, scale).map_err(|e| invalid("shape", e.to_string()))?;
        Ok(law.sample(&mut self.rng))
    }

    /// `χ̃_k`: square root of a `Gamma[k/2, 1]` variate.
    pub fn chi(&mut self, k: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(invalid(
                "k",
                format!("degrees of freedom must be positive, got {k}"),
            ));
        }
        Ok(self.gamma(k / 2.0, 1.0)?.sqrt())
    }

    /// `χ_k`: square root of a `Gamma[k/2, 2]` variate (the usual chi law).
    pub fn chi_standard(&mut self, k: f64) -> Result<f64> {
        if !(k > 0.0) {
            return Err(invalid(
                "k",
                format!("degrees of freedom must be positive, got {k}"),
            ));
        }
        Ok(self.gamma(k / 2.0, 2.0)?.sqrt())
    }

    /// Uniform point on the unit sphere of `R^n` or `C^n`.
    pub fn sphere_vector(&mut self, n: usize, kind: FieldKind) -> Result<UnitVector> {
        if n < 1 {
            return Err(invalid("n", "sphere dimension must be at least 1"));
        }
        Ok(match kind {
            FieldKind::Real => {
                let mut v: Vec<f64> = (0..n).map(|_| self.gaussian()).collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                v.iter_mut().for_each(|x| *x /= norm);
                UnitVector::Real(v)
            }
            FieldKind::Complex => {
                let mut v: Vec<Complex64> = (0..n).map(|_| self.complex_gaussian()).collect();
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.iter_mut().for_each(|z| *z /= norm);
                UnitVector::Complex(v)
            }
        })
    }

    /// Raw 64-bit output, for callers that need their own derived seeds.
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// One draw of [`Stream::gaussian`] or [`Stream::complex_gaussian`] from a state.
pub fn gaussian(state: RngState, kind: FieldKind) -> Complex64 {
    state.stream().gaussian_of(kind)
}

/// One `χ̃_k` draw from a state.
pub fn chi(state: RngState, k: f64) -> Result<f64> {
    state.stream().chi(k)
}

/// One uniform sphere vector from a state.
pub fn sphere_vector(state: RngState, n: usize, kind: FieldKind) -> Result<UnitVector> {
    state.stream().sphere_vector(n, kind)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn identical_state_gives_identical_stream() {
        let st = RngState {
            seed: 42,
            stream_id: 3,
            counter: 17,
        };
        let a: Vec<f64> = {
            let mut s = st.stream();
            (0..100).map(|_| s.gaussian()).collect()
        };
        let b: Vec<f64> = {
            let mut s = st.stream();
            (0..100).map(|_| s.gaussian()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn state_resumes_mid_stream() {
        let mut s = Stream::new(9);
        for _ in 0..37 {
            s.uniform();
        }
        let resume = s.state();
        let x = s.uniform();
        assert_eq!(resume.stream().uniform(), x);
    }

    #[test]
    fn real_gaussian_moments() {
        let mut s = Stream::new(1);
        let xs: Vec<f64> = (0..1_000_000).map(|_| s.gaussian()).collect();
        let (m, v) = mean_var(&xs);
        assert!(m.abs() < 0.005, "mean {m}");
        assert!((v - 1.0).abs() < 0.01, "variance {v}");
    }

    #[test]
    fn complex_gaussian_unit_modulus_moment() {
        let mut s = Stream::new(2);
        let n = 1_000_000;
        let (mut sum, mut msq) = (Complex64::new(0.0, 0.0), 0.0);
        for _ in 0..n {
            let z = s.complex_gaussian();
            sum += z;
            msq += z.norm_sqr();
        }
        assert!((sum / n as f64).norm() < 0.005);
        assert!((msq / n as f64 - 1.0).abs() < 0.01);
    }

    #[test]
    fn chi_conventions() {
        let mut s = Stream::new(3);
        let n = 1_000_000;
        let a: f64 = (0..n).map(|_| s.chi(5.0).unwrap().powi(2)).sum::<f64>() / n as f64;
        let b: f64 = (0..n)
            .map(|_| s.chi_standard(5.0).unwrap().powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((a - 2.5).abs() < 0.02, "{a}");
        assert!((b - 5.0).abs() < 0.05, "{b}");
    }

    #[test]
    fn chi_two_squared_is_exponential() {
        let mut s = Stream::new(4);
        let mut xs: Vec<f64> = (0..100_000).map(|_| s.chi(2.0).unwrap().powi(2)).collect();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = 1.0 - (-x).exp();
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 0.01, "KS {d}");
    }

    #[test]
    fn small_shape_gamma_mean() {
        let mut s = Stream::new(5);
        let n = 200_000;
        let m = (0..n).map(|_| s.gamma(0.3, 1.0).unwrap()).sum::<f64>() / n as f64;
        assert!((m - 0.3).abs() < 0.01, "{m}");
    }

    #[test]
    fn rejects_nonpositive_degrees() {
        let mut s = Stream::new(0);
        assert!(s.chi(0.0).is_err());
        assert!(s.chi(-1.0).is_err());
        assert!(s.chi_standard(0.0).is_err());
        assert!(s.sphere_vector(0, FieldKind::Real).is_err());
    }

    #[test]
    fn sphere_vector_properties() {
        let mut s = Stream::new(6);
        for kind in [FieldKind::Real, FieldKind::Complex] {
            for n in [1, 2, 7, 50] {
                let v = s.sphere_vector(n, kind).unwrap();
                assert!((v.norm() - 1.0).abs() < 1e-14);
            }
        }
        match s.sphere_vector(1, FieldKind::Real).unwrap() {
            UnitVector::Real(v) => assert!(v[0] == 1.0 || v[0] == -1.0),
            _ => unreachable!(),
        }
        let reps = 100_000;
        let mut acc = 0.0;
        for _ in 0..reps {
            acc += s.sphere_vector(10, FieldKind::Real).unwrap().weights()[0];
        }
        let m = acc / reps as f64;
        assert!((m - 0.1).abs() < 0.003, "{m}");
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        let root = RngState::new(77);
        let mut a = root.split(1).stream();
        let mut b = root.split(2).stream();
        let n = 100_000;
        let xs: Vec<f64> = (0..n).map(|_| a.gaussian()).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.gaussian()).collect();
        assert_ne!(xs[..8], ys[..8]);
        let (mx, vx) = mean_var(&xs);
        let (my, vy) = mean_var(&ys);
        let cov = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum::<f64>()
            / (n - 1) as f64;
        assert!((cov / (vx * vy).sqrt()).abs() < 0.01);
    }
}
