//! Goodness-of-fit statistics used by the Monte-Carlo checks.

use crate::error::{invalid, Result};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Kolmogorov–Smirnov distance `sup |F_n - F|` between the empirical law of
/// `samples` and `cdf`. Rejects fewer than 10 samples and a `cdf` that is
/// not monotone at the sample points.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.len() < 10 {
        return Err(invalid(
            "samples",
            format!("need at least 10 samples, got {}", samples.len()),
        ));
    }
    let mut x = samples.to_vec();
    x.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &xi) in x.iter().enumerate() {
        let f = cdf(xi);
        if !(0.0..=1.0 + 1e-12).contains(&f) || f < prev - 1e-12 {
            return Err(invalid(
                "cdf",
                format!("not a monotone CDF at {xi} (value {f})"),
            ));
        }
        prev = f;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(|p, q| p.partial_cmp(q).expect("NaN sample"));
    y.sort_by(|p, q| p.partial_cmp(q).expect("NaN sample"));
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    d
}

/// Asymptotic Kolmogorov tail `P(sqrt(n_eff) D > ...)` for a distance `d`.
pub fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let sn = n_eff.sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k as f64 * lambda).powi(2)).exp();
        s += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

/// Pearson statistic against expected counts, with its upper-tail p-value.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> Result<(f64, f64)> {
    if observed.len() != expected.len() || observed.len() < 2 {
        return Err(invalid("observed", "need matching bins, at least two"));
    }
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let law =
        ChiSquared::new((observed.len() - 1) as f64).map_err(|e| invalid("bins", e.to_string()))?;
    Ok((stat, 1.0 - law.cdf(stat)))
}

/// Counts on ascending bin edges; samples outside the edges are tallied
/// separately so that `sum(counts) == total`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
    pub outside: u64,
}

impl Histogram {
    pub fn new(bin_edges: Vec<f64>) -> Result<Self> {
        if bin_edges.len() < 2 || bin_edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid(
                "bin_edges",
                "need at least two strictly ascending edges",
            ));
        }
        let bins = bin_edges.len() - 1;
        Ok(Self {
            bin_edges,
            counts: vec![0; bins],
            total: 0,
            outside: 0,
        })
    }

    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(invalid("bins", "need at least one bin"));
        }
        Self::new(
            (0..=bins)
                .map(|i| lo + (hi - lo) * i as f64 / bins as f64)
                .collect(),
        )
    }

    pub fn add(&mut self, x: f64) {
        let e = &self.bin_edges;
        if !(x >= e[0] && x < e[e.len() - 1]) {
            self.outside += 1;
            return;
        }
        let k = e.partition_point(|&b| b <= x) - 1;
        self.counts[k] += 1;
        self.total += 1;
    }

    pub fn extend(&mut self, xs: impl IntoIterator<Item = f64>) {
        for x in xs {
            self.add(x);
        }
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges
            .windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .collect()
    }

    /// Counts divided by `normalizer * width`.
    pub fn density(&self, normalizer: f64) -> Vec<f64> {
        self.counts
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(&c, w)| c as f64 / (normalizer * (w[1] - w[0])))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::Stream;

    fn normal_cdf(x: f64) -> f64 {
        use statrs::distribution::Normal;
        Normal::new(0.0, 1.0).unwrap().cdf(x)
    }

    #[test]
    fn self_consistent_samples_pass() {
        let mut s = Stream::new(1);
        let x: Vec<f64> = (0..10_000).map(|_| s.gaussian()).collect();
        assert!(ks_statistic(&x, normal_cdf).unwrap() < 0.02);
    }

    #[test]
    fn point_mass_fails() {
        let x = vec![0.0; 100];
        assert!(ks_statistic(&x, normal_cdf).unwrap() >= 0.5);
    }

    #[test]
    fn rejects_non_monotone_cdf_and_few_samples() {
        let x: Vec<f64> = (0..20).map(|i| i as f64).collect();
        assert!(ks_statistic(&x, |t| 1.0 - t / 20.0).is_err());
        assert!(ks_statistic(&x[..5], normal_cdf).is_err());
    }

    #[test]
    fn two_sample_distance() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        let b: Vec<f64> = (50..150).map(|i| i as f64).collect();
        assert!((ks_two_sample(&a, &b) - 0.5).abs() < 1e-12);
        assert_eq!(ks_two_sample(&a, &a), 0.0);
    }

    #[test]
    fn histogram_total_matches_counts() {
        let mut h = Histogram::uniform(0.0, 1.0, 4).unwrap();
        h.extend([0.1, 0.3, 0.3, 0.99, 1.0, -0.1]);
        assert_eq!(h.counts, vec![1, 2, 0, 1]);
        assert_eq!(h.total, h.counts.iter().sum::<u64>());
        assert_eq!(h.outside, 2);
    }

    #[test]
    fn chi_square_uniform_counts() {
        let (stat, p) = chi_square(&[100, 100, 100], &[100.0, 100.0, 100.0]).unwrap();
        assert_eq!(stat, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
    }
}
