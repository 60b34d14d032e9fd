//! Suite names and experiment configuration.

use crate::error::{config, CliError, Result};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

/// Figure-reproduction suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    /// Outlier of an iid `Uniform[0, 1]` matrix.
    F1,
    /// Outlier of the rank-one perturbed GOE.
    F3,
    /// Dyson Brownian motion from a rank-one initial condition.
    F3a,
    /// Interlacing along a rank-one update stream.
    F4,
    /// `β = 1` critical histogram.
    F2_5,
    /// `β = 2` critical largest eigenvalue against the Lax-pair law.
    F5,
    /// Spiked Wishart outlier.
    F3_1,
    /// Planar profile of the anti-Hermitian perturbation.
    F4_3,
    /// Anti-Hermitian coupling sweep.
    F4_4,
    /// Sub-unitary truncation sweep.
    F4_5,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::F1,
        Suite::F3,
        Suite::F3a,
        Suite::F4,
        Suite::F2_5,
        Suite::F5,
        Suite::F3_1,
        Suite::F4_3,
        Suite::F4_4,
        Suite::F4_5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::F1 => "F1",
            Suite::F3 => "F3",
            Suite::F3a => "F3a",
            Suite::F4 => "F4",
            Suite::F2_5 => "F2.5",
            Suite::F5 => "F5",
            Suite::F3_1 => "F3.1",
            Suite::F4_3 => "F4.3",
            Suite::F4_4 => "F4.4",
            Suite::F4_5 => "F4.5",
        }
    }

    /// Default `(N, reps)`.
    pub fn default_size(self) -> (usize, usize) {
        match self {
            Suite::F1 => (100, 20),
            Suite::F3 => (100, 200),
            Suite::F3a => (30, 5000),
            Suite::F4 => (10, 100),
            Suite::F2_5 => (10_000, 20_000),
            Suite::F5 => (10_000, 20_000),
            Suite::F3_1 => (200, 100),
            Suite::F4_3 => (200, 5000),
            Suite::F4_4 => (100, 1),
            Suite::F4_5 => (100, 1),
        }
    }

    /// Recognized parameters and their defaults; `NaN` marks a default
    /// derived from `N` at run time.
    pub fn default_params(self) -> &'static [(&'static str, f64)] {
        match self {
            Suite::F1 => &[],
            Suite::F3 => &[("alpha", 1.5)],
            Suite::F3a => &[
                ("alpha", 1.2),
                ("t", f64::NAN),
                ("steps", 20.0),
                ("direct_factor", 4.0),
            ],
            Suite::F4 => &[("steps", 15.0)],
            Suite::F2_5 => &[("alpha", 0.5)],
            Suite::F5 => &[("alpha", 0.5)],
            Suite::F3_1 => &[("rows", 400.0), ("b", 3.0)],
            Suite::F4_3 => &[("alpha0", 2.0), ("near", 8.0)],
            Suite::F4_4 => &[("lo", 0.0), ("hi", 1.5), ("step", 1.0 / 60.0)],
            Suite::F4_5 => &[("lo", 1.0), ("hi", 0.0), ("step", 0.01)],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub suite: Suite,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    /// Overrides of [`Suite::default_params`].
    pub params: BTreeMap<String, f64>,
    /// Directory receiving `<suite>.csv` and `<suite>.json`; nothing is
    /// written when unset.
    pub output_path: Option<PathBuf>,
    pub wall_clock_cap: Duration,
}

impl ExperimentConfig {
    pub const DEFAULT_CAP: Duration = Duration::from_secs(600);

    pub fn new(suite: Suite) -> Self {
        let (n, reps) = suite.default_size();
        Self {
            suite,
            n,
            reps,
            seed: 0,
            params: BTreeMap::new(),
            output_path: None,
            wall_clock_cap: Self::DEFAULT_CAP,
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = n;
        self
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_output(mut self, dir: impl Into<PathBuf>) -> Self {
        self.output_path = Some(dir.into());
        self
    }

    pub fn with_cap(mut self, cap: Duration) -> Self {
        self.wall_clock_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return Err(config("reps must be at least 1"));
        }
        if self.n < 1 {
            return Err(config("N must be at least 1"));
        }
        let known = self.suite.default_params();
        for (k, v) in &self.params {
            if !known.iter().any(|(name, _)| name == k) {
                let names: Vec<&str> = known.iter().map(|(n, _)| *n).collect();
                return Err(config(format!(
                    "suite {} has no parameter `{k}` (known: {names:?})",
                    self.suite
                )));
            }
            if !v.is_finite() {
                return Err(config(format!("parameter `{k}` must be finite")));
            }
        }
        Ok(())
    }

    /// Override or default; `NaN` defaults stay `NaN` for the suite to fill in.
    pub fn param(&self, key: &str) -> f64 {
        self.params.get(key).copied().unwrap_or_else(|| {
            self.suite
                .default_params()
                .iter()
                .find(|(k, _)| *k == key)
                .map_or(f64::NAN, |(_, v)| *v)
        })
    }
}

/// Parses `k=v,k=v`.
pub fn parse_params(s: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| config(format!("expected key=value, got `{item}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| config(format!("`{}` is not a number", v.trim())))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Parses `lo:hi:step` into the grid `lo, lo ± step, ..` ending at `hi`
/// (the step's sign is taken from the direction `lo → hi`).
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(config(format!("grid must be lo:hi:step, got `{s}`")));
    }
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| config(format!("`{t}` is not a number")))
    };
    make_grid(num(parts[0])?, num(parts[1])?, num(parts[2])?)
}

pub fn make_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step.abs() > 0.0) || !step.is_finite() || !lo.is_finite() || !hi.is_finite() {
        return Err(config("grid needs finite bounds and a nonzero step"));
    }
    let span = hi - lo;
    let count = (span.abs() / step.abs() + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(config("grid has more than 10^6 points"));
    }
    let h = step.abs().copysign(if span == 0.0 { 1.0 } else { span });
    Ok((0..=count).map(|k| lo + h * k as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!(
            "F9".parse::<Suite>(),
            Err(CliError::UnknownSuite(_))
        ));
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::new(Suite::F3).validate().is_ok());
        assert!(ExperimentConfig::new(Suite::F3)
            .with_reps(0)
            .validate()
            .is_err());
        assert!(ExperimentConfig::new(Suite::F3)
            .with_param("b", 1.0)
            .validate()
            .is_err());
        let c = ExperimentConfig::new(Suite::F3).with_param("alpha", 2.0);
        assert_eq!(c.param("alpha"), 2.0);
        assert_eq!(ExperimentConfig::new(Suite::F3).param("alpha"), 1.5);
    }

    #[test]
    fn grids() {
        let g = parse_grid("0:1.5:0.25").unwrap();
        assert_eq!(g, [0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5]);
        let g = parse_grid("1:0:0.01").unwrap();
        assert_eq!(g.len(), 101);
        assert!((g[100]).abs() < 1e-12);
        assert_eq!(make_grid(0.0, 1.5, 1.0 / 60.0).unwrap().len(), 91);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn params() {
        let p = parse_params("alpha=1.5, b = 3").unwrap();
        assert_eq!(p["alpha"], 1.5);
        assert_eq!(p["b"], 3.0);
        assert!(parse_params("alpha").is_err());
        assert!(parse_params("alpha=x").is_err());
    }
}
