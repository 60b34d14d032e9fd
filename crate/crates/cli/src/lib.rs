//! Monte-Carlo verification suites, artifact emitters and the command line
//! surface built on `spectra-core`.

pub mod config;
pub mod emit;
pub mod error;
pub mod report;
pub mod sample;
pub mod suites;
pub mod theory;

pub use config::{ExperimentConfig, Suite};
pub use emit::{emit, read_csv, read_json, write_csv, write_json, Artifact, Table};
pub use error::{CliError, Result};
pub use report::{StatisticName, VerificationReport};
pub use suites::{run_suite, SuiteOutput};

/// Kolmogorov–Smirnov distance between `samples` and `cdf`. Needs at least
/// 10 finite samples; a `cdf` that decreases at the sample points is rejected.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if let Some(x) = samples.iter().find(|x| !x.is_finite()) {
        return Err(CliError::Config(format!("non-finite sample {x}")));
    }
    Ok(spectra_core::stats::ks_statistic(samples, cdf)?)
}
