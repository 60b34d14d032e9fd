//! Raw spectra of the supported ensembles, one CSV row per replica.

use crate::emit::Table;
use crate::error::{config, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use spectra_core::ensembles::{
    sample_antiherm_spectrum, sample_gaussian_dense, sample_iid_shifted,
    sample_spiked_wishart_secular, sample_subunitary, sample_tridiag, SpikedWishartSpec,
};
use spectra_core::randgen::RngState;
use spectra_core::spectral::{eig_complex_dense, eig_sym_tridiag, EigenMode};
use spectra_core::CMatrix;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ensemble {
    /// Dense `G/√(2Nβ) + α 1̂1̂ᵀ`, `β = 1`.
    Goe,
    /// Same with `β = 2`.
    Gue,
    /// Tridiagonal model for any `β > 0`.
    Tridiag,
    /// Spiked complex Wishart (`rows x N`, spike `b`), secular route.
    Wishart,
    /// `A + iα e₁e₁ᵀ`.
    Antiherm,
    /// `U diag(a, 1, .., 1)`.
    Subunitary,
    /// iid `Uniform[0, 1]` entries.
    Iid,
}

impl FromStr for Ensemble {
    type Err = crate::error::CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "goe" => Self::Goe,
            "gue" => Self::Gue,
            "tridiag" => Self::Tridiag,
            "wishart" => Self::Wishart,
            "antiherm" => Self::Antiherm,
            "subunitary" => Self::Subunitary,
            "iid" => Self::Iid,
            _ => {
                return Err(config(format!(
                    "unknown ensemble `{s}` (goe, gue, tridiag, wishart, antiherm, subunitary, iid)"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    pub ensemble: Ensemble,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub b: f64,
    pub a: f64,
    /// Wishart row count; defaults to `2N` when zero.
    pub rows: usize,
}

impl SampleSpec {
    pub fn new(ensemble: Ensemble, n: usize) -> Self {
        Self {
            ensemble,
            n,
            alpha: 0.0,
            beta: 2.0,
            b: 1.0,
            a: 0.5,
            rows: 0,
        }
    }
}

enum Draw {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

fn draw(spec: &SampleSpec, seed: u64, rep: u64) -> spectra_core::Result<Draw> {
    let s = &mut RngState::new(seed).split(rep).stream();
    let n = spec.n;
    Ok(match spec.ensemble {
        Ensemble::Goe => Draw::Real(
            sample_gaussian_dense(s, 1, n, spec.alpha)?
                .spectrum()?
                .into_values(),
        ),
        Ensemble::Gue => Draw::Real(
            sample_gaussian_dense(s, 2, n, spec.alpha)?
                .spectrum()?
                .into_values(),
        ),
        Ensemble::Tridiag => {
            let t = sample_tridiag(s, spec.beta, n, spec.alpha)?;
            Draw::Real(eig_sym_tridiag(&t, EigenMode::Full)?.into_values())
        }
        Ensemble::Wishart => {
            let rows = if spec.rows == 0 { 2 * n } else { spec.rows };
            let w = SpikedWishartSpec::new(rows, n, spec.b)?;
            Draw::Real(sample_spiked_wishart_secular(s, &w)?.into_values())
        }
        Ensemble::Antiherm => {
            Draw::Complex(sample_antiherm_spectrum(s, n, spec.alpha)?.into_values())
        }
        Ensemble::Subunitary => {
            let m = sample_subunitary(s, n, Complex64::new(spec.a, 0.0))?;
            Draw::Complex(eig_complex_dense(&m, false)?.spectrum.into_values())
        }
        Ensemble::Iid => {
            let m = sample_iid_shifted(s, n)?;
            let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(m[(i, j)], 0.0));
            Draw::Complex(eig_complex_dense(&m, false)?.spectrum.into_values())
        }
    })
}

/// `reps` spectra on streams `split(rep)` of `seed`, in replica order.
pub fn sample_table(spec: &SampleSpec, reps: usize, seed: u64) -> Result<Table> {
    if reps < 1 {
        return Err(config("reps must be at least 1"));
    }
    let draws: Vec<Draw> = (0..reps as u64)
        .into_par_iter()
        .map(|r| draw(spec, seed, r))
        .collect::<spectra_core::Result<_>>()?;
    Ok(match draws.first() {
        Some(Draw::Complex(_)) => Table::complex_spectra(
            &draws
                .into_iter()
                .map(|d| match d {
                    Draw::Complex(z) => z,
                    Draw::Real(_) => unreachable!("one ensemble per table"),
                })
                .collect::<Vec<_>>(),
        ),
        _ => Table::real_spectra(
            &draws
                .into_iter()
                .map(|d| match d {
                    Draw::Real(x) => x,
                    Draw::Complex(_) => unreachable!("one ensemble per table"),
                })
                .collect::<Vec<_>>(),
        ),
    })
}
