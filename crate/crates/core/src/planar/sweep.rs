//! Eigenvalue trajectories of one fixed realization as the coupling varies.

use crate::ensembles::{antiherm_poles, sample_haar_unitary};
use crate::error::{invalid, Result};
use crate::randgen::Stream;
use crate::spectral::{eig_complex_dense, solve_secular_complex, Coupling, SecularProblem};
use num_complex::Complex64;

/// Which one-parameter family to follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepModel {
    /// `A/√(N/2) + iα e₁e₁ᵀ` with `A` from the `exp(-Tr A²)` GUE, so the
    /// unperturbed spectrum fills `(-2, 2)`; grid values are `α >= 0`.
    Antiherm,
    /// `U diag(a, 1, ..., 1)` with `U` Haar; grid values are `a ∈ [0, 1]`.
    Subunitary,
}

/// Eigenvalues at one grid value, in trajectory order.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub grid_value: f64,
    pub eigenvalues: Vec<Complex64>,
    /// Set when two eigenvalues are closer than the largest matched step,
    /// so the nearest-neighbour assignment may have swapped labels.
    pub ambiguous: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub model: SweepModel,
    pub n: usize,
    pub rows: Vec<SweepRow>,
}

/// Greedy nearest-neighbour assignment of `next` onto `prev`; returns the
/// reordered `next` and the ambiguity flag.
fn match_step(prev: &[Complex64], next: &[Complex64]) -> (Vec<Complex64>, bool) {
    let n = prev.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, p) in prev.iter().enumerate() {
        for (j, q) in next.iter().enumerate() {
            pairs.push(((p - q).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = vec![None; n];
    let mut used = vec![false; n];
    let mut max_step: f64 = 0.0;
    for (d, i, j) in pairs {
        if out[i].is_none() && !used[j] {
            out[i] = Some(next[j]);
            used[j] = true;
            max_step = max_step.max(d);
        }
    }
    let mut min_gap = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            min_gap = min_gap.min((next[a] - next[b]).norm());
        }
    }
    let matched = out
        .into_iter()
        .map(|z| z.expect("complete assignment"))
        .collect();
    (matched, min_gap < max_step)
}

/// Follows one realization across `grid`; the first row keeps solver order.
pub fn parameter_sweep(
    s: &mut Stream,
    model: SweepModel,
    grid: &[f64],
    n: usize,
) -> Result<SweepTable> {
    if n < 2 {
        return Err(invalid("N", "need N >= 2"));
    }
    if grid.is_empty() {
        return Err(invalid("grid", "empty grid"));
    }
    let spectra: Vec<Vec<Complex64>> = match model {
        SweepModel::Antiherm => {
            if let Some(a) = grid.iter().find(|a| !(**a >= 0.0) || !a.is_finite()) {
                return Err(invalid(
                    "alpha",
                    format!("grid values must be finite and >= 0, got {a}"),
                ));
            }
            let (mu, w) = antiherm_poles(s, n)?;
            let scale = (n as f64 / 2.0).sqrt();
            let mu: Vec<f64> = mu.iter().map(|m| m / scale).collect();
            grid.iter()
                .map(|&alpha| {
                    if alpha == 0.0 {
                        return Ok(mu.iter().map(|&m| Complex64::new(m, 0.0)).collect());
                    }
                    let p = SecularProblem::new(mu.clone(), w.clone(), Coupling::Imaginary(alpha))?;
                    Ok(solve_secular_complex(&p)?.into_values())
                })
                .collect::<Result<_>>()?
        }
        SweepModel::Subunitary => {
            if let Some(a) = grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
                return Err(invalid(
                    "a",
                    format!("grid values must lie in [0, 1], got {a}"),
                ));
            }
            let u = sample_haar_unitary(s, n)?;
            grid.iter()
                .map(|&a| {
                    let mut m = u.clone();
                    for i in 0..n {
                        m[(i, 0)] *= a;
                    }
                    Ok(eig_complex_dense(&m, false)?.spectrum.into_values())
                })
                .collect::<Result<_>>()?
        }
    };
    let mut rows: Vec<SweepRow> = Vec::with_capacity(grid.len());
    for (&g, z) in grid.iter().zip(spectra) {
        let row = match rows.last() {
            None => SweepRow {
                grid_value: g,
                eigenvalues: z,
                ambiguous: false,
            },
            Some(prev) => {
                let (eigenvalues, ambiguous) = match_step(&prev.eigenvalues, &z);
                SweepRow {
                    grid_value: g,
                    eigenvalues,
                    ambiguous,
                }
            }
        };
        rows.push(row);
    }
    Ok(SweepTable { model, n, rows })
}
