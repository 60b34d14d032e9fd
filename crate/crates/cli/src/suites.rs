//! Figure-reproduction experiments. Replicas run in parallel on streams
//! `split(rep)` of the configured seed and are merged in replica order, so
//! the output does not depend on scheduling.

use crate::config::{make_grid, ExperimentConfig, Suite};
use crate::emit::{complex_header, numbered, write_csv, write_json, Table};
use crate::error::{config, CliError, Result};
use crate::ks_test;
use crate::report::{StatisticName, VerificationReport};
use num_complex::Complex64;
use rayon::prelude::*;
use spectra_core::edge::{
    crit_cdf, default_table, lax_propagate_with, tw_cdf, Beta, LaxField, LaxOptions,
};
use spectra_core::ensembles::{
    dyson_paths, sample_antiherm_spectrum, sample_gaussian_dense, sample_iid_shifted,
    sample_spiked_wishart_secular, sample_tridiag_largest_truncated, wishart_update_stream,
    DysonConfig, SpikedWishartSpec,
};
use spectra_core::planar::{parameter_sweep, profile_cdf, SweepModel, SweepTable};
use spectra_core::randgen::{RngState, Stream};
use spectra_core::spectral::eig_complex_dense;
use spectra_core::stats::{ks_two_sample, mean};
use spectra_core::theory::{outlier_prediction, BulkLaw};
use spectra_core::{CMatrix, Spectrum};
use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

/// Report plus the raw data behind it.
#[derive(Clone, Debug)]
pub struct SuiteOutput {
    pub report: VerificationReport,
    pub table: Table,
}

struct Deadline {
    start: Instant,
    cfg_cap: f64,
    suite: Suite,
}

impl Deadline {
    fn new(cfg: &ExperimentConfig) -> Self {
        Self {
            start: Instant::now(),
            cfg_cap: cfg.wall_clock_cap.as_secs_f64(),
            suite: cfg.suite,
        }
    }

    fn check(&self) -> Result<()> {
        if self.start.elapsed().as_secs_f64() > self.cfg_cap {
            return Err(CliError::Timeout {
                suite: self.suite.to_string(),
                cap_seconds: self.cfg_cap,
            });
        }
        Ok(())
    }

    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

/// Stream for replica `rep` of sample family `family` (0 is the main one).
fn replica_stream(seed: u64, family: u64, rep: u64) -> Stream {
    RngState::new(seed).split((family << 40) | rep).stream()
}

fn replicas<T: Send>(
    seed: u64,
    family: u64,
    count: usize,
    dl: &Deadline,
    f: impl Fn(&mut Stream) -> spectra_core::Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..count as u64)
        .into_par_iter()
        .map(|r| {
            dl.check()?;
            Ok(f(&mut replica_stream(seed, family, r))?)
        })
        .collect()
}

/// Soft-edge scaling `2 N^{2/3} (λ - 1)`.
pub fn soft_edge_scale(n: usize, lambda: f64) -> f64 {
    2.0 * (n as f64).powf(2.0 / 3.0) * (lambda - 1.0)
}

/// Critical parameter `w = N^{1/3} (1 - 2α)`.
pub fn critical_w(n: usize, alpha: f64) -> f64 {
    (n as f64).cbrt() * (1.0 - 2.0 * alpha)
}

/// Lax-pair field on `s ∈ [-8, 4]`, `w ∈ [0, 3]`, built once.
pub fn critical_field() -> &'static LaxField {
    static F: OnceLock<LaxField> = OnceLock::new();
    F.get_or_init(|| {
        lax_propagate_with(
            default_table(),
            &LaxOptions::new(3.0, 1e-3).s_range(-8.0, 4.0),
        )
        .expect("critical field on the default table")
    })
}

/// `F_{β,w}(s)` extended by 0 below and 1 above the tabulated `s` range.
pub fn critical_cdf(beta: u8, w: f64, s: f64) -> spectra_core::Result<f64> {
    let f = critical_field();
    let (lo, hi) = (f.s_grid[0], f.s_grid[f.s_grid.len() - 1]);
    if s < lo {
        Ok(0.0)
    } else if s > hi {
        Ok(1.0)
    } else {
        crit_cdf(f, beta, w, s)
    }
}

/// Tracy–Widom `E₁` extended by 0/1 outside the tabulated range.
pub fn tw1_cdf(s: f64) -> f64 {
    let t = default_table();
    if s < t.s_min() {
        0.0
    } else if s > t.s_max() {
        1.0
    } else {
        tw_cdf(t, Beta::One, s).expect("inside the table")
    }
}

/// Predicted largest eigenvalue / n of the spiked Wishart matrix with
/// `γ = n/N`: separated at `b(1 + 1/(γ(b-1)))` once `b > 1 + 1/√γ`, else
/// the upper edge `(1 + 1/√γ)²`.
pub fn wishart_top_prediction(gamma: f64, b: f64) -> f64 {
    let r = 1.0 / gamma.sqrt();
    if b > 1.0 + r {
        b * (1.0 + 1.0 / (gamma * (b - 1.0)))
    } else {
        (1.0 + r) * (1.0 + r)
    }
}

fn count_param(cfg: &ExperimentConfig, key: &str, min: usize) -> Result<usize> {
    let v = cfg.param(key);
    if !(v >= min as f64) || v.fract() != 0.0 {
        return Err(config(format!(
            "`{key}` must be an integer >= {min}, got {v}"
        )));
    }
    Ok(v as usize)
}

fn params_of(cfg: &ExperimentConfig) -> BTreeMap<String, f64> {
    let mut p: BTreeMap<String, f64> = cfg
        .suite
        .default_params()
        .iter()
        .map(|(k, _)| (k.to_string(), cfg.param(k)))
        .filter(|(_, v)| !v.is_nan())
        .collect();
    p.insert("N".into(), cfg.n as f64);
    p.insert("reps".into(), cfg.reps as f64);
    p.insert("seed".into(), cfg.seed as f64);
    p
}

fn to_cmatrix(m: &spectra_core::RMatrix) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| Complex64::new(m[(i, j)], 0.0))
}

/// Largest violation of `μ_{i+1}(k+1) <= μ_i(k) <= μ_i(k+1)` over a stream
/// of spectra (descending), relative to the top eigenvalue.
pub fn interlacing_violation(stream: &[Spectrum]) -> f64 {
    let mut worst: f64 = 0.0;
    for w in stream.windows(2) {
        let (a, b) = (w[0].values(), w[1].values());
        let scale = b[0].abs().max(f64::MIN_POSITIVE);
        for i in 0..a.len() {
            worst = worst.max((a[i] - b[i]) / scale);
            if i + 1 < b.len() {
                worst = worst.max((b[i + 1] - a[i]) / scale);
            }
        }
    }
    worst
}

pub fn sweep_table(t: &SweepTable) -> Table {
    let mut header = vec!["grid_value".to_string()];
    header.extend(complex_header(t.n));
    header.push("flag".into());
    let mut out = Table::new(header);
    for (i, r) in t.rows.iter().enumerate() {
        let mut row = vec![r.grid_value];
        for z in &r.eigenvalues {
            row.push(z.re);
            row.push(z.im);
        }
        row.push(if r.ambiguous { 1.0 } else { 0.0 });
        out.index.push(i as u64);
        out.rows.push(row);
    }
    out
}

/// Runs the configured suite and, if `output_path` is set, writes
/// `<suite>.csv` and `<suite>.json` there.
pub fn run_suite(cfg: &ExperimentConfig) -> Result<SuiteOutput> {
    cfg.validate()?;
    let dl = Deadline::new(cfg);
    let mut params = params_of(cfg);
    let (name, value, threshold, table) = match cfg.suite {
        Suite::F1 => f1(cfg, &dl, &mut params)?,
        Suite::F3 => f3(cfg, &dl, &mut params)?,
        Suite::F3a => f3a(cfg, &dl, &mut params)?,
        Suite::F4 => f4(cfg, &dl, &mut params)?,
        Suite::F2_5 => f2_5(cfg, &dl, &mut params)?,
        Suite::F5 => f5(cfg, &dl, &mut params)?,
        Suite::F3_1 => f3_1(cfg, &dl, &mut params)?,
        Suite::F4_3 => f4_3(cfg, &dl, &mut params)?,
        Suite::F4_4 | Suite::F4_5 => sweep_suite(cfg, &mut params)?,
    };
    dl.check()?;
    let report = VerificationReport::new(
        cfg.suite.name(),
        params,
        name,
        value,
        threshold,
        dl.elapsed(),
    );
    if let Some(dir) = &cfg.output_path {
        write_csv(&table, &dir.join(format!("{}.csv", cfg.suite.name())))?;
        write_json(&report, &dir.join(format!("{}.json", cfg.suite.name())))?;
    }
    Ok(SuiteOutput { report, table })
}

type Outcome = (StatisticName, f64, f64, Table);

/// Largest-real-part eigenvalue of an iid `Uniform[0, 1]` matrix, near `N/2`.
fn f1(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let n = cfg.n;
    let spectra = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        let m = sample_iid_shifted(s, n)?;
        Ok(eig_complex_dense(&to_cmatrix(&m), false)?
            .spectrum
            .sorted_by_real())
    })?;
    let top: Vec<f64> = spectra
        .iter()
        .map(|z| z.iter().map(|v| v.re).fold(f64::MIN, f64::max))
        .collect();
    // Bulk radius against the circular law √(N/12).
    let radius: Vec<f64> = spectra
        .iter()
        .map(|z| {
            let mut r: Vec<f64> = z.iter().map(|v| v.norm()).collect();
            r.sort_by(f64::total_cmp);
            r[r.len().saturating_sub(2)]
        })
        .collect();
    p.insert("mean_outlier".into(), mean(&top));
    p.insert(
        "mean_bulk_radius_ratio".into(),
        mean(&radius) / (n as f64 / 12.0).sqrt(),
    );
    let err = (mean(&top) / n as f64 - 0.5).abs();
    Ok((
        StatisticName::AbsError,
        err,
        0.01,
        Table::complex_spectra(&spectra),
    ))
}

/// Mean largest eigenvalue of the perturbed GOE against `α + 1/(4α)` or the edge 1.
fn f3(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let (n, alpha) = (cfg.n, cfg.param("alpha"));
    let law = BulkLaw::semicircle();
    let target = outlier_prediction(&law, alpha)?
        .location
        .unwrap_or(law.support.1);
    let spectra = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        Ok(sample_gaussian_dense(s, 1, n, alpha)?
            .spectrum()?
            .into_values())
    })?;
    let top: Vec<f64> = spectra.iter().map(|v| v[0]).collect();
    p.insert("predicted".into(), target);
    p.insert("mean_largest".into(), mean(&top));
    let err = (mean(&top) - target).abs();
    Ok((
        StatisticName::AbsError,
        err,
        0.05,
        Table::real_spectra(&spectra),
    ))
}

/// Dyson paths from `diag(α, 0, ..)`: endpoint largest eigenvalue against
/// a one-shot sample of `α 1̂1̂ᵀ + √t G`.
fn f3a(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let (n, alpha) = (cfg.n, cfg.param("alpha"));
    let t = match cfg.param("t") {
        t if t.is_nan() => 1.0 / (2.0 * n as f64),
        t => t,
    };
    let steps = count_param(cfg, "steps", 1)?;
    let factor = count_param(cfg, "direct_factor", 1)?;
    let dyson = DysonConfig::new(n, alpha, t, steps)?;
    let ends = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        let path = dyson_paths(s, &dyson)?;
        Ok(path.last().and_then(|e| e.largest()).unwrap_or(f64::NAN))
    })?;
    // G/√(2N) + a 1̂1̂ᵀ scaled by c = √(2Nt) has the law of √t G + c a 1̂1̂ᵀ.
    let c = (2.0 * n as f64 * t).sqrt();
    let direct = replicas(cfg.seed, 1, cfg.reps * factor, dl, |s| {
        Ok(c * sample_gaussian_dense(s, 1, n, alpha / c)?
            .spectrum()?
            .values()[0])
    })?;
    let ks = ks_two_sample(&ends, &direct);
    p.insert("t".into(), t);
    p.insert("mean_endpoint".into(), mean(&ends));
    p.insert("mean_direct".into(), mean(&direct));
    let path = dyson_paths(&mut replica_stream(cfg.seed, 0, 0), &dyson)?;
    let mut header = vec!["time".to_string()];
    header.extend(numbered("lambda", n));
    let mut table = Table::new(header);
    for (k, spec) in path.iter().enumerate() {
        let mut row = vec![t * (k + 1) as f64 / steps as f64];
        row.extend_from_slice(spec.values());
        table.push((k + 1) as u64, row)?;
    }
    Ok((StatisticName::Ks, ks, 0.03, table))
}

/// Interlacing along `W_k = Σ_{j<=k} v_j v_jᵀ`.
fn f4(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let n = cfg.n;
    let steps = count_param(cfg, "steps", 2)?;
    let streams = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        wishart_update_stream(s, n, steps)
    })?;
    let worst = streams
        .iter()
        .map(|st| interlacing_violation(st))
        .fold(0.0, f64::max);
    // Strict interlacing of the nonzero parts, k < N: the k eigenvalues of
    // W_k between the k + 1 of W_{k+1}.
    let mut strict = 0usize;
    let mut checked = 0usize;
    for st in &streams {
        for (k, w) in st.windows(2).enumerate().filter(|(k, _)| k + 1 < n) {
            let inner = &w[0].values()[..k + 1];
            let outer = Spectrum::new(w[1].values()[..k + 2].to_vec());
            checked += 1;
            strict += outer.interlaces(inner) as usize;
        }
    }
    p.insert(
        "strict_fraction".into(),
        strict as f64 / checked.max(1) as f64,
    );
    let rows: Vec<Vec<f64>> = streams[0].iter().map(|s| s.values().to_vec()).collect();
    let mut table = Table::real_spectra(&rows);
    table.index.iter_mut().for_each(|i| *i += 1);
    Ok((StatisticName::MaxResidual, worst, 1e-9, table))
}

/// `β = 1` at `α = 1/2`. No closed form is available for this law, so the
/// statistic is the KS distance of an `α = 0` control run against `E₁`,
/// which validates the scaling and sampler; the critical sample is the
/// emitted histogram data.
fn f2_5(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let (n, alpha) = (cfg.n, cfg.param("alpha"));
    let crit = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        Ok(soft_edge_scale(
            n,
            sample_tridiag_largest_truncated(s, 1.0, n, alpha)?,
        ))
    })?;
    let control = replicas(cfg.seed, 1, cfg.reps, dl, |s| {
        Ok(soft_edge_scale(
            n,
            sample_tridiag_largest_truncated(s, 1.0, n, 0.0)?,
        ))
    })?;
    let ks = ks_test(&control, tw1_cdf)?;
    p.insert("w".into(), critical_w(n, alpha));
    p.insert("ks_critical_vs_tw1".into(), ks_test(&crit, tw1_cdf)?);
    p.insert("mean_critical".into(), mean(&crit));
    p.insert("mean_control".into(), mean(&control));
    let mut table = Table::new(vec!["x_critical".into(), "x_control".into()]);
    for (i, (a, b)) in crit.iter().zip(&control).enumerate() {
        table.push(i as u64, vec![*a, *b])?;
    }
    Ok((StatisticName::Ks, ks, 0.02, table))
}

/// `β = 2` scaled largest eigenvalue against `F_{2,w}`.
fn f5(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let (n, alpha) = (cfg.n, cfg.param("alpha"));
    let w = critical_w(n, alpha);
    if !(0.0..=3.0).contains(&w) {
        return Err(config(format!(
            "w = N^(1/3)(1 - 2 alpha) = {w} lies outside [0, 3]"
        )));
    }
    let xs = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        Ok(soft_edge_scale(
            n,
            sample_tridiag_largest_truncated(s, 2.0, n, alpha)?,
        ))
    })?;
    // Validate the law on the grid before the KS pass, so errors surface.
    critical_cdf(2, w, 0.0)?;
    let ks = ks_test(&xs, |s| critical_cdf(2, w, s).unwrap_or(f64::NAN))?;
    p.insert("w".into(), w);
    p.insert("mean_scaled".into(), mean(&xs));
    let mut table = Table::new(vec!["x".into()]);
    for (i, x) in xs.iter().enumerate() {
        table.push(i as u64, vec![*x])?;
    }
    Ok((StatisticName::Ks, ks, 0.02, table))
}

/// Spiked Wishart largest eigenvalue / n from the secular route.
fn f3_1(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let rows = count_param(cfg, "rows", 1)?;
    let spec = SpikedWishartSpec::new(rows, cfg.n, cfg.param("b"))?;
    let spectra = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        let v = sample_spiked_wishart_secular(s, &spec)?;
        Ok(v.values()
            .iter()
            .map(|x| x / rows as f64)
            .collect::<Vec<f64>>())
    })?;
    let top: Vec<f64> = spectra.iter().map(|v| v[0]).collect();
    let target = wishart_top_prediction(spec.gamma(), spec.b);
    p.insert("predicted".into(), target);
    p.insert("mean_largest".into(), mean(&top));
    let err = (mean(&top) - target).abs();
    Ok((
        StatisticName::AbsError,
        err,
        0.05,
        Table::real_spectra(&spectra),
    ))
}

/// Scaled imaginary parts `√(2N) Im z` of the `near` eigenvalues closest to
/// the centre, with the escaping eigenvalue removed, for `α = √(N/2) α₀`.
pub fn planar_sample(
    s: &mut Stream,
    n: usize,
    alpha0: f64,
    near: usize,
) -> spectra_core::Result<Vec<f64>> {
    let alpha = (n as f64 / 2.0).sqrt() * alpha0;
    let mut z = sample_antiherm_spectrum(s, n, alpha)?.into_values();
    let top = z
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.im.total_cmp(&b.1.im))
        .map(|(i, _)| i)
        .expect("non-empty spectrum");
    z.swap_remove(top);
    z.sort_by(|a, b| a.re.abs().total_cmp(&b.re.abs()));
    let scale = (2.0 * n as f64).sqrt();
    Ok(z.iter().take(near).map(|v| v.im * scale).collect())
}

/// Planar profile: KS against the profile CDF under both conventions for
/// `g`, `(α₀ + 1/α₀)/2` and `α₀ + 1/α₀`; the better one is reported.
fn f4_3(cfg: &ExperimentConfig, dl: &Deadline, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let (n, alpha0) = (cfg.n, cfg.param("alpha0"));
    let near = count_param(cfg, "near", 1)?;
    if near + 1 > n {
        return Err(config("`near` must be below N"));
    }
    let ys: Vec<f64> = replicas(cfg.seed, 0, cfg.reps, dl, |s| {
        planar_sample(s, n, alpha0, near)
    })?
    .into_iter()
    .flatten()
    .collect();
    let ks_for = |g: f64| {
        ks_test(&ys, |y| {
            if y <= 0.0 {
                0.0
            } else {
                profile_cdf(g, y).unwrap_or(f64::NAN)
            }
        })
    };
    let g_half = 0.5 * (alpha0 + 1.0 / alpha0);
    let g_sum = alpha0 + 1.0 / alpha0;
    let (ks_half, ks_sum) = (ks_for(g_half)?, ks_for(g_sum)?);
    let (g, ks) = if ks_half <= ks_sum {
        (g_half, ks_half)
    } else {
        (g_sum, ks_sum)
    };
    p.insert("ks_g_half_sum".into(), ks_half);
    p.insert("ks_g_sum".into(), ks_sum);
    p.insert("g_selected".into(), g);
    let mut table = Table::new(vec!["y".into()]);
    for (i, y) in ys.iter().enumerate() {
        table.push(i as u64, vec![*y])?;
    }
    Ok((StatisticName::Ks, ks, 0.03, table))
}

/// One realization followed across the grid; the statistic is the exact
/// constraint `Σ Im z = α` or `∏|z| = a`.
fn sweep_suite(cfg: &ExperimentConfig, p: &mut BTreeMap<String, f64>) -> Result<Outcome> {
    let grid = make_grid(cfg.param("lo"), cfg.param("hi"), cfg.param("step"))?;
    let model = if cfg.suite == Suite::F4_4 {
        SweepModel::Antiherm
    } else {
        SweepModel::Subunitary
    };
    let t = parameter_sweep(&mut replica_stream(cfg.seed, 0, 0), model, &grid, cfg.n)?;
    let residual = t
        .rows
        .iter()
        .map(|r| match model {
            SweepModel::Antiherm => {
                (r.eigenvalues.iter().map(|z| z.im).sum::<f64>() - r.grid_value).abs()
            }
            SweepModel::Subunitary => {
                (r.eigenvalues.iter().map(|z| z.norm()).product::<f64>() - r.grid_value).abs()
            }
        })
        .fold(0.0, f64::max);
    p.insert("grid_points".into(), grid.len() as f64);
    p.insert(
        "ambiguous_rows".into(),
        t.rows.iter().filter(|r| r.ambiguous).count() as f64,
    );
    Ok((StatisticName::MaxResidual, residual, 1e-9, sweep_table(&t)))
}
