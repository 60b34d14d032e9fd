//! Closed-form and tabulated quantities by name, for `spectra theory`.

use crate::error::{config, Result};
use crate::suites::{critical_cdf, tw1_cdf, wishart_top_prediction};
use num_complex::Complex64;
use spectra_core::edge::{default_table, fredholm_f2w, tw_cdf, Beta, FredholmConfig};
use spectra_core::planar::{
    cue_density, mean_overlap, overlap_pdf, profile_cdf, rho_profile, CueKind,
};
use spectra_core::theory::{outlier_prediction, BulkLaw};
use std::collections::BTreeMap;

/// Quantity tags with their required parameters.
pub const QUANTITIES: [(&str, &[&str]); 13] = [
    ("semicircle", &["x"]),
    ("outlier", &["alpha"]),
    ("wishart_outlier", &["gamma", "b"]),
    ("tw", &["beta", "s"]),
    ("crit_cdf", &["beta", "w", "s"]),
    ("fredholm", &["w", "s"]),
    ("rho_profile", &["g", "y"]),
    ("profile_cdf", &["g", "y"]),
    ("mean_overlap", &["g", "y"]),
    ("overlap_pdf", &["g", "y", "t"]),
    ("cue_finite", &["n", "a", "x", "y"]),
    ("cue_kac", &["x", "y"]),
    ("cue_scaled", &["mu", "x", "y"]),
];

pub fn theory_value(quantity: &str, params: &BTreeMap<String, f64>) -> Result<f64> {
    let required = QUANTITIES
        .iter()
        .find(|(q, _)| *q == quantity)
        .map(|(_, r)| *r)
        .ok_or_else(|| {
            let names: Vec<&str> = QUANTITIES.iter().map(|(q, _)| *q).collect();
            config(format!("unknown quantity `{quantity}` (known: {names:?})"))
        })?;
    for k in params.keys() {
        if !required.contains(&k.as_str()) {
            return Err(config(format!(
                "`{quantity}` takes {required:?}, not `{k}`"
            )));
        }
    }
    let get = |k: &str| {
        params
            .get(k)
            .copied()
            .ok_or_else(|| config(format!("`{quantity}` needs parameter `{k}`")))
    };
    let point = || -> Result<Complex64> { Ok(Complex64::new(get("x")?, get("y")?)) };
    Ok(match quantity {
        "semicircle" => BulkLaw::semicircle().density(get("x")?),
        "outlier" => {
            let law = BulkLaw::semicircle();
            outlier_prediction(&law, get("alpha")?)?
                .location
                .unwrap_or(law.support.1)
        }
        "wishart_outlier" => wishart_top_prediction(get("gamma")?, get("b")?),
        "tw" => {
            let beta = Beta::from_u8(get("beta")? as u8)?;
            if beta == Beta::One {
                tw1_cdf(get("s")?)
            } else {
                tw_cdf(default_table(), beta, get("s")?)?
            }
        }
        "crit_cdf" => critical_cdf(get("beta")? as u8, get("w")?, get("s")?)?,
        "fredholm" => fredholm_f2w(get("w")?, get("s")?, &FredholmConfig::default())?,
        "rho_profile" => rho_profile(get("g")?, get("y")?)?,
        "profile_cdf" => profile_cdf(get("g")?, get("y")?)?,
        "mean_overlap" => mean_overlap(get("g")?, get("y")?)?,
        "overlap_pdf" => overlap_pdf(get("g")?, get("y")?, get("t")?)?,
        "cue_finite" => {
            let n = get("n")?;
            if !(n >= 1.0) || n.fract() != 0.0 {
                return Err(config("`n` must be a positive integer"));
            }
            let kind = CueKind::Finite {
                n: n as usize,
                a: Complex64::new(get("a")?, 0.0),
            };
            cue_density(kind, &[point()?])?
        }
        "cue_kac" => cue_density(CueKind::Kac, &[point()?])?,
        "cue_scaled" => cue_density(
            CueKind::Scaled {
                mu: Complex64::new(get("mu")?, 0.0),
            },
            &[point()?],
        )?,
        _ => unreachable!("checked against QUANTITIES"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn known_values() {
        let v = theory_value("outlier", &p(&[("alpha", 1.5)])).unwrap();
        assert!((v - 5.0 / 3.0).abs() < 1e-14);
        let v = theory_value("wishart_outlier", &p(&[("gamma", 2.0), ("b", 3.0)])).unwrap();
        assert!((v - 3.75).abs() < 1e-14);
        let v = theory_value("rho_profile", &p(&[("g", 1.25), ("y", 0.0)])).unwrap();
        assert!((v - 2.5).abs() < 1e-14);
    }

    #[test]
    fn rejects_unknown_or_missing() {
        assert!(theory_value("nope", &p(&[])).is_err());
        assert!(theory_value("outlier", &p(&[])).is_err());
        assert!(theory_value("outlier", &p(&[("alpha", 1.0), ("b", 2.0)])).is_err());
    }
}
