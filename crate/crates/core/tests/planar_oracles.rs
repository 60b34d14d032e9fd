//! Monte-Carlo oracles for the planar closed forms.

use num_complex::Complex64;
use spectra_core::ensembles::sample_subunitary;
use spectra_core::planar::{cue_density, laurent_zeros, CueKind};
use spectra_core::quad::integrate_adaptive;
use spectra_core::randgen::Stream;
use spectra_core::spectral::eig_complex_dense;
use spectra_core::stats::{chi_square, ks_two_sample};
use std::f64::consts::PI;

/// Radial counts of `moduli` in `bins` equal-mass bins of the theoretical
/// radial law `2πr ρ(r)` on `(lo, hi)`, returning the chi-square p-value.
fn radial_chi2(moduli: &[f64], lo: f64, hi: f64, bins: usize, rho: impl Fn(f64) -> f64) -> f64 {
    let mass = |a: f64, b: f64| integrate_adaptive(|r| 2.0 * PI * r * rho(r), a, b, 1e-12).unwrap();
    let total = mass(lo, hi);
    // Edges by bisection on the cumulative mass.
    let mut edges = vec![lo];
    for k in 1..bins {
        let target = total * k as f64 / bins as f64;
        let (mut a, mut b) = (lo, hi);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if mass(lo, m) < target {
                a = m;
            } else {
                b = m;
            }
        }
        edges.push(0.5 * (a + b));
    }
    edges.push(hi);
    let mut counts = vec![0u64; bins];
    for &r in moduli {
        if let Some(i) = edges.windows(2).position(|w| r >= w[0] && r < w[1]) {
            counts[i] += 1;
        }
    }
    let n: u64 = counts.iter().sum();
    let expected = vec![n as f64 / bins as f64; bins];
    chi_square(&counts, &expected).unwrap().1
}

#[test]
fn truncated_unitary_two_by_two_is_uniform() {
    // a = 0: one eigenvalue at the origin, the other uniform on the disk.
    let mut s = Stream::new(2024);
    let mut moduli = Vec::new();
    for _ in 0..20_000 {
        let m = sample_subunitary(&mut s, 2, Complex64::new(0.0, 0.0)).unwrap();
        let z = eig_complex_dense(&m, false).unwrap().spectrum;
        let r = z.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
        moduli.push(r);
    }
    let kind = CueKind::Finite {
        n: 2,
        a: Complex64::new(0.0, 0.0),
    };
    let p = radial_chi2(&moduli, 0.0, 1.0, 10, |r| {
        cue_density(kind, &[Complex64::new(r.max(1e-9), 0.0)]).unwrap()
    });
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn subunitary_finite_density_matches_samples() {
    let (n, a) = (4usize, 0.5);
    let mut s = Stream::new(77);
    let mut moduli = Vec::new();
    for _ in 0..10_000 {
        let m = sample_subunitary(&mut s, n, Complex64::new(a, 0.0)).unwrap();
        let z = eig_complex_dense(&m, false).unwrap().spectrum;
        moduli.extend(z.values().iter().map(|v| v.norm()));
    }
    let kind = CueKind::Finite {
        n,
        a: Complex64::new(a, 0.0),
    };
    let p = radial_chi2(&moduli, a, 1.0, 12, |r| {
        cue_density(kind, &[Complex64::new(r.clamp(a, 1.0 - 1e-12), 0.0)]).unwrap()
    });
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn laurent_zero_radii_invariant_under_coupling_phase() {
    let radii = |mu: Complex64, seed: u64| {
        let mut s = Stream::new(seed);
        let mut r = Vec::new();
        for _ in 0..3000 {
            let z = laurent_zeros(&mut s, mu, 100, 0.8).unwrap();
            r.extend(z.zeros.iter().map(|v| v.norm()));
        }
        r
    };
    let a = radii(Complex64::new(1.0, 0.0), 1);
    let b = radii(Complex64::from_polar(1.0, 2.1), 2);
    let d = ks_two_sample(&a, &b);
    assert!(d < 0.02, "KS = {d}");
}
