#![allow(dead_code)]

use std::f64::consts::PI;

use stochastic_relaxation::rng::SampleStream;
use stochastic_relaxation::{CosineSeries, CosineTerm, ObjectiveSpec};

pub fn rastrigin(n: usize) -> ObjectiveSpec {
    ObjectiveSpec::rastrigin(n, 10.0, 2.0 * PI).unwrap()
}

/// Random quadratic-plus-cosine objective with amplitudes in [−10, 10],
/// frequency norms in (0.5, 4π], phases in [−π, π).
/// `terms == 0` draws between one and four terms.
pub fn random_spec(s: &mut SampleStream, n: usize, terms: usize, m_range: (f64, f64)) -> ObjectiveSpec {
    let m = s.uniform_in(m_range.0, m_range.1);
    let terms = if terms == 0 { 1 + (s.next_u64() % 4) as usize } else { terms };
    let series = (0..terms)
        .map(|_| {
            let mut xi: Vec<f64> = (0..n).map(|_| s.normal()).collect();
            let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            let target = s.uniform_in(0.5, 4.0 * PI);
            xi.iter_mut().for_each(|v| *v *= target / norm);
            CosineTerm::new(s.uniform_in(-10.0, 10.0), xi, s.uniform_in(-PI, PI))
        })
        .collect();
    ObjectiveSpec::quad_plus_cosine(n, m, CosineSeries::new(series).unwrap()).unwrap()
}

pub fn random_point(s: &mut SampleStream, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| s.uniform_in(-r, r)).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Upper bound on the central-difference truncation error of the objective's
/// gradient: `h²/6 · Σⱼ |aⱼ|·‖ξⱼ‖³·damping`.
pub fn fd_truncation_bound(spec: &ObjectiveSpec, h: f64, sigma: f64) -> f64 {
    spec.cosine()
        .terms()
        .iter()
        .map(|t| {
            let q = t.frequency_norm_sq();
            t.amplitude.abs() * q.powf(1.5) * (-0.5 * sigma * sigma * q).exp()
        })
        .sum::<f64>()
        * h
        * h
        / 6.0
}
