//! Certification and study procedures built on the closed forms and the
//! estimators: convexity certificates, consistency sweeps, filtering curves
//! and threshold-scaling studies for random amplitudes.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::closed_form::{perturbation_bound, sigma_star, ClosedFormRelaxation};
use crate::estimators::{concentration_mass, mc_expectation, EstimatorConfig, McEstimate};
use crate::measure::{MeasureFamily, RelaxationParams};
use crate::objective::{CosineSeries, ObjectiveKind, ObjectiveSpec};
use crate::rng::SampleStream;
use crate::{Error, Result};

/// Eigenvalues within this distance of the claimed modulus count as meeting it.
pub const EIGEN_TOL: f64 = 1e-10;

/// Axis-aligned grid `[lo, hi]ⁿ` with `points` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::InvalidArgument("grid bounds must be finite with lo <= hi"));
        }
        if points == 0 {
            return Err(Error::InvalidArgument("grid needs at least one point per axis"));
        }
        Ok(Self { lo, hi, points })
    }

    /// Coordinate of node `i` along one axis.
    pub fn node(&self, i: usize) -> f64 {
        if self.points == 1 {
            return 0.5 * (self.lo + self.hi);
        }
        self.lo + (self.hi - self.lo) * i as f64 / (self.points - 1) as f64
    }

    /// Visits every node of the `dim`-dimensional grid, first axis slowest.
    pub fn for_each_node(&self, dim: usize, mut visit: impl FnMut(&[f64]) -> Result<()>) -> Result<()> {
        let mut idx = vec![0usize; dim];
        let mut theta: Vec<f64> = vec![self.node(0); dim];
        loop {
            visit(&theta)?;
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return Ok(());
                }
                axis -= 1;
                idx[axis] += 1;
                if idx[axis] < self.points {
                    theta[axis] = self.node(idx[axis]);
                    break;
                }
                idx[axis] = 0;
                theta[axis] = self.node(0);
            }
        }
    }
}

/// Evidence budget for [`certify_convexity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub grid: GridSpec,
    /// Uniform random probes drawn from the grid box.
    pub probes: usize,
    /// Claimed strong-convexity modulus `m*`: the Hessian must satisfy `H ⪰ m*·I`.
    pub m_star: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    CertifiedOnGrid,
    RefutedAt(Vec<f64>),
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityCertificate {
    pub sigma: f64,
    pub grid: GridSpec,
    pub random_probes: usize,
    /// Worst-case points `cos(⟨ξⱼ, θ⟩ + ψⱼ) = −1` checked for axis-aligned terms.
    pub analytic_probes: usize,
    pub min_eigenvalue_observed: f64,
    pub worst_theta: Vec<f64>,
    pub strong_convexity_modulus_claimed: f64,
    pub verdict: Verdict,
}

/// Analytic worst cases for axis-aligned terms: for each such term the point
/// putting its cosine at −1 on its axis, preceded by one point combining the
/// first aligned term of every axis.
pub fn worst_case_probes(spec: &ObjectiveSpec) -> Vec<Vec<f64>> {
    let n = spec.dim();
    let mut combined = vec![0.0; n];
    let mut covered = vec![false; n];
    let mut singles = Vec::new();
    for t in spec.cosine().terms() {
        if let Some(k) = t.axis() {
            let v = (PI - t.phase) / t.frequency[k];
            if !covered[k] {
                covered[k] = true;
                combined[k] = v;
            }
            let mut p = vec![0.0; n];
            p[k] = v;
            singles.push(p);
        }
    }
    let mut probes = Vec::with_capacity(singles.len() + 1);
    if covered.iter().filter(|c| **c).count() > 1 {
        probes.push(combined);
    }
    probes.extend(singles);
    probes
}

const MAX_GRID_NODES: usize = 10_000_000;

/// Smallest Hessian eigenvalue of the Gaussian relaxation over analytic
/// worst-case probes, the grid, and random probes, in that order.
pub fn certify_convexity(spec: &ObjectiveSpec, sigma: f64, opts: &CertifyOptions) -> Result<ConvexityCertificate> {
    let relax = ClosedFormRelaxation::new(spec, sigma)?;
    let n = spec.dim();
    let nodes = u32::try_from(n).ok().and_then(|e| opts.grid.points.checked_pow(e));
    if !nodes.is_some_and(|c| c <= MAX_GRID_NODES) {
        return Err(Error::InvalidArgument("grid has too many nodes"));
    }
    if !(opts.m_star >= 0.0 && opts.m_star.is_finite()) {
        return Err(Error::InvalidArgument("m_star must be finite and non-negative"));
    }

    let mut min_eig = f64::INFINITY;
    let mut worst = vec![0.0; n];
    let mut saw_nan = false;
    let mut visit = |theta: &[f64]| -> Result<()> {
        let l = relax.min_hessian_eigenvalue(theta)?;
        if l.is_nan() {
            saw_nan = true;
        } else if l < min_eig {
            min_eig = l;
            worst.copy_from_slice(theta);
        }
        Ok(())
    };

    let analytic = worst_case_probes(spec);
    for p in &analytic {
        visit(p)?;
    }
    opts.grid.for_each_node(n, &mut visit)?;
    let mut stream = SampleStream::new(opts.seed, 0);
    let mut theta = vec![0.0; n];
    for _ in 0..opts.probes {
        for t in theta.iter_mut() {
            *t = stream.uniform_in(opts.grid.lo, opts.grid.hi);
        }
        visit(&theta)?;
    }

    let verdict = if saw_nan || !min_eig.is_finite() {
        Verdict::Inconclusive
    } else if min_eig < opts.m_star - EIGEN_TOL {
        Verdict::RefutedAt(worst.clone())
    } else {
        Verdict::CertifiedOnGrid
    };
    Ok(ConvexityCertificate {
        sigma,
        grid: opts.grid,
        random_probes: opts.probes,
        analytic_probes: analytic.len(),
        min_eigenvalue_observed: min_eig,
        worst_theta: worst,
        strong_convexity_modulus_claimed: opts.m_star,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentrationCell {
    pub delta: f64,
    pub sigma: f64,
    pub mass: McEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub x_star: Vec<f64>,
    pub f_x_star: f64,
    pub sigma_schedule: Vec<f64>,
    /// `|E_{x*,σ}(f) − f(x*)|` per scale.
    pub gaps: Vec<f64>,
    /// Zero where the gap is computed in closed form.
    pub gap_std_errors: Vec<f64>,
    /// One cell per `(δ, σ)`, deltas outermost.
    pub epsilon_delta_table: Vec<ConcentrationCell>,
}

/// Approximation gaps at `x_star` and concentration masses around it over a
/// schedule of scales.
///
/// `f(x_star)` is evaluated, not assumed minimal; global minimality of
/// `x_star` is the caller's claim.
pub fn consistency_sweep(
    spec: &ObjectiveSpec,
    x_star: &[f64],
    sigma_schedule: &[f64],
    delta_list: &[f64],
    cfg: &EstimatorConfig,
) -> Result<ConsistencyReport> {
    if sigma_schedule.is_empty() || delta_list.is_empty() {
        return Err(Error::InvalidArgument("sigma and delta schedules must be nonempty"));
    }
    if delta_list.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::InvalidArgument("delta values must be positive"));
    }
    let f_star = spec.eval(x_star)?;
    let mut gaps = Vec::with_capacity(sigma_schedule.len());
    let mut gap_se = Vec::with_capacity(sigma_schedule.len());
    for &sigma in sigma_schedule {
        let params = RelaxationParams::new(x_star.to_vec(), sigma)?;
        if spec.kind() == ObjectiveKind::QuadPlusCosine {
            let v = ClosedFormRelaxation::new(spec, sigma)?.value(x_star)?;
            gaps.push(libm::fabs(v - f_star));
            gap_se.push(0.0);
        } else {
            let est = mc_expectation(spec, MeasureFamily::gaussian(spec.dim()), &params.into(), cfg)?;
            gaps.push(libm::fabs(est.mean - f_star));
            gap_se.push(est.std_error);
        }
    }
    let mut table = Vec::with_capacity(delta_list.len() * sigma_schedule.len());
    for &delta in delta_list {
        for &sigma in sigma_schedule {
            let params = RelaxationParams::new(x_star.to_vec(), sigma)?;
            let mass = concentration_mass(spec, &params, x_star, delta, cfg)?;
            table.push(ConcentrationCell { delta, sigma, mass });
        }
    }
    Ok(ConsistencyReport {
        x_star: x_star.to_vec(),
        f_x_star: f_star,
        sigma_schedule: sigma_schedule.to_vec(),
        gaps,
        gap_std_errors: gap_se,
        epsilon_delta_table: table,
    })
}

/// Uniform bound on the disturbance's Hessian contribution at each scale,
/// `(σ, perturbation_bound(σ))`. Strictly decreasing when the series is
/// nonempty; it equals `2m` at `σ*` whenever `σ* > 0`.
pub fn filtering_curve(spec: &ObjectiveSpec, sigma_schedule: &[f64]) -> Result<Vec<(f64, f64)>> {
    if spec.kind() != ObjectiveKind::QuadPlusCosine {
        return Err(Error::Unsupported("filtering curve requires a quadratic-plus-cosine objective"));
    }
    sigma_schedule
        .iter()
        .map(
            |&s| {
                if s >= 0.0 && s.is_finite() {
                    Ok((s, perturbation_bound(spec, s)))
                } else {
                    Err(Error::InvalidSigma(s))
                }
            },
        )
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRow {
    /// Amplitude budget `C = Σⱼ |Aⱼ|`.
    pub scale: f64,
    pub mean_sigma_star: f64,
    pub max_sigma_star: f64,
    /// `(2/‖ξ_min‖²)·ln(C/C₀)`: the exact growth of `σ*²` for a single
    /// frequency under the Gaussian kernel, relative to the first scale.
    pub law_sigma_sq_increment: f64,
}

/// Amplitudes uniform on the unit L1-simplex, one point per seed.
fn simplex_point(seed: u64, k: usize) -> Vec<f64> {
    let mut stream = SampleStream::new(seed, 0);
    let mut w: Vec<f64> = (0..k).map(|_| -libm::log(1.0 - stream.uniform())).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|v| *v /= total);
    w
}

/// `σ*` under random amplitudes with `Σⱼ |Aⱼ| = C` for each budget `C`.
///
/// Each seed fixes one direction on the simplex, reused across all budgets,
/// so every draw's threshold is monotone in `C`. Phases of `base` are kept.
pub fn stochastic_threshold_study(
    base: &CosineSeries,
    amplitude_scales: &[f64],
    seeds: &[u64],
    quad_strength: f64,
) -> Result<Vec<ThresholdRow>> {
    if amplitude_scales.is_empty() || seeds.is_empty() || base.is_empty() {
        return Err(Error::InvalidArgument("threshold study needs scales, seeds and a nonempty base series"));
    }
    if !(quad_strength > 0.0) {
        return Err(Error::InvalidArgument("threshold study requires a positive quad_strength"));
    }
    if amplitude_scales[0] <= 0.0 || amplitude_scales.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("amplitude scales must be positive and increasing"));
    }
    let dim = base.terms()[0].frequency.len();
    let xi_min_sq = base.terms().iter().map(|t| t.frequency_norm_sq()).fold(f64::INFINITY, f64::min);
    let directions: Vec<Vec<f64>> = seeds.iter().map(|&s| simplex_point(s, base.len())).collect();
    let c0 = amplitude_scales[0];
    let mut rows = Vec::with_capacity(amplitude_scales.len());
    for &c in amplitude_scales {
        let mut sum = 0.0;
        let mut max = 0.0_f64;
        for w in &directions {
            let amps: Vec<f64> = w.iter().map(|v| c * v).collect();
            let spec = ObjectiveSpec::quad_plus_cosine(dim, quad_strength, base.with_amplitudes(&amps)?)?;
            let s = sigma_star(&spec)?;
            sum += s;
            max = max.max(s);
        }
        rows.push(ThresholdRow {
            scale: c,
            mean_sigma_star: sum / directions.len() as f64,
            max_sigma_star: max,
            law_sigma_sq_increment: 2.0 / xi_min_sq * libm::log(c / c0),
        });
    }
    Ok(rows)
}
