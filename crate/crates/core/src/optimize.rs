//! First-order descent on the relaxation.
//!
//! [`gradient_descent`] takes fixed steps `θ ← θ − η·g` at one scale, with
//! `η = 1/L` from the closed-form Lipschitz constant or a fixed `η`. The
//! gradient comes from the closed form or from one of the Monte Carlo
//! estimators; stochastic sources reseed every iteration from the base seed
//! and the global iteration index.
//!
//! [`graduated_descent`] runs one descent per scale of a strictly decreasing
//! schedule, warm-starting each stage from the previous stage's final point.
//!
//! Scale `σ = 0` means the objective itself (closed-form source only).

use alloc::vec::Vec;

use crate::closed_form::{attenuation_factor, ClosedFormRelaxation};
use crate::estimators::{mc_expectation, score_gradient, translation_gradient, EstimatorConfig};
use crate::measure::{MeasureFamily, RelaxationParams};
use crate::objective::{ObjectiveKind, ObjectiveSpec};
use crate::rng::derive_seed;
use crate::{norm, Error, Result};

/// Iterates whose norm exceeds this abort the run.
pub const DIVERGENCE_NORM: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    OneOverL,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientSource {
    ClosedForm,
    Score(EstimatorConfig),
    Translation(EstimatorConfig),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig {
    pub max_iters: usize,
    /// Stop once `‖∇‖ ≤ grad_tol`.
    pub grad_tol: f64,
    pub step_rule: StepRule,
    pub gradient_source: GradientSource,
}

impl DescentConfig {
    pub fn closed_form(max_iters: usize, grad_tol: f64) -> Self {
        Self { max_iters, grad_tol, step_rule: StepRule::OneOverL, gradient_source: GradientSource::ClosedForm }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(Error::InvalidArgument("max_iters must be at least 1"));
        }
        if !(self.grad_tol > 0.0) {
            return Err(Error::InvalidArgument("grad_tol must be positive"));
        }
        if let StepRule::Fixed(eta) = self.step_rule {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::InvalidArgument("fixed step must be positive"));
            }
        }
        Ok(())
    }
}

/// Strictly decreasing positive scales, each run for `iters_per_stage` steps at most.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealSchedule {
    sigmas: Vec<f64>,
    iters_per_stage: usize,
}

impl AnnealSchedule {
    pub fn new(sigmas: Vec<f64>, iters_per_stage: usize) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(Error::InvalidArgument("anneal schedule is empty"));
        }
        if sigmas.iter().any(|s| !(*s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidArgument("anneal scales must be positive"));
        }
        if sigmas.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::InvalidArgument("anneal scales must be strictly decreasing"));
        }
        if iters_per_stage == 0 {
            return Err(Error::InvalidArgument("iters_per_stage must be at least 1"));
        }
        Ok(Self { sigmas, iters_per_stage })
    }

    /// `start, start·ratio, …` down to the first scale `≤ end`, which is replaced by `end`.
    pub fn geometric(start: f64, end: f64, ratio: f64, iters_per_stage: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) || !(end > 0.0) || !(start >= end) {
            return Err(Error::InvalidArgument("geometric schedule needs start >= end > 0 and ratio in (0, 1)"));
        }
        let mut sigmas = Vec::new();
        let mut s = start;
        while s > end {
            sigmas.push(s);
            s *= ratio;
        }
        sigmas.push(end);
        Self::new(sigmas, iters_per_stage)
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn iters_per_stage(&self) -> usize {
        self.iters_per_stage
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub iter: usize,
    pub sigma: f64,
    pub theta: Vec<f64>,
    /// Relaxation value, exact or estimated.
    pub value: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GradTol,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub iterates: Vec<TraceEntry>,
    pub terminated_by: Termination,
}

impl Trace {
    pub fn last(&self) -> &TraceEntry {
        self.iterates.last().expect("traces are nonempty")
    }

    pub fn final_theta(&self) -> &[f64] {
        &self.last().theta
    }
}

/// Lipschitz constant of the relaxation gradient at scale `sigma ≥ 0`.
fn lipschitz(spec: &ObjectiveSpec, sigma: f64) -> Result<f64> {
    if spec.kind() != ObjectiveKind::QuadPlusCosine {
        return Err(Error::Unsupported("1/L steps need a quadratic-plus-cosine objective"));
    }
    if sigma > 0.0 {
        return Ok(ClosedFormRelaxation::new(spec, sigma)?.lipschitz_grad_constant());
    }
    Ok(2.0 * spec.quad_strength()
        + spec
            .cosine()
            .terms()
            .iter()
            .map(|t| {
                let q = t.frequency_norm_sq();
                libm::fabs(t.amplitude) * q * attenuation_factor(q, 0.0)
            })
            .sum::<f64>())
}

fn reseed(cfg: &EstimatorConfig, iter: usize) -> EstimatorConfig {
    EstimatorConfig { seed: derive_seed(cfg.seed, iter as u64), ..*cfg }
}

/// Value and gradient of the relaxation at `theta` for global iteration `iter`.
fn oracle(
    spec: &ObjectiveSpec,
    sigma: f64,
    theta: &[f64],
    src: &GradientSource,
    iter: usize,
) -> Result<(f64, Vec<f64>)> {
    if sigma == 0.0 {
        return match src {
            GradientSource::ClosedForm => Ok((spec.eval(theta)?, spec.grad(theta)?)),
            _ => Err(Error::InvalidArgument("stochastic gradients need a positive scale")),
        };
    }
    let params = RelaxationParams::new(theta.to_vec(), sigma)?;
    let closed =
        (spec.kind() == ObjectiveKind::QuadPlusCosine).then(|| ClosedFormRelaxation::new(spec, sigma)).transpose()?;
    let value = |cfg: &EstimatorConfig| -> Result<f64> {
        match &closed {
            Some(r) => r.value(theta),
            None => Ok(mc_expectation(spec, MeasureFamily::gaussian(spec.dim()), &params.clone().into(), cfg)?.mean),
        }
    };
    match src {
        GradientSource::ClosedForm => {
            let r = closed.ok_or(Error::Unsupported("closed-form gradients need a quadratic-plus-cosine objective"))?;
            Ok((r.value(theta)?, r.grad(theta)?))
        }
        GradientSource::Score(cfg) => {
            let cfg = reseed(cfg, iter);
            let g = score_gradient(spec, MeasureFamily::gaussian(spec.dim()), &params.clone().into(), &cfg)?;
            Ok((value(&cfg)?, g.mean))
        }
        GradientSource::Translation(cfg) => {
            let cfg = reseed(cfg, iter);
            let g = translation_gradient(spec, &params, &cfg)?;
            Ok((value(&cfg)?, g.mean))
        }
    }
}

fn descend(
    spec: &ObjectiveSpec,
    sigma: f64,
    theta0: &[f64],
    cfg: &DescentConfig,
    first_iter: usize,
    out: &mut Vec<TraceEntry>,
) -> Result<Termination> {
    cfg.validate()?;
    spec.check_dim(theta0.len())?;
    crate::check_finite("theta0", theta0)?;
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    let eta = match cfg.step_rule {
        StepRule::OneOverL => 1.0 / lipschitz(spec, sigma)?,
        StepRule::Fixed(eta) => eta,
    };
    let mut theta = theta0.to_vec();
    for k in 0..=cfg.max_iters {
        let iter = first_iter + k;
        let (value, grad) = oracle(spec, sigma, &theta, &cfg.gradient_source, iter)?;
        let grad_norm = norm(&grad);
        if !grad_norm.is_finite() || !value.is_finite() {
            return Err(Error::Diverged { iter, norm: norm(&theta) });
        }
        out.push(TraceEntry { iter, sigma, theta: theta.clone(), value, grad_norm });
        if grad_norm <= cfg.grad_tol {
            return Ok(Termination::GradTol);
        }
        if k == cfg.max_iters {
            break;
        }
        for (t, g) in theta.iter_mut().zip(&grad) {
            *t -= eta * g;
        }
        let n = norm(&theta);
        if !(n <= DIVERGENCE_NORM) {
            return Err(Error::Diverged { iter: iter + 1, norm: n });
        }
    }
    Ok(Termination::MaxIters)
}

/// Fixed-step descent on `θ ↦ E_{θ,σ}(f)`.
pub fn gradient_descent(spec: &ObjectiveSpec, sigma: f64, theta0: &[f64], cfg: &DescentConfig) -> Result<Trace> {
    let mut iterates = Vec::new();
    let terminated_by = descend(spec, sigma, theta0, cfg, 0, &mut iterates)?;
    Ok(Trace { iterates, terminated_by })
}

/// Descent over a decreasing schedule of scales, warm-started stage to stage.
/// Each stage runs at most `schedule.iters_per_stage()` steps; `cfg.max_iters`
/// is ignored.
pub fn graduated_descent(
    spec: &ObjectiveSpec,
    schedule: &AnnealSchedule,
    theta0: &[f64],
    cfg: &DescentConfig,
) -> Result<Trace> {
    let stage_cfg = DescentConfig { max_iters: schedule.iters_per_stage, ..*cfg };
    let mut iterates: Vec<TraceEntry> = Vec::new();
    let mut theta = theta0.to_vec();
    let mut terminated_by = Termination::MaxIters;
    for &sigma in &schedule.sigmas {
        let first = iterates.last().map_or(0, |e| e.iter + 1);
        terminated_by = descend(spec, sigma, &theta, &stage_cfg, first, &mut iterates)?;
        theta.clone_from(&iterates.last().expect("stage produced iterates").theta);
    }
    Ok(Trace { iterates, terminated_by })
}
