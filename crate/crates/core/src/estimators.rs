//! Monte Carlo estimators of relaxation values and gradients.
//!
//! All estimators draw their samples block by block (see [`crate::rng`]) and
//! reduce per-block moments in block order, so the result depends only on the
//! inputs and the seed, never on how blocks were scheduled. A
//! [`BlockExecutor`] decides the schedule; [`Serial`] runs blocks in order on
//! the calling thread.
//!
//! Standard errors use the unbiased sample variance: `sqrt(s²/N)` with
//! `s² = Σ(yᵢ − ȳ)²/(N − 1)`, where `N` counts sampling units (single
//! samples, or antithetic pairs).
//!
//! The gradient identities rely on integrability of `f·∇ln k` and `∇f` under
//! the sampling measure. They hold for the built-in objectives (polynomially
//! bounded, smooth) under both families and are not checked at runtime.

use alloc::vec;
use alloc::vec::Vec;

use crate::measure::{BernoulliParams, FamilyKind, FamilyParams, MeasureFamily, RelaxationParams};
use crate::objective::ObjectiveSpec;
use crate::rng::{SampleStream, BLOCK_SIZE};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub samples: usize,
    pub seed: u64,
    /// Pair each Gaussian draw `θ + σz` with its reflection `θ − σz`.
    pub antithetic: bool,
}

impl EstimatorConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self { samples, seed, antithetic: false }
    }

    pub fn antithetic(mut self, on: bool) -> Self {
        self.antithetic = on;
        self
    }

    fn units(&self) -> Result<usize> {
        if self.samples < 2 {
            return Err(Error::InvalidArgument("estimators need at least 2 samples"));
        }
        if self.antithetic {
            if self.samples < 4 {
                return Err(Error::InvalidArgument("antithetic estimation needs at least 4 samples"));
            }
            Ok(self.samples / 2)
        } else {
            Ok(self.samples)
        }
    }
}

/// Scalar Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    /// Objective evaluations used.
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// `|mean − reference| ≤ k·std_error`
    pub fn within(&self, reference: f64, k: f64) -> bool {
        libm::fabs(self.mean - reference) <= k * self.std_error
    }
}

/// Vector Monte Carlo estimate with per-component standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct McVectorEstimate {
    pub mean: Vec<f64>,
    pub std_error: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

impl McVectorEstimate {
    /// Componentwise `|meanᵢ − referenceᵢ| ≤ k·std_errorᵢ`.
    pub fn within(&self, reference: &[f64], k: f64) -> bool {
        self.mean.iter().zip(&self.std_error).zip(reference).all(|((m, se), r)| libm::fabs(m - r) <= k * se)
    }
}

/// Running count, mean and sum of squared deviations per component.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    count: u64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    pub fn new(width: usize) -> Self {
        Self { count: 0, mean: vec![0.0; width], m2: vec![0.0; width] }
    }

    pub fn push(&mut self, y: &[f64]) {
        self.count += 1;
        let n = self.count as f64;
        for ((m, s), &v) in self.mean.iter_mut().zip(self.m2.iter_mut()).zip(y) {
            let d = v - *m;
            *m += d / n;
            *s += d * (v - *m);
        }
    }

    /// Pooled moments of `self` followed by `other`.
    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = other.clone();
            return;
        }
        let (na, nb) = (self.count as f64, other.count as f64);
        let n = na + nb;
        for i in 0..self.mean.len() {
            let d = other.mean[i] - self.mean[i];
            self.mean[i] += d * nb / n;
            self.m2[i] += other.m2[i] + d * d * na * nb / n;
        }
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    /// Standard error of the mean, per component.
    pub fn std_error(&self) -> Vec<f64> {
        let n = self.count as f64;
        self.m2.iter().map(|s| libm::sqrt(s / (n - 1.0) / n)).collect()
    }
}

/// Schedules sample blocks. Implementations must return one entry per block,
/// in block order.
pub trait BlockExecutor: Sync {
    fn map_blocks(&self, blocks: usize, job: &(dyn Fn(usize) -> Result<Moments> + Sync)) -> Vec<Result<Moments>>;
}

/// Runs blocks in order on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl BlockExecutor for Serial {
    fn map_blocks(&self, blocks: usize, job: &(dyn Fn(usize) -> Result<Moments> + Sync)) -> Vec<Result<Moments>> {
        (0..blocks).map(job).collect()
    }
}

/// Scratch space handed to a sampling unit.
struct Unit {
    z: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
}

fn run<E, F>(exec: &E, cfg: &EstimatorConfig, dim: usize, width: usize, unit: F) -> Result<McVectorEstimate>
where
    E: BlockExecutor + ?Sized,
    F: Fn(&mut SampleStream, &mut Unit) -> Result<()> + Sync,
{
    let units = cfg.units()?;
    let blocks = units.div_ceil(BLOCK_SIZE);
    let job = |b: usize| -> Result<Moments> {
        let mut stream = SampleStream::new(cfg.seed, b as u64);
        let mut scratch = Unit { z: vec![0.0; dim], x: vec![0.0; dim], y: vec![0.0; width] };
        let mut moments = Moments::new(width);
        let count = BLOCK_SIZE.min(units - b * BLOCK_SIZE);
        for _ in 0..count {
            unit(&mut stream, &mut scratch)?;
            moments.push(&scratch.y);
        }
        Ok(moments)
    };
    let mut total = Moments::new(width);
    for block in exec.map_blocks(blocks, &job) {
        total.merge(&block?);
    }
    let samples = if cfg.antithetic { 2 * units } else { units };
    Ok(McVectorEstimate { std_error: total.std_error(), mean: total.mean, samples, seed: cfg.seed })
}

fn scalar(v: McVectorEstimate) -> McEstimate {
    McEstimate { mean: v.mean[0], std_error: v.std_error[0], samples: v.samples, seed: v.seed }
}

fn check_pairing(spec: &ObjectiveSpec, family: MeasureFamily, params: &FamilyParams) -> Result<()> {
    if family.kind != params.kind() {
        return Err(Error::InvalidArgument("measure family and parameters disagree"));
    }
    spec.check_dim(family.dim)?;
    spec.check_dim(params.theta().len())?;
    match (family.kind, spec.is_continuous()) {
        (FamilyKind::IsotropicGaussian, true) | (FamilyKind::ProductBernoulli, false) => Ok(()),
        (FamilyKind::IsotropicGaussian, false) => {
            Err(Error::Unsupported("gaussian family needs a continuous objective"))
        }
        (FamilyKind::ProductBernoulli, true) => Err(Error::Unsupported("bernoulli family needs a discrete objective")),
    }
}

fn check_antithetic(cfg: &EstimatorConfig, kind: FamilyKind) -> Result<()> {
    if cfg.antithetic && kind != FamilyKind::IsotropicGaussian {
        return Err(Error::Unsupported("antithetic pairing is defined for the gaussian family only"));
    }
    Ok(())
}

#[inline]
fn place(x: &mut [f64], theta: &[f64], sigma: f64, z: &[f64], sign: f64) {
    for ((xi, t), zi) in x.iter_mut().zip(theta).zip(z) {
        *xi = t + sign * sigma * zi;
    }
}

#[inline]
fn draw_bernoulli(stream: &mut SampleStream, p: &BernoulliParams, x: &mut [f64]) {
    for (xi, &pi) in x.iter_mut().zip(p.theta()) {
        *xi = if stream.bernoulli(pi) { 1.0 } else { 0.0 };
    }
}

/// `E_θ(f) = ∫ f dP_θ` by Monte Carlo.
pub fn mc_expectation(
    spec: &ObjectiveSpec,
    family: MeasureFamily,
    params: &FamilyParams,
    cfg: &EstimatorConfig,
) -> Result<McEstimate> {
    mc_expectation_on(&Serial, spec, family, params, cfg)
}

pub fn mc_expectation_on<E: BlockExecutor + ?Sized>(
    exec: &E,
    spec: &ObjectiveSpec,
    family: MeasureFamily,
    params: &FamilyParams,
    cfg: &EstimatorConfig,
) -> Result<McEstimate> {
    check_pairing(spec, family, params)?;
    check_antithetic(cfg, family.kind)?;
    let dim = spec.dim();
    let est = match params {
        FamilyParams::Gaussian(p) => {
            let (theta, sigma) = (p.theta(), p.sigma());
            run(exec, cfg, dim, 1, |s, u| {
                s.fill_normal(&mut u.z);
                place(&mut u.x, theta, sigma, &u.z, 1.0);
                let mut v = spec.eval(&u.x)?;
                if cfg.antithetic {
                    place(&mut u.x, theta, sigma, &u.z, -1.0);
                    v = 0.5 * (v + spec.eval(&u.x)?);
                }
                u.y[0] = v;
                Ok(())
            })?
        }
        FamilyParams::Bernoulli(p) => run(exec, cfg, dim, 1, |s, u| {
            draw_bernoulli(s, p, &mut u.x);
            u.y[0] = spec.eval_discrete(&u.x)?;
            Ok(())
        })?,
    };
    Ok(scalar(est))
}

/// Score-function gradient `∇_θ E_θ(f) = E_θ(f·∇_θ ln k_θ)`.
///
/// Gaussian in `θ`: `∇ ln k = (x − θ)/σ²`. Bernoulli: `xᵢ/θᵢ − (1 − xᵢ)/(1 − θᵢ)`.
pub fn score_gradient(
    spec: &ObjectiveSpec,
    family: MeasureFamily,
    params: &FamilyParams,
    cfg: &EstimatorConfig,
) -> Result<McVectorEstimate> {
    score_gradient_on(&Serial, spec, family, params, cfg)
}

pub fn score_gradient_on<E: BlockExecutor + ?Sized>(
    exec: &E,
    spec: &ObjectiveSpec,
    family: MeasureFamily,
    params: &FamilyParams,
    cfg: &EstimatorConfig,
) -> Result<McVectorEstimate> {
    check_pairing(spec, family, params)?;
    check_antithetic(cfg, family.kind)?;
    let dim = spec.dim();
    match params {
        FamilyParams::Gaussian(p) => {
            let (theta, sigma) = (p.theta(), p.sigma());
            run(exec, cfg, dim, dim, |s, u| {
                s.fill_normal(&mut u.z);
                place(&mut u.x, theta, sigma, &u.z, 1.0);
                // (x − θ)/σ² = z/σ
                let mut w = spec.eval(&u.x)?;
                if cfg.antithetic {
                    place(&mut u.x, theta, sigma, &u.z, -1.0);
                    w = 0.5 * (w - spec.eval(&u.x)?);
                }
                for (y, z) in u.y.iter_mut().zip(&u.z) {
                    *y = w * z / sigma;
                }
                Ok(())
            })
        }
        FamilyParams::Bernoulli(p) => run(exec, cfg, dim, dim, |s, u| {
            draw_bernoulli(s, p, &mut u.x);
            let w = spec.eval_discrete(&u.x)?;
            for ((y, &x), &t) in u.y.iter_mut().zip(&u.x).zip(p.theta()) {
                *y = w * (x / t - (1.0 - x) / (1.0 - t));
            }
            Ok(())
        }),
    }
}

/// Translation gradient `∇_θ E_θ(f) = E_θ(∇_x f)` for `N(θ, σ²I)`.
pub fn translation_gradient(
    spec: &ObjectiveSpec,
    params: &RelaxationParams,
    cfg: &EstimatorConfig,
) -> Result<McVectorEstimate> {
    translation_gradient_on(&Serial, spec, params, cfg)
}

pub fn translation_gradient_on<E: BlockExecutor + ?Sized>(
    exec: &E,
    spec: &ObjectiveSpec,
    params: &RelaxationParams,
    cfg: &EstimatorConfig,
) -> Result<McVectorEstimate> {
    if !spec.has_grad() {
        return Err(Error::MissingGradient);
    }
    spec.check_dim(params.dim())?;
    let dim = spec.dim();
    let (theta, sigma) = (params.theta(), params.sigma());
    run(exec, cfg, dim, dim, |s, u| {
        s.fill_normal(&mut u.z);
        place(&mut u.x, theta, sigma, &u.z, 1.0);
        let g = spec.grad(&u.x)?;
        if cfg.antithetic {
            place(&mut u.x, theta, sigma, &u.z, -1.0);
            let h = spec.grad(&u.x)?;
            for ((y, a), b) in u.y.iter_mut().zip(&g).zip(&h) {
                *y = 0.5 * (a + b);
            }
        } else {
            u.y.copy_from_slice(&g);
        }
        Ok(())
    })
}

/// Mass of `max{|f|, 1}` outside the `delta`-ball around `center`:
/// `∫_{‖x − center‖ > δ} max{|f|, 1} dP_θ`.
pub fn concentration_mass(
    spec: &ObjectiveSpec,
    params: &RelaxationParams,
    center: &[f64],
    delta: f64,
    cfg: &EstimatorConfig,
) -> Result<McEstimate> {
    concentration_mass_on(&Serial, spec, params, center, delta, cfg)
}

pub fn concentration_mass_on<E: BlockExecutor + ?Sized>(
    exec: &E,
    spec: &ObjectiveSpec,
    params: &RelaxationParams,
    center: &[f64],
    delta: f64,
    cfg: &EstimatorConfig,
) -> Result<McEstimate> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive"));
    }
    if !spec.is_continuous() {
        return Err(Error::Unsupported("concentration mass needs a continuous objective"));
    }
    spec.check_dim(params.dim())?;
    spec.check_dim(center.len())?;
    crate::check_finite("center", center)?;
    let dim = spec.dim();
    let (theta, sigma) = (params.theta(), params.sigma());
    let delta_sq = delta * delta;
    let weight = |x: &[f64]| -> Result<f64> {
        let d: f64 = x.iter().zip(center).map(|(a, c)| (a - c) * (a - c)).sum();
        if d > delta_sq {
            Ok(libm::fabs(spec.eval(x)?).max(1.0))
        } else {
            Ok(0.0)
        }
    };
    let est = run(exec, cfg, dim, 1, |s, u| {
        s.fill_normal(&mut u.z);
        place(&mut u.x, theta, sigma, &u.z, 1.0);
        let mut v = weight(&u.x)?;
        if cfg.antithetic {
            place(&mut u.x, theta, sigma, &u.z, -1.0);
            v = 0.5 * (v + weight(&u.x)?);
        }
        u.y[0] = v;
        Ok(())
    })?;
    Ok(scalar(est))
}

/// Central differences `(g(θ + h·eᵢ) − g(θ − h·eᵢ)) / 2h`.
pub fn finite_difference_grad<G: FnMut(&[f64]) -> f64>(mut g: G, theta: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("finite-difference step must be positive"));
    }
    let mut probe = theta.to_vec();
    let mut out = Vec::with_capacity(theta.len());
    for i in 0..theta.len() {
        probe[i] = theta[i] + h;
        let up = g(&probe);
        probe[i] = theta[i] - h;
        let down = g(&probe);
        probe[i] = theta[i];
        out.push((up - down) / (2.0 * h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::ClosedFormRelaxation;
    use crate::objective::CosineSeries;
    use crate::BernoulliParams;
    use core::f64::consts::PI;

    fn quadratic(n: usize, m: f64) -> ObjectiveSpec {
        ObjectiveSpec::quad_plus_cosine(n, m, CosineSeries::empty()).unwrap()
    }

    fn gaussian(theta: Vec<f64>, sigma: f64) -> FamilyParams {
        RelaxationParams::new(theta, sigma).unwrap().into()
    }

    #[test]
    fn quadratic_expectation_matches_steiner() {
        let f = quadratic(2, 1.0);
        let est = mc_expectation(
            &f,
            MeasureFamily::gaussian(2),
            &gaussian(vec![0.0, 0.0], 1.0),
            &EstimatorConfig::new(200_000, 1),
        )
        .unwrap();
        assert!(est.within(2.0, 4.0), "{est:?}");
        assert_eq!(est.samples, 200_000);
    }

    #[test]
    fn constant_integrand_is_exact() {
        // m = 0 and an empty series give f ≡ 0
        let f = quadratic(3, 0.0);
        let p = gaussian(vec![1.0, -2.0, 0.5], 0.8);
        let est = mc_expectation(&f, MeasureFamily::gaussian(3), &p, &EstimatorConfig::new(5000, 3)).unwrap();
        assert_eq!((est.mean, est.std_error), (0.0, 0.0));

        let c = ObjectiveSpec::black_box(2, alloc::sync::Arc::new(|_: &[f64]| 4.25), None).unwrap();
        let est = mc_expectation(
            &c,
            MeasureFamily::gaussian(2),
            &gaussian(vec![0.3, 0.1], 2.0),
            &EstimatorConfig::new(3000, 9),
        )
        .unwrap();
        assert_eq!((est.mean, est.std_error), (4.25, 0.0));

        let cfg = EstimatorConfig::new(4000, 2).antithetic(true);
        let g = score_gradient(&c, MeasureFamily::gaussian(2), &gaussian(vec![0.3, 0.1], 2.0), &cfg).unwrap();
        assert_eq!(g.mean, vec![0.0, 0.0]);

        let plain = score_gradient(
            &c,
            MeasureFamily::gaussian(2),
            &gaussian(vec![0.3, 0.1], 2.0),
            &EstimatorConfig::new(20_000, 2),
        )
        .unwrap();
        assert!(plain.within(&[0.0, 0.0], 4.0), "{plain:?}");
    }

    #[test]
    fn one_max_expectation_and_score() {
        let f = ObjectiveSpec::one_max(4).unwrap();
        let p: FamilyParams = BernoulliParams::new(vec![0.5; 4]).unwrap().into();
        let cfg = EstimatorConfig::new(100_000, 11);
        let est = mc_expectation(&f, MeasureFamily::bernoulli(4), &p, &cfg).unwrap();
        assert!(est.within(-2.0, 4.0), "{est:?}");
        let g = score_gradient(&f, MeasureFamily::bernoulli(4), &p, &cfg).unwrap();
        assert!(g.within(&[-1.0; 4], 4.0), "{g:?}");
    }

    #[test]
    fn score_gradient_of_quadratic() {
        let f = quadratic(1, 1.0);
        let g = score_gradient(
            &f,
            MeasureFamily::gaussian(1),
            &gaussian(vec![1.0], 1.0),
            &EstimatorConfig::new(200_000, 5),
        )
        .unwrap();
        assert!(g.within(&[2.0], 4.0), "{g:?}");
    }

    #[test]
    fn translation_gradient_examples() {
        let f = quadratic(1, 1.0);
        let p = RelaxationParams::new(vec![1.0], 1.0).unwrap();
        let g = translation_gradient(&f, &p, &EstimatorConfig::new(100_000, 5)).unwrap();
        assert!(g.within(&[2.0], 4.0), "{g:?}");

        let r = ObjectiveSpec::rastrigin(2, 10.0, 2.0 * PI).unwrap();
        let p = RelaxationParams::new(vec![0.0, 0.0], 0.7).unwrap();
        let g = translation_gradient(&r, &p, &EstimatorConfig::new(100_000, 6)).unwrap();
        assert!(g.within(&[0.0, 0.0], 4.0), "{g:?}");

        let p = RelaxationParams::new(vec![0.31, -0.84], 0.7).unwrap();
        let exact = ClosedFormRelaxation::new(&r, 0.7).unwrap().grad(p.theta()).unwrap();
        let g = translation_gradient(&r, &p, &EstimatorConfig::new(100_000, 7)).unwrap();
        assert!(g.within(&exact, 4.0), "{g:?} vs {exact:?}");

        let one_max = ObjectiveSpec::one_max(2).unwrap();
        let p2 = RelaxationParams::new(vec![0.5, 0.5], 1.0).unwrap();
        assert_eq!(translation_gradient(&one_max, &p2, &EstimatorConfig::new(10, 1)), Err(Error::MissingGradient));
    }

    #[test]
    fn concentration_mass_examples() {
        let f = quadratic(1, 0.0);
        let p = RelaxationParams::new(vec![0.0], 1.0).unwrap();
        let cfg = EstimatorConfig::new(200_000, 13);
        let tail = concentration_mass(&f, &p, &[0.0], 1.959964, &cfg).unwrap();
        assert!(tail.within(0.05, 4.0), "{tail:?}");
        let none = concentration_mass(&f, &p, &[0.0], 50.0, &cfg).unwrap();
        assert_eq!(none.mean, 0.0);
        assert!(concentration_mass(&f, &p, &[0.0], 0.0, &cfg).is_err());

        let r = ObjectiveSpec::rastrigin(1, 10.0, 2.0 * PI).unwrap();
        let mut last = f64::INFINITY;
        for sigma in [1.0, 0.5, 0.1, 0.01] {
            let p = RelaxationParams::new(vec![0.0], sigma).unwrap();
            let mass = concentration_mass(&r, &p, &[0.0], 0.1, &EstimatorConfig::new(100_000, 21)).unwrap();
            assert!(mass.mean <= last, "sigma {sigma}: {mass:?}");
            last = mass.mean;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn finite_difference_examples() {
        let g = finite_difference_grad(|x| x[0] * x[0] + x[1] * x[1], &[1.0, 2.0], 1e-5).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-8 && (g[1] - 4.0).abs() < 1e-8);
        assert_eq!(finite_difference_grad(|_| 3.0, &[1.0, 2.0], 1e-3).unwrap(), vec![0.0, 0.0]);
        assert!(finite_difference_grad(|_| 3.0, &[1.0], 0.0).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let r = ObjectiveSpec::rastrigin(2, 10.0, 2.0 * PI).unwrap();
        let p = gaussian(vec![0.4, -0.2], 0.6);
        let cfg = EstimatorConfig::new(5000, 77);
        let a = score_gradient(&r, MeasureFamily::gaussian(2), &p, &cfg).unwrap();
        let b = score_gradient(&r, MeasureFamily::gaussian(2), &p, &cfg).unwrap();
        assert_eq!(a, b);
        let c = score_gradient(&r, MeasureFamily::gaussian(2), &p, &EstimatorConfig::new(5000, 78)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let r = ObjectiveSpec::rastrigin(2, 10.0, 2.0 * PI).unwrap();
        let cfg = EstimatorConfig::new(100, 1);
        let p = gaussian(vec![0.0, 0.0], 1.0);
        assert!(mc_expectation(&r, MeasureFamily::gaussian(3), &p, &cfg).is_err());
        assert!(mc_expectation(&r, MeasureFamily::bernoulli(2), &p, &cfg).is_err());
        assert!(mc_expectation(&r, MeasureFamily::gaussian(2), &p, &EstimatorConfig::new(1, 1)).is_err());
        let one_max = ObjectiveSpec::one_max(2).unwrap();
        let b: FamilyParams = BernoulliParams::new(vec![0.5, 0.5]).unwrap().into();
        assert!(mc_expectation(&one_max, MeasureFamily::bernoulli(2), &b, &cfg.antithetic(true)).is_err());
        assert!(mc_expectation(&one_max, MeasureFamily::gaussian(2), &p, &cfg).is_err());
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let data: Vec<f64> = (0..37).map(|i| libm::sin(i as f64) * 3.0 + i as f64 * 0.1).collect();
        let mut whole = Moments::new(1);
        data.iter().for_each(|v| whole.push(&[*v]));
        let mut a = Moments::new(1);
        let mut b = Moments::new(1);
        data[..15].iter().for_each(|v| a.push(&[*v]));
        data[15..].iter().for_each(|v| b.push(&[*v]));
        a.merge(&b);
        assert!((a.mean()[0] - whole.mean()[0]).abs() < 1e-12);
        assert!((a.std_error()[0] - whole.std_error()[0]).abs() < 1e-12);
    }
}
