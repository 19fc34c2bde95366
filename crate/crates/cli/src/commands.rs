//! One function per subcommand: validate the document, run the library
//! routine, and lay the result out as a [`Report`].

use serde::Serialize;
use stochastic_relaxation::analysis::{
    certify_convexity, consistency_sweep, filtering_curve, stochastic_threshold_study, CertifyOptions, GridSpec,
    Verdict,
};
use stochastic_relaxation::closed_form::{bernoulli_grad, bernoulli_value, sigma_star, ClosedFormRelaxation};
use stochastic_relaxation::estimators::{
    finite_difference_grad, mc_expectation_on, score_gradient_on, translation_gradient_on, EstimatorConfig,
};
use stochastic_relaxation::optimize::{
    gradient_descent, graduated_descent, AnnealSchedule, DescentConfig, GradientSource, StepRule, Trace,
};
use stochastic_relaxation::rng::{derive_seed, SampleStream};
use stochastic_relaxation::{
    BernoulliParams, FamilyParams, MeasureFamily, ObjectiveKind, ObjectiveSpec, RelaxationParams,
};

use crate::config::*;
use crate::error::{CliError, CliResult, ConfigContext};
use crate::flowfield::flow_field;
use crate::parallel::{multistart, Rayon};
use crate::report::{num, termination_name, trace_header, trace_rows, Report};

/// Final iterates closer than this to the origin count as successes in multi-start summaries.
pub const SUCCESS_RADIUS: f64 = 1e-3;

fn echo<T: Serialize>(cfg: &T) -> String {
    serde_json::to_string(cfg).expect("config documents serialize")
}

fn check_dim(spec: &ObjectiveSpec, v: &[f64], what: &str) -> CliResult<()> {
    if v.len() == spec.dim() {
        Ok(())
    } else {
        Err(CliError::config(format!("{what} has {} entries, objective dim is {}", v.len(), spec.dim())))
    }
}

fn require_closed_form(spec: &ObjectiveSpec) -> CliResult<()> {
    if spec.kind() == ObjectiveKind::QuadPlusCosine {
        Ok(())
    } else {
        Err(CliError::config("this command needs a quad_plus_cosine objective"))
    }
}

/// Family and parameters for a search point: Gaussian `(theta, sigma)` for
/// continuous objectives, Bernoulli `theta` for discrete ones.
fn search_point(spec: &ObjectiveSpec, theta: &[f64], sigma: Option<f64>) -> CliResult<(MeasureFamily, FamilyParams)> {
    check_dim(spec, theta, "theta")?;
    if spec.is_continuous() {
        let sigma = sigma.ok_or_else(|| CliError::config("missing field `sigma`"))?;
        let p = RelaxationParams::new(theta.to_vec(), sigma).config_err("sigma/theta")?;
        Ok((MeasureFamily::gaussian(spec.dim()), p.into()))
    } else {
        if sigma.is_some() {
            return Err(CliError::config("`sigma` does not apply to a discrete objective"));
        }
        let p = BernoulliParams::new(theta.to_vec()).config_err("theta")?;
        Ok((MeasureFamily::bernoulli(spec.dim()), p.into()))
    }
}

fn estimator(samples: usize, seed: u64, antithetic: bool) -> CliResult<EstimatorConfig> {
    let min = if antithetic { 4 } else { 2 };
    if samples < min {
        return Err(CliError::config(format!("`samples` must be at least {min}")));
    }
    Ok(EstimatorConfig::new(samples, seed).antithetic(antithetic))
}

pub fn eval(mut cfg: EvalConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    let spec = &cfg.objective;
    let (family, params) = search_point(spec, &cfg.theta, cfg.sigma)?;
    let est = estimator(cfg.samples, seed, cfg.antithetic)?;

    let mut r = Report::new("eval", seed, echo(&cfg), ["quantity", "value", "std_error", "samples"]);
    let closed = match &params {
        FamilyParams::Gaussian(p) => {
            r.row(["objective".into(), num(spec.eval(p.theta())?), num(0.0), "1".into()]);
            (spec.kind() == ObjectiveKind::QuadPlusCosine)
                .then(|| ClosedFormRelaxation::new(spec, p.sigma())?.value(p.theta()))
                .transpose()?
        }
        FamilyParams::Bernoulli(p) => Some(bernoulli_value(spec, p)?),
    };
    if let Some(v) = closed {
        r.row(["relaxation_closed_form".into(), num(v), num(0.0), String::new()]);
    }
    let mc = mc_expectation_on(&Rayon, spec, family, &params, &est)?;
    r.row(["relaxation_monte_carlo".into(), num(mc.mean), num(mc.std_error), mc.samples.to_string()]);
    if let Some(v) = closed {
        r.meta("closed_minus_mc_in_se", num((v - mc.mean) / mc.std_error));
    }
    Ok(r)
}

pub fn grad(mut cfg: GradConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    if !(cfg.fd_step > 0.0) {
        return Err(CliError::config("`fd_step` must be positive"));
    }
    let spec = &cfg.objective;
    let (family, params) = search_point(spec, &cfg.theta, cfg.sigma)?;
    let est = estimator(cfg.samples, seed, cfg.antithetic)?;
    let n = spec.dim();

    let (closed, translation, fd) = match &params {
        FamilyParams::Gaussian(p) => {
            let relax = (spec.kind() == ObjectiveKind::QuadPlusCosine)
                .then(|| ClosedFormRelaxation::new(spec, p.sigma()))
                .transpose()?;
            let closed = relax.as_ref().map(|r| r.grad(p.theta())).transpose()?;
            let fd = relax
                .as_ref()
                .map(|r| finite_difference_grad(|t| r.value(t).unwrap_or(f64::NAN), p.theta(), cfg.fd_step))
                .transpose()?;
            let translation = spec.has_grad().then(|| translation_gradient_on(&Rayon, spec, p, &est)).transpose()?;
            (closed, translation, fd)
        }
        FamilyParams::Bernoulli(p) => (Some(bernoulli_grad(spec, p)?), None, None),
    };
    let score = score_gradient_on(&Rayon, spec, family, &params, &est)?;

    let mut r = Report::new(
        "grad",
        seed,
        echo(&cfg),
        [
            "component",
            "closed_form",
            "score",
            "score_se",
            "translation",
            "translation_se",
            "finite_difference",
            "delta_score",
            "delta_translation",
            "delta_finite_difference",
        ],
    );
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    for i in 0..n {
        let c = closed.as_ref().map(|g| g[i]);
        let t = translation.as_ref().map(|g| g.mean[i]);
        let f = fd.as_ref().map(|g| g[i]);
        r.row([
            (i + 1).to_string(),
            opt(c),
            num(score.mean[i]),
            num(score.std_error[i]),
            opt(t),
            opt(translation.as_ref().map(|g| g.std_error[i])),
            opt(f),
            opt(c.map(|c| score.mean[i] - c)),
            opt(c.zip(t).map(|(c, t)| t - c)),
            opt(c.zip(f).map(|(c, f)| f - c)),
        ]);
    }
    r.meta("samples", score.samples.to_string());
    Ok(r)
}

pub fn sigma_star_cmd(mut cfg: SigmaStarConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    let spec = &cfg.objective;
    require_closed_form(spec)?;
    if !(spec.quad_strength() > 0.0) {
        return Err(CliError::config("sigma-star needs quad_strength > 0"));
    }
    let star = sigma_star(spec)?;
    let sigmas = match &cfg.sigmas {
        Some(s) => s.clone(),
        None => {
            let top = 2.0 * star.max(0.5);
            let mut s: Vec<f64> = (0..=20).map(|i| top * i as f64 / 20.0).collect();
            s.push(star);
            s.sort_by(f64::total_cmp);
            s.dedup();
            s
        }
    };
    if sigmas.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
        return Err(CliError::config("`sigmas` must be finite and non-negative"));
    }
    let curve = filtering_curve(spec, &sigmas)?;
    let two_m = 2.0 * spec.quad_strength();
    let mut r = Report::new("sigma-star", seed, echo(&cfg), ["sigma", "perturbation_bound", "convexity_margin"]);
    r.meta("sigma_star", num(star));
    r.meta("twice_quad_strength", num(two_m));
    for (s, b) in curve {
        r.row([num(s), num(b), num(two_m - b)]);
    }
    Ok(r)
}

fn verdict_cells(v: &Verdict) -> (&'static str, String) {
    match v {
        Verdict::CertifiedOnGrid => ("certified_on_grid", String::new()),
        Verdict::RefutedAt(t) => ("refuted_at", t.iter().map(|x| num(*x)).collect::<Vec<_>>().join(" ")),
        Verdict::Inconclusive => ("inconclusive", String::new()),
    }
}

pub fn certify(mut cfg: CertifyConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    let spec = &cfg.objective;
    require_closed_form(spec)?;
    let grid = GridSpec::new(cfg.grid.lo, cfg.grid.hi, cfg.grid.points).config_err("grid")?;
    RelaxationParams::new(vec![0.0; spec.dim()], cfg.sigma).config_err("sigma")?;
    let opts = CertifyOptions { grid, probes: cfg.probes, m_star: cfg.m_star, seed };
    let cert = certify_convexity(spec, cfg.sigma, &opts)?;
    let (verdict, at) = verdict_cells(&cert.verdict);

    let mut r = Report::new("certify", seed, echo(&cfg), ["field", "value"]);
    r.meta("verdict", verdict);
    let mut field = |k: &str, v: String| r.row([k.to_string(), v]);
    field("verdict", verdict.into());
    field("refuted_at", at);
    field("sigma", num(cert.sigma));
    field("grid_lo", num(cert.grid.lo));
    field("grid_hi", num(cert.grid.hi));
    field("grid_points", cert.grid.points.to_string());
    field("random_probes", cert.random_probes.to_string());
    field("analytic_probes", cert.analytic_probes.to_string());
    field("m_star", num(cert.strong_convexity_modulus_claimed));
    field("min_eigenvalue", num(cert.min_eigenvalue_observed));
    for (i, t) in cert.worst_theta.iter().enumerate() {
        field(&format!("worst_theta_{}", i + 1), num(*t));
    }
    Ok(r)
}

pub fn consistency(mut cfg: ConsistencyConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    let spec = &cfg.objective;
    if !spec.is_continuous() {
        return Err(CliError::config("consistency needs a continuous objective"));
    }
    check_dim(spec, &cfg.x_star, "x_star")?;
    if cfg.sigmas.is_empty() || cfg.deltas.is_empty() {
        return Err(CliError::config("`sigmas` and `deltas` must be nonempty"));
    }
    if cfg.sigmas.iter().chain(&cfg.deltas).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(CliError::config("`sigmas` and `deltas` must be positive"));
    }
    let est = estimator(cfg.samples, seed, cfg.antithetic)?;
    let rep = consistency_sweep(spec, &cfg.x_star, &cfg.sigmas, &cfg.deltas, &est)?;

    let mut r = Report::new(
        "consistency",
        seed,
        echo(&cfg),
        ["delta", "sigma", "gap", "gap_std_error", "mass", "mass_std_error", "mass_samples"],
    );
    r.meta("f_x_star", num(rep.f_x_star));
    for cell in &rep.epsilon_delta_table {
        let i = rep.sigma_schedule.iter().position(|s| *s == cell.sigma).expect("cell sigma is scheduled");
        r.row([
            num(cell.delta),
            num(cell.sigma),
            num(rep.gaps[i]),
            num(rep.gap_std_errors[i]),
            num(cell.mass.mean),
            num(cell.mass.std_error),
            cell.mass.samples.to_string(),
        ]);
    }
    Ok(r)
}

pub fn threshold_study(mut cfg: ThresholdStudyConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    if cfg.draws == 0 {
        return Err(CliError::config("`draws` must be at least 1"));
    }
    let seeds: Vec<u64> = (0..cfg.draws as u64).map(|i| derive_seed(seed, i)).collect();
    let rows =
        stochastic_threshold_study(&cfg.base, &cfg.scales, &seeds, cfg.quad_strength).config_err("threshold study")?;
    let mut r = Report::new(
        "threshold-study",
        seed,
        echo(&cfg),
        ["scale", "mean_sigma_star", "max_sigma_star", "law_sigma_sq_increment"],
    );
    for row in rows {
        r.row([num(row.scale), num(row.mean_sigma_star), num(row.max_sigma_star), num(row.law_sigma_sq_increment)]);
    }
    Ok(r)
}

enum Mode {
    Descent(f64),
    Graduated(AnnealSchedule),
}

fn run_one(
    spec: &ObjectiveSpec,
    mode: &Mode,
    theta0: &[f64],
    cfg: &DescentConfig,
) -> stochastic_relaxation::Result<Trace> {
    match mode {
        Mode::Descent(sigma) => gradient_descent(spec, *sigma, theta0, cfg),
        Mode::Graduated(s) => graduated_descent(spec, s, theta0, cfg),
    }
}

fn with_seed(src: GradientSource, seed: u64) -> GradientSource {
    match src {
        GradientSource::ClosedForm => GradientSource::ClosedForm,
        GradientSource::Score(c) => GradientSource::Score(EstimatorConfig { seed, ..c }),
        GradientSource::Translation(c) => GradientSource::Translation(EstimatorConfig { seed, ..c }),
    }
}

pub fn optimize(mut cfg: OptimizeConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    let spec = &cfg.objective;
    let mode = match &cfg.mode {
        ModeDoc::Descent { sigma } => {
            if !(*sigma >= 0.0 && sigma.is_finite()) {
                return Err(CliError::config("`sigma` must be finite and non-negative"));
            }
            Mode::Descent(*sigma)
        }
        ModeDoc::Graduated { sigmas, iters_per_stage } => {
            Mode::Graduated(AnnealSchedule::new(sigmas.clone(), *iters_per_stage).config_err("schedule")?)
        }
    };
    let sampler = |s: SamplerDoc| estimator(s.samples, seed, s.antithetic);
    let gradient_source = match cfg.gradient {
        GradientDoc::ClosedForm => GradientSource::ClosedForm,
        GradientDoc::Score(s) => GradientSource::Score(sampler(s)?),
        GradientDoc::Translation(s) => GradientSource::Translation(sampler(s)?),
    };
    let step_rule = match cfg.step {
        StepDoc::OneOverL => StepRule::OneOverL,
        StepDoc::Fixed(eta) => StepRule::Fixed(eta),
    };
    let descent = DescentConfig { max_iters: cfg.max_iters, grad_tol: cfg.grad_tol, step_rule, gradient_source };
    if descent.max_iters == 0 || !(descent.grad_tol > 0.0) {
        return Err(CliError::config("`max_iters` must be at least 1 and `grad_tol` positive"));
    }
    let n = spec.dim();

    match (&cfg.theta0, cfg.starts) {
        (Some(theta0), None) => {
            check_dim(spec, theta0, "theta0")?;
            let trace = run_one(spec, &mode, theta0, &descent)?;
            let mut r = Report::new("optimize", seed, echo(&cfg), trace_header(n));
            r.meta("terminated_by", termination_name(trace.terminated_by));
            r.meta("final_theta", trace.final_theta().iter().map(|v| num(*v)).collect::<Vec<_>>().join(" "));
            for row in trace_rows(&trace) {
                r.row(row);
            }
            Ok(r)
        }
        (None, Some(starts)) => {
            if starts.count == 0 || !(starts.lo <= starts.hi) {
                return Err(CliError::config("`starts` needs count >= 1 and lo <= hi"));
            }
            let mut stream = SampleStream::new(seed, u64::MAX);
            let points: Vec<Vec<f64>> =
                (0..starts.count).map(|_| (0..n).map(|_| stream.uniform_in(starts.lo, starts.hi)).collect()).collect();
            let traces = multistart(&points, |i, theta0| {
                let cfg = DescentConfig {
                    gradient_source: with_seed(descent.gradient_source, derive_seed(seed, i as u64)),
                    ..descent
                };
                run_one(spec, &mode, theta0, &cfg)
            });
            let mut header = vec!["start".to_string()];
            header.extend((1..=n).map(|i| format!("theta0_{i}")));
            header.extend((1..=n).map(|i| format!("final_theta_{i}")));
            header.extend(["final_value", "final_norm", "iterations", "terminated_by"].map(String::from));
            let mut r = Report::new("optimize", seed, echo(&cfg), header);
            let mut successes = 0;
            for (i, (theta0, trace)) in points.iter().zip(traces).enumerate() {
                let trace = trace?;
                let last = trace.last();
                let norm = last.theta.iter().map(|v| v * v).sum::<f64>().sqrt();
                successes += usize::from(norm < SUCCESS_RADIUS);
                let mut row = vec![i.to_string()];
                row.extend(theta0.iter().map(|v| num(*v)));
                row.extend(last.theta.iter().map(|v| num(*v)));
                row.extend([
                    num(last.value),
                    num(norm),
                    last.iter.to_string(),
                    termination_name(trace.terminated_by).into(),
                ]);
                r.row(row);
            }
            r.meta("successes", format!("{successes}/{} within {}", starts.count, num(SUCCESS_RADIUS)));
            Ok(r)
        }
        _ => Err(CliError::config("give exactly one of `theta0` and `starts`")),
    }
}

pub fn flowfield(mut cfg: FlowfieldConfig, seed: Option<u64>) -> CliResult<Report> {
    let seed = resolve_seed(seed, &mut cfg.seed)?;
    let spec = &cfg.objective;
    if spec.dim() != 2 {
        return Err(CliError::config(format!("flowfield needs a 2-dimensional objective, got dim {}", spec.dim())));
    }
    if !spec.has_grad() {
        return Err(CliError::config("flowfield needs a differentiable objective"));
    }
    if cfg.which == FieldKind::Relaxed {
        require_closed_form(spec)?;
        let sigma = cfg.sigma.ok_or_else(|| CliError::config("missing field `sigma`"))?;
        RelaxationParams::new(vec![0.0; 2], sigma).config_err("sigma")?;
    }
    let grid = GridSpec::new(cfg.lo, cfg.hi, cfg.points).config_err("grid")?;
    let field = flow_field(spec, cfg.which, cfg.sigma, &grid)?;
    let mut r = Report::new("flowfield", seed, echo(&cfg), ["theta_1", "theta_2", "g_1", "g_2"]);
    for cell in field {
        r.row(cell.map(num));
    }
    Ok(r)
}
