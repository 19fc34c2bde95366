//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::{LN_10, PI};
use std::time::Instant;

use stochastic_relaxation::analysis::{
    certify_convexity, consistency_sweep, filtering_curve, stochastic_threshold_study, CertifyOptions, GridSpec,
    Verdict,
};
use stochastic_relaxation::closed_form::{min_eigenvalue, sigma_star, ClosedFormRelaxation};
use stochastic_relaxation::estimators::{
    finite_difference_grad, mc_expectation_on, score_gradient_on, translation_gradient_on, EstimatorConfig,
};
use stochastic_relaxation::optimize::{gradient_descent, graduated_descent, AnnealSchedule, DescentConfig};
use stochastic_relaxation::rng::SampleStream;
use stochastic_relaxation::{
    BernoulliParams, CosineSeries, CosineTerm, MeasureFamily, ObjectiveSpec, RelaxationParams,
};
use stochastic_relaxation_cli::parallel::Rayon;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rastrigin(n: usize) -> ObjectiveSpec {
    ObjectiveSpec::rastrigin(n, 10.0, 2.0 * PI).unwrap()
}

fn uniform_point(s: &mut SampleStream, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| s.uniform_in(lo, hi)).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn tally(label: &str, passed: usize, total: usize, need: usize) -> Outcome {
    let line = format!("{label} {passed}/{total} (need {need})");
    if passed >= need {
        Ok(line)
    } else {
        Err(line)
    }
}

fn closed_form_fidelity() -> Outcome {
    let start = Instant::now();
    let mut s = SampleStream::new(101, 0);
    let mut passed = 0;
    for cell in 0..20u64 {
        let n = 1 + (cell % 2) as usize;
        let spec = rastrigin(n);
        let theta = uniform_point(&mut s, n, -3.0, 3.0);
        let sigma = s.uniform_in(0.1, 1.5);
        let closed = ClosedFormRelaxation::new(&spec, sigma).unwrap().value(&theta).unwrap();
        let params = RelaxationParams::new(theta, sigma).unwrap().into();
        let cfg = EstimatorConfig::new(200_000, 1000 + cell);
        let mc = mc_expectation_on(&Rayon, &spec, MeasureFamily::gaussian(n), &params, &cfg).unwrap();
        passed += usize::from(mc.within(closed, 4.0));
    }
    let secs = start.elapsed().as_secs_f64();
    let line = tally("cells within 4 SE:", passed, 20, 19)?;
    if secs < 30.0 {
        Ok(format!("{line}, {secs:.1} s"))
    } else {
        Err(format!("{line}, {secs:.1} s exceeds 30 s"))
    }
}

fn gradient_triangle() -> Outcome {
    let spec = rastrigin(2);
    let mut s = SampleStream::new(202, 0);
    // closed-score, closed-translation, closed-fd, score-translation, score-fd, translation-fd
    let mut pass = [0usize; 6];
    for point in 0..10u64 {
        let theta = uniform_point(&mut s, 2, -2.0, 2.0);
        let sigma = s.uniform_in(0.5, 1.5);
        let relax = ClosedFormRelaxation::new(&spec, sigma).unwrap();
        let closed = relax.grad(&theta).unwrap();
        let fd = finite_difference_grad(|t| relax.value(t).unwrap(), &theta, 1e-5).unwrap();
        let params = RelaxationParams::new(theta, sigma).unwrap();
        let score = score_gradient_on(
            &Rayon,
            &spec,
            MeasureFamily::gaussian(2),
            &params.clone().into(),
            &EstimatorConfig::new(100_000, 2000 + point),
        )
        .unwrap();
        let trans =
            translation_gradient_on(&Rayon, &spec, &params, &EstimatorConfig::new(100_000, 3000 + point)).unwrap();
        let joint = |i: usize| 4.0 * score.std_error[i].hypot(trans.std_error[i]);
        let checks = [
            score.within(&closed, 4.0),
            trans.within(&closed, 4.0),
            max_abs_diff(&closed, &fd) <= 1e-6,
            (0..2).all(|i| (score.mean[i] - trans.mean[i]).abs() <= joint(i)),
            score.within(&fd, 4.0),
            trans.within(&fd, 4.0),
        ];
        for (p, ok) in pass.iter_mut().zip(checks) {
            *p += usize::from(ok);
        }
    }
    let line = format!("closed/score/translation/fd pairs passing of 10: {pass:?} (need 9 each)");
    if pass.iter().all(|&p| p >= 9) {
        Ok(line)
    } else {
        Err(line)
    }
}

fn convexity_threshold() -> Outcome {
    let star = sigma_star(&rastrigin(1)).unwrap();
    if (star - 0.51746).abs() > 1e-4 {
        return Err(format!("sigma* = {star}"));
    }
    let spec = rastrigin(2);
    let opts = CertifyOptions { grid: GridSpec::new(-1.0, 1.0, 21).unwrap(), probes: 1000, m_star: 0.0, seed: 3 };
    let pass = certify_convexity(&spec, 0.55, &opts).unwrap();
    if pass.verdict != Verdict::CertifiedOnGrid {
        return Err(format!("sigma = 0.55 gave {:?}", pass.verdict));
    }
    let fail = certify_convexity(&spec, 0.30, &opts).unwrap();
    let Verdict::RefutedAt(at) = &fail.verdict else {
        return Err(format!("sigma = 0.30 gave {:?}", fail.verdict));
    };
    if max_abs_diff(at, &[0.5, 0.5]) > 1e-12 {
        return Err(format!("refuted at {at:?}, expected the probe (0.5, 0.5)"));
    }
    let expected = 2.0 - 40.0 * PI * PI * (-0.18 * PI * PI).exp();
    let at_probe = min_eigenvalue(ClosedFormRelaxation::new(&spec, 0.30).unwrap().hessian(at).unwrap());
    let err = (fail.min_eigenvalue_observed - expected).abs().max((at_probe - expected).abs());
    if err > 1e-6 {
        return Err(format!("lambda_min {} vs {expected}", fail.min_eigenvalue_observed));
    }
    Ok(format!(
        "sigma* = {star:.6}; certified at 0.55; refuted at {at:?} with lambda_min {expected:.6} (err {err:.1e})"
    ))
}

fn convexity_preservation() -> Outcome {
    let mut s = SampleStream::new(404, 0);
    for _ in 0..100 {
        let n = 1 + (s.next_u64() % 4) as usize;
        let m = s.uniform_in(0.1, 5.0);
        let spec = ObjectiveSpec::quad_plus_cosine(n, m, CosineSeries::empty()).unwrap();
        let theta = uniform_point(&mut s, n, -10.0, 10.0);
        let sigma = s.uniform_in(0.01, 5.0);
        let h = ClosedFormRelaxation::new(&spec, sigma).unwrap().hessian(&theta).unwrap();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 2.0 * m } else { 0.0 };
                if h[(i, j)] != want {
                    return Err(format!("H[{i},{j}] = {} at m = {m}, expected {want}", h[(i, j)]));
                }
            }
        }
    }
    Ok("Hessian equals 2m I exactly at 100 random (theta, sigma)".into())
}

fn consistency() -> Outcome {
    let spec = rastrigin(1);
    let sigmas = [1.0, 0.5, 0.1, 0.05, 0.01];
    let cfg = EstimatorConfig::new(100_000, 505);
    let rep = consistency_sweep(&spec, &[0.0], &sigmas, &[0.1], &cfg).unwrap();
    let mut worst = 0.0_f64;
    for (s, gap) in sigmas.iter().zip(&rep.gaps) {
        let oracle = s * s + 10.0 * (1.0 - (-2.0 * PI * PI * s * s).exp());
        worst = worst.max((gap - oracle).abs());
    }
    if worst > 1e-10 {
        return Err(format!("gap deviates from oracle by {worst:e}"));
    }
    let gap = rep.gaps[4];
    if gap >= 0.02 || gap.is_nan() {
        return Err(format!("gap at sigma = 0.01 is {gap}"));
    }
    let cell = rep.epsilon_delta_table.iter().find(|c| c.sigma == 0.01).unwrap();
    if cell.mass.mean.is_nan() || cell.mass.mean >= 1e-3 + 4.0 * cell.mass.std_error {
        return Err(format!("mass at sigma = 0.01 is {} (SE {})", cell.mass.mean, cell.mass.std_error));
    }
    Ok(format!("gap oracle err {worst:.1e}; gap(0.01) = {gap:.6}; mass(0.01, 0.1) = {}", cell.mass.mean))
}

/// Expectation of `f` under a finite discrete measure given as `(weight, atom)` pairs.
fn discrete_expectation(f: impl Fn(f64) -> f64, atoms: &[(f64, f64)]) -> f64 {
    atoms.iter().map(|&(w, x)| w * f(x)).sum()
}

fn counterexamples() -> Outcome {
    let square = |x: f64| x * x;
    for k in 1..100 {
        let theta = k as f64 / 100.0;
        let e = discrete_expectation(square, &[(1.0 - theta, 0.0), (theta, 1.0 / theta)]);
        if (e - 1.0 / theta).abs() > 1e-12 * (1.0 / theta) || e <= 1.0 {
            return Err(format!("escaping mixture at theta = {theta}: {e}"));
        }
    }
    let well = |x: f64| -(-x * x).exp();
    for k in 1..100 {
        let theta = 1.0 + k as f64 / 10.0;
        let e = discrete_expectation(well, &[(1.0, theta)]);
        if (e + (-theta * theta).exp()).abs() > 1e-15 || e <= -(-1.0f64).exp() {
            return Err(format!("drifting Dirac at theta = {theta}: {e}"));
        }
    }
    Ok("E = 1/theta > 1 > f(0) = 0 and E = -exp(-theta^2) > -1/e > f(0) = -1".into())
}

fn lipschitz_transfer() -> Outcome {
    let mut s = SampleStream::new(707, 0);
    let mut tightest = 0.0_f64;
    for _ in 0..5 {
        let n = 1 + (s.next_u64() % 3) as usize;
        let terms: Vec<CosineTerm> = (0..1 + s.next_u64() % 4)
            .map(|_| {
                let xi = uniform_point(&mut s, n, -2.0 * PI, 2.0 * PI);
                CosineTerm::new(s.uniform_in(-10.0, 10.0), xi, s.uniform_in(-PI, PI))
            })
            .collect();
        let spec =
            ObjectiveSpec::quad_plus_cosine(n, s.uniform_in(0.0, 3.0), CosineSeries::new(terms).unwrap()).unwrap();
        let sigma = s.uniform_in(0.1, 1.5);
        let relax = ClosedFormRelaxation::new(&spec, sigma).unwrap();
        let l = relax.lipschitz_grad_constant();
        for _ in 0..1000 {
            let u = uniform_point(&mut s, n, -3.0, 3.0);
            let v = uniform_point(&mut s, n, -3.0, 3.0);
            let du: Vec<f64> =
                relax.grad(&u).unwrap().iter().zip(relax.grad(&v).unwrap()).map(|(a, b)| a - b).collect();
            let ratio = norm(&du) / norm(&u.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<_>>());
            if ratio > l {
                return Err(format!("difference quotient {ratio} exceeds L = {l}"));
            }
            tightest = tightest.max(ratio / l);
        }
    }
    Ok(format!("5000 pairs, largest quotient/L = {tightest:.3}"))
}

fn filtering_and_scaling() -> Outcome {
    let coupled = ObjectiveSpec::quad_plus_cosine(
        2,
        1.0,
        CosineSeries::new(vec![CosineTerm::new(6.0, vec![3.0, 1.0], 0.0), CosineTerm::new(4.0, vec![1.0, -2.0], 0.5)])
            .unwrap(),
    )
    .unwrap();
    let mut worst = 0.0_f64;
    for spec in [rastrigin(1), rastrigin(2), coupled] {
        let star = sigma_star(&spec).unwrap();
        let (_, bound) = filtering_curve(&spec, &[star]).unwrap()[0];
        worst = worst.max((bound - 2.0 * spec.quad_strength()).abs());
    }
    if worst > 1e-8 {
        return Err(format!("filtering curve misses 2m at sigma* by {worst:e}"));
    }

    let single = |c: f64| {
        let spec =
            ObjectiveSpec::quad_plus_cosine(1, 1.0, CosineSeries::axis_aligned(1, c, 2.0 * PI).unwrap()).unwrap();
        sigma_star(&spec).unwrap()
    };
    let law = LN_10 / (2.0 * PI * PI);
    let mut law_err = 0.0_f64;
    for c in [1e1, 1e2, 1e3, 1e4] {
        let (lo, hi) = (single(c), single(10.0 * c));
        law_err = law_err.max((hi * hi - lo * lo - law).abs());
    }
    if law_err > 1e-10 {
        return Err(format!("single-frequency law off by {law_err:e}"));
    }

    let base = CosineSeries::new(vec![
        CosineTerm::new(1.0, vec![2.0 * PI, 0.0], 0.0),
        CosineTerm::new(1.0, vec![0.0, 2.0 * PI], 0.0),
        CosineTerm::new(1.0, vec![3.0, 4.0], 1.0),
    ])
    .unwrap();
    let scales = [1e2, 1e3, 1e4];
    let seeds: Vec<u64> = (0..32).collect();
    let rows = stochastic_threshold_study(&base, &scales, &seeds, 1.0).unwrap();
    for d in [1.0, 2.0] {
        let ratios: Vec<f64> = rows.iter().map(|r| r.mean_sigma_star / r.scale.powf(1.0 / d)).collect();
        if ratios.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("sigma*(C)/C^(1/{d}) increases: {ratios:?}"));
        }
    }
    Ok(format!("crossing err {worst:.1e}; law err {law_err:.1e}; ratios non-increasing for d = 1, 2"))
}

fn global_dominance() -> Outcome {
    let spec = rastrigin(2);
    let mut s = SampleStream::new(909, 0);
    let starts: Vec<Vec<f64>> = (0..100).map(|_| uniform_point(&mut s, 2, -5.12, 5.12)).collect();
    let schedule = AnnealSchedule::new(vec![1.0, 0.5, 0.25, 0.1, 0.02], 200).unwrap();
    let cfg = DescentConfig::closed_form(1000, 1e-8);
    let success = |theta: &[f64]| norm(theta) < 1e-3;
    let results = stochastic_relaxation_cli::parallel::multistart(&starts, |_, theta0| {
        let plain = gradient_descent(&spec, 0.0, theta0, &cfg).unwrap();
        let graduated = graduated_descent(&spec, &schedule, theta0, &cfg).unwrap();
        (success(plain.final_theta()), success(graduated.final_theta()))
    });
    let plain = results.iter().filter(|r| r.0).count();
    let graduated = results.iter().filter(|r| r.1).count();
    let line = format!("graduated {graduated}/100, plain {plain}/100");
    if graduated > plain && graduated >= 90 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn discrete_family() -> Outcome {
    let spec = ObjectiveSpec::one_max(4).unwrap();
    let mut s = SampleStream::new(1010, 0);
    for k in 0..3u64 {
        let theta = uniform_point(&mut s, 4, 0.1, 0.9);
        let params = BernoulliParams::new(theta.clone()).unwrap().into();
        let family = MeasureFamily::bernoulli(4);
        let cfg = EstimatorConfig::new(100_000, 5000 + k);
        let mean = mc_expectation_on(&Rayon, &spec, family, &params, &cfg).unwrap();
        let exact = -theta.iter().sum::<f64>();
        if !mean.within(exact, 4.0) {
            return Err(format!("mean {} vs {exact} (SE {})", mean.mean, mean.std_error));
        }
        let grad = score_gradient_on(&Rayon, &spec, family, &params, &cfg).unwrap();
        if !grad.within(&[-1.0; 4], 4.0) {
            return Err(format!("score gradient {:?} (SE {:?})", grad.mean, grad.std_error));
        }
    }
    Ok("mean and score gradient within 4 SE at 3 points".into())
}

fn reproducibility() -> Outcome {
    let configs = common::bundled_configs();
    for (command, path) in &configs {
        let first = common::run_config(command, path);
        let second = common::run_config(command, path);
        if first != second {
            return Err(format!("{} differs between runs", path.display()));
        }
        common::check_golden(path, &first)?;
    }
    Ok(format!("{} golden files reproduced byte for byte", configs.len()))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("closed-form fidelity", closed_form_fidelity),
        ("gradient-identity triangle", gradient_triangle),
        ("convexity threshold", convexity_threshold),
        ("convexity preservation", convexity_preservation),
        ("consistency", consistency),
        ("counterexample encodings", counterexamples),
        ("Lipschitz transfer", lipschitz_transfer),
        ("filtering and scaling", filtering_and_scaling),
        ("global-optimization dominance", global_dominance),
        ("discrete family", discrete_family),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
