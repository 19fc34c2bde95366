//! Stochastic relaxations of optimization problems.
//!
//! A candidate `x` is replaced by a probability measure `P_θ` and the problem
//! `min f(x)` by `min_θ E_θ(f)`. This crate evaluates such relaxations for
//! isotropic Gaussian and product Bernoulli families, both in closed form
//! (quadratic plus cosine-series objectives) and by seeded Monte Carlo, and
//! builds on them:
//!
//! * [`objective`]: objective descriptions and their pointwise evaluation.
//! * [`measure`]: relaxation parameters and measure families.
//! * [`closed_form`]: exact value, gradient, Hessian, convexity threshold and
//!   Lipschitz constants of the Gaussian relaxation.
//! * [`estimators`]: Monte Carlo expectations, score-function and translation
//!   gradients, concentration mass, finite differences.
//! * [`analysis`]: convexity certificates, consistency sweeps, filtering
//!   curves and threshold-scaling studies.
//! * [`optimize`]: fixed-step and graduated (σ-annealed) descent.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod closed_form;
mod error;
pub mod estimators;
pub mod measure;
pub mod objective;
pub mod optimize;
pub mod rng;

pub use error::{Error, Result};
pub use measure::{BernoulliParams, FamilyKind, FamilyParams, MeasureFamily, RelaxationParams};
pub use objective::{CosineSeries, CosineTerm, ObjectiveKind, ObjectiveSpec};

pub(crate) fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    libm::sqrt(norm_sq(x))
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn check_finite(what: &'static str, x: &[f64]) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
