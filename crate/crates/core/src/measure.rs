//! Parameterized measure families: `N(θ, σ²I)` on `ℝⁿ` and product Bernoulli on
//! `{0,1}ⁿ`.

use alloc::vec::Vec;

use crate::{check_finite, Error, Result};

/// Translation `θ` and scale `σ` of an isotropic Gaussian, `P_θ^σ(A) = P₀(σ⁻¹(A − θ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationParams {
    theta: Vec<f64>,
    sigma: f64,
}

impl RelaxationParams {
    pub fn new(theta: Vec<f64>, sigma: f64) -> Result<Self> {
        check_finite("theta", &theta)?;
        check_sigma(sigma)?;
        Ok(Self { theta, sigma })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

/// Success probabilities of a product Bernoulli measure, in the open cube `(0,1)ⁿ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliParams {
    theta: Vec<f64>,
}

impl BernoulliParams {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        for (index, &value) in theta.iter().enumerate() {
            // NaN fails both comparisons
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidBernoulli { index, value });
            }
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    IsotropicGaussian,
    ProductBernoulli,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasureFamily {
    pub kind: FamilyKind,
    pub dim: usize,
}

impl MeasureFamily {
    pub fn gaussian(dim: usize) -> Self {
        Self { kind: FamilyKind::IsotropicGaussian, dim }
    }

    pub fn bernoulli(dim: usize) -> Self {
        Self { kind: FamilyKind::ProductBernoulli, dim }
    }
}

/// A search point of the relaxation: parameters of one member of a family.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyParams {
    Gaussian(RelaxationParams),
    Bernoulli(BernoulliParams),
}

impl FamilyParams {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Self::Gaussian(_) => FamilyKind::IsotropicGaussian,
            Self::Bernoulli(_) => FamilyKind::ProductBernoulli,
        }
    }

    pub fn theta(&self) -> &[f64] {
        match self {
            Self::Gaussian(p) => p.theta(),
            Self::Bernoulli(p) => p.theta(),
        }
    }
}

impl From<RelaxationParams> for FamilyParams {
    fn from(p: RelaxationParams) -> Self {
        Self::Gaussian(p)
    }
}

impl From<BernoulliParams> for FamilyParams {
    fn from(p: BernoulliParams) -> Self {
        Self::Bernoulli(p)
    }
}
