//! Exact isotropic-Gaussian relaxation of `f(x) = m·‖x‖² − Σⱼ aⱼ·cos(⟨ξⱼ, x⟩ + ψⱼ)`.
//!
//! Under `X ~ N(θ, σ²I)` the quadratic part integrates to `m·(nσ² + ‖θ‖²)` and
//! each cosine term keeps its shape but is damped by the characteristic
//! function of the normal distribution:
//!
//! ```text
//! E[a·cos(⟨ξ, X⟩ + ψ)] = a·cos(⟨ξ, θ⟩ + ψ)·exp(−½σ²‖ξ‖²)
//! ```
//!
//! Value, gradient and Hessian in `θ` follow by differentiation, which also
//! gives the convexity threshold `σ*` and a global Lipschitz constant of the
//! gradient.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::measure::check_sigma;
use crate::objective::{ObjectiveKind, ObjectiveSpec};
use crate::{norm_sq, Error, Result};

/// Damping `exp(−½σ²‖ξ‖²)` of a cosine component with squared frequency norm
/// `freq_norm_sq`.
#[inline]
pub fn attenuation_factor(freq_norm_sq: f64, sigma: f64) -> f64 {
    libm::exp(-0.5 * sigma * sigma * freq_norm_sq)
}

/// Damping of term `index` of the objective's cosine series at scale `sigma`.
pub fn attenuation(spec: &ObjectiveSpec, index: usize, sigma: f64) -> Result<f64> {
    let terms = spec.cosine().terms();
    let term = terms.get(index).ok_or(Error::IndexOutOfRange { index, len: terms.len() })?;
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    Ok(attenuation_factor(term.frequency_norm_sq(), sigma))
}

/// The Gaussian relaxation `θ ↦ E_{θ,σ}(f)` at a fixed scale.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormRelaxation<'a> {
    spec: &'a ObjectiveSpec,
    sigma: f64,
}

impl<'a> ClosedFormRelaxation<'a> {
    pub fn new(spec: &'a ObjectiveSpec, sigma: f64) -> Result<Self> {
        require_closed_form(spec)?;
        check_sigma(sigma)?;
        Ok(Self { spec, sigma })
    }

    pub fn spec(&self) -> &'a ObjectiveSpec {
        self.spec
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Per-term attenuation factors at this scale.
    pub fn attenuations(&self) -> Vec<f64> {
        self.spec.cosine().terms().iter().map(|t| attenuation_factor(t.frequency_norm_sq(), self.sigma)).collect()
    }

    /// `m·(nσ² + ‖θ‖²) − Σⱼ aⱼ·cos(⟨ξⱼ, θ⟩ + ψⱼ)·exp(−½σ²‖ξⱼ‖²)`
    pub fn value(&self, theta: &[f64]) -> Result<f64> {
        self.check(theta)?;
        let n = self.spec.dim() as f64;
        let m = self.spec.quad_strength();
        let damped: f64 = self
            .spec
            .cosine()
            .terms()
            .iter()
            .map(|t| t.amplitude * libm::cos(t.argument(theta)) * attenuation_factor(t.frequency_norm_sq(), self.sigma))
            .sum();
        Ok(m * (n * self.sigma * self.sigma + norm_sq(theta)) - damped)
    }

    /// `2m·θ + Σⱼ aⱼ·sin(⟨ξⱼ, θ⟩ + ψⱼ)·exp(−½σ²‖ξⱼ‖²)·ξⱼ`
    pub fn grad(&self, theta: &[f64]) -> Result<Vec<f64>> {
        self.check(theta)?;
        let m = self.spec.quad_strength();
        let mut g: Vec<f64> = theta.iter().map(|v| 2.0 * m * v).collect();
        for t in self.spec.cosine().terms() {
            let s = t.amplitude * libm::sin(t.argument(theta)) * attenuation_factor(t.frequency_norm_sq(), self.sigma);
            for (gi, xi) in g.iter_mut().zip(&t.frequency) {
                *gi += s * xi;
            }
        }
        Ok(g)
    }

    /// `2m·I + Σⱼ aⱼ·cos(⟨ξⱼ, θ⟩ + ψⱼ)·exp(−½σ²‖ξⱼ‖²)·ξⱼξⱼᵀ`, dense.
    pub fn hessian(&self, theta: &[f64]) -> Result<DMatrix<f64>> {
        self.check(theta)?;
        let n = self.spec.dim();
        let mut h = DMatrix::from_diagonal_element(n, n, 2.0 * self.spec.quad_strength());
        for t in self.spec.cosine().terms() {
            let c = t.amplitude * libm::cos(t.argument(theta)) * attenuation_factor(t.frequency_norm_sq(), self.sigma);
            for (i, xi) in t.frequency.iter().enumerate() {
                if *xi == 0.0 {
                    continue;
                }
                for (k, xk) in t.frequency.iter().enumerate() {
                    h[(i, k)] += c * (xi * xk);
                }
            }
        }
        Ok(h)
    }

    /// Smallest eigenvalue of the Hessian at `theta`.
    pub fn min_hessian_eigenvalue(&self, theta: &[f64]) -> Result<f64> {
        Ok(min_eigenvalue(self.hessian(theta)?))
    }

    /// `2m + Σⱼ |aⱼ|·‖ξⱼ‖²·exp(−½σ²‖ξⱼ‖²)`, an upper bound on the spectral
    /// norm of the Hessian everywhere and hence a Lipschitz constant of
    /// [`grad`](Self::grad).
    pub fn lipschitz_grad_constant(&self) -> f64 {
        2.0 * self.spec.quad_strength()
            + self
                .spec
                .cosine()
                .terms()
                .iter()
                .map(|t| {
                    let q = t.frequency_norm_sq();
                    libm::fabs(t.amplitude) * q * attenuation_factor(q, self.sigma)
                })
                .sum::<f64>()
    }

    fn check(&self, theta: &[f64]) -> Result<()> {
        self.spec.check_dim(theta.len())?;
        crate::check_finite("theta", theta)
    }
}

fn require_closed_form(spec: &ObjectiveSpec) -> Result<()> {
    if spec.kind() == ObjectiveKind::QuadPlusCosine {
        Ok(())
    } else {
        Err(Error::Unsupported("closed form requires a quadratic-plus-cosine objective"))
    }
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue(h: DMatrix<f64>) -> f64 {
    if h.nrows() == 1 {
        return h[(0, 0)];
    }
    SymmetricEigen::new(h).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Groups of term indices whose frequency supports are connected through
/// shared coordinates. The Hessian of the disturbance is block diagonal over
/// these groups, so each group can be bounded on its own.
pub fn coupled_term_groups(spec: &ObjectiveSpec) -> Vec<Vec<usize>> {
    let n = spec.dim();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let terms = spec.cosine().terms();
    let mut anchors = Vec::with_capacity(terms.len());
    for t in terms {
        let mut support = t.frequency.iter().enumerate().filter(|(_, v)| **v != 0.0).map(|(k, _)| k);
        let first = support.next().expect("frequency vectors are nonzero");
        for k in support {
            let (a, b) = (find(&mut parent, first), find(&mut parent, k));
            if a != b {
                parent[b] = a;
            }
        }
        anchors.push(first);
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (j, &anchor) in anchors.iter().enumerate() {
        let r = find(&mut parent, anchor);
        match roots.iter().position(|&x| x == r) {
            Some(g) => groups[g].push(j),
            None => {
                roots.push(r);
                groups.push(vec![j]);
            }
        }
    }
    groups
}

fn group_bound(spec: &ObjectiveSpec, group: &[usize], sigma: f64) -> f64 {
    let terms = spec.cosine().terms();
    group
        .iter()
        .map(|&j| {
            let q = terms[j].frequency_norm_sq();
            libm::fabs(terms[j].amplitude) * q * attenuation_factor(q, sigma)
        })
        .sum()
}

/// Uniform bound on how far the damped disturbance can lower the smallest
/// Hessian eigenvalue at scale `sigma`: the largest, over coupled term groups,
/// of `Σⱼ |aⱼ|·‖ξⱼ‖²·exp(−½σ²‖ξⱼ‖²)`. For a series whose terms all share
/// coordinates this is the plain sum over all terms.
pub fn perturbation_bound(spec: &ObjectiveSpec, sigma: f64) -> f64 {
    coupled_term_groups(spec).iter().map(|g| group_bound(spec, g, sigma)).fold(0.0, f64::max)
}

const SIGMA_STAR_TOL: f64 = 1e-12;

/// Convexity threshold: the smallest `σ ≥ 0` such that for every larger scale
/// `2m > perturbation_bound(σ)`, so the relaxation is strictly convex.
///
/// A group made of a single term has the explicit threshold
/// `σ*² = (2/‖ξ‖²)·ln(|a|·‖ξ‖²/(2m))`, clamped at zero. Larger groups are
/// solved by bisection on `σ` to an absolute tolerance of `1e−12`.
pub fn sigma_star(spec: &ObjectiveSpec) -> Result<f64> {
    require_closed_form(spec)?;
    let m = spec.quad_strength();
    if m <= 0.0 {
        return Err(Error::InvalidArgument("sigma_star requires a positive quad_strength"));
    }
    let terms = spec.cosine().terms();
    let mut best = 0.0_f64;
    for group in coupled_term_groups(spec) {
        let s = if let [j] = group[..] {
            let q = terms[j].frequency_norm_sq();
            let s2 = 2.0 / q * libm::log(libm::fabs(terms[j].amplitude) * q / (2.0 * m));
            if s2 > 0.0 {
                libm::sqrt(s2)
            } else {
                0.0
            }
        } else {
            bisect_threshold(|s| group_bound(spec, &group, s) - 2.0 * m)
        };
        best = best.max(s);
    }
    Ok(best)
}

/// Root of a decreasing excess function, or 0 if it is non-positive at 0.
fn bisect_threshold(excess: impl Fn(f64) -> f64) -> f64 {
    if excess(0.0) <= 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while excess(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > SIGMA_STAR_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact relaxation of OneMax under a product Bernoulli measure: `−Σᵢ pᵢ`.
pub fn bernoulli_value(spec: &ObjectiveSpec, p: &crate::BernoulliParams) -> Result<f64> {
    require_one_max(spec, p)?;
    Ok(-p.theta().iter().sum::<f64>())
}

/// Gradient of [`bernoulli_value`], constant `(−1, …, −1)`.
pub fn bernoulli_grad(spec: &ObjectiveSpec, p: &crate::BernoulliParams) -> Result<Vec<f64>> {
    require_one_max(spec, p)?;
    Ok(vec![-1.0; spec.dim()])
}

fn require_one_max(spec: &ObjectiveSpec, p: &crate::BernoulliParams) -> Result<()> {
    if spec.kind() != ObjectiveKind::DiscretePseudoBoolean {
        return Err(Error::Unsupported("bernoulli closed form requires the OneMax objective"));
    }
    spec.check_dim(p.dim())
}
