//! Objective functions: quadratic plus cosine series, OneMax on `{0,1}ⁿ`, and
//! black-box evaluation contracts.
//!
//! The continuous family is stored in one canonical form,
//!
//! ```text
//! f(x) = m·‖x‖² − Σⱼ aⱼ·cos(⟨ξⱼ, x⟩ + ψⱼ)
//! ```
//!
//! with the disturbance subtracted. A `+g` disturbance is expressed by negating
//! the amplitudes. The smooth part `m·‖x‖²` is `2m`-strongly convex.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{check_finite, dot, norm_sq, Error, Result};

/// Pointwise evaluation contract of a black-box objective.
pub type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Gradient contract of a black-box objective.
pub type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// One disturbance component `a·cos(⟨ξ, x⟩ + ψ)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CosineTerm {
    #[cfg_attr(feature = "serde", serde(rename = "a"))]
    pub amplitude: f64,
    #[cfg_attr(feature = "serde", serde(rename = "xi"))]
    pub frequency: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "psi", default))]
    pub phase: f64,
}

impl CosineTerm {
    pub fn new(amplitude: f64, frequency: Vec<f64>, phase: f64) -> Self {
        Self { amplitude, frequency, phase }
    }

    /// `⟨ξ, x⟩ + ψ`
    #[inline]
    pub fn argument(&self, x: &[f64]) -> f64 {
        dot(&self.frequency, x) + self.phase
    }

    /// `‖ξ‖²`
    #[inline]
    pub fn frequency_norm_sq(&self) -> f64 {
        norm_sq(&self.frequency)
    }

    /// The single coordinate carrying a nonzero frequency, if the term is
    /// axis-aligned.
    pub fn axis(&self) -> Option<usize> {
        let mut nonzero = self.frequency.iter().enumerate().filter(|(_, v)| **v != 0.0);
        match (nonzero.next(), nonzero.next()) {
            (Some((k, _)), None) => Some(k),
            _ => None,
        }
    }
}

/// A finite cosine series. Every frequency vector is nonzero.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<CosineTerm>", into = "Vec<CosineTerm>"))]
pub struct CosineSeries {
    terms: Vec<CosineTerm>,
}

impl CosineSeries {
    pub fn new(terms: Vec<CosineTerm>) -> Result<Self> {
        for (j, t) in terms.iter().enumerate() {
            if !t.amplitude.is_finite() || !t.phase.is_finite() {
                return Err(Error::NonFinite("cosine term"));
            }
            check_finite("cosine frequency", &t.frequency)?;
            if t.frequency_norm_sq() == 0.0 {
                return Err(Error::ZeroFrequency(j));
            }
        }
        Ok(Self { terms })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Axis-aligned series `Σⱼ a·cos(ξ·xⱼ)` over `dim` coordinates, the
    /// Rastrigin disturbance.
    pub fn axis_aligned(dim: usize, amplitude: f64, frequency: f64) -> Result<Self> {
        let terms = (0..dim)
            .map(|j| {
                let mut xi = vec![0.0; dim];
                xi[j] = frequency;
                CosineTerm::new(amplitude, xi, 0.0)
            })
            .collect();
        Self::new(terms)
    }

    pub fn terms(&self) -> &[CosineTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Copy of the series with amplitudes replaced.
    pub fn with_amplitudes(&self, amplitudes: &[f64]) -> Result<Self> {
        if amplitudes.len() != self.terms.len() {
            return Err(Error::DimensionMismatch { expected: self.terms.len(), got: amplitudes.len() });
        }
        let terms = self.terms.iter().zip(amplitudes).map(|(t, &a)| CosineTerm { amplitude: a, ..t.clone() }).collect();
        Self::new(terms)
    }

    /// `Σⱼ aⱼ·cos(⟨ξⱼ, x⟩ + ψⱼ)`
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.amplitude * libm::cos(t.argument(x))).sum()
    }

    fn dim(&self) -> Option<usize> {
        self.terms.first().map(|t| t.frequency.len())
    }
}

impl TryFrom<Vec<CosineTerm>> for CosineSeries {
    type Error = Error;

    fn try_from(terms: Vec<CosineTerm>) -> Result<Self> {
        Self::new(terms)
    }
}

impl From<CosineSeries> for Vec<CosineTerm> {
    fn from(s: CosineSeries) -> Self {
        s.terms
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ObjectiveKind {
    QuadPlusCosine,
    /// OneMax in minimization form, `−Σᵢ xᵢ` on `{0,1}ⁿ`.
    DiscretePseudoBoolean,
    BlackBox,
}

#[derive(Clone)]
struct BlackBox {
    eval: EvalFn,
    grad: Option<GradFn>,
}

/// A benchmark objective. Immutable after construction.
#[derive(Clone)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "ObjectiveDoc", into = "ObjectiveDoc"))]
pub struct ObjectiveSpec {
    kind: ObjectiveKind,
    dim: usize,
    quad_strength: f64,
    cosine: CosineSeries,
    black_box: Option<BlackBox>,
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("kind", &self.kind)
            .field("dim", &self.dim)
            .field("quad_strength", &self.quad_strength)
            .field("cosine", &self.cosine)
            .field("has_grad", &self.has_grad())
            .finish()
    }
}

impl ObjectiveSpec {
    /// `m·‖x‖² − Σⱼ aⱼ·cos(⟨ξⱼ, x⟩ + ψⱼ)` on `ℝⁿ`.
    pub fn quad_plus_cosine(dim: usize, quad_strength: f64, cosine: CosineSeries) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be at least 1"));
        }
        if !quad_strength.is_finite() || quad_strength < 0.0 {
            return Err(Error::InvalidArgument("quad_strength must be finite and non-negative"));
        }
        if let Some(d) = cosine.dim() {
            if let Some(bad) = cosine.terms().iter().find(|t| t.frequency.len() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, got: bad.frequency.len() });
            }
            debug_assert_eq!(d, dim);
        }
        Ok(Self { kind: ObjectiveKind::QuadPlusCosine, dim, quad_strength, cosine, black_box: None })
    }

    /// `‖x‖² − Σⱼ a·cos(ξ·xⱼ)`.
    pub fn rastrigin(dim: usize, amplitude: f64, frequency: f64) -> Result<Self> {
        Self::quad_plus_cosine(dim, 1.0, CosineSeries::axis_aligned(dim, amplitude, frequency)?)
    }

    /// OneMax on `{0,1}ⁿ` in minimization form.
    pub fn one_max(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be at least 1"));
        }
        Ok(Self {
            kind: ObjectiveKind::DiscretePseudoBoolean,
            dim,
            quad_strength: 0.0,
            cosine: CosineSeries::empty(),
            black_box: None,
        })
    }

    pub fn black_box(dim: usize, eval: EvalFn, grad: Option<GradFn>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dim must be at least 1"));
        }
        Ok(Self {
            kind: ObjectiveKind::BlackBox,
            dim,
            quad_strength: 0.0,
            cosine: CosineSeries::empty(),
            black_box: Some(BlackBox { eval, grad }),
        })
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient `m` of `‖x‖²`.
    pub fn quad_strength(&self) -> f64 {
        self.quad_strength
    }

    pub fn cosine(&self) -> &CosineSeries {
        &self.cosine
    }

    pub fn is_continuous(&self) -> bool {
        self.kind != ObjectiveKind::DiscretePseudoBoolean
    }

    pub fn has_grad(&self) -> bool {
        match self.kind {
            ObjectiveKind::QuadPlusCosine => true,
            ObjectiveKind::DiscretePseudoBoolean => false,
            ObjectiveKind::BlackBox => self.black_box.as_ref().is_some_and(|b| b.grad.is_some()),
        }
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        if got == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, got })
        }
    }

    /// `f(x)` for continuous objectives.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x.len())?;
        check_finite("x", x)?;
        match self.kind {
            ObjectiveKind::QuadPlusCosine => Ok(self.eval_unchecked(x)),
            ObjectiveKind::DiscretePseudoBoolean => Err(Error::Unsupported("eval on a discrete objective")),
            ObjectiveKind::BlackBox => {
                let bb = self.black_box.as_ref().ok_or(Error::MissingEval)?;
                let v = (bb.eval)(x);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::NonFinite("black-box value"))
                }
            }
        }
    }

    /// `∇f(x) = 2m·x + Σⱼ aⱼ·sin(⟨ξⱼ, x⟩ + ψⱼ)·ξⱼ`, or the black-box gradient.
    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x.len())?;
        check_finite("x", x)?;
        match self.kind {
            ObjectiveKind::QuadPlusCosine => {
                let mut g: Vec<f64> = x.iter().map(|v| 2.0 * self.quad_strength * v).collect();
                for t in self.cosine.terms() {
                    let s = t.amplitude * libm::sin(t.argument(x));
                    for (gi, xi) in g.iter_mut().zip(&t.frequency) {
                        *gi += s * xi;
                    }
                }
                Ok(g)
            }
            ObjectiveKind::DiscretePseudoBoolean => Err(Error::MissingGradient),
            ObjectiveKind::BlackBox => {
                let grad = self.black_box.as_ref().and_then(|b| b.grad.as_ref()).ok_or(Error::MissingGradient)?;
                let g = grad(x);
                self.check_dim(g.len())?;
                check_finite("black-box gradient", &g)?;
                Ok(g)
            }
        }
    }

    /// OneMax value `−Σᵢ xᵢ` of a binary point.
    pub fn eval_discrete(&self, x: &[f64]) -> Result<f64> {
        if self.kind != ObjectiveKind::DiscretePseudoBoolean {
            return Err(Error::Unsupported("eval_discrete on a continuous objective"));
        }
        self.check_dim(x.len())?;
        let mut ones = 0.0;
        for (i, &v) in x.iter().enumerate() {
            if v == 1.0 {
                ones += 1.0;
            } else if v != 0.0 {
                return Err(Error::NotBinary(i));
            }
        }
        Ok(-ones)
    }

    /// `f(x)` on whichever candidate space the objective lives on.
    pub fn value(&self, x: &[f64]) -> Result<f64> {
        if self.is_continuous() {
            self.eval(x)
        } else {
            self.eval_discrete(x)
        }
    }

    /// Closed-form part without checks; `x` must have the right length.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.quad_strength * norm_sq(x) - self.cosine.eval(x)
    }
}

/// Serialized form of an [`ObjectiveSpec`].
#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectiveDoc {
    kind: ObjectiveKind,
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quad_strength: Option<f64>,
    #[serde(default)]
    cosine: CosineSeries,
}

#[cfg(feature = "serde")]
impl TryFrom<ObjectiveDoc> for ObjectiveSpec {
    type Error = Error;

    fn try_from(doc: ObjectiveDoc) -> Result<Self> {
        match doc.kind {
            ObjectiveKind::QuadPlusCosine => {
                let m = doc.quad_strength.ok_or(Error::InvalidArgument("missing field `quad_strength`"))?;
                Self::quad_plus_cosine(doc.dim, m, doc.cosine)
            }
            ObjectiveKind::DiscretePseudoBoolean => Self::one_max(doc.dim),
            ObjectiveKind::BlackBox => Err(Error::MissingEval),
        }
    }
}

#[cfg(feature = "serde")]
impl From<ObjectiveSpec> for ObjectiveDoc {
    fn from(s: ObjectiveSpec) -> Self {
        let quad_strength = (s.kind == ObjectiveKind::QuadPlusCosine).then_some(s.quad_strength);
        Self { kind: s.kind, dim: s.dim, quad_strength, cosine: s.cosine }
    }
}
