//! Run configuration documents, one JSON object per run.
//!
//! Every document may carry a `seed`; the `--seed` flag overrides it and one
//! of the two is required.

use serde::{Deserialize, Serialize};
use stochastic_relaxation::{CosineSeries, ObjectiveSpec};

use crate::error::{CliError, CliResult};

fn default_samples() -> usize {
    100_000
}

fn default_fd_step() -> f64 {
    1e-5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    pub objective: ObjectiveSpec,
    /// Gaussian mean, or Bernoulli probabilities for a discrete objective.
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub antithetic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradConfig {
    pub objective: ObjectiveSpec,
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub antithetic: bool,
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaStarConfig {
    pub objective: ObjectiveSpec,
    /// Scales for the filtering curve; defaults to 21 points on `[0, 2·max(σ*, 0.5)]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifyConfig {
    pub objective: ObjectiveSpec,
    pub sigma: f64,
    pub grid: GridDoc,
    #[serde(default)]
    pub probes: usize,
    #[serde(default)]
    pub m_star: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsistencyConfig {
    pub objective: ObjectiveSpec,
    pub x_star: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub deltas: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub antithetic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdStudyConfig {
    /// Frequencies and phases of the disturbance; amplitudes are redrawn.
    pub base: CosineSeries,
    pub scales: Vec<f64>,
    /// Amplitude draws per scale.
    pub draws: usize,
    pub quad_strength: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModeDoc {
    Descent { sigma: f64 },
    Graduated { sigmas: Vec<f64>, iters_per_stage: usize },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum StepDoc {
    #[default]
    OneOverL,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerDoc {
    pub samples: usize,
    #[serde(default)]
    pub antithetic: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GradientDoc {
    #[default]
    ClosedForm,
    Score(SamplerDoc),
    Translation(SamplerDoc),
}

/// Uniform random starts in `[lo, hi]ⁿ`, replacing `theta0`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartsDoc {
    pub count: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub objective: ObjectiveSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<StartsDoc>,
    pub mode: ModeDoc,
    pub max_iters: usize,
    pub grad_tol: f64,
    #[serde(default)]
    pub step: StepDoc,
    #[serde(default)]
    pub gradient: GradientDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Raw,
    Relaxed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowfieldConfig {
    pub objective: ObjectiveSpec,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub which: FieldKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Parses a config document.
pub fn parse<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(CliError::config)
}

/// Resolves the run seed from the override and the document.
pub fn resolve_seed(cli: Option<u64>, doc: &mut Option<u64>) -> CliResult<u64> {
    let seed = cli.or(*doc).ok_or_else(|| CliError::config("missing field `seed` (or pass --seed)"))?;
    *doc = Some(seed);
    Ok(seed)
}
