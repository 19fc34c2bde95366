//! Normalized gradient-flow fields over a planar grid.

use stochastic_relaxation::analysis::GridSpec;
use stochastic_relaxation::closed_form::ClosedFormRelaxation;
use stochastic_relaxation::{Error, ObjectiveSpec, Result};

use crate::config::FieldKind;

/// Gradients at or below this norm are drawn as zero arrows.
pub const STATIONARY_TOL: f64 = 1e-8;

/// Direction of steepest descent `−∇/‖∇‖` of the objective (`Raw`) or of its
/// Gaussian relaxation at scale `sigma` (`Relaxed`).
pub fn flow_vector(spec: &ObjectiveSpec, which: FieldKind, sigma: Option<f64>, theta: &[f64]) -> Result<[f64; 2]> {
    if spec.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: spec.dim() });
    }
    let g = match which {
        FieldKind::Raw => spec.grad(theta)?,
        FieldKind::Relaxed => {
            let sigma = sigma.ok_or(Error::InvalidArgument("relaxed field needs sigma"))?;
            ClosedFormRelaxation::new(spec, sigma)?.grad(theta)?
        }
    };
    let n = g[0].hypot(g[1]);
    if n <= STATIONARY_TOL {
        Ok([0.0, 0.0])
    } else {
        Ok([-g[0] / n, -g[1] / n])
    }
}

/// `(θ₁, θ₂, g₁, g₂)` for every node of the grid, first axis slowest.
pub fn flow_field(
    spec: &ObjectiveSpec,
    which: FieldKind,
    sigma: Option<f64>,
    grid: &GridSpec,
) -> Result<Vec<[f64; 4]>> {
    let mut out = Vec::with_capacity(grid.points * grid.points);
    grid.for_each_node(2, |t| {
        let [g1, g2] = flow_vector(spec, which, sigma, t)?;
        out.push([t[0], t[1], g1, g2]);
        Ok(())
    })?;
    Ok(out)
}
