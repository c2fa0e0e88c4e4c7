//! Choice of the nonlinear basis parameter by trace stationarity.

use rug::Float;

use crate::error::Result;
use crate::hamiltonian::{trace_form, HamiltonianSpec};
use crate::numerics::{stationary_points_signed_power_form, PrecisionContext};

#[derive(Clone, Debug)]
pub struct OptimizedBasisResult {
    pub spec: HamiltonianSpec,
    pub alpha_opt: Float,
    pub trace_at_opt: Float,
    /// Number of positive stationary points of the trace.
    pub n_candidates: usize,
}

/// Stationary point of `Tr H(alpha)`. When several exist the one with the
/// smallest trace wins; equal traces (to working precision) go to the
/// smallest `alpha`.
pub fn optimize_parameter(spec: &HamiltonianSpec, ctx: &PrecisionContext) -> Result<OptimizedBasisResult> {
    let prec = ctx.bits();
    let form = trace_form(spec, ctx)?;
    let roots = stationary_points_signed_power_form(&form, ctx)?;
    let n_candidates = roots.len();
    let eps = ctx.working_epsilon();

    let mut best: Option<(Float, Float)> = None;
    for alpha in roots {
        let trace = form.evaluate(&alpha);
        let replace = match &best {
            None => true,
            Some((_, best_trace)) => {
                let tol = Float::with_val(prec, &eps * &*best_trace.as_abs());
                let diff = Float::with_val(prec, &trace - best_trace);
                // roots arrive ascending, so ties keep the earlier (smaller) alpha
                diff < -tol
            }
        };
        if replace {
            best = Some((alpha, trace));
        }
    }
    let (alpha_opt, trace_at_opt) = best.expect("at least one root");
    Ok(OptimizedBasisResult {
        spec: spec.clone(),
        alpha_opt,
        trace_at_opt,
        n_candidates,
    })
}
