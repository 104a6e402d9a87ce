//! Power masks, the mask-violation cost and particle-swarm synthesis.

mod cost;
mod masks;
mod pso;

pub use cost::{cost_function, ramp, CostContext, HarmonicPowers};
pub use masks::{build_masks, reference_power, Anchor, MaskParams, MaskSet, MaskTemplate};
pub use pso::{pso_minimize, pulse_boundaries, Boundary, PsoConfig, PsoOutcome};

use crate::error::Result;
use crate::model::{ControlMode, PulseSchedule};
use crate::scalar::Real;

/// Best schedule found by [`pso_optimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis<T: Real> {
    pub schedule: PulseSchedule<T>,
    /// Free `[rise, duty]` pairs in the context's control mode.
    pub params: Vec<T>,
    pub mode: ControlMode,
    pub cost: T,
    pub history: Vec<T>,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Searches the schedule minimising Φ for the context's control mode.
pub fn pso_optimize<T: Real>(context: &CostContext<T>, config: &PsoConfig) -> Result<Synthesis<T>> {
    let bounds = pulse_boundaries(context.dimension());
    let out = pso_minimize(&bounds, config, |x: &[T]| context.cost_of_params(x))?;
    Ok(Synthesis {
        schedule: context.schedule_from_params(&out.best_position)?,
        params: out.best_position,
        mode: context.mode(),
        cost: out.best_cost,
        history: out.history,
        iterations: out.iterations,
        evaluations: out.evaluations,
    })
}
