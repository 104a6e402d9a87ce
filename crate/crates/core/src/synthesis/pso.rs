use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Particle-swarm settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub max_iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub seed: u64,
    /// Stop when the best cost improved by at most `stagnation_tolerance`
    /// (relative) over this many iterations.
    pub stagnation_window: usize,
    pub stagnation_tolerance: f64,
    /// Velocity limit as a fraction of each parameter's range.
    pub velocity_clamp: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 20,
            max_iterations: 1000,
            inertia: 0.4,
            cognitive: 2.0,
            social: 2.0,
            seed: 0,
            stagnation_window: 100,
            stagnation_tolerance: 1e-6,
            velocity_clamp: 0.5,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.swarm_size == 0 {
            return Err(invalid("swarm_size", "must be at least 1"));
        }
        for (name, x) in [
            ("inertia", self.inertia),
            ("cognitive", self.cognitive),
            ("social", self.social),
            ("stagnation_tolerance", self.stagnation_tolerance),
        ] {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(invalid(name, format!("must be finite and non-negative, got {x}")));
            }
        }
        if !(self.velocity_clamp > 0.0 && self.velocity_clamp.is_finite()) {
            return Err(invalid("velocity_clamp", "must be positive"));
        }
        Ok(())
    }
}

/// How one coordinate behaves at the edges of its range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Periodic on `[lo, hi)`.
    Wrap { lo: f64, hi: f64 },
    /// Mirrored back into `[lo, hi]`.
    Reflect { lo: f64, hi: f64 },
}

impl Boundary {
    fn range(self) -> (f64, f64) {
        match self {
            Boundary::Wrap { lo, hi } | Boundary::Reflect { lo, hi } => (lo, hi),
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Boundary::Wrap { lo, hi } => {
                let w = hi - lo;
                let r = (x - lo).rem_euclid(w);
                // rem_euclid can round up to exactly w.
                if r >= w {
                    lo
                } else {
                    lo + r
                }
            }
            Boundary::Reflect { lo, hi } => {
                let w = hi - lo;
                let period = 2.0 * w;
                let r = (x - lo).rem_euclid(period);
                let r = if r > w { period - r } else { r };
                (lo + r).clamp(lo, hi)
            }
        }
    }
}

/// Coordinate layout of a pulse parameter vector: `[rise, duty]` pairs.
pub fn pulse_boundaries(dimension: usize) -> Vec<Boundary> {
    (0..dimension)
        .map(|i| {
            if i % 2 == 0 {
                Boundary::Wrap { lo: 0.0, hi: 1.0 }
            } else {
                Boundary::Reflect { lo: 0.0, hi: 1.0 }
            }
        })
        .collect()
}

/// Outcome of a swarm run.
#[derive(Debug, Clone, PartialEq)]
pub struct PsoOutcome<T> {
    pub best_position: Vec<T>,
    pub best_cost: T,
    /// Best cost after initialisation and after every iteration.
    pub history: Vec<T>,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Minimises `objective` over the box described by `bounds`.
///
/// All random numbers are drawn sequentially (particle-major, then
/// coordinate) from a ChaCha stream seeded by `config.seed`; only the
/// objective calls run in parallel, so results do not depend on the
/// number of worker threads.
pub fn pso_minimize<T, F>(bounds: &[Boundary], config: &PsoConfig, objective: F) -> Result<PsoOutcome<T>>
where
    T: Real,
    F: Fn(&[T]) -> Result<T> + Sync,
{
    config.validate()?;
    let dim = bounds.len();
    if dim == 0 {
        return Err(Error::EmptySearchSpace);
    }
    for b in bounds {
        let (lo, hi) = b.range();
        if !(hi > lo && lo.is_finite() && hi.is_finite()) {
            return Err(invalid("bounds", format!("empty range [{lo}, {hi}]")));
        }
    }
    let n = config.swarm_size;
    let vmax: Vec<f64> = bounds
        .iter()
        .map(|b| {
            let (lo, hi) = b.range();
            config.velocity_clamp * (hi - lo)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut x = vec![0.0f64; n * dim];
    let mut vel = vec![0.0f64; n * dim];
    for i in 0..n {
        for d in 0..dim {
            let (lo, hi) = bounds[d].range();
            x[i * dim + d] = lo + (hi - lo) * rng.gen::<f64>();
        }
    }
    for i in 0..n {
        for d in 0..dim {
            vel[i * dim + d] = (2.0 * rng.gen::<f64>() - 1.0) * vmax[d];
        }
    }

    let evaluate = |x: &[f64]| -> Result<Vec<f64>> {
        let costs: Vec<Result<T>> = x
            .par_chunks(dim)
            .map(|p| {
                let params: Vec<T> = p.iter().map(|&v| T::lit(v)).collect();
                objective(&params)
            })
            .collect();
        let mut out = Vec::with_capacity(n);
        for (particle, c) in costs.into_iter().enumerate() {
            let c = c?.as_f64();
            if !c.is_finite() {
                return Err(Error::NonFiniteCost { particle, value: c });
            }
            out.push(c);
        }
        Ok(out)
    };

    let mut cost = evaluate(&x)?;
    let mut evaluations = n;
    let mut pbest = x.clone();
    let mut pbest_cost = cost.clone();
    let mut g = argmin(&pbest_cost);
    let mut history = vec![pbest_cost[g]];
    let mut iterations = 0;

    for _ in 0..config.max_iterations {
        let gbest: Vec<f64> = pbest[g * dim..(g + 1) * dim].to_vec();
        for i in 0..n {
            for d in 0..dim {
                let k = i * dim + d;
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                let v = config.inertia * vel[k]
                    + config.cognitive * r1 * (pbest[k] - x[k])
                    + config.social * r2 * (gbest[d] - x[k]);
                vel[k] = v.clamp(-vmax[d], vmax[d]);
                x[k] = bounds[d].apply(x[k] + vel[k]);
            }
        }
        cost = evaluate(&x)?;
        evaluations += n;
        for i in 0..n {
            if cost[i] < pbest_cost[i] {
                pbest_cost[i] = cost[i];
                pbest[i * dim..(i + 1) * dim].copy_from_slice(&x[i * dim..(i + 1) * dim]);
            }
        }
        g = argmin(&pbest_cost);
        history.push(pbest_cost[g]);
        iterations += 1;

        let w = config.stagnation_window;
        if w > 0 && history.len() > w {
            let old = history[history.len() - 1 - w];
            let new = pbest_cost[g];
            if old - new <= config.stagnation_tolerance * old.abs() {
                break;
            }
        }
    }

    Ok(PsoOutcome {
        best_position: pbest[g * dim..(g + 1) * dim].iter().map(|&v| T::lit(v)).collect(),
        best_cost: T::lit(pbest_cost[g]),
        history: history.into_iter().map(T::lit).collect(),
        iterations,
        evaluations,
    })
}

/// Index of the smallest value, lowest index on ties.
fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &c) in v.iter().enumerate() {
        if c < v[best] {
            best = i;
        }
    }
    best
}
