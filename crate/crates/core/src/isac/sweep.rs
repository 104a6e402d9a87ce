use rayon::prelude::*;

use super::codebook::{quantize_angle, Codebook, CodebookEntry};
use super::scenario::{measure_bs_powers, restart_seeds, synthesize_best, Scenario};
use crate::error::{invalid, Result};
use crate::model::PulseSchedule;
use crate::scalar::Real;
use crate::synthesis::PsoConfig;

/// One candidate of a localization sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint<T: Real> {
    /// Candidate (assumed) angle, degrees.
    pub angle_deg: T,
    pub xi: T,
    pub sum_power: T,
    pub difference_power: T,
    pub floored: bool,
    /// Φ of the schedule used for this candidate.
    pub cost: T,
}

/// ξ curve over the candidate angles and the resulting estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<T: Real> {
    pub points: Vec<SweepPoint<T>>,
    /// Argmax of ξ, smallest angle on ties; `None` if every candidate failed.
    pub estimate_deg: Option<T>,
    /// Candidates whose synthesis failed, with the reason.
    pub failures: Vec<(T, String)>,
}

/// Synthesis settings shared by every design of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSettings {
    pub pso: PsoConfig,
    /// Independent swarm runs per design; the lowest Φ wins.
    pub restarts: usize,
    pub master_seed: u64,
}

impl SweepSettings {
    /// Restart seeds for the design labelled by `angle_deg`.
    pub fn seeds_for<T: Real>(&self, angle_deg: T) -> Vec<u64> {
        restart_seeds(self.master_seed, quantize_angle(angle_deg) as u64, self.restarts.max(1))
    }
}

fn argmax_smallest_angle<T: Real>(points: &[SweepPoint<T>]) -> Option<T> {
    let mut best: Option<&SweepPoint<T>> = None;
    for p in points {
        best = match best {
            None => Some(p),
            Some(b) if p.xi > b.xi || (p.xi == b.xi && p.angle_deg < b.angle_deg) => Some(p),
            keep => keep,
        };
    }
    best.map(|p| p.angle_deg)
}

/// Estimates the user angle by sweeping candidate incidences.
///
/// Each candidate's schedule is designed as if the user were at that
/// angle (or taken from `codebook`), then measured at the BS under the
/// scenario's true incidence. Newly designed candidates are added to the
/// codebook.
pub fn localization_sweep<T: Real>(
    scenario: &Scenario<T>,
    candidates: &[T],
    settings: &SweepSettings,
    mut codebook: Option<&mut Codebook<T>>,
) -> Result<SweepResult<T>> {
    if candidates.is_empty() {
        return Err(invalid("candidates", "need at least one candidate angle"));
    }
    scenario.validate()?;
    let cached: Vec<Option<CodebookEntry<T>>> = candidates
        .iter()
        .map(|&a| codebook.as_ref().and_then(|b| b.get(a).cloned()))
        .collect();
    let designed: Vec<Result<CodebookEntry<T>>> = candidates
        .par_iter()
        .zip(&cached)
        .map(|(&angle, hit)| match hit {
            Some(e) => Ok(e.clone()),
            None => {
                let assumed = scenario.with_user_theta(angle)?;
                let s = synthesize_best(&assumed, &settings.pso, &settings.seeds_for(angle))?;
                Ok(CodebookEntry {
                    pulses: s.params.chunks_exact(2).map(|c| (c[0], c[1])).collect(),
                    cost: s.cost,
                })
            }
        })
        .collect();

    let mut points = Vec::new();
    let mut failures = Vec::new();
    for ((&angle, entry), hit) in candidates.iter().zip(designed).zip(&cached) {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                failures.push((angle, e.to_string()));
                continue;
            }
        };
        let schedule = entry_schedule(scenario, &entry)?;
        let m = measure_bs_powers(&schedule, scenario)?;
        points.push(SweepPoint {
            angle_deg: angle,
            xi: m.xi,
            sum_power: m.sum_power,
            difference_power: m.difference_power,
            floored: m.floored,
            cost: entry.cost,
        });
        if hit.is_none() {
            if let Some(book) = codebook.as_deref_mut() {
                book.insert(angle, entry)?;
            }
        }
    }
    Ok(SweepResult {
        estimate_deg: argmax_smallest_angle(&points),
        points,
        failures,
    })
}

/// Expands a codebook entry to a full schedule for `scenario`.
pub fn entry_schedule<T: Real>(scenario: &Scenario<T>, entry: &CodebookEntry<T>) -> Result<PulseSchedule<T>> {
    let params: Vec<T> = entry.pulses.iter().flat_map(|&(r, d)| [r, d]).collect();
    let g = &scenario.geometry;
    scenario.mode.schedule_from_params(&params, g.rows(), g.cols(), scenario.period)
}

/// Designs a codebook for every angle in `angles`.
pub fn build_codebook<T: Real>(
    scenario: &Scenario<T>,
    angles: &[T],
    settings: &SweepSettings,
) -> Result<Codebook<T>> {
    let mut seen = std::collections::BTreeSet::new();
    for &a in angles {
        if !seen.insert(quantize_angle(a)) {
            return Err(invalid("angles", format!("duplicate angle {a}")));
        }
    }
    let mut book = Codebook::new(scenario, &settings.pso, settings.restarts, settings.master_seed)?;
    let entries: Vec<Result<CodebookEntry<T>>> = angles
        .par_iter()
        .map(|&angle| {
            let assumed = scenario.with_user_theta(angle)?;
            let s = synthesize_best(&assumed, &settings.pso, &settings.seeds_for(angle))?;
            Ok(CodebookEntry {
                pulses: s.params.chunks_exact(2).map(|c| (c[0], c[1])).collect(),
                cost: s.cost,
            })
        })
        .collect();
    for (&angle, e) in angles.iter().zip(entries) {
        book.insert(angle, e?)?;
    }
    Ok(book)
}

/// Which angle a design sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// User (incidence) elevation; the BS stays put.
    Incidence,
    /// BS (reflection) elevation; the user stays put.
    BaseStation,
}

/// ξ at the BS when every angle gets its own matched design.
///
/// Unlike [`localization_sweep`], the design and the measurement use the
/// same geometry, so the curve shows how well the Σ/Δ pair can be formed
/// across the range rather than how it discriminates between angles.
pub fn xi_sweep<T: Real>(
    scenario: &Scenario<T>,
    axis: SweepAxis,
    angles: &[T],
    settings: &SweepSettings,
) -> Result<SweepResult<T>> {
    if angles.is_empty() {
        return Err(invalid("angles", "empty sweep range"));
    }
    scenario.validate()?;
    let outcomes: Vec<Result<SweepPoint<T>>> = angles
        .par_iter()
        .map(|&angle| {
            let sc = match axis {
                SweepAxis::Incidence => scenario.with_user_theta(angle)?,
                SweepAxis::BaseStation => scenario.with_bs_theta(angle),
            };
            sc.validate()?;
            let s = synthesize_best(&sc, &settings.pso, &settings.seeds_for(angle))?;
            let m = measure_bs_powers(&s.schedule, &sc)?;
            Ok(SweepPoint {
                angle_deg: angle,
                xi: m.xi,
                sum_power: m.sum_power,
                difference_power: m.difference_power,
                floored: m.floored,
                cost: s.cost,
            })
        })
        .collect();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for (&angle, o) in angles.iter().zip(outcomes) {
        match o {
            Ok(p) => points.push(p),
            Err(e) => failures.push((angle, e.to_string())),
        }
    }
    Ok(SweepResult {
        estimate_deg: argmax_smallest_angle(&points),
        points,
        failures,
    })
}
