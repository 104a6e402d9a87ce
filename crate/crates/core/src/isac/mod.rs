//! Base-station measurements, localization sweeps and the schedule codebook.

mod codebook;
mod scenario;
mod sweep;

pub use codebook::{design_hash, quantize_angle, Codebook, CodebookEntry};
pub use scenario::{derive_seed, measure_bs_powers, restart_seeds, synthesize_best, BsMeasurement, Scenario};
pub use sweep::{
    build_codebook, entry_schedule, localization_sweep, xi_sweep, SweepAxis, SweepPoint, SweepResult, SweepSettings,
};
