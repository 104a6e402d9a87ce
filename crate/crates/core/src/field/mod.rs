//! Incident excitation, harmonic far fields and monopulse quantities.

mod engine;
mod grid;
mod incidence;
mod pattern;

pub use engine::{cell_factor, harmonic_far_field, FieldEngine};
pub use grid::{is_visible, DirectionGrid};
pub use incidence::{incident_cell_excitation, PlaneWaveIncidence};
pub use pattern::{
    monopulse_ratio, power_pattern, power_pattern_db, HarmonicPattern, MonopulseRatio, MONOPULSE_FLOOR,
};
