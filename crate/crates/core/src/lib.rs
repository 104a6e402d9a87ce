//! Simulation and synthesis of time-modulated electromagnetic skins.
//!
//! A skin of `P x Q` cells switches each cell between two reflection
//! states with a periodic pulse. The carrier (`h = 0`) and first harmonic
//! (`h = 1`) of the reflected field form a Σ and a Δ beam; the ratio of
//! their powers at a base station tells whether the assumed user
//! direction is right.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod error;
pub mod field;
pub mod isac;
pub mod model;
pub mod scalar;
pub mod synthesis;

pub use error::{Error, Result};
pub use model::ControlMode;
pub use scalar::Real;

pub type EmsGeometry = model::EmsGeometry<f64>;
pub type Pulse = model::Pulse<f64>;
pub type PulseSchedule = model::PulseSchedule<f64>;
pub type ReflectionStates = model::ReflectionStates<f64>;
pub type HarmonicTensor = model::HarmonicTensor<f64>;
pub type Tensor2 = model::Tensor2<f64>;
pub type PlaneWaveIncidence = field::PlaneWaveIncidence<f64>;
pub type DirectionGrid = field::DirectionGrid<f64>;
pub type HarmonicPattern = field::HarmonicPattern<f64>;
pub type FieldEngine = field::FieldEngine<f64>;
pub type MaskParams = synthesis::MaskParams<f64>;
pub type MaskTemplate = synthesis::MaskTemplate<f64>;
pub type MaskSet = synthesis::MaskSet<f64>;
pub type CostContext = synthesis::CostContext<f64>;
pub type Synthesis = synthesis::Synthesis<f64>;
pub type Scenario = isac::Scenario<f64>;
pub type SweepResult = isac::SweepResult<f64>;
pub type Codebook = isac::Codebook<f64>;
