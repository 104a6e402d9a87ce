//! Skin geometry, pulse waveforms and their harmonic reflection tensors.
//!
//! Cells are indexed `(p, q)` with `p` running along `x` (the horizontal
//! scan axis) and `q` along `y`; both are zero-based in code.

mod constraint;
mod geometry;
mod pulse;
mod tensor;

pub use constraint::{apply_delta_constraint, expand_columnwise, ControlMode};
pub use geometry::{EmsGeometry, SPEED_OF_LIGHT};
pub use pulse::{complement_fourier_coefficient, Pulse, PulseSchedule};
pub use tensor::{harmonic_reflection_tensor, HarmonicTensor, ReflectionStates, Tensor2};
