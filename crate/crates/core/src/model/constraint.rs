use std::fmt;
use std::str::FromStr;

use super::pulse::{Pulse, PulseSchedule};
use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// How the free optimisation variables map onto the full cell schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlMode {
    /// Every cell carries its own (rise, duty).
    Full,
    /// Left half free, right half mirrored with a half-period shift.
    Delta,
    /// One (rise, duty) per column of cells at fixed `x`.
    Columnwise,
    /// Column-wise control plus the half-period mirror.
    ColumnwiseDelta,
}

impl ControlMode {
    pub const ALL: [ControlMode; 4] = [
        ControlMode::Full,
        ControlMode::Delta,
        ControlMode::Columnwise,
        ControlMode::ColumnwiseDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ControlMode::Full => "full",
            ControlMode::Delta => "delta",
            ControlMode::Columnwise => "colwise",
            ControlMode::ColumnwiseDelta => "colwise-delta",
        }
    }

    /// Stable numeric tag used in binary files.
    pub fn code(self) -> u8 {
        match self {
            ControlMode::Full => 0,
            ControlMode::Delta => 1,
            ControlMode::Columnwise => 2,
            ControlMode::ColumnwiseDelta => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.code() == code)
    }

    pub fn is_delta(self) -> bool {
        matches!(self, ControlMode::Delta | ControlMode::ColumnwiseDelta)
    }

    pub fn is_columnwise(self) -> bool {
        matches!(self, ControlMode::Columnwise | ControlMode::ColumnwiseDelta)
    }

    /// Number of independent pulses for a `rows x cols` skin.
    pub fn free_pulses(self, rows: usize, cols: usize) -> Result<usize> {
        if self.is_delta() && rows % 2 != 0 {
            return Err(Error::ConstraintInapplicable(format!(
                "half-period mirror needs an even number of columns along x, got {rows}"
            )));
        }
        let along_x = if self.is_delta() { rows / 2 } else { rows };
        let along_y = if self.is_columnwise() { 1 } else { cols };
        Ok(along_x * along_y)
    }

    /// Search-space dimension: two reals per free pulse.
    pub fn dimension(self, rows: usize, cols: usize) -> Result<usize> {
        Ok(2 * self.free_pulses(rows, cols)?)
    }

    /// Expands free pulses (row-major over the free block) to a full schedule.
    pub fn expand<T: Real>(
        self,
        free: &[Pulse<T>],
        rows: usize,
        cols: usize,
        period: T,
    ) -> Result<PulseSchedule<T>> {
        let expected = self.free_pulses(rows, cols)?;
        if free.len() != expected {
            return Err(Error::DimensionMismatch {
                expected: format!("{expected} free pulses for mode {self}"),
                actual: format!("{} pulses", free.len()),
            });
        }
        match self {
            ControlMode::Full => PulseSchedule::new(period, rows, cols, free.to_vec()),
            ControlMode::Delta => apply_delta_constraint(free, rows, cols, period),
            ControlMode::Columnwise => expand_columnwise(free, rows, cols, period),
            ControlMode::ColumnwiseDelta => {
                let half = expand_columnwise(free, rows / 2, cols, period)?;
                apply_delta_constraint(half.pulses(), rows, cols, period)
            }
        }
    }

    /// Decodes a flat `[rise0, duty0, rise1, duty1, ...]` vector.
    pub fn schedule_from_params<T: Real>(
        self,
        params: &[T],
        rows: usize,
        cols: usize,
        period: T,
    ) -> Result<PulseSchedule<T>> {
        if params.len() % 2 != 0 {
            return Err(invalid("params", "length must be even"));
        }
        let free: Vec<Pulse<T>> = params
            .chunks_exact(2)
            .map(|c| Pulse::wrapped(c[0], c[1]))
            .collect();
        self.expand(&free, rows, cols, period)
    }
}

impl fmt::Display for ControlMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ControlMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "full" => Ok(ControlMode::Full),
            "delta" => Ok(ControlMode::Delta),
            "colwise" | "columnwise" => Ok(ControlMode::Columnwise),
            "colwise-delta" | "columnwise-delta" => Ok(ControlMode::ColumnwiseDelta),
            other => Err(invalid(
                "mode",
                format!("unknown mode `{other}` (expected full, delta, colwise or colwise-delta)"),
            )),
        }
    }
}

/// Builds the full schedule from the first `P/2` cell columns along `x`.
///
/// Cell `(P-1-p, q)` receives the pulse of `(p, q)` delayed by `T/2`, so
/// every first-harmonic coefficient flips sign across the mirror while
/// the duty (and hence the carrier coefficient) is shared.
pub fn apply_delta_constraint<T: Real>(
    half: &[Pulse<T>],
    rows: usize,
    cols: usize,
    period: T,
) -> Result<PulseSchedule<T>> {
    if rows % 2 != 0 {
        return Err(Error::ConstraintInapplicable(format!(
            "half-period mirror needs an even number of columns along x, got {rows}"
        )));
    }
    let half_rows = rows / 2;
    if half.len() != half_rows * cols {
        return Err(Error::DimensionMismatch {
            expected: format!("{half_rows}x{cols} half-schedule"),
            actual: format!("{} pulses", half.len()),
        });
    }
    let mut pulses = vec![Pulse::always_off(); rows * cols];
    for p in 0..half_rows {
        for q in 0..cols {
            let pulse = half[p * cols + q];
            pulses[p * cols + q] = pulse;
            pulses[(rows - 1 - p) * cols + q] = pulse.half_period_shift();
        }
    }
    PulseSchedule::new(period, rows, cols, pulses)
}

/// Repeats one pulse per `x` position across all `Q` cells sharing it.
pub fn expand_columnwise<T: Real>(
    column: &[Pulse<T>],
    rows: usize,
    cols: usize,
    period: T,
) -> Result<PulseSchedule<T>> {
    if column.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: format!("{rows} column pulses"),
            actual: format!("{}", column.len()),
        });
    }
    let pulses = column
        .iter()
        .flat_map(|&p| std::iter::repeat(p).take(cols))
        .collect();
    PulseSchedule::new(period, rows, cols, pulses)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse(c: f64, t: f64) -> Pulse<f64> {
        Pulse::new(c, t).unwrap()
    }

    #[test]
    fn delta_two_by_one() {
        let s = apply_delta_constraint(&[pulse(0.1, 0.3)], 2, 1, 1e-6).unwrap();
        let m = s.pulse(1, 0);
        assert!((m.rise() - 0.6).abs() < 1e-15);
        assert_eq!(m.duty(), 0.3);
        let u0 = s.pulse(0, 0).fourier_coefficient(1);
        let u1 = m.fourier_coefficient(1);
        assert!((u0 + u1).norm() < 1e-15);
        assert_eq!(s.pulse(0, 0).fourier_coefficient(0), m.fourier_coefficient(0));
    }

    #[test]
    fn delta_rejects_odd_rows() {
        assert!(matches!(
            apply_delta_constraint(&[pulse(0.0, 0.5)], 3, 1, 1.0),
            Err(Error::ConstraintInapplicable(_))
        ));
        assert!(ControlMode::Delta.dimension(5, 4).is_err());
    }

    #[test]
    fn columnwise_rows() {
        let a = pulse(0.1, 0.2);
        let b = pulse(0.7, 0.9);
        let s = expand_columnwise(&[a, b], 2, 3, 1.0).unwrap();
        assert_eq!(s.pulses(), &[a, a, a, b, b, b]);
        let one = expand_columnwise(&[a], 1, 1, 1.0).unwrap();
        assert_eq!(one.pulses(), &[a]);
    }

    #[test]
    fn dimensions_per_mode() {
        assert_eq!(ControlMode::Full.dimension(10, 10).unwrap(), 200);
        assert_eq!(ControlMode::Delta.dimension(10, 10).unwrap(), 100);
        assert_eq!(ControlMode::Columnwise.dimension(10, 10).unwrap(), 20);
        assert_eq!(ControlMode::ColumnwiseDelta.dimension(10, 10).unwrap(), 10);
    }

    #[test]
    fn columnwise_delta_composes() {
        let params = [0.2, 0.4, 0.9, 0.7];
        let s = ControlMode::ColumnwiseDelta
            .schedule_from_params(&params, 4, 3, 1.0)
            .unwrap();
        for p in 0..4 {
            for q in 1..3 {
                assert_eq!(s.pulse(p, q), s.pulse(p, 0));
            }
        }
        for p in 0..2 {
            let a = s.pulse(p, 0).fourier_coefficient(1);
            let b = s.pulse(3 - p, 0).fourier_coefficient(1);
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for m in ControlMode::ALL {
            assert_eq!(m.name().parse::<ControlMode>().unwrap(), m);
            assert_eq!(ControlMode::from_code(m.code()), Some(m));
        }
        assert!("both".parse::<ControlMode>().is_err());
    }
}
