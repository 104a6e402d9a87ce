use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::{cis, Real};

/// One cell's periodic on/off waveform, normalised by the period.
///
/// The cell is ON on `[rise, rise + duty)` modulo 1. `duty == 0` is
/// permanently OFF and `duty == 1` permanently ON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pulse<T: Real> {
    rise: T,
    duty: T,
}

impl<T: Real> Pulse<T> {
    pub fn new(rise: T, duty: T) -> Result<Self> {
        if !(rise >= T::zero() && rise < T::one()) {
            return Err(invalid("rise", format!("must lie in [0, 1), got {rise}")));
        }
        if !(duty >= T::zero() && duty <= T::one()) {
            return Err(invalid("duty", format!("must lie in [0, 1], got {duty}")));
        }
        Ok(Self { rise, duty })
    }

    /// Wraps `rise` onto [0, 1) and clamps `duty` onto [0, 1].
    pub fn wrapped(rise: T, duty: T) -> Self {
        let mut r = rise - rise.floor();
        if r >= T::one() {
            r = T::zero();
        }
        Self {
            rise: r,
            duty: duty.max(T::zero()).min(T::one()),
        }
    }

    pub fn always_on() -> Self {
        Self {
            rise: T::zero(),
            duty: T::one(),
        }
    }

    pub fn always_off() -> Self {
        Self {
            rise: T::zero(),
            duty: T::zero(),
        }
    }

    pub fn rise(&self) -> T {
        self.rise
    }

    pub fn duty(&self) -> T {
        self.duty
    }

    pub fn is_static(&self) -> bool {
        self.duty == T::zero() || self.duty == T::one()
    }

    /// Same pulse delayed by half a period.
    pub fn half_period_shift(&self) -> Self {
        Self::wrapped(self.rise + T::lit(0.5), self.duty)
    }

    /// Value of the indicator waveform at normalised time `t` (any real).
    pub fn is_on_at(&self, t: T) -> bool {
        let phase = t - self.rise;
        let phase = phase - phase.floor();
        phase < self.duty
    }

    /// Fourier coefficient `u^h = (1/T) ∫ U(t) exp(-j h 2π t / T) dt`.
    ///
    /// Closed form `exp(-jπh(2c + τ)) sin(πhτ) / (πh)`; static pulses return
    /// an exact zero for every `h != 0`.
    pub fn fourier_coefficient(&self, h: i32) -> Complex<T> {
        if h == 0 {
            return Complex::new(self.duty, T::zero());
        }
        if self.is_static() {
            return Complex::new(T::zero(), T::zero());
        }
        let hf = T::from_i32(h).expect("harmonic index");
        let arg = T::PI() * hf * self.duty;
        let magnitude = arg.sin() / (T::PI() * hf);
        cis(-T::PI() * hf * (T::lit(2.0) * self.rise + self.duty)) * magnitude
    }

    /// Coefficient of the complementary waveform `1 - U`.
    pub fn complement_coefficient(&self, h: i32) -> Complex<T> {
        complement_fourier_coefficient(self.fourier_coefficient(h), h)
    }
}

/// `δ_{h0} - u_h`: Fourier coefficient of `1 - U` given that of `U`.
pub fn complement_fourier_coefficient<T: Real>(u_h: Complex<T>, h: i32) -> Complex<T> {
    if h == 0 {
        Complex::new(T::one(), T::zero()) - u_h
    } else {
        -u_h
    }
}

/// Per-cell pulses of a `P x Q` skin plus the modulation period.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule<T: Real> {
    period: T,
    rows: usize,
    cols: usize,
    pulses: Vec<Pulse<T>>,
}

impl<T: Real> PulseSchedule<T> {
    /// `pulses` is row-major: index `p * cols + q`.
    pub fn new(period: T, rows: usize, cols: usize, pulses: Vec<Pulse<T>>) -> Result<Self> {
        if !(period > T::zero() && period.is_finite()) {
            return Err(invalid("period", format!("must be positive, got {period}")));
        }
        if pulses.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: format!("{rows}x{cols} = {} pulses", rows * cols),
                actual: format!("{} pulses", pulses.len()),
            });
        }
        Ok(Self {
            period,
            rows,
            cols,
            pulses,
        })
    }

    pub fn uniform(period: T, rows: usize, cols: usize, pulse: Pulse<T>) -> Result<Self> {
        Self::new(period, rows, cols, vec![pulse; rows * cols])
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pulses(&self) -> &[Pulse<T>] {
        &self.pulses
    }

    pub fn pulse(&self, p: usize, q: usize) -> Pulse<T> {
        self.pulses[p * self.cols + q]
    }

    /// Switch-on instant `t_on` of cell `(p, q)` in seconds.
    pub fn t_on(&self, p: usize, q: usize) -> T {
        self.pulse(p, q).rise * self.period
    }

    /// Switch-off instant `t_off` in seconds, wrapped onto `[0, T)`.
    pub fn t_off(&self, p: usize, q: usize) -> T {
        let pulse = self.pulse(p, q);
        let end = pulse.rise + pulse.duty;
        (end - end.floor()) * self.period
    }

    /// Angular frequency of harmonic `h` for carrier `omega0`.
    pub fn harmonic_frequency(&self, omega0: T, h: i32) -> T {
        omega0 + T::from_i32(h).expect("harmonic index") * T::TAU() / self.period
    }

    /// `u^h` for every cell, row-major.
    pub fn fourier_coefficients(&self, h: i32) -> Vec<Complex<T>> {
        self.pulses.iter().map(|p| p.fourier_coefficient(h)).collect()
    }

    pub fn is_static(&self) -> bool {
        self.pulses.iter().all(Pulse::is_static)
    }
}
