use std::ops::{Add, Mul};

use num_complex::Complex;

use super::pulse::{Pulse, PulseSchedule};
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// 2x2 complex tensor acting on (TE, TM) Jones vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor2<T: Real>(pub [[Complex<T>; 2]; 2]);

impl<T: Real> Tensor2<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self([[z, z], [z, z]])
    }

    pub fn identity() -> Self {
        Self::diagonal(Complex::new(T::one(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn diagonal(te: Complex<T>, tm: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self([[te, z], [z, tm]])
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        let m = &self.0;
        Self([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    pub fn conj(&self) -> Self {
        let m = &self.0;
        Self([
            [m[0][0].conj(), m[0][1].conj()],
            [m[1][0].conj(), m[1][1].conj()],
        ])
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().flatten().all(|z| z.im == T::zero())
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> T {
        // Largest eigenvalue of the Hermitian A^H A.
        let m = &self.0;
        let a = m[0][0].norm_sqr() + m[1][0].norm_sqr();
        let d = m[0][1].norm_sqr() + m[1][1].norm_sqr();
        let b = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
        let half = T::lit(0.5);
        let mean = (a + d) * half;
        let diff = (a - d) * half;
        let lambda = mean + (diff * diff + b.norm_sqr()).sqrt();
        lambda.max(T::zero()).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> Add for Tensor2<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.0, rhs.0);
        Self([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl<T: Real> Mul<Complex<T>> for Tensor2<T> {
    type Output = Self;

    fn mul(self, rhs: Complex<T>) -> Self {
        self.scaled(rhs)
    }
}

/// ON and OFF reflection tensors of a meta-atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionStates<T: Real> {
    gamma_on: Tensor2<T>,
    gamma_off: Tensor2<T>,
}

impl<T: Real> ReflectionStates<T> {
    /// Rejects active (non-passive) tensors.
    pub fn new(gamma_on: Tensor2<T>, gamma_off: Tensor2<T>) -> Result<Self> {
        let limit = T::one() + T::lit(1e-9);
        for (name, g) in [("gamma_on", &gamma_on), ("gamma_off", &gamma_off)] {
            let s = g.spectral_norm();
            if !(s <= limit) {
                return Err(invalid(name, format!("not passive: largest singular value {s}")));
            }
        }
        Ok(Self {
            gamma_on,
            gamma_off,
        })
    }

    /// Lossless ideal switching between `+I` and `-I`.
    pub fn ideal() -> Self {
        Self {
            gamma_on: Tensor2::identity(),
            gamma_off: Tensor2::identity().scaled(Complex::new(-T::one(), T::zero())),
        }
    }

    pub fn gamma_on(&self) -> &Tensor2<T> {
        &self.gamma_on
    }

    pub fn gamma_off(&self) -> &Tensor2<T> {
        &self.gamma_off
    }
}

/// `Γ^h = Γ_on u^h + Γ_off ũ^h` for one cell.
pub fn harmonic_reflection_tensor<T: Real>(
    states: &ReflectionStates<T>,
    pulse: &Pulse<T>,
    h: i32,
) -> Tensor2<T> {
    let u = pulse.fourier_coefficient(h);
    let u_bar = super::complement_fourier_coefficient(u, h);
    states.gamma_on.scaled(u) + states.gamma_off.scaled(u_bar)
}

/// Harmonic reflection tensors of every cell of a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicTensor<T: Real> {
    harmonic: i32,
    rows: usize,
    cols: usize,
    tensors: Vec<Tensor2<T>>,
}

impl<T: Real> HarmonicTensor<T> {
    pub fn from_schedule(states: &ReflectionStates<T>, schedule: &PulseSchedule<T>, h: i32) -> Self {
        Self {
            harmonic: h,
            rows: schedule.rows(),
            cols: schedule.cols(),
            tensors: schedule
                .pulses()
                .iter()
                .map(|p| harmonic_reflection_tensor(states, p, h))
                .collect(),
        }
    }

    pub fn harmonic(&self) -> i32 {
        self.harmonic
    }

    pub fn tensor(&self, p: usize, q: usize) -> &Tensor2<T> {
        &self.tensors[p * self.cols + q]
    }

    pub fn tensors(&self) -> &[Tensor2<T>] {
        &self.tensors
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn ideal_states_reduce_to_scalar_weights() {
        let s = ReflectionStates::<f64>::ideal();
        let g = harmonic_reflection_tensor(&s, &Pulse::new(0.0, 0.5).unwrap(), 0);
        assert!(g.max_abs_diff(&Tensor2::zero()) < 1e-15);
        let g = harmonic_reflection_tensor(&s, &Pulse::new(0.0, 1.0).unwrap(), 0);
        assert!(g.max_abs_diff(&Tensor2::identity()) < 1e-15);
        let g = harmonic_reflection_tensor(&s, &Pulse::new(0.0, 0.5).unwrap(), 1);
        let expect = Tensor2::identity().scaled(c(0.0, -2.0 / PI));
        assert!(g.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn conjugate_symmetry_for_real_states() {
        let on = Tensor2([[c(0.9, 0.0), c(0.05, 0.0)], [c(0.05, 0.0), c(0.8, 0.0)]]);
        let off = Tensor2::diagonal(c(-0.7, 0.0), c(-0.85, 0.0));
        let s = ReflectionStates::new(on, off).unwrap();
        let p = Pulse::new(0.37, 0.22).unwrap();
        for h in 1..6 {
            let pos = harmonic_reflection_tensor(&s, &p, h);
            let neg = harmonic_reflection_tensor(&s, &p, -h);
            assert!(neg.max_abs_diff(&pos.conj()) < 1e-15);
        }
    }

    #[test]
    fn passivity_check() {
        let active = Tensor2::identity().scaled(c(1.01, 0.0));
        assert!(ReflectionStates::new(active, Tensor2::identity()).is_err());
        let unitary = Tensor2([[c(0.0, 1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]]);
        assert!(ReflectionStates::new(unitary, Tensor2::zero()).is_ok());
    }

    #[test]
    fn spectral_norm_of_rank_one() {
        // [[1, 1], [0, 0]] has singular values sqrt(2) and 0.
        let m = Tensor2([[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
        assert!((m.spectral_norm() - 2f64.sqrt()).abs() < 1e-15);
    }
}
