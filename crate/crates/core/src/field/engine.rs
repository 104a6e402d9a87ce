use num_complex::Complex;

use super::grid::DirectionGrid;
use super::incidence::PlaneWaveIncidence;
use super::pattern::HarmonicPattern;
use crate::error::{Error, Result};
use crate::model::{harmonic_reflection_tensor, EmsGeometry, PulseSchedule, ReflectionStates, Tensor2};
use crate::scalar::{cis, sinc, Real};

/// Patch integral `∫ exp(jk0 (u x' + v y')) dx' dy'` over one cell.
pub fn cell_factor<T: Real>(geometry: &EmsGeometry<T>, u: T, v: T) -> T {
    let half = geometry.wavenumber() * geometry.cell_edge() * T::lit(0.5);
    geometry.cell_area() * sinc(half * u) * sinc(half * v)
}

/// Steering and cell-factor tables for one (geometry, incidence, grid).
///
/// A pattern evaluation is then two small matrix products against the
/// per-cell harmonic coefficients.
#[derive(Debug, Clone)]
pub struct FieldEngine<T: Real> {
    geometry: EmsGeometry<T>,
    incidence: PlaneWaveIncidence<T>,
    grid: DirectionGrid<T>,
    prefactor: Complex<T>,
    operator: Tensor2<T>,
    drive: [Complex<T>; 2],
    ax: Vec<Complex<T>>,
    ay: Vec<Complex<T>>,
    cf_u: Vec<T>,
    cf_v: Vec<T>,
}

impl<T: Real> FieldEngine<T> {
    pub fn new(geometry: &EmsGeometry<T>, incidence: &PlaneWaveIncidence<T>, grid: &DirectionGrid<T>) -> Self {
        let k0 = geometry.wavenumber();
        let (u_inc, v_inc) = incidence.direction_cosines();
        let xs = geometry.x_positions();
        let ys = geometry.y_positions();
        let ax = grid
            .u()
            .iter()
            .flat_map(|&u| xs.iter().map(move |&x| cis(k0 * (u + u_inc) * x)))
            .collect();
        let ay = grid
            .v()
            .iter()
            .flat_map(|&v| ys.iter().map(move |&y| cis(k0 * (v + v_inc) * y)))
            .collect();
        let half = k0 * geometry.cell_edge() * T::lit(0.5);
        let cf_u = grid.u().iter().map(|&u| geometry.cell_area() * sinc(half * u)).collect();
        let cf_v = grid.v().iter().map(|&v| sinc(half * v)).collect();
        let pol = incidence.polarization();
        let a = incidence.amplitude();
        Self {
            geometry: geometry.clone(),
            incidence: *incidence,
            grid: grid.clone(),
            prefactor: Complex::new(T::zero(), k0 / (T::lit(4.0) * T::PI())),
            operator: incidence.radiation_operator(),
            drive: [pol[0] * a, pol[1] * a],
            ax,
            ay,
            cf_u,
            cf_v,
        }
    }

    pub fn geometry(&self) -> &EmsGeometry<T> {
        &self.geometry
    }

    pub fn incidence(&self) -> &PlaneWaveIncidence<T> {
        &self.incidence
    }

    pub fn grid(&self) -> &DirectionGrid<T> {
        &self.grid
    }

    /// `jk0/(4π)`.
    pub fn prefactor(&self) -> Complex<T> {
        self.prefactor
    }

    fn check(&self, schedule: &PulseSchedule<T>) -> Result<()> {
        if schedule.rows() != self.geometry.rows() || schedule.cols() != self.geometry.cols() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} schedule", self.geometry.rows(), self.geometry.cols()),
                actual: format!("{}x{}", schedule.rows(), schedule.cols()),
            });
        }
        Ok(())
    }

    /// Far-field vector radiated by each cell before steering and cell factor:
    /// `M Γ^h_pq A ê`.
    pub fn cell_vectors(
        &self,
        schedule: &PulseSchedule<T>,
        states: &ReflectionStates<T>,
        h: i32,
    ) -> Result<Vec<[Complex<T>; 2]>> {
        self.check(schedule)?;
        Ok(schedule
            .pulses()
            .iter()
            .map(|pulse| {
                let gamma = harmonic_reflection_tensor(states, pulse, h);
                self.operator.apply(gamma.apply(self.drive))
            })
            .collect())
    }

    /// `Σ_pq c_pq exp(jk0((u+u_i) x_p + (v+v_i) y_q))` at every grid node.
    pub fn array_sum(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.grid.len()];
        self.array_sum_into(coeffs, &mut out);
        out
    }

    /// As [`Self::array_sum`], writing into `out` (length = grid size).
    pub fn array_sum_into(&self, coeffs: &[Complex<T>], out: &mut [Complex<T>]) {
        let (np, nq) = (self.geometry.rows(), self.geometry.cols());
        let (nu, nv) = (self.grid.n_u(), self.grid.n_v());
        debug_assert_eq!(coeffs.len(), np * nq);
        debug_assert_eq!(out.len(), nu * nv);
        let zero = Complex::new(T::zero(), T::zero());
        // b[p][iv] = Σ_q c_pq ay[iv][q]
        let mut b = vec![zero; np * nv];
        for p in 0..np {
            let row = &coeffs[p * nq..(p + 1) * nq];
            for iv in 0..nv {
                let ay = &self.ay[iv * nq..(iv + 1) * nq];
                let mut acc = zero;
                for (c, s) in row.iter().zip(ay) {
                    acc += c * s;
                }
                b[p * nv + iv] = acc;
            }
        }
        for iu in 0..nu {
            let ax = &self.ax[iu * np..(iu + 1) * np];
            let dst = &mut out[iu * nv..(iu + 1) * nv];
            dst.fill(zero);
            for (p, s) in ax.iter().enumerate() {
                let bp = &b[p * nv..(p + 1) * nv];
                for (d, x) in dst.iter_mut().zip(bp) {
                    *d += s * x;
                }
            }
        }
    }

    /// `A_cell sinc(.) sinc(.)` at grid node `(iu, iv)`.
    pub fn grid_cell_factor(&self, iu: usize, iv: usize) -> T {
        self.cf_u[iu] * self.cf_v[iv]
    }

    /// Harmonic far field on the engine grid.
    pub fn harmonic_far_field(
        &self,
        schedule: &PulseSchedule<T>,
        states: &ReflectionStates<T>,
        h: i32,
    ) -> Result<HarmonicPattern<T>> {
        let vectors = self.cell_vectors(schedule, states, h)?;
        let cx: Vec<_> = vectors.iter().map(|w| w[0]).collect();
        let cy: Vec<_> = vectors.iter().map(|w| w[1]).collect();
        let sx = self.array_sum(&cx);
        let sy = self.array_sum(&cy);
        let nv = self.grid.n_v();
        let samples = sx
            .iter()
            .zip(&sy)
            .enumerate()
            .map(|(i, (x, y))| {
                let f = self.prefactor * self.grid_cell_factor(i / nv, i % nv);
                [f * x, f * y]
            })
            .collect();
        let omega = schedule.harmonic_frequency(self.geometry.angular_frequency(), h);
        HarmonicPattern::new(h, omega, self.grid.clone(), samples)
    }

    /// Field of arbitrary per-cell vectors in direction `(u, v)`, by direct summation.
    pub fn field_of_vectors_at(&self, vectors: &[[Complex<T>; 2]], u: T, v: T) -> [Complex<T>; 2] {
        let k0 = self.geometry.wavenumber();
        let (u_inc, v_inc) = self.incidence.direction_cosines();
        let xs = self.geometry.x_positions();
        let ys = self.geometry.y_positions();
        let tx: Vec<_> = xs.iter().map(|&x| cis(k0 * (u + u_inc) * x)).collect();
        let ty: Vec<_> = ys.iter().map(|&y| cis(k0 * (v + v_inc) * y)).collect();
        let nq = ys.len();
        let zero = Complex::new(T::zero(), T::zero());
        let mut acc = [zero, zero];
        for (p, sx) in tx.iter().enumerate() {
            for (q, sy) in ty.iter().enumerate() {
                let s = sx * sy;
                let w = &vectors[p * nq + q];
                acc[0] += w[0] * s;
                acc[1] += w[1] * s;
            }
        }
        let f = self.prefactor * cell_factor(&self.geometry, u, v);
        [acc[0] * f, acc[1] * f]
    }

    /// Harmonic field in an arbitrary direction `(u, v)`.
    pub fn field_at(
        &self,
        schedule: &PulseSchedule<T>,
        states: &ReflectionStates<T>,
        h: i32,
        u: T,
        v: T,
    ) -> Result<[Complex<T>; 2]> {
        let vectors = self.cell_vectors(schedule, states, h)?;
        Ok(self.field_of_vectors_at(&vectors, u, v))
    }

    /// `|E^h|^2` in an arbitrary direction.
    pub fn power_at(
        &self,
        schedule: &PulseSchedule<T>,
        states: &ReflectionStates<T>,
        h: i32,
        u: T,
        v: T,
    ) -> Result<T> {
        let e = self.field_at(schedule, states, h, u, v)?;
        Ok(e[0].norm_sqr() + e[1].norm_sqr())
    }

    /// The radiated vector `M A ê` of a cell whose reflection is the identity.
    pub fn unit_cell_vector(&self) -> [Complex<T>; 2] {
        self.operator.apply(self.drive)
    }
}

/// One-shot harmonic far field; builds the steering tables internally.
pub fn harmonic_far_field<T: Real>(
    geometry: &EmsGeometry<T>,
    schedule: &PulseSchedule<T>,
    states: &ReflectionStates<T>,
    incidence: &PlaneWaveIncidence<T>,
    grid: &DirectionGrid<T>,
    h: i32,
) -> Result<HarmonicPattern<T>> {
    FieldEngine::new(geometry, incidence, grid).harmonic_far_field(schedule, states, h)
}
