use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::model::{EmsGeometry, Tensor2};
use crate::scalar::{cis, Real};

/// Locally plane wave illuminating the skin from direction `(θ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveIncidence<T: Real> {
    theta_deg: T,
    phi_deg: T,
    amplitude: T,
    polarization: [Complex<T>; 2],
}

impl<T: Real> PlaneWaveIncidence<T> {
    /// `polarization` is a (TE, TM) Jones vector and is normalised here.
    pub fn new(theta_deg: T, phi_deg: T, amplitude: T, polarization: [Complex<T>; 2]) -> Result<Self> {
        if !(theta_deg >= T::zero() && theta_deg < T::lit(90.0)) {
            return Err(invalid("theta_inc", format!("must lie in [0, 90) deg, got {theta_deg}")));
        }
        if !phi_deg.is_finite() {
            return Err(invalid("phi_inc", "must be finite"));
        }
        if !(amplitude > T::zero() && amplitude.is_finite()) {
            return Err(invalid("amplitude", format!("must be positive, got {amplitude}")));
        }
        let norm = (polarization[0].norm_sqr() + polarization[1].norm_sqr()).sqrt();
        if !(norm > T::zero() && norm.is_finite()) {
            return Err(invalid("polarization", "Jones vector must be non-zero"));
        }
        Ok(Self {
            theta_deg,
            phi_deg,
            amplitude,
            polarization: [polarization[0] / norm, polarization[1] / norm],
        })
    }

    /// Unit-amplitude TE (φ-polarised) wave.
    pub fn te(theta_deg: T, phi_deg: T) -> Result<Self> {
        let one = Complex::new(T::one(), T::zero());
        let zero = Complex::new(T::zero(), T::zero());
        Self::new(theta_deg, phi_deg, T::one(), [one, zero])
    }

    pub fn with_amplitude(mut self, amplitude: T) -> Result<Self> {
        if !(amplitude > T::zero() && amplitude.is_finite()) {
            return Err(invalid("amplitude", format!("must be positive, got {amplitude}")));
        }
        self.amplitude = amplitude;
        Ok(self)
    }

    pub fn theta_deg(&self) -> T {
        self.theta_deg
    }

    pub fn phi_deg(&self) -> T {
        self.phi_deg
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn polarization(&self) -> [Complex<T>; 2] {
        self.polarization
    }

    /// Direction cosines `(u, v)` of the source as seen from the skin.
    pub fn direction_cosines(&self) -> (T, T) {
        let (st, _) = self.theta_deg.to_radians().sin_cos();
        let (sp, cp) = self.phi_deg.to_radians().sin_cos();
        (st * cp, st * sp)
    }

    /// Unit propagation vector, from the source toward the aperture.
    pub fn k_hat(&self) -> [T; 3] {
        let (u, v) = self.direction_cosines();
        let ct = self.theta_deg.to_radians().cos();
        [-u, -v, -ct]
    }

    /// Complex incident Jones vector at every cell barycentre, row-major.
    pub fn cell_excitation(&self, geometry: &EmsGeometry<T>) -> Vec<[Complex<T>; 2]> {
        let k0 = geometry.wavenumber();
        let k = self.k_hat();
        let mut out = Vec::with_capacity(geometry.cell_count());
        for p in 0..geometry.rows() {
            for q in 0..geometry.cols() {
                let r = geometry.barycenter(p, q);
                let phase = cis(-k0 * (k[0] * r[0] + k[1] * r[1] + k[2] * r[2])) * self.amplitude;
                out.push([self.polarization[0] * phase, self.polarization[1] * phase]);
            }
        }
        out
    }

    /// Maps a reflected (TE, TM) Jones vector at the aperture to the
    /// tangential (x, y) far-field vector `ẑ×ẑ×[ẑ×(k̂×E) − E]`.
    ///
    /// `k̂` is the specularly reflected direction, so a TE wave picks up a
    /// factor `1 + cosθ` and the operator never vanishes.
    pub fn radiation_operator(&self) -> Tensor2<T> {
        let th = self.theta_deg.to_radians();
        let (st, ct) = th.sin_cos();
        let (sp, cp) = self.phi_deg.to_radians().sin_cos();
        let k_ref = [-st * cp, -st * sp, ct];
        let e_te = [-sp, cp, T::zero()];
        let e_tm = [ct * cp, ct * sp, st];
        let column = |e: [T; 3]| {
            let ke = cross(k_ref, e);
            let zke = cross([T::zero(), T::zero(), T::one()], ke);
            // ẑ×ẑ×V keeps minus the tangential part of V.
            [e[0] - zke[0], e[1] - zke[1]]
        };
        let a = column(e_te);
        let b = column(e_tm);
        let c = |x: T| Complex::new(x, T::zero());
        Tensor2([[c(a[0]), c(b[0])], [c(a[1]), c(b[1])]])
    }
}

/// Incident field at each cell of `geometry`.
pub fn incident_cell_excitation<T: Real>(
    incidence: &PlaneWaveIncidence<T>,
    geometry: &EmsGeometry<T>,
) -> Vec<[Complex<T>; 2]> {
    incidence.cell_excitation(geometry)
}

fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
