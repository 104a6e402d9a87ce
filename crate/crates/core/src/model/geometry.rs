use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Rectangular `P x Q` aperture of square unit cells in the `z = 0` plane,
/// centred on the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct EmsGeometry<T: Real> {
    rows: usize,
    cols: usize,
    cell_size: T,
    carrier_frequency: T,
}

impl<T: Real> EmsGeometry<T> {
    /// `cell_size` is the cell edge in carrier wavelengths, `carrier_frequency` in Hz.
    pub fn new(rows: usize, cols: usize, cell_size: T, carrier_frequency: T) -> Result<Self> {
        if rows == 0 {
            return Err(invalid("rows", "must be at least 1"));
        }
        if cols == 0 {
            return Err(invalid("cols", "must be at least 1"));
        }
        if !(cell_size > T::zero() && cell_size.is_finite()) {
            return Err(invalid("cell_size", format!("must be positive, got {cell_size}")));
        }
        if !(carrier_frequency > T::zero() && carrier_frequency.is_finite()) {
            return Err(invalid(
                "carrier_frequency",
                format!("must be positive, got {carrier_frequency}"),
            ));
        }
        Ok(Self {
            rows,
            cols,
            cell_size,
            carrier_frequency,
        })
    }

    /// Number of cells along `x` (P).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of cells along `y` (Q).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    /// Cell edge in wavelengths.
    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    pub fn carrier_frequency(&self) -> T {
        self.carrier_frequency
    }

    pub fn angular_frequency(&self) -> T {
        T::TAU() * self.carrier_frequency
    }

    pub fn wavelength(&self) -> T {
        T::lit(SPEED_OF_LIGHT) / self.carrier_frequency
    }

    /// Free-space wavenumber k0 in rad/m.
    pub fn wavenumber(&self) -> T {
        T::TAU() / self.wavelength()
    }

    /// Cell edge in metres.
    pub fn cell_edge(&self) -> T {
        self.cell_size * self.wavelength()
    }

    pub fn cell_area(&self) -> T {
        let a = self.cell_edge();
        a * a
    }

    pub fn aperture_area(&self) -> T {
        T::from_count(self.cell_count()) * self.cell_area()
    }

    /// Row-major flat index of cell `(p, q)`.
    #[inline]
    pub fn index(&self, p: usize, q: usize) -> usize {
        p * self.cols + q
    }

    /// Barycentre x coordinates of the P cell columns, metres.
    pub fn x_positions(&self) -> Vec<T> {
        centred_positions(self.rows, self.cell_edge())
    }

    /// Barycentre y coordinates of the Q cell rows, metres.
    pub fn y_positions(&self) -> Vec<T> {
        centred_positions(self.cols, self.cell_edge())
    }

    pub fn barycenter(&self, p: usize, q: usize) -> [T; 3] {
        let a = self.cell_edge();
        let half = T::lit(0.5);
        let x = (T::from_count(p) - (T::from_count(self.rows) - T::one()) * half) * a;
        let y = (T::from_count(q) - (T::from_count(self.cols) - T::one()) * half) * a;
        [x, y, T::zero()]
    }

    /// Canonical little-endian encoding, independent of the scalar type.
    pub fn fingerprint_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(32);
        out.extend_from_slice(&(self.rows as u64).to_le_bytes());
        out.extend_from_slice(&(self.cols as u64).to_le_bytes());
        out.extend_from_slice(&self.cell_size.as_f64().to_le_bytes());
        out.extend_from_slice(&self.carrier_frequency.as_f64().to_le_bytes());
        out
    }
}

fn centred_positions<T: Real>(n: usize, pitch: T) -> Vec<T> {
    let offset = (T::from_count(n) - T::one()) * T::lit(0.5);
    (0..n).map(|i| (T::from_count(i) - offset) * pitch).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo() -> EmsGeometry<f64> {
        EmsGeometry::new(10, 10, 0.45, 5.5e9).unwrap()
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(EmsGeometry::<f64>::new(0, 1, 0.45, 5.5e9).is_err());
        assert!(EmsGeometry::<f64>::new(1, 0, 0.45, 5.5e9).is_err());
        assert!(EmsGeometry::<f64>::new(1, 1, 0.0, 5.5e9).is_err());
        assert!(EmsGeometry::<f64>::new(1, 1, 0.45, -1.0).is_err());
    }

    #[test]
    fn barycentres_mirror_in_x() {
        let g = geo();
        for p in 0..g.rows() {
            for q in 0..g.cols() {
                let a = g.barycenter(p, q);
                let b = g.barycenter(g.rows() - 1 - p, q);
                assert!((a[0] + b[0]).abs() < 1e-15);
                assert_eq!(a[1], b[1]);
                assert_eq!(a[2], 0.0);
            }
        }
        let xs = g.x_positions();
        assert!((xs[0] - g.barycenter(0, 3)[0]).abs() < 1e-15);
    }

    #[test]
    fn aperture_area_matches_cell_count() {
        let g = geo();
        let lambda = SPEED_OF_LIGHT / 5.5e9;
        let expect = 100.0 * (0.45 * lambda).powi(2);
        assert!((g.aperture_area() - expect).abs() < 1e-15);
        assert!((g.wavenumber() * lambda - std::f64::consts::TAU).abs() < 1e-12);
    }
}
