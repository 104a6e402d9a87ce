use num_complex::Complex;

use super::grid::{is_visible, DirectionGrid};
use crate::error::{invalid, Error, Result};
use crate::scalar::{to_db, Real};

/// Floor applied to the Δ power in the monopulse ratio, squared field units.
pub const MONOPULSE_FLOOR: f64 = 1e-30;

/// Complex far field of one harmonic sampled on a direction grid.
///
/// Samples are `(E_x, E_y)` in V/m with the `exp(-jk0 r)/r` spreading
/// factor removed.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicPattern<T: Real> {
    harmonic: i32,
    angular_frequency: T,
    grid: DirectionGrid<T>,
    samples: Vec<[Complex<T>; 2]>,
}

impl<T: Real> HarmonicPattern<T> {
    pub fn new(
        harmonic: i32,
        angular_frequency: T,
        grid: DirectionGrid<T>,
        samples: Vec<[Complex<T>; 2]>,
    ) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} samples", grid.len()),
                actual: format!("{}", samples.len()),
            });
        }
        Ok(Self {
            harmonic,
            angular_frequency,
            grid,
            samples,
        })
    }

    pub fn harmonic(&self) -> i32 {
        self.harmonic
    }

    /// `ω_h = ω0 + h 2π/T`, rad/s.
    pub fn angular_frequency(&self) -> T {
        self.angular_frequency
    }

    pub fn grid(&self) -> &DirectionGrid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[[Complex<T>; 2]] {
        &self.samples
    }

    pub fn visibility(&self) -> Vec<bool> {
        self.grid.visibility()
    }

    /// `|E|^2` summed over both components at a grid node.
    pub fn power_at_node(&self, index: usize) -> T {
        let s = &self.samples[index];
        s[0].norm_sqr() + s[1].norm_sqr()
    }

    /// Field at the grid node `(u, v)`.
    pub fn sample_at(&self, u: T, v: T) -> Result<[Complex<T>; 2]> {
        Ok(self.samples[self.grid.node(u, v)?])
    }

    /// Visible grid node of maximum power (lowest index on ties).
    pub fn peak(&self) -> Option<(usize, T)> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.samples.len() {
            if !self.grid.is_visible(i) {
                continue;
            }
            let p = self.power_at_node(i);
            if best.map_or(true, |(_, b)| p > b) {
                best = Some((i, p));
            }
        }
        best
    }

    /// Every sample multiplied by `s`.
    pub fn scaled(&self, s: T) -> Self {
        let mut out = self.clone();
        for x in &mut out.samples {
            x[0] = x[0] * s;
            x[1] = x[1] * s;
        }
        out
    }
}

/// Per-direction power `|E_x|^2 + |E_y|^2`.
pub fn power_pattern<T: Real>(pattern: &HarmonicPattern<T>) -> Vec<T> {
    (0..pattern.samples.len()).map(|i| pattern.power_at_node(i)).collect()
}

/// Power pattern in dB relative to `reference`; zero power maps to `-inf`.
pub fn power_pattern_db<T: Real>(pattern: &HarmonicPattern<T>, reference: T) -> Result<Vec<T>> {
    if !(reference > T::zero() && reference.is_finite()) {
        return Err(invalid("reference", format!("must be positive, got {reference}")));
    }
    Ok(power_pattern(pattern)
        .into_iter()
        .map(|p| to_db(p, reference))
        .collect())
}

/// Σ/Δ power ratio at one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonopulseRatio<T: Real> {
    pub xi: T,
    pub sum_power: T,
    pub difference_power: T,
    /// Set when the Δ power was below [`MONOPULSE_FLOOR`].
    pub floored: bool,
}

impl<T: Real> MonopulseRatio<T> {
    pub fn from_powers(sum_power: T, difference_power: T) -> Self {
        let floor = T::lit(MONOPULSE_FLOOR);
        let floored = difference_power < floor;
        Self {
            xi: sum_power / difference_power.max(floor),
            sum_power,
            difference_power,
            floored,
        }
    }
}

/// `ξ = |E⁰|^2 / max(|E¹|^2, floor)` at grid node `direction`.
pub fn monopulse_ratio<T: Real>(
    pattern0: &HarmonicPattern<T>,
    pattern1: &HarmonicPattern<T>,
    direction: (T, T),
) -> Result<MonopulseRatio<T>> {
    if pattern0.grid != pattern1.grid {
        return Err(Error::DimensionMismatch {
            expected: "patterns on the same grid".into(),
            actual: "different grids".into(),
        });
    }
    let (u, v) = direction;
    if !is_visible(u, v) {
        return Err(Error::OutsideVisibleRegion {
            u: u.as_f64(),
            v: v.as_f64(),
        });
    }
    let i = pattern0.grid.node(u, v)?;
    Ok(MonopulseRatio::from_powers(
        pattern0.power_at_node(i),
        pattern1.power_at_node(i),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(grid: &DirectionGrid<f64>, value: f64) -> HarmonicPattern<f64> {
        let z = Complex::new(0.0, 0.0);
        let s = vec![[Complex::new(value, 0.0), z]; grid.len()];
        HarmonicPattern::new(0, 1.0, grid.clone(), s).unwrap()
    }

    #[test]
    fn power_basics() {
        let g = DirectionGrid::square(5).unwrap();
        assert!(power_pattern(&constant(&g, 0.0)).iter().all(|&p| p == 0.0));
        let a = power_pattern(&constant(&g, 1.5));
        let b = power_pattern(&constant(&g, 3.0));
        assert!(a.iter().zip(&b).all(|(x, y)| (4.0 * x - y).abs() < 1e-15));
        let db = power_pattern_db(&constant(&g, 2.0), 4.0).unwrap();
        assert!(db.iter().all(|x| x.abs() < 1e-12));
        assert!(power_pattern_db(&constant(&g, 2.0), 0.0).is_err());
    }

    #[test]
    fn ratio_and_floor() {
        let g = DirectionGrid::square(5).unwrap();
        let r = monopulse_ratio(&constant(&g, 2.0), &constant(&g, 2f64.sqrt()), (0.0, 0.0)).unwrap();
        assert!((r.xi - 2.0).abs() < 1e-12);
        assert!(!r.floored);
        let r = monopulse_ratio(&constant(&g, 2.0), &constant(&g, 0.0), (0.5, 0.0)).unwrap();
        assert!(r.floored);
        assert_eq!(r.xi, 4.0 / MONOPULSE_FLOOR);
        assert!(monopulse_ratio(&constant(&g, 1.0), &constant(&g, 1.0), (0.3, 0.0)).is_err());
        assert!(monopulse_ratio(&constant(&g, 1.0), &constant(&g, 1.0), (1.0, 1.0)).is_err());
    }
}
