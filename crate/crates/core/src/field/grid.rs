use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Uniform `(u, v)` direction-cosine grid over `[-1, 1]^2`.
///
/// `u = sinθ cosφ`, `v = sinθ sinφ`. Samples are stored row-major with
/// `u` as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid<T: Real> {
    u: Vec<T>,
    v: Vec<T>,
}

impl<T: Real> DirectionGrid<T> {
    /// Square grid with `n` samples per axis.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn new(n_u: usize, n_v: usize) -> Result<Self> {
        if n_u < 2 || n_v < 2 {
            return Err(invalid("grid", format!("need at least 2 samples per axis, got {n_u}x{n_v}")));
        }
        Ok(Self {
            u: axis(n_u),
            v: axis(n_v),
        })
    }

    pub fn n_u(&self) -> usize {
        self.u.len()
    }

    pub fn n_v(&self) -> usize {
        self.v.len()
    }

    pub fn len(&self) -> usize {
        self.u.len() * self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn u(&self) -> &[T] {
        &self.u
    }

    pub fn v(&self) -> &[T] {
        &self.v
    }

    pub fn du(&self) -> T {
        T::lit(2.0) / T::from_count(self.u.len() - 1)
    }

    pub fn dv(&self) -> T {
        T::lit(2.0) / T::from_count(self.v.len() - 1)
    }

    /// Quadrature weight of one sample, `Δu Δv`.
    pub fn weight(&self) -> T {
        self.du() * self.dv()
    }

    pub fn index(&self, iu: usize, iv: usize) -> usize {
        iu * self.v.len() + iv
    }

    pub fn coords(&self, index: usize) -> (T, T) {
        let n_v = self.v.len();
        (self.u[index / n_v], self.v[index % n_v])
    }

    pub fn is_visible(&self, index: usize) -> bool {
        let (u, v) = self.coords(index);
        is_visible(u, v)
    }

    pub fn visibility(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.is_visible(i)).collect()
    }

    /// Flat index of the node at `(u, v)`, within a small fraction of the spacing.
    pub fn node(&self, u: T, v: T) -> Result<usize> {
        let tol = T::lit(1e-6);
        let iu = nearest(&self.u, u, self.du());
        let iv = nearest(&self.v, v, self.dv());
        match (iu, iv) {
            (Some(iu), Some(iv))
                if (self.u[iu] - u).abs() <= tol * self.du()
                    && (self.v[iv] - v).abs() <= tol * self.dv() =>
            {
                Ok(self.index(iu, iv))
            }
            _ => Err(Error::DirectionNotOnGrid {
                u: u.as_f64(),
                v: v.as_f64(),
            }),
        }
    }

    /// Flat index of the node closest to `(u, v)`.
    pub fn nearest_node(&self, u: T, v: T) -> usize {
        let clamp = |x: T| x.max(-T::one()).min(T::one());
        let iu = nearest(&self.u, clamp(u), self.du()).unwrap_or(0);
        let iv = nearest(&self.v, clamp(v), self.dv()).unwrap_or(0);
        self.index(iu, iv)
    }
}

/// Inside the closed unit disc.
pub fn is_visible<T: Real>(u: T, v: T) -> bool {
    u * u + v * v <= T::one()
}

fn axis<T: Real>(n: usize) -> Vec<T> {
    let last = n - 1;
    (0..n)
        .map(|i| {
            // Symmetric construction keeps u = 0 exact for odd n and u(i) = -u(n-1-i).
            let num = T::from_count(2 * i) - T::from_count(last);
            num / T::from_count(last)
        })
        .collect()
}

fn nearest<T: Real>(axis: &[T], x: T, step: T) -> Option<usize> {
    if !x.is_finite() {
        return None;
    }
    let pos = ((x + T::one()) / step).round();
    let i = pos.to_isize()?;
    if i < 0 || i as usize >= axis.len() {
        None
    } else {
        Some(i as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_grid_contains_origin_and_is_symmetric() {
        let g = DirectionGrid::<f64>::square(201).unwrap();
        assert_eq!(g.u()[100], 0.0);
        for i in 0..201 {
            assert_eq!(g.u()[i], -g.u()[200 - i]);
        }
        assert!((g.du() - 0.01).abs() < 1e-15);
        assert_eq!(g.node(0.34, 0.0).unwrap(), g.index(134, 100));
        assert!(g.node(0.342, 0.0).is_err());
        assert_eq!(g.nearest_node(0.342, 0.0), g.index(134, 100));
    }

    #[test]
    fn corners_invisible() {
        let g = DirectionGrid::<f64>::square(3).unwrap();
        let vis = g.visibility();
        assert_eq!(vis, vec![false, true, false, true, true, true, false, true, false]);
    }
}
