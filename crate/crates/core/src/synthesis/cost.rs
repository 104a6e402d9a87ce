use num_complex::Complex;

use super::masks::{Anchor, MaskSet};
use crate::error::{Error, Result};
use crate::field::{cell_factor, DirectionGrid, FieldEngine, PlaneWaveIncidence};
use crate::model::{ControlMode, EmsGeometry, PulseSchedule, ReflectionStates};
use crate::scalar::{cis, Real};

/// `max(x, 0)`.
#[inline]
pub fn ramp<T: Real>(x: T) -> T {
    x.max(T::zero())
}

/// Anchors sharing one direction cosine share a partial sum over that axis.
enum AnchorGroup<T: Real> {
    /// Fixed `v`: partial `r_p = Σ_q c_pq ty_q`.
    FixedV(Vec<Complex<T>>),
    /// Fixed `u`: partial `s_q = Σ_p c_pq tx_p`.
    FixedU(Vec<Complex<T>>),
}

struct AnchorTable<T: Real> {
    group: usize,
    /// Steering along the axis not covered by the group.
    steer: Vec<Complex<T>>,
    /// `|jk0/4π|^2 cf^2`.
    gain: T,
}

/// Everything the mask-violation cost needs besides the schedule.
pub struct CostContext<T: Real> {
    engine: FieldEngine<T>,
    states: ReflectionStates<T>,
    masks: MaskSet<T>,
    mode: ControlMode,
    period: T,
    /// When both states are multiples of the identity, `(γ_on, γ_off)`.
    scalar_states: Option<(Complex<T>, Complex<T>)>,
    /// `|jk0/4π|^2 cf^2` on the grid.
    grid_gain: Vec<T>,
    groups: Vec<AnchorGroup<T>>,
    anchors: Vec<AnchorTable<T>>,
}

impl<T: Real> CostContext<T> {
    pub fn new(
        geometry: &EmsGeometry<T>,
        incidence: &PlaneWaveIncidence<T>,
        states: &ReflectionStates<T>,
        masks: MaskSet<T>,
        mode: ControlMode,
        period: T,
    ) -> Result<Self> {
        mode.free_pulses(geometry.rows(), geometry.cols())?;
        let grid: &DirectionGrid<T> = masks.grid();
        let engine = FieldEngine::new(geometry, incidence, grid);
        let pref = engine.prefactor().norm_sqr();
        let nv = grid.n_v();
        let grid_gain = (0..grid.len())
            .map(|i| {
                let cf = engine.grid_cell_factor(i / nv, i % nv);
                pref * cf * cf
            })
            .collect();
        let (groups, anchors) = anchor_tables(geometry, incidence, masks.anchors(), pref);
        Ok(Self {
            scalar_states: scalar_pair(states),
            engine,
            states: *states,
            masks,
            mode,
            period,
            grid_gain,
            groups,
            anchors,
        })
    }

    pub fn engine(&self) -> &FieldEngine<T> {
        &self.engine
    }

    pub fn masks(&self) -> &MaskSet<T> {
        &self.masks
    }

    pub fn states(&self) -> &ReflectionStates<T> {
        &self.states
    }

    pub fn mode(&self) -> ControlMode {
        self.mode
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn geometry(&self) -> &EmsGeometry<T> {
        self.engine.geometry()
    }

    /// Search-space dimension for the context's mode.
    pub fn dimension(&self) -> usize {
        let g = self.geometry();
        self.mode.dimension(g.rows(), g.cols()).expect("validated at construction")
    }

    pub fn schedule_from_params(&self, params: &[T]) -> Result<PulseSchedule<T>> {
        let g = self.geometry();
        self.mode.schedule_from_params(params, g.rows(), g.cols(), self.period)
    }

    /// Φ for a flat parameter vector of the context's control mode.
    pub fn cost_of_params(&self, params: &[T]) -> Result<T> {
        let schedule = self.schedule_from_params(params)?;
        self.cost(&schedule)
    }

    /// Mask-violation cost Φ of a full schedule.
    ///
    /// `Σ_h Σ_grid w [ramp(|E^h|^2 − U^h) + ramp(L^h − |E^h|^2)]` plus the
    /// same penalty at each anchor scaled by the anchor weight.
    pub fn cost(&self, schedule: &PulseSchedule<T>) -> Result<T> {
        let g = self.geometry();
        if schedule.rows() != g.rows() || schedule.cols() != g.cols() {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{} schedule", g.rows(), g.cols()),
                actual: format!("{}x{}", schedule.rows(), schedule.cols()),
            });
        }
        let w = self.masks.grid().weight();
        let mut grid_sum = T::zero();
        let mut anchor_sum = T::zero();
        for h in 0..2usize {
            let powers = self.harmonic_powers(schedule, h as i32)?;
            let (lo, up) = (self.masks.lower(h), self.masks.upper(h));
            for ((p, l), u) in powers.grid.iter().zip(lo).zip(up) {
                grid_sum += ramp(*p - *u) + ramp(*l - *p);
            }
            for (a, p) in self.masks.anchors().iter().zip(&powers.anchors) {
                if a.harmonic == h as i32 {
                    anchor_sum += a.weight * (ramp(*p - a.upper) + ramp(a.lower - *p));
                }
            }
        }
        Ok(w * grid_sum + anchor_sum)
    }

    /// `|E^h|^2` on the grid and at every anchor (anchors of other
    /// harmonics are evaluated too, for simplicity).
    pub fn harmonic_powers(&self, schedule: &PulseSchedule<T>, h: i32) -> Result<HarmonicPowers<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        match self.scalar_states {
            Some((on, off)) => {
                let coeffs: Vec<Complex<T>> = schedule
                    .pulses()
                    .iter()
                    .map(|p| {
                        let u = p.fourier_coefficient(h);
                        on * u + off * crate::model::complement_fourier_coefficient(u, h)
                    })
                    .collect();
                let vector = self.engine.unit_cell_vector();
                let vnorm = vector[0].norm_sqr() + vector[1].norm_sqr();
                let mut field = vec![zero; self.masks.grid().len()];
                self.engine.array_sum_into(&coeffs, &mut field);
                let grid = field
                    .iter()
                    .zip(&self.grid_gain)
                    .map(|(e, g)| e.norm_sqr() * *g * vnorm)
                    .collect();
                let anchors = self
                    .anchor_sums(&coeffs)
                    .iter()
                    .zip(&self.anchors)
                    .map(|(e, a)| e.norm_sqr() * a.gain * vnorm)
                    .collect();
                Ok(HarmonicPowers { grid, anchors })
            }
            None => {
                let vectors = self.engine.cell_vectors(schedule, &self.states, h)?;
                let mut grid = vec![T::zero(); self.masks.grid().len()];
                let mut anchors = vec![T::zero(); self.anchors.len()];
                let mut field = vec![zero; self.masks.grid().len()];
                for c in 0..2 {
                    let coeffs: Vec<_> = vectors.iter().map(|w| w[c]).collect();
                    self.engine.array_sum_into(&coeffs, &mut field);
                    for ((g, e), k) in grid.iter_mut().zip(&field).zip(&self.grid_gain) {
                        *g += e.norm_sqr() * *k;
                    }
                    for ((p, e), a) in anchors.iter_mut().zip(self.anchor_sums(&coeffs)).zip(&self.anchors) {
                        *p += e.norm_sqr() * a.gain;
                    }
                }
                Ok(HarmonicPowers { grid, anchors })
            }
        }
    }

    fn anchor_sums(&self, coeffs: &[Complex<T>]) -> Vec<Complex<T>> {
        let g = self.geometry();
        let (np, nq) = (g.rows(), g.cols());
        let zero = Complex::new(T::zero(), T::zero());
        let partials: Vec<Vec<Complex<T>>> = self
            .groups
            .iter()
            .map(|group| match group {
                AnchorGroup::FixedV(ty) => (0..np)
                    .map(|p| {
                        coeffs[p * nq..(p + 1) * nq]
                            .iter()
                            .zip(ty)
                            .fold(zero, |acc, (c, t)| acc + c * t)
                    })
                    .collect(),
                AnchorGroup::FixedU(tx) => (0..nq)
                    .map(|q| (0..np).fold(zero, |acc, p| acc + coeffs[p * nq + q] * tx[p]))
                    .collect(),
            })
            .collect();
        self.anchors
            .iter()
            .map(|a| {
                partials[a.group]
                    .iter()
                    .zip(&a.steer)
                    .fold(zero, |acc, (r, t)| acc + r * t)
            })
            .collect()
    }
}

fn anchor_tables<T: Real>(
    geometry: &EmsGeometry<T>,
    incidence: &PlaneWaveIncidence<T>,
    anchors: &[Anchor<T>],
    prefactor_sqr: T,
) -> (Vec<AnchorGroup<T>>, Vec<AnchorTable<T>>) {
    let k0 = geometry.wavenumber();
    let (ui, vi) = incidence.direction_cosines();
    let xs = geometry.x_positions();
    let ys = geometry.y_positions();
    let tx = |u: T| -> Vec<Complex<T>> { xs.iter().map(|&x| cis(k0 * (u + ui) * x)).collect() };
    let ty = |v: T| -> Vec<Complex<T>> { ys.iter().map(|&y| cis(k0 * (v + vi) * y)).collect() };
    let count = |f: &dyn Fn(&Anchor<T>) -> T, x: T| anchors.iter().filter(|a| f(a) == x).count();

    let mut keys: Vec<(bool, T)> = Vec::new();
    let mut groups = Vec::new();
    let mut tables = Vec::with_capacity(anchors.len());
    for a in anchors {
        // Prefer the axis whose value is shared by more anchors.
        let fixed_v = count(&|b| b.v, a.v) >= count(&|b| b.u, a.u);
        let key = (fixed_v, if fixed_v { a.v } else { a.u });
        let group = match keys.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                keys.push(key);
                groups.push(if fixed_v {
                    AnchorGroup::FixedV(ty(a.v))
                } else {
                    AnchorGroup::FixedU(tx(a.u))
                });
                keys.len() - 1
            }
        };
        let cf = cell_factor(geometry, a.u, a.v);
        tables.push(AnchorTable {
            group,
            steer: if fixed_v { tx(a.u) } else { ty(a.v) },
            gain: prefactor_sqr * cf * cf,
        });
    }
    (groups, tables)
}

/// Power samples produced while evaluating the cost.
#[derive(Debug, Clone)]
pub struct HarmonicPowers<T: Real> {
    pub grid: Vec<T>,
    pub anchors: Vec<T>,
}

fn scalar_pair<T: Real>(states: &ReflectionStates<T>) -> Option<(Complex<T>, Complex<T>)> {
    let as_scalar = |m: &crate::model::Tensor2<T>| {
        let z = Complex::new(T::zero(), T::zero());
        let a = m.0;
        (a[0][1] == z && a[1][0] == z && a[0][0] == a[1][1]).then_some(a[0][0])
    };
    Some((as_scalar(states.gamma_on())?, as_scalar(states.gamma_off())?))
}

/// Φ of `schedule` under `context`.
pub fn cost_function<T: Real>(schedule: &PulseSchedule<T>, context: &CostContext<T>) -> Result<T> {
    context.cost(schedule)
}
