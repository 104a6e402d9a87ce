use crate::error::{invalid, Result};
use crate::field::{DirectionGrid, FieldEngine, MonopulseRatio, PlaneWaveIncidence};
use crate::field::is_visible;
use crate::error::Error;
use crate::model::{ControlMode, EmsGeometry, PulseSchedule, ReflectionStates};
use crate::scalar::Real;
use crate::synthesis::{build_masks, pso_optimize, CostContext, MaskTemplate, PsoConfig, Synthesis};

/// Skin, user, base station and design settings of one ISAC link.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario<T: Real> {
    pub geometry: EmsGeometry<T>,
    /// True user illumination.
    pub incidence: PlaneWaveIncidence<T>,
    /// Base-station elevation, degrees. Positive angles lie on the
    /// specular side of the normal.
    pub bs_theta_deg: T,
    pub bs_phi_deg: T,
    pub states: ReflectionStates<T>,
    pub mode: ControlMode,
    /// Modulation period, seconds.
    pub period: T,
    pub masks: MaskTemplate<T>,
    /// Samples per axis of the synthesis grid.
    pub synthesis_grid: usize,
    /// Additive receiver noise power on both BS measurements.
    pub noise_power: Option<T>,
}

impl<T: Real> Scenario<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.bs_theta_deg.abs() < T::lit(90.0)) {
            return Err(invalid("bs_theta", format!("must lie in (-90, 90) deg, got {}", self.bs_theta_deg)));
        }
        if !(self.period > T::zero() && self.period.is_finite()) {
            return Err(invalid("period", "must be positive"));
        }
        if let Some(n) = self.noise_power {
            if !(n >= T::zero() && n.is_finite()) {
                return Err(invalid("noise_power", "must be non-negative"));
            }
        }
        self.mode.free_pulses(self.geometry.rows(), self.geometry.cols())?;
        Ok(())
    }

    /// BS direction cosines. The specular image of the user sits at
    /// `-u_user`, so a BS elevation `θ` maps to `u = -sinθ cosφ`.
    pub fn bs_direction(&self) -> (T, T) {
        let st = self.bs_theta_deg.to_radians().sin();
        let (sp, cp) = self.bs_phi_deg.to_radians().sin_cos();
        (-st * cp, -st * sp)
    }

    /// Same scenario with the user assumed at elevation `theta_deg`.
    pub fn with_user_theta(&self, theta_deg: T) -> Result<Self> {
        let inc = &self.incidence;
        let incidence = PlaneWaveIncidence::new(theta_deg, inc.phi_deg(), inc.amplitude(), inc.polarization())?;
        Ok(Self {
            incidence,
            ..self.clone()
        })
    }

    pub fn with_bs_theta(&self, theta_deg: T) -> Self {
        Self {
            bs_theta_deg: theta_deg,
            ..self.clone()
        }
    }

    /// Cost context steering Σ and Δ to the BS under this scenario's incidence.
    pub fn cost_context(&self) -> Result<CostContext<T>> {
        self.validate()?;
        let beam = self.bs_direction();
        let mut params = self
            .masks
            .params(&self.geometry, self.incidence.amplitude(), beam, self.mode.is_columnwise());
        let (ui, vi) = self.incidence.direction_cosines();
        params.specular = Some((-ui, -vi));
        let grid = DirectionGrid::square(self.synthesis_grid)?;
        let masks = build_masks(&params, &grid)?;
        CostContext::new(&self.geometry, &self.incidence, &self.states, masks, self.mode, self.period)
    }
}

/// Powers received by the BS at the carrier and the first harmonic.
pub type BsMeasurement<T> = MonopulseRatio<T>;

/// `P_Σ`, `P_Δ` and `ξ` at the BS for `schedule` under the scenario's
/// true incidence.
pub fn measure_bs_powers<T: Real>(schedule: &PulseSchedule<T>, scenario: &Scenario<T>) -> Result<BsMeasurement<T>> {
    let (u, v) = scenario.bs_direction();
    if !is_visible(u, v) {
        return Err(Error::OutsideVisibleRegion {
            u: u.as_f64(),
            v: v.as_f64(),
        });
    }
    let grid = DirectionGrid::square(2)?;
    let engine = FieldEngine::new(&scenario.geometry, &scenario.incidence, &grid);
    let mut sum = engine.power_at(schedule, &scenario.states, 0, u, v)?;
    let mut diff = engine.power_at(schedule, &scenario.states, 1, u, v)?;
    if let Some(n) = scenario.noise_power {
        sum += n;
        diff += n;
    }
    Ok(MonopulseRatio::from_powers(sum, diff))
}

/// Best of `restarts` swarm runs (lowest Φ, earliest restart on ties).
pub fn synthesize_best<T: Real>(
    scenario: &Scenario<T>,
    config: &PsoConfig,
    seeds: &[u64],
) -> Result<Synthesis<T>> {
    let context = scenario.cost_context()?;
    let mut best: Option<Synthesis<T>> = None;
    for &seed in seeds {
        let cfg = PsoConfig {
            seed,
            ..config.clone()
        };
        let s = pso_optimize(&context, &cfg)?;
        if best.as_ref().map_or(true, |b| s.cost < b.cost) {
            best = Some(s);
        }
    }
    best.ok_or_else(|| invalid("seeds", "at least one seed is required"))
}

/// Mixes a master seed with a stream label (SplitMix64 finaliser).
pub fn derive_seed(master: u64, label: u64) -> u64 {
    let mut z = master ^ label.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeds of the independent restarts for one design label.
pub fn restart_seeds(master: u64, label: u64, restarts: usize) -> Vec<u64> {
    (0..restarts as u64)
        .map(|r| derive_seed(derive_seed(master, label), r))
        .collect()
}
