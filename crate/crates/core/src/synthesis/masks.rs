use crate::error::{invalid, Error, Result};
use crate::field::{is_visible, DirectionGrid};
use crate::model::EmsGeometry;
use crate::scalar::{from_db, Real};

/// Coherent power of a fully phase-aligned ideal aperture,
/// `|k0/(4π)|^2 (A P Q A_cell)^2`.
pub fn reference_power<T: Real>(geometry: &EmsGeometry<T>, amplitude: T) -> T {
    let k = geometry.wavenumber() / (T::lit(4.0) * T::PI());
    let s = amplitude * geometry.aperture_area();
    k * k * s * s
}

/// Power bounds at one explicit direction, outside the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor<T: Real> {
    pub u: T,
    pub v: T,
    pub harmonic: i32,
    pub lower: T,
    pub upper: T,
    /// Multiplies this anchor's violation in the cost.
    pub weight: T,
}

/// Builder parameters for [`build_masks`]. Levels are dB relative to the
/// reference power, widths in direction-cosine units.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskParams<T: Real> {
    /// Σ beam direction `(u, v)`.
    pub beam: (T, T),
    /// Δ null direction; normally the beam direction.
    pub null: (T, T),
    /// Main-lobe box half-widths in `(u, v)`.
    pub half_width: (T, T),
    /// Box spans the whole `v` axis (column-wise skins cannot steer in `v`).
    pub full_v_extent: bool,
    pub sidelobe_db: T,
    /// Minimum Σ power at the beam direction; also caps the main lobe.
    pub peak_db: T,
    /// Allowed overshoot of the peak level next to the beam direction.
    pub ripple_db: T,
    pub null_depth_db: T,
    /// Minimum Δ power at the two lobe centres flanking the null.
    pub lobe_db: T,
    /// Lobe-centre offset from the null along `u`.
    pub lobe_offset: T,
    /// Offset of the flat-top samples either side of the beam.
    pub shoulder: (T, T),
    /// Specular direction; when outside the main-lobe box, both harmonics
    /// get an explicit sidelobe ceiling there, where the residual mirror
    /// reflection peaks.
    pub specular: Option<(T, T)>,
    /// Spacing of the upper-bound samples placed along the main-lobe cuts
    /// through the beam; zero disables them.
    pub cut_step: T,
    /// Weight of the beam and lobe anchors.
    pub anchor_weight: T,
    /// Weight of the Δ null and specular-ceiling anchors.
    pub null_weight: T,
    /// Weight of each main-lobe cut sample.
    pub cut_weight: T,
    pub reference_power: T,
}

/// Mask levels and shapes independent of the beam direction. Widths are
/// multiples of `λ/(P a)` along `u` and `λ/(Q a)` along `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskTemplate<T: Real> {
    pub sidelobe_db: T,
    pub peak_db: T,
    pub ripple_db: T,
    pub null_depth_db: T,
    pub lobe_db: T,
    /// Main-lobe box half-width; 4 is twice the uniform-aperture
    /// first-null beamwidth.
    pub half_width: T,
    pub lobe_offset: T,
    pub shoulder: T,
    /// Absolute spacing of the main-lobe cut samples in direction cosine.
    pub cut_step: T,
    pub anchor_weight: T,
    pub null_weight: T,
    pub cut_weight: T,
}

impl<T: Real> Default for MaskTemplate<T> {
    fn default() -> Self {
        Self {
            sidelobe_db: T::lit(-10.0),
            peak_db: T::lit(-8.0),
            ripple_db: T::lit(0.5),
            null_depth_db: T::lit(-40.0),
            lobe_db: T::lit(-15.0),
            half_width: T::lit(4.0),
            lobe_offset: T::lit(0.742),
            shoulder: T::lit(0.135),
            cut_step: T::lit(0.01),
            anchor_weight: T::lit(0.5),
            null_weight: T::lit(50.0),
            cut_weight: T::lit(0.2),
        }
    }
}

impl<T: Real> MaskTemplate<T> {
    /// Concrete parameters for a skin steering both beams to `beam`.
    pub fn params(&self, geometry: &EmsGeometry<T>, amplitude: T, beam: (T, T), columnwise: bool) -> MaskParams<T> {
        let bw_u = T::one() / (T::from_count(geometry.rows()) * geometry.cell_size());
        let bw_v = T::one() / (T::from_count(geometry.cols()) * geometry.cell_size());
        MaskParams {
            beam,
            null: beam,
            half_width: (self.half_width * bw_u, self.half_width * bw_v),
            full_v_extent: columnwise,
            sidelobe_db: self.sidelobe_db,
            peak_db: self.peak_db,
            ripple_db: self.ripple_db,
            null_depth_db: self.null_depth_db,
            lobe_db: self.lobe_db,
            lobe_offset: self.lobe_offset * bw_u,
            shoulder: (self.shoulder * bw_u, self.shoulder * bw_v),
            specular: None,
            cut_step: self.cut_step,
            anchor_weight: self.anchor_weight,
            null_weight: self.null_weight,
            cut_weight: self.cut_weight,
            reference_power: reference_power(geometry, amplitude),
        }
    }
}

impl<T: Real> MaskParams<T> {
    /// Default template applied to `geometry`.
    pub fn for_geometry(geometry: &EmsGeometry<T>, amplitude: T, beam: (T, T), columnwise: bool) -> Self {
        MaskTemplate::default().params(geometry, amplitude, beam, columnwise)
    }

    pub fn in_main_lobe_box(&self, u: T, v: T) -> bool {
        (u - self.beam.0).abs() <= self.half_width.0
            && (self.full_v_extent || (v - self.beam.1).abs() <= self.half_width.1)
    }

    fn validate(&self) -> Result<()> {
        let (bu, bv) = self.beam;
        if !is_visible(bu, bv) {
            return Err(Error::OutsideVisibleRegion {
                u: bu.as_f64(),
                v: bv.as_f64(),
            });
        }
        if !is_visible(self.null.0, self.null.1) {
            return Err(Error::OutsideVisibleRegion {
                u: self.null.0.as_f64(),
                v: self.null.1.as_f64(),
            });
        }
        let levels = [
            ("sidelobe_db", self.sidelobe_db),
            ("peak_db", self.peak_db),
            ("ripple_db", self.ripple_db),
            ("null_depth_db", self.null_depth_db),
            ("lobe_db", self.lobe_db),
        ];
        for (name, x) in levels {
            if !x.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if self.ripple_db < T::zero() {
            return Err(invalid("ripple_db", "must be non-negative"));
        }
        for (name, x) in [
            ("half_width", self.half_width.0),
            ("half_width", self.half_width.1),
            ("lobe_offset", self.lobe_offset),
        ] {
            if !(x > T::zero() && x.is_finite()) {
                return Err(invalid(name, "must be positive"));
            }
        }
        if !(self.reference_power > T::zero() && self.reference_power.is_finite()) {
            return Err(invalid("reference_power", "must be positive"));
        }
        if !(self.anchor_weight >= T::zero() && self.anchor_weight.is_finite()) {
            return Err(invalid("anchor_weight", "must be non-negative"));
        }
        if !(self.null_weight >= T::zero() && self.null_weight.is_finite()) {
            return Err(invalid("null_weight", "must be non-negative"));
        }
        if !(self.cut_weight >= T::zero() && self.cut_weight.is_finite()) {
            return Err(invalid("cut_weight", "must be non-negative"));
        }
        if !(self.cut_step >= T::zero() && self.cut_step.is_finite()) {
            return Err(invalid("cut_step", "must be non-negative"));
        }
        if self.lobe_db >= self.peak_db + self.ripple_db {
            return Err(Error::InconsistentMask(
                "Δ lobe floor exceeds the main-lobe ceiling".into(),
            ));
        }
        if self.lobe_db <= self.null_depth_db {
            return Err(Error::InconsistentMask("Δ lobe floor lies below the null depth".into()));
        }
        if !self.in_main_lobe_box(self.null.0, self.null.1) {
            return Err(Error::InconsistentMask(
                "Δ null lies outside the main-lobe box".into(),
            ));
        }
        Ok(())
    }
}

/// Lower and upper power masks per harmonic (index 0 and 1) on a grid,
/// plus explicit off-grid anchor bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskSet<T: Real> {
    grid: DirectionGrid<T>,
    lower: [Vec<T>; 2],
    upper: [Vec<T>; 2],
    anchors: Vec<Anchor<T>>,
    reference_power: T,
    params: MaskParams<T>,
}

impl<T: Real> MaskSet<T> {
    pub fn grid(&self) -> &DirectionGrid<T> {
        &self.grid
    }

    /// Lower mask of harmonic `h` (0 or 1); inactive samples are 0.
    pub fn lower(&self, h: usize) -> &[T] {
        &self.lower[h]
    }

    /// Upper mask of harmonic `h`; inactive samples are `+inf`.
    pub fn upper(&self, h: usize) -> &[T] {
        &self.upper[h]
    }

    pub fn anchors(&self) -> &[Anchor<T>] {
        &self.anchors
    }

    pub fn reference_power(&self) -> T {
        self.reference_power
    }

    pub fn params(&self) -> &MaskParams<T> {
        &self.params
    }

    /// Assembles a mask set from explicit parts.
    pub fn from_parts(
        grid: DirectionGrid<T>,
        lower: [Vec<T>; 2],
        upper: [Vec<T>; 2],
        anchors: Vec<Anchor<T>>,
        params: MaskParams<T>,
    ) -> Result<Self> {
        for h in 0..2 {
            if lower[h].len() != grid.len() || upper[h].len() != grid.len() {
                return Err(Error::DimensionMismatch {
                    expected: format!("{} mask samples", grid.len()),
                    actual: format!("{} / {}", lower[h].len(), upper[h].len()),
                });
            }
            if lower[h].iter().zip(&upper[h]).any(|(l, u)| l > u) {
                return Err(Error::InconsistentMask(format!(
                    "lower mask exceeds upper mask for harmonic {h}"
                )));
            }
        }
        if anchors
            .iter()
            .any(|a| a.lower > a.upper || !(a.harmonic == 0 || a.harmonic == 1) || !(a.weight >= T::zero()))
        {
            return Err(Error::InconsistentMask("invalid anchor bounds".into()));
        }
        Ok(Self {
            grid,
            lower,
            upper,
            reference_power: params.reference_power,
            anchors,
            params,
        })
    }
}

/// Builds the Σ/Δ masks described by `params` on `grid`.
///
/// Σ and Δ share one upper mask: the sidelobe ceiling outside the
/// main-lobe box and the peak level inside it, relaxed by the ripple in a
/// small ellipse around the beam. Lower bounds and the Δ null are placed
/// as anchors at exact directions so they do not depend on grid alignment.
pub fn build_masks<T: Real>(params: &MaskParams<T>, grid: &DirectionGrid<T>) -> Result<MaskSet<T>> {
    params.validate()?;
    let r0 = params.reference_power;
    let peak = r0 * from_db(params.peak_db);
    let peak_hi = r0 * from_db(params.peak_db + params.ripple_db);
    let sidelobe = r0 * from_db(params.sidelobe_db);
    let (bu, bv) = params.beam;
    let (su, sv) = params.shoulder;
    let two = T::lit(2.0);

    let mut upper = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (u, v) = grid.coords(i);
        let value = if !is_visible(u, v) {
            T::infinity()
        } else if params.in_main_lobe_box(u, v) {
            let mut r = ((u - bu) / (two * su)).powi(2);
            if !params.full_v_extent {
                r += ((v - bv) / (two * sv)).powi(2);
            }
            if r <= T::one() {
                peak_hi
            } else {
                peak
            }
        } else {
            sidelobe
        };
        upper.push(value);
    }
    let lower = vec![T::zero(); grid.len()];

    let inf = T::infinity();
    let key = params.anchor_weight;
    let mut anchors = Vec::new();
    let mut add = |u: T, v: T, harmonic: i32, lower: T, upper: T, weight: T| {
        anchors.push(Anchor { u, v, harmonic, lower, upper, weight });
    };
    let top = if params.cut_step > T::zero() { peak_hi } else { inf };
    add(bu, bv, 0, peak, top, key);
    add(bu - su, bv, 0, peak, inf, key);
    add(bu + su, bv, 0, peak, inf, key);
    if !params.full_v_extent {
        add(bu, bv - sv, 0, peak, inf, key);
        add(bu, bv + sv, 0, peak, inf, key);
    }
    let (nu, nv) = params.null;
    let lobe = r0 * from_db(params.lobe_db);
    add(nu, nv, 1, T::zero(), r0 * from_db(params.null_depth_db), params.null_weight);
    add(nu - params.lobe_offset, nv, 1, lobe, inf, key);
    add(nu + params.lobe_offset, nv, 1, lobe, inf, key);
    if let Some((pu, pv)) = params.specular {
        if !params.in_main_lobe_box(pu, pv) {
            add(pu, pv, 0, T::zero(), sidelobe, params.null_weight);
            add(pu, pv, 1, T::zero(), sidelobe, params.null_weight);
        }
    }
    if params.cut_step > T::zero() {
        let cut = params.cut_weight;
        let ceiling = |d: T, s: T| if d <= two * s { peak_hi } else { peak };
        let n = (params.half_width.0 / params.cut_step).floor().to_usize().unwrap_or(0);
        for k in 1..=n {
            let d = params.cut_step * T::from_count(k);
            for u in [bu - d, bu + d] {
                add(u, bv, 0, T::zero(), ceiling(d, su), cut);
                add(u, bv, 1, T::zero(), ceiling(d, su), cut);
            }
        }
        if !params.full_v_extent {
            let n = (params.half_width.1 / params.cut_step).floor().to_usize().unwrap_or(0);
            for k in 1..=n {
                let d = params.cut_step * T::from_count(k);
                for v in [bv - d, bv + d] {
                    add(bu, v, 0, T::zero(), ceiling(d, sv), cut);
                    add(bu, v, 1, T::zero(), ceiling(d, sv), cut);
                }
            }
        }
    }
    anchors.retain(|a| is_visible(a.u, a.v));

    MaskSet::from_parts(
        grid.clone(),
        [lower.clone(), lower],
        [upper.clone(), upper],
        anchors,
        params.clone(),
    )
}
