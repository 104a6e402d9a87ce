//! Strict TOML run configuration with unit-suffixed quantities.

use std::path::Path;

use num_complex::Complex;
use serde::Serialize;
use toml::{Table, Value};

use tmems_core::field::PlaneWaveIncidence;
use tmems_core::isac::{Scenario, SweepSettings};
use tmems_core::model::{ControlMode, EmsGeometry, Pulse, ReflectionStates, Tensor2, SPEED_OF_LIGHT};
use tmems_core::synthesis::{MaskTemplate, PsoConfig};

use crate::units::{parse_quantity, Dimension};

/// Configuration error naming the offending key.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown key `{key}`{}", suggestion.as_ref().map(|s| format!("; did you mean `{s}`?")).unwrap_or_default())]
    UnknownKey { key: String, suggestion: Option<String> },
    #[error("missing required key `{0}`")]
    Missing(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryConfig {
    pub rows: usize,
    pub cols: usize,
    /// Cell edge in wavelengths.
    pub cell_size_lambda: f64,
    pub carrier_frequency_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncidenceConfig {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub amplitude_v_per_m: f64,
    /// (TE, TM) Jones vector as `[re, im]` pairs.
    pub polarization: [[f64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BsConfig {
    pub theta_deg: f64,
    pub phi_deg: f64,
    pub noise_power: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatesConfig {
    pub ideal: bool,
    /// Row-major 2x2 tensors of `[re, im]` entries.
    pub gamma_on: [[[f64; 2]; 2]; 2],
    pub gamma_off: [[[f64; 2]; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MasksConfig {
    pub sidelobe_db: f64,
    pub peak_db: f64,
    pub ripple_db: f64,
    pub null_depth_db: f64,
    pub lobe_db: f64,
    pub main_lobe_halfwidth: f64,
    pub lobe_offset: f64,
    pub shoulder: f64,
    pub cut_step: f64,
    pub anchor_weight: f64,
    pub null_weight: f64,
    pub cut_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsoSection {
    pub swarm_size: usize,
    pub max_iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub stagnation_window: usize,
    pub stagnation_tolerance: f64,
    pub velocity_clamp: f64,
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridsConfig {
    pub synthesis: usize,
    pub evaluation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputConfig {
    pub directory: String,
    pub formats: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizeConfig {
    pub candidates_deg: Vec<f64>,
    pub codebook: Option<String>,
}

/// Explicit free pulses `(rise, duty)` of the control mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScheduleConfig {
    pub pulses: Vec<(f64, f64)>,
}

/// Fully resolved configuration; every optional value has its default.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub mode: String,
    pub period_s: f64,
    pub geometry: GeometryConfig,
    pub incidence: IncidenceConfig,
    pub bs: BsConfig,
    pub states: StatesConfig,
    pub masks: MasksConfig,
    pub pso: PsoSection,
    pub grids: GridsConfig,
    pub output: OutputConfig,
    pub sweep: Option<SweepConfig>,
    pub localize: Option<LocalizeConfig>,
    pub schedule: Option<ScheduleConfig>,
}

const TOP_KEYS: &[&str] = &[
    "seed", "mode", "period", "geometry", "incidence", "bs", "states", "masks", "pso", "grids", "output", "sweep",
    "localize", "schedule",
];
const GEOMETRY_KEYS: &[&str] = &["rows", "cols", "cell_size", "carrier_frequency"];
const INCIDENCE_KEYS: &[&str] = &["theta", "phi", "amplitude", "polarization"];
const BS_KEYS: &[&str] = &["theta", "phi", "noise_power"];
const STATES_KEYS: &[&str] = &["ideal", "gamma_on", "gamma_off"];
const MASK_KEYS: &[&str] = &[
    "sidelobe", "peak", "ripple", "null_depth", "lobe", "main_lobe_halfwidth", "lobe_offset", "shoulder", "cut_step",
    "anchor_weight", "null_weight", "cut_weight",
];
const PSO_KEYS: &[&str] = &[
    "swarm_size", "max_iterations", "inertia", "cognitive", "social", "stagnation_window", "stagnation_tolerance",
    "velocity_clamp", "restarts",
];
const GRID_KEYS: &[&str] = &["synthesis", "evaluation"];
const OUTPUT_KEYS: &[&str] = &["directory", "formats"];
const SWEEP_KEYS: &[&str] = &["start", "stop", "step"];
const LOCALIZE_KEYS: &[&str] = &["candidates", "codebook"];
const SCHEDULE_KEYS: &[&str] = &["pulses", "uniform"];

/// Typed view of one TOML table that remembers its dotted path.
struct Section<'a> {
    path: String,
    table: Option<&'a Table>,
}

impl<'a> Section<'a> {
    fn new(path: &str, table: Option<&'a Table>, allowed: &[&str]) -> Result<Self, ConfigError> {
        if let Some(t) = table {
            for key in t.keys() {
                if !allowed.contains(&key.as_str()) {
                    return Err(ConfigError::UnknownKey {
                        key: join(path, key),
                        suggestion: suggest(key, allowed),
                    });
                }
            }
        }
        Ok(Self {
            path: path.to_string(),
            table,
        })
    }

    fn key(&self, k: &str) -> String {
        join(&self.path, k)
    }

    fn get(&self, k: &str) -> Option<&'a Value> {
        self.table.and_then(|t| t.get(k))
    }

    fn sub(&self, k: &str, allowed: &[&str]) -> Result<Section<'a>, ConfigError> {
        let table = match self.get(k) {
            None => None,
            Some(Value::Table(t)) => Some(t),
            Some(_) => return Err(invalid(&self.key(k), "expected a table")),
        };
        Section::new(&self.key(k), table, allowed)
    }

    fn present(&self, k: &str) -> bool {
        self.get(k).is_some()
    }

    fn quantity(&self, k: &str, dim: Dimension, default: Option<f64>) -> Result<f64, ConfigError> {
        Ok(self.quantity_with_unit(k, dim, default)?.0)
    }

    fn quantity_with_unit(
        &self,
        k: &str,
        dim: Dimension,
        default: Option<f64>,
    ) -> Result<(f64, &'static str), ConfigError> {
        match self.get(k) {
            None => default
                .map(|d| (d, ""))
                .ok_or_else(|| ConfigError::Missing(self.key(k))),
            Some(Value::String(s)) => {
                let q = parse_quantity(s, dim).map_err(|e| invalid(&self.key(k), e))?;
                Ok((q.value, q.unit))
            }
            Some(_) => Err(invalid(
                &self.key(k),
                format!("expected a quantity string with a unit ({dim})"),
            )),
        }
    }

    fn float(&self, k: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(k) {
            None => Ok(default),
            Some(Value::Float(x)) => Ok(*x),
            Some(Value::Integer(i)) => Ok(*i as f64),
            Some(_) => Err(invalid(&self.key(k), "expected a number")),
        }
    }

    fn count(&self, k: &str, default: Option<usize>) -> Result<usize, ConfigError> {
        match self.get(k) {
            None => default.ok_or_else(|| ConfigError::Missing(self.key(k))),
            Some(Value::Integer(i)) if *i >= 0 => Ok(*i as usize),
            Some(_) => Err(invalid(&self.key(k), "expected a non-negative integer")),
        }
    }

    fn boolean(&self, k: &str, default: bool) -> Result<bool, ConfigError> {
        match self.get(k) {
            None => Ok(default),
            Some(Value::Boolean(b)) => Ok(*b),
            Some(_) => Err(invalid(&self.key(k), "expected true or false")),
        }
    }

    fn string(&self, k: &str) -> Result<Option<String>, ConfigError> {
        match self.get(k) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(_) => Err(invalid(&self.key(k), "expected a string")),
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

/// Closest allowed key by Damerau-Levenshtein distance, if reasonably close.
fn suggest(key: &str, allowed: &[&str]) -> Option<String> {
    allowed
        .iter()
        .map(|a| (strsim::damerau_levenshtein(key, a), *a))
        .filter(|(d, a)| *d <= 3.max(a.len() / 3))
        .min()
        .map(|(_, a)| a.to_string())
}

fn complex_pair(v: &Value, key: &str) -> Result<[f64; 2], ConfigError> {
    let arr = v.as_array().ok_or_else(|| invalid(key, "expected [re, im]"))?;
    if arr.len() != 2 {
        return Err(invalid(key, "expected [re, im]"));
    }
    let num = |x: &Value| match x {
        Value::Float(f) => Ok(*f),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(invalid(key, "entries must be numbers")),
    };
    Ok([num(&arr[0])?, num(&arr[1])?])
}

fn tensor(v: Option<&Value>, key: &str, default: [[[f64; 2]; 2]; 2]) -> Result<[[[f64; 2]; 2]; 2], ConfigError> {
    let Some(v) = v else { return Ok(default) };
    let rows = v.as_array().ok_or_else(|| invalid(key, "expected [[[re, im], [re, im]], [[re, im], [re, im]]]"))?;
    if rows.len() != 2 {
        return Err(invalid(key, "expected two rows"));
    }
    let mut out = [[[0.0; 2]; 2]; 2];
    for (i, row) in rows.iter().enumerate() {
        let cols = row.as_array().ok_or_else(|| invalid(key, "each row must be an array"))?;
        if cols.len() != 2 {
            return Err(invalid(key, "each row needs two entries"));
        }
        for (j, c) in cols.iter().enumerate() {
            out[i][j] = complex_pair(c, &format!("{key}[{i}][{j}]"))?;
        }
    }
    Ok(out)
}

const IDENTITY: [[[f64; 2]; 2]; 2] = [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]];
const MINUS_IDENTITY: [[[f64; 2]; 2]; 2] = [[[-1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]];

fn pulse_pair(v: &Value, key: &str) -> Result<(f64, f64), ConfigError> {
    let [rise, duty] = complex_pair(v, key)?;
    if !(0.0..1.0).contains(&rise) {
        return Err(invalid(&format!("{key}.rise"), format!("must lie in [0, 1), got {rise}")));
    }
    if !(0.0..=1.0).contains(&duty) {
        return Err(invalid(&format!("{key}.duty"), format!("must lie in [0, 1], got {duty}")));
    }
    Ok((rise, duty))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
        let top = Section::new("", Some(&table), TOP_KEYS)?;

        let seed = match top.get("seed") {
            None => 1,
            Some(Value::Integer(i)) if *i >= 0 => *i as u64,
            Some(_) => return Err(invalid("seed", "expected a non-negative integer")),
        };
        let mode = top.string("mode")?.unwrap_or_else(|| "delta".into());
        mode.parse::<ControlMode>().map_err(|e| invalid("mode", e.to_string()))?;
        let period_s = top.quantity("period", Dimension::Time, Some(1e-6))?;
        if period_s <= 0.0 {
            return Err(invalid("period", "must be positive"));
        }

        let g = top.sub("geometry", GEOMETRY_KEYS)?;
        if g.table.is_none() {
            return Err(ConfigError::Missing("geometry".into()));
        }
        let carrier_frequency_hz = g.quantity("carrier_frequency", Dimension::Frequency, Some(5.5e9))?;
        if carrier_frequency_hz <= 0.0 {
            return Err(invalid("geometry.carrier_frequency", "must be positive"));
        }
        let (cell, unit) = g.quantity_with_unit("cell_size", Dimension::CellLength, Some(0.45))?;
        let cell_size_lambda = if unit == "" || unit == "lambda" {
            cell
        } else {
            cell * carrier_frequency_hz / SPEED_OF_LIGHT
        };
        if cell_size_lambda <= 0.0 {
            return Err(invalid("geometry.cell_size", "must be positive"));
        }
        let geometry = GeometryConfig {
            rows: g.count("rows", None)?,
            cols: g.count("cols", None)?,
            cell_size_lambda,
            carrier_frequency_hz,
        };
        if geometry.rows == 0 || geometry.cols == 0 {
            return Err(invalid("geometry.rows", "rows and cols must be at least 1"));
        }

        let i = top.sub("incidence", INCIDENCE_KEYS)?;
        let polarization = match i.get("polarization") {
            None => [[1.0, 0.0], [0.0, 0.0]],
            Some(Value::String(s)) if s == "te" => [[1.0, 0.0], [0.0, 0.0]],
            Some(Value::String(s)) if s == "tm" => [[0.0, 0.0], [1.0, 0.0]],
            Some(Value::Array(a)) if a.len() == 2 => [
                complex_pair(&a[0], "incidence.polarization[0]")?,
                complex_pair(&a[1], "incidence.polarization[1]")?,
            ],
            Some(_) => {
                return Err(invalid(
                    "incidence.polarization",
                    "expected \"te\", \"tm\" or [[re, im], [re, im]]",
                ))
            }
        };
        let incidence = IncidenceConfig {
            theta_deg: i.quantity("theta", Dimension::Angle, Some(40.0))?,
            phi_deg: i.quantity("phi", Dimension::Angle, Some(0.0))?,
            amplitude_v_per_m: i.quantity("amplitude", Dimension::FieldAmplitude, Some(1.0))?,
            polarization,
        };
        if !(0.0..90.0).contains(&incidence.theta_deg) {
            return Err(invalid("incidence.theta", "must lie in [0, 90) deg"));
        }
        if incidence.amplitude_v_per_m <= 0.0 {
            return Err(invalid("incidence.amplitude", "must be positive"));
        }
        if polarization.iter().flatten().all(|x| *x == 0.0) {
            return Err(invalid("incidence.polarization", "must be non-zero"));
        }

        let b = top.sub("bs", BS_KEYS)?;
        let noise_power = if b.present("noise_power") {
            Some(b.quantity("noise_power", Dimension::FieldPower, None)?)
        } else {
            None
        };
        let bs = BsConfig {
            theta_deg: b.quantity("theta", Dimension::Angle, Some(-20.0))?,
            phi_deg: b.quantity("phi", Dimension::Angle, Some(0.0))?,
            noise_power,
        };
        if !(bs.theta_deg.abs() < 90.0) {
            return Err(invalid("bs.theta", "must lie in (-90, 90) deg"));
        }
        if noise_power.is_some_and(|n| n < 0.0) {
            return Err(invalid("bs.noise_power", "must be non-negative"));
        }

        let s = top.sub("states", STATES_KEYS)?;
        let explicit = s.present("gamma_on") || s.present("gamma_off");
        let ideal = s.boolean("ideal", !explicit)?;
        if ideal && explicit {
            return Err(invalid("states.ideal", "must be false when gamma_on/gamma_off are given"));
        }
        let states = StatesConfig {
            ideal,
            gamma_on: tensor(s.get("gamma_on"), "states.gamma_on", IDENTITY)?,
            gamma_off: tensor(s.get("gamma_off"), "states.gamma_off", MINUS_IDENTITY)?,
        };

        let m = top.sub("masks", MASK_KEYS)?;
        let d = MaskTemplate::<f64>::default();
        let masks = MasksConfig {
            sidelobe_db: m.quantity("sidelobe", Dimension::Level, Some(d.sidelobe_db))?,
            peak_db: m.quantity("peak", Dimension::Level, Some(d.peak_db))?,
            ripple_db: m.quantity("ripple", Dimension::Level, Some(d.ripple_db))?,
            null_depth_db: m.quantity("null_depth", Dimension::Level, Some(d.null_depth_db))?,
            lobe_db: m.quantity("lobe", Dimension::Level, Some(d.lobe_db))?,
            main_lobe_halfwidth: m.float("main_lobe_halfwidth", d.half_width)?,
            lobe_offset: m.float("lobe_offset", d.lobe_offset)?,
            shoulder: m.float("shoulder", d.shoulder)?,
            cut_step: m.float("cut_step", d.cut_step)?,
            anchor_weight: m.float("anchor_weight", d.anchor_weight)?,
            null_weight: m.float("null_weight", d.null_weight)?,
            cut_weight: m.float("cut_weight", d.cut_weight)?,
        };

        let p = top.sub("pso", PSO_KEYS)?;
        let dp = PsoConfig::default();
        let pso = PsoSection {
            swarm_size: p.count("swarm_size", Some(dp.swarm_size))?,
            max_iterations: p.count("max_iterations", Some(dp.max_iterations))?,
            inertia: p.float("inertia", dp.inertia)?,
            cognitive: p.float("cognitive", dp.cognitive)?,
            social: p.float("social", dp.social)?,
            stagnation_window: p.count("stagnation_window", Some(dp.stagnation_window))?,
            stagnation_tolerance: p.float("stagnation_tolerance", dp.stagnation_tolerance)?,
            velocity_clamp: p.float("velocity_clamp", dp.velocity_clamp)?,
            restarts: p.count("restarts", Some(1))?,
        };
        if pso.swarm_size == 0 {
            return Err(invalid("pso.swarm_size", "must be at least 1"));
        }
        if pso.restarts == 0 {
            return Err(invalid("pso.restarts", "must be at least 1"));
        }

        let gr = top.sub("grids", GRID_KEYS)?;
        let grids = GridsConfig {
            synthesis: gr.count("synthesis", Some(64))?,
            evaluation: gr.count("evaluation", Some(201))?,
        };
        for (k, n) in [("grids.synthesis", grids.synthesis), ("grids.evaluation", grids.evaluation)] {
            if n < 2 {
                return Err(invalid(k, "need at least 2 samples per axis"));
            }
        }

        let o = top.sub("output", OUTPUT_KEYS)?;
        let formats = match o.get("formats") {
            None => vec!["csv".to_string(), "json".to_string()],
            Some(Value::Array(a)) => a
                .iter()
                .map(|v| match v.as_str() {
                    Some(f @ ("csv" | "json")) => Ok(f.to_string()),
                    _ => Err(invalid("output.formats", "entries must be \"csv\" or \"json\"")),
                })
                .collect::<Result<_, _>>()?,
            Some(_) => return Err(invalid("output.formats", "expected an array")),
        };
        let output = OutputConfig {
            directory: o.string("directory")?.unwrap_or_else(|| "out".into()),
            formats,
        };

        let sw = top.sub("sweep", SWEEP_KEYS)?;
        let sweep = if sw.table.is_some() {
            let c = SweepConfig {
                start_deg: sw.quantity("start", Dimension::Angle, None)?,
                stop_deg: sw.quantity("stop", Dimension::Angle, None)?,
                step_deg: sw.quantity("step", Dimension::Angle, Some(1.0))?,
            };
            if c.step_deg <= 0.0 {
                return Err(invalid("sweep.step", "must be positive"));
            }
            if c.stop_deg < c.start_deg {
                return Err(invalid("sweep.stop", "range is empty (stop < start)"));
            }
            Some(c)
        } else {
            None
        };

        let lo = top.sub("localize", LOCALIZE_KEYS)?;
        let localize = if lo.table.is_some() {
            let candidates_deg = match lo.get("candidates") {
                Some(Value::Array(a)) if !a.is_empty() => a
                    .iter()
                    .enumerate()
                    .map(|(k, v)| match v {
                        Value::String(s) => parse_quantity(s, Dimension::Angle)
                            .map(|q| q.value)
                            .map_err(|e| invalid(&format!("localize.candidates[{k}]"), e)),
                        _ => Err(invalid(&format!("localize.candidates[{k}]"), "expected an angle string")),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
                Some(_) => return Err(invalid("localize.candidates", "expected a non-empty array of angles")),
                None => return Err(ConfigError::Missing("localize.candidates".into())),
            };
            Some(LocalizeConfig {
                candidates_deg,
                codebook: lo.string("codebook")?,
            })
        } else {
            None
        };

        let sc = top.sub("schedule", SCHEDULE_KEYS)?;
        let schedule = if sc.table.is_some() {
            let cm: ControlMode = mode.parse().expect("validated above");
            let n = cm
                .free_pulses(geometry.rows, geometry.cols)
                .map_err(|e| invalid("mode", e.to_string()))?;
            let pulses = match (sc.get("pulses"), sc.get("uniform")) {
                (Some(_), Some(_)) => return Err(invalid("schedule", "give either `pulses` or `uniform`, not both")),
                (Some(Value::Array(a)), None) => {
                    if a.len() != n {
                        return Err(invalid(
                            "schedule.pulses",
                            format!("mode {cm} needs {n} pulses, got {}", a.len()),
                        ));
                    }
                    a.iter()
                        .enumerate()
                        .map(|(k, v)| pulse_pair(v, &format!("schedule.pulses[{k}]")))
                        .collect::<Result<Vec<_>, _>>()?
                }
                (None, Some(v)) => vec![pulse_pair(v, "schedule.uniform")?; n],
                _ => return Err(invalid("schedule", "expected `pulses = [[rise, duty], ...]` or `uniform = [rise, duty]`")),
            };
            Some(ScheduleConfig { pulses })
        } else {
            None
        };

        let config = RunConfig {
            seed,
            mode,
            period_s,
            geometry,
            incidence,
            bs,
            states,
            masks,
            pso,
            grids,
            output,
            sweep,
            localize,
            schedule,
        };
        config.scenario().map_err(|e| invalid("scenario", e.to_string()))?;
        Ok(config)
    }

    pub fn control_mode(&self) -> ControlMode {
        self.mode.parse().expect("validated at load")
    }

    pub fn pso_config(&self) -> PsoConfig {
        PsoConfig {
            swarm_size: self.pso.swarm_size,
            max_iterations: self.pso.max_iterations,
            inertia: self.pso.inertia,
            cognitive: self.pso.cognitive,
            social: self.pso.social,
            seed: self.seed,
            stagnation_window: self.pso.stagnation_window,
            stagnation_tolerance: self.pso.stagnation_tolerance,
            velocity_clamp: self.pso.velocity_clamp,
        }
    }

    pub fn sweep_settings(&self) -> SweepSettings {
        SweepSettings {
            pso: self.pso_config(),
            restarts: self.pso.restarts,
            master_seed: self.seed,
        }
    }

    pub fn mask_template(&self) -> MaskTemplate<f64> {
        let m = &self.masks;
        MaskTemplate {
            sidelobe_db: m.sidelobe_db,
            peak_db: m.peak_db,
            ripple_db: m.ripple_db,
            null_depth_db: m.null_depth_db,
            lobe_db: m.lobe_db,
            half_width: m.main_lobe_halfwidth,
            lobe_offset: m.lobe_offset,
            shoulder: m.shoulder,
            cut_step: m.cut_step,
            anchor_weight: m.anchor_weight,
            null_weight: m.null_weight,
            cut_weight: m.cut_weight,
        }
    }

    pub fn scenario(&self) -> tmems_core::Result<Scenario<f64>> {
        let g = &self.geometry;
        let geometry = EmsGeometry::new(g.rows, g.cols, g.cell_size_lambda, g.carrier_frequency_hz)?;
        let c = |p: [f64; 2]| Complex::new(p[0], p[1]);
        let i = &self.incidence;
        let incidence = PlaneWaveIncidence::new(
            i.theta_deg,
            i.phi_deg,
            i.amplitude_v_per_m,
            [c(i.polarization[0]), c(i.polarization[1])],
        )?;
        let t = |m: &[[[f64; 2]; 2]; 2]| Tensor2([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]]);
        let states = if self.states.ideal {
            ReflectionStates::ideal()
        } else {
            ReflectionStates::new(t(&self.states.gamma_on), t(&self.states.gamma_off))?
        };
        let scenario = Scenario {
            geometry,
            incidence,
            bs_theta_deg: self.bs.theta_deg,
            bs_phi_deg: self.bs.phi_deg,
            states,
            mode: self.control_mode(),
            period: self.period_s,
            masks: self.mask_template(),
            synthesis_grid: self.grids.synthesis,
            noise_power: self.bs.noise_power,
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Free pulses from the `[schedule]` block, if any.
    pub fn schedule_pulses(&self) -> Option<Vec<Pulse<f64>>> {
        self.schedule
            .as_ref()
            .map(|s| s.pulses.iter().map(|&(r, d)| Pulse::wrapped(r, d)).collect())
    }
}
