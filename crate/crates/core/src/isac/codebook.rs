//! Persistent cache of synthesized schedules keyed by user angle.
//!
//! Binary layout, all integers and floats little-endian:
//!
//! | offset | size | field |
//! |---|---|---|
//! | 0 | 8 | magic `TMEMSCB\0` |
//! | 8 | 4 | format version (`u32`, currently 1) |
//! | 12 | 8 | design hash (`u64`) |
//! | 20 | 1 | control mode code (`u8`: 0 full, 1 delta, 2 colwise, 3 colwise-delta) |
//! | 21 | 8 | master seed (`u64`) |
//! | 29 | 8 | modulation period T, s (`f64`) |
//! | 37 | 8 | carrier frequency f0, Hz (`f64`) |
//! | 45 | 4 | pulses per record `n` (`u32`) |
//! | 49 | 4 | record count `m` (`u32`) |
//! | 53 | ... | `m` records |
//!
//! Each record is the user angle in millidegrees (`i64`), `n` pairs of
//! `(rise, duty)` as `f64`, then the achieved cost Φ (`f64`). Records are
//! sorted by angle.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::model::ControlMode;
use crate::scalar::Real;
use crate::synthesis::PsoConfig;

const MAGIC: &[u8; 8] = b"TMEMSCB\0";
const VERSION: u32 = 1;
const HEADER_LEN: usize = 53;

/// Angle rounded to integer millidegrees.
pub fn quantize_angle<T: Real>(deg: T) -> i64 {
    (deg.as_f64() * 1000.0).round() as i64
}

/// Hash of every input that influences a synthesized schedule, except
/// the user angle and the master seed.
pub fn design_hash<T: Real>(scenario: &Scenario<T>, config: &PsoConfig, restarts: usize) -> u64 {
    let mut h = Sha256::new();
    let mut f = |x: f64| h.update(x.to_le_bytes());
    let inc = &scenario.incidence;
    f(inc.phi_deg().as_f64());
    f(inc.amplitude().as_f64());
    for c in inc.polarization() {
        f(c.re.as_f64());
        f(c.im.as_f64());
    }
    f(scenario.bs_theta_deg.as_f64());
    f(scenario.bs_phi_deg.as_f64());
    for t in [scenario.states.gamma_on(), scenario.states.gamma_off()] {
        for z in t.0.iter().flatten() {
            f(z.re.as_f64());
            f(z.im.as_f64());
        }
    }
    f(scenario.period.as_f64());
    let m = &scenario.masks;
    for x in [
        m.sidelobe_db,
        m.peak_db,
        m.ripple_db,
        m.null_depth_db,
        m.lobe_db,
        m.half_width,
        m.lobe_offset,
        m.shoulder,
        m.cut_step,
        m.anchor_weight,
        m.null_weight,
        m.cut_weight,
    ] {
        f(x.as_f64());
    }
    f(scenario.noise_power.map_or(-1.0, |n| n.as_f64()));
    f(config.inertia);
    f(config.cognitive);
    f(config.social);
    f(config.stagnation_tolerance);
    f(config.velocity_clamp);
    h.update(scenario.geometry.fingerprint_bytes());
    h.update([scenario.mode.code()]);
    for n in [
        scenario.synthesis_grid,
        config.swarm_size,
        config.max_iterations,
        config.stagnation_window,
        restarts,
    ] {
        h.update((n as u64).to_le_bytes());
    }
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

/// One cached design.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookEntry<T: Real> {
    /// Free `(rise, duty)` pulses of the control mode.
    pub pulses: Vec<(T, T)>,
    pub cost: T,
}

/// Schedules for a set of user angles under one design configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook<T: Real> {
    pub hash: u64,
    pub mode: ControlMode,
    pub seed: u64,
    pub period: T,
    pub carrier_frequency: T,
    pub pulses_per_record: usize,
    entries: BTreeMap<i64, CodebookEntry<T>>,
}

impl<T: Real> Codebook<T> {
    /// Empty codebook for `scenario`.
    pub fn new(scenario: &Scenario<T>, config: &PsoConfig, restarts: usize, seed: u64) -> Result<Self> {
        let g = &scenario.geometry;
        Ok(Self {
            hash: design_hash(scenario, config, restarts),
            mode: scenario.mode,
            seed,
            period: scenario.period,
            carrier_frequency: g.carrier_frequency(),
            pulses_per_record: scenario.mode.free_pulses(g.rows(), g.cols())?,
            entries: BTreeMap::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, angle_deg: T) -> Option<&CodebookEntry<T>> {
        self.entries.get(&quantize_angle(angle_deg))
    }

    pub fn insert(&mut self, angle_deg: T, entry: CodebookEntry<T>) -> Result<()> {
        if entry.pulses.len() != self.pulses_per_record {
            return Err(Error::Codebook(format!(
                "record has {} pulses, expected {}",
                entry.pulses.len(),
                self.pulses_per_record
            )));
        }
        self.entries.insert(quantize_angle(angle_deg), entry);
        Ok(())
    }

    /// `(angle in millidegrees, entry)` in ascending angle order.
    pub fn entries(&self) -> impl Iterator<Item = (i64, &CodebookEntry<T>)> {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    /// Checks that this codebook was built for `scenario` with `seed`.
    pub fn matches(&self, scenario: &Scenario<T>, config: &PsoConfig, restarts: usize, seed: u64) -> bool {
        self.hash == design_hash(scenario, config, restarts) && self.seed == seed && self.mode == scenario.mode
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let rec = 8 + 16 * self.pulses_per_record + 8;
        let mut out = Vec::with_capacity(HEADER_LEN + rec * self.entries.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&self.hash.to_le_bytes());
        out.push(self.mode.code());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&self.period.as_f64().to_le_bytes());
        out.extend_from_slice(&self.carrier_frequency.as_f64().to_le_bytes());
        out.extend_from_slice(&(self.pulses_per_record as u32).to_le_bytes());
        out.extend_from_slice(&(self.entries.len() as u32).to_le_bytes());
        for (angle, e) in &self.entries {
            out.extend_from_slice(&angle.to_le_bytes());
            for (r, d) in &e.pulses {
                out.extend_from_slice(&r.as_f64().to_le_bytes());
                out.extend_from_slice(&d.as_f64().to_le_bytes());
            }
            out.extend_from_slice(&e.cost.as_f64().to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(8)? != MAGIC {
            return Err(Error::Codebook("not a codebook file".into()));
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(Error::Codebook(format!("unsupported format version {version}")));
        }
        let hash = r.u64()?;
        let code = r.take(1)?[0];
        let mode = ControlMode::from_code(code).ok_or_else(|| Error::Codebook(format!("unknown mode code {code}")))?;
        let seed = r.u64()?;
        let period = T::lit(r.f64()?);
        let carrier_frequency = T::lit(r.f64()?);
        let n = r.u32()? as usize;
        let m = r.u32()? as usize;
        let mut entries = BTreeMap::new();
        for _ in 0..m {
            let angle = r.u64()? as i64;
            let mut pulses = Vec::with_capacity(n);
            for _ in 0..n {
                pulses.push((T::lit(r.f64()?), T::lit(r.f64()?)));
            }
            let cost = T::lit(r.f64()?);
            entries.insert(angle, CodebookEntry { pulses, cost });
        }
        if r.pos != bytes.len() {
            return Err(Error::Codebook("trailing bytes after last record".into()));
        }
        Ok(Self {
            hash,
            mode,
            seed,
            period,
            carrier_frequency,
            pulses_per_record: n,
            entries,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        f.sync_all()?;
        Ok(())
    }

    /// Loads a codebook, rejecting it unless it was built for `scenario`,
    /// `config`, `restarts` and `seed`.
    pub fn load(path: &Path, scenario: &Scenario<T>, config: &PsoConfig, restarts: usize, seed: u64) -> Result<Self> {
        let book = Self::from_bytes(&fs::read(path)?)?;
        let expected = design_hash(scenario, config, restarts);
        if book.hash != expected {
            return Err(Error::Codebook(format!(
                "stale codebook: hash {:016x}, expected {expected:016x}",
                book.hash
            )));
        }
        if book.seed != seed || book.mode != scenario.mode {
            return Err(Error::Codebook(format!(
                "codebook built for seed {} / mode {}, requested seed {seed} / mode {}",
                book.seed, book.mode, scenario.mode
            )));
        }
        Ok(book)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(Error::Codebook("truncated file".into()));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}
