//! Plot-ready artifact writers with diff-stable float formatting.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;

use tmems_core::field::{power_pattern, HarmonicPattern};
use tmems_core::isac::SweepResult;
use tmems_core::model::{Pulse, PulseSchedule};
use tmems_core::scalar::to_db;

/// Float text with 17 significant digits; non-finite values spell out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON formatter printing every float like [`fmt_f64`].
struct FixedFloat;

impl Formatter for FixedFloat {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes `value` as compact JSON with fixed float formatting and a
/// trailing newline. Non-finite floats become `null`.
pub fn to_json<S: Serialize>(value: &S) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat);
    value.serialize(&mut ser).map_err(io::Error::other)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(io::Error::other)
}

pub fn write_text(path: &Path, text: &str) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    fs::write(path, text)
}

/// One exported grid node.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternRow {
    pub u: f64,
    pub v: f64,
    pub visible: bool,
    pub power_linear: f64,
    pub power_db: f64,
}

/// Power pattern of one harmonic on a direction grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternTable {
    pub harmonic: i32,
    pub frequency_hz: f64,
    /// Power that maps to 0 dB, in V²/m².
    pub reference_power: f64,
    pub rows: Vec<PatternRow>,
}

impl PatternTable {
    pub fn new(pattern: &HarmonicPattern<f64>, reference_power: f64) -> Self {
        let grid = pattern.grid();
        let rows = power_pattern(pattern)
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let (u, v) = grid.coords(i);
                PatternRow {
                    u,
                    v,
                    visible: grid.is_visible(i),
                    power_linear: p,
                    power_db: to_db(p, reference_power),
                }
            })
            .collect();
        Self {
            harmonic: pattern.harmonic(),
            frequency_hz: pattern.angular_frequency() / (2.0 * std::f64::consts::PI),
            reference_power,
            rows,
        }
    }

    pub fn linear_column(&self) -> String {
        format!("P_h{}_linear", self.harmonic)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# harmonic = {}", self.harmonic);
        let _ = writeln!(s, "# frequency_hz = {}", fmt_f64(self.frequency_hz));
        let _ = writeln!(
            s,
            "# P_dB = 10 log10(P / R0), R0 = {} V^2/m^2 (broadside power of an all-on skin)",
            fmt_f64(self.reference_power)
        );
        let _ = writeln!(s, "# visible = 1 inside the unit disc u^2 + v^2 <= 1");
        let _ = writeln!(s, "u,v,visible,{},P_dB", self.linear_column());
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                fmt_f64(r.u),
                fmt_f64(r.v),
                u8::from(r.visible),
                fmt_f64(r.power_linear),
                fmt_f64(r.power_db)
            );
        }
        s
    }

    pub fn to_json(&self) -> io::Result<String> {
        #[derive(Serialize)]
        struct Doc<'a> {
            harmonic: i32,
            frequency_hz: f64,
            reference_power: f64,
            columns: [&'a str; 5],
            u: Vec<f64>,
            v: Vec<f64>,
            visible: Vec<u8>,
            linear: Vec<f64>,
            db: Vec<f64>,
        }
        let col = self.linear_column();
        to_json(&Doc {
            harmonic: self.harmonic,
            frequency_hz: self.frequency_hz,
            reference_power: self.reference_power,
            columns: ["u", "v", "visible", &col, "P_dB"],
            u: self.rows.iter().map(|r| r.u).collect(),
            v: self.rows.iter().map(|r| r.v).collect(),
            visible: self.rows.iter().map(|r| u8::from(r.visible)).collect(),
            linear: self.rows.iter().map(|r| r.power_linear).collect(),
            db: self.rows.iter().map(|r| r.power_db).collect(),
        })
    }
}

/// Writes `pattern_h{h}.{csv,json}` in the requested formats.
pub fn export_pattern(dir: &Path, table: &PatternTable, formats: &[String]) -> io::Result<Vec<String>> {
    let mut written = Vec::new();
    for f in formats {
        let name = format!("pattern_h{}.{f}", table.harmonic);
        let text = match f.as_str() {
            "csv" => table.to_csv(),
            "json" => table.to_json()?,
            other => return Err(io::Error::other(format!("unknown format {other}"))),
        };
        write_text(&dir.join(&name), &text)?;
        written.push(name);
    }
    Ok(written)
}

/// Schedule file: one row per cell with its rise and duty fractions.
pub fn schedule_csv(schedule: &PulseSchedule<f64>, mode: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# mode = {mode}");
    let _ = writeln!(s, "# period_s = {}", fmt_f64(schedule.period()));
    let _ = writeln!(s, "# rows = {}, cols = {}", schedule.rows(), schedule.cols());
    let _ = writeln!(s, "p,q,rise,duty");
    for p in 0..schedule.rows() {
        for q in 0..schedule.cols() {
            let pulse = schedule.pulse(p, q);
            let _ = writeln!(s, "{p},{q},{},{}", fmt_f64(pulse.rise()), fmt_f64(pulse.duty()));
        }
    }
    s
}

/// Reads a schedule file written by [`schedule_csv`] for a `rows × cols` skin.
pub fn read_schedule_csv(text: &str, rows: usize, cols: usize, period: f64) -> anyhow::Result<PulseSchedule<f64>> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let mut pulses = vec![None; rows * cols];
    for (line, record) in reader.deserialize::<(usize, usize, f64, f64)>().enumerate() {
        let (p, q, rise, duty) = record.map_err(|e| anyhow::anyhow!("schedule row {}: {e}", line + 1))?;
        if p >= rows || q >= cols {
            anyhow::bail!("schedule row {}: cell ({p}, {q}) outside a {rows}x{cols} skin", line + 1);
        }
        let pulse = Pulse::new(rise, duty).map_err(|e| anyhow::anyhow!("schedule row {}: {e}", line + 1))?;
        if pulses[p * cols + q].replace(pulse).is_some() {
            anyhow::bail!("schedule row {}: cell ({p}, {q}) listed twice", line + 1);
        }
    }
    let pulses = pulses
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| anyhow::anyhow!("schedule misses cell ({}, {})", i / cols, i % cols)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(PulseSchedule::new(period, rows, cols, pulses)?)
}

pub fn history_csv(history: &[f64]) -> String {
    let mut s = String::from("iteration,cost\n");
    for (i, c) in history.iter().enumerate() {
        let _ = writeln!(s, "{i},{}", fmt_f64(*c));
    }
    s
}

/// ξ curve with one row per angle and a closing min/max summary.
pub fn sweep_csv(result: &SweepResult<f64>, angle_name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{angle_name}_deg,xi,P_sum,P_diff,floored,cost");
    for p in &result.points {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            fmt_f64(p.angle_deg),
            fmt_f64(p.xi),
            fmt_f64(p.sum_power),
            fmt_f64(p.difference_power),
            u8::from(p.floored),
            fmt_f64(p.cost)
        );
    }
    let xs = result.points.iter().map(|p| p.xi);
    let min = xs.clone().fold(f64::INFINITY, f64::min);
    let max = xs.fold(f64::NEG_INFINITY, f64::max);
    let _ = writeln!(s, "# xi_min = {}, xi_max = {}", fmt_f64(min), fmt_f64(max));
    if let Some(e) = result.estimate_deg {
        let _ = writeln!(s, "# argmax_deg = {}", fmt_f64(e));
    }
    for (a, why) in &result.failures {
        let _ = writeln!(s, "# failed {} : {}", fmt_f64(*a), why.replace('\n', " "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
        let back: f64 = fmt_f64(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn json_floats_use_fixed_format() {
        let s = to_json(&serde_json::json!({"a": [0.5, 1.0]})).unwrap();
        assert_eq!(s, "{\"a\":[5.0000000000000000e-1,1.0000000000000000e0]}\n");
        let s = to_json(&(f64::NAN,)).unwrap();
        assert_eq!(s, "[null]\n");
    }

    #[test]
    fn schedule_round_trip() {
        let pulses = (0..6).map(|i| Pulse::new(0.1 * i as f64, 0.5).unwrap()).collect();
        let s = PulseSchedule::new(1e-6, 2, 3, pulses).unwrap();
        let text = schedule_csv(&s, "full");
        let back = read_schedule_csv(&text, 2, 3, 1e-6).unwrap();
        assert_eq!(back, s);
        assert!(read_schedule_csv(&text, 2, 2, 1e-6).is_err());
    }
}
