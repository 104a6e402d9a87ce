//! Quantities written as `"<number> <unit>"` strings in config files.

use std::fmt;

/// Physical dimension of a config value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Frequency,
    Time,
    Angle,
    /// Cell edge; wavelengths or metres.
    CellLength,
    Level,
    FieldAmplitude,
    FieldPower,
}

impl Dimension {
    fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dimension::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)],
            Dimension::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9)],
            Dimension::Angle => &[("deg", 1.0), ("rad", 180.0 / std::f64::consts::PI)],
            Dimension::CellLength => &[("lambda", 1.0), ("m", 1.0), ("cm", 1e-2), ("mm", 1e-3)],
            Dimension::Level => &[("dB", 1.0)],
            Dimension::FieldAmplitude => &[("V/m", 1.0), ("mV/m", 1e-3)],
            Dimension::FieldPower => &[("V^2/m^2", 1.0)],
        }
    }

    fn canonical(self) -> &'static str {
        self.units()[0].0
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.units().iter().map(|(u, _)| *u).collect();
        write!(f, "{}", names.join(", "))
    }
}

/// A parsed quantity in the dimension's canonical unit, plus the unit
/// actually written (needed for metres vs wavelengths).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub unit: &'static str,
}

/// Parses `"5.5 GHz"`; the unit is mandatory.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<Quantity, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(i, c)| c.is_whitespace() || (c.is_alphabetic() && !is_exponent(text, i)))
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (num, unit) = text.split_at(split);
    let unit = unit.trim();
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("`{text}` does not start with a number"))?;
    if !value.is_finite() {
        return Err(format!("`{text}` is not finite"));
    }
    if unit.is_empty() {
        return Err(format!("`{text}` has no unit (expected one of {dim})"));
    }
    let (name, scale) = dim
        .units()
        .iter()
        .find(|(u, _)| *u == unit)
        .ok_or_else(|| format!("unit `{unit}` is not valid here (expected one of {dim})"))?;
    Ok(Quantity {
        value: value * scale,
        unit: name,
    })
}

/// `e`/`E` inside a number such as `1e-6` is not the start of a unit.
fn is_exponent(text: &str, i: usize) -> bool {
    let bytes = text.as_bytes();
    if !(bytes[i] == b'e' || bytes[i] == b'E') || i == 0 {
        return false;
    }
    let prev_digit = bytes[i - 1].is_ascii_digit() || bytes[i - 1] == b'.';
    let next = bytes.get(i + 1).copied();
    let next_ok = matches!(next, Some(b'0'..=b'9') | Some(b'-') | Some(b'+'));
    prev_digit && next_ok
}

/// Formats `value` in the dimension's canonical unit.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    format!("{value} {}", dim.canonical())
}
