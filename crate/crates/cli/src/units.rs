//! Parsing of config values: numbers with unit suffixes, angles in terms
//! of `pi`, and comma-separated lists.

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Frequency,
    Energy,
    Area,
    Time,
    Plain,
}

impl Dimension {
    /// Accepted suffixes and their power of ten relative to SI (eV for energies).
    fn units(self) -> &'static [(&'static str, i32)] {
        match self {
            Dimension::Length => &[("m", 0), ("cm", -2), ("mm", -3), ("um", -6), ("µm", -6), ("nm", -9)],
            Dimension::Frequency => &[("Hz", 0), ("kHz", 3), ("MHz", 6), ("GHz", 9)],
            Dimension::Energy => &[("eV", 0), ("meV", -3), ("ueV", -6), ("µeV", -6), ("neV", -9)],
            Dimension::Area => &[("m2", 0), ("mm2", -6), ("um2", -12), ("µm2", -12)],
            Dimension::Time => &[("s", 0), ("ms", -3), ("us", -6), ("µs", -6), ("ns", -9), ("ps", -12)],
            Dimension::Plain => &[],
        }
    }
}

/// A finite number, optionally followed by a unit of `dim`.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64, String> {
    let text = text.trim();
    let plain = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    if let Some(v) = plain(text) {
        return Ok(v);
    }
    for &(unit, exp) in dim.units() {
        if let Some(number) = text.strip_suffix(unit) {
            if let Some(v) = shifted(number.trim(), exp).as_deref().and_then(plain) {
                return Ok(v);
            }
        }
    }
    Err(match dim {
        Dimension::Plain => format!("expected a number, got '{text}'"),
        _ => {
            let names: Vec<&str> = dim.units().iter().map(|u| u.0).collect();
            format!(
                "expected a number with optional unit ({}), got '{text}'",
                names.join(", ")
            )
        }
    })
}

/// `number` with its decimal exponent raised by `exp`, so that the value is
/// rounded once.
fn shifted(number: &str, exp: i32) -> Option<String> {
    match number.split_once(['e', 'E']) {
        None => Some(format!("{number}e{exp}")),
        Some((mantissa, e)) => Some(format!("{mantissa}e{}", e.parse::<i32>().ok()?.checked_add(exp)?)),
    }
}

/// An angle in radians: a number, or `[a][*]pi[/b]` such as `pi/2`, `2pi`,
/// `3*pi/4`, `-pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let text = text.trim();
    if let Ok(v) = parse_quantity(text, Dimension::Plain) {
        return Ok(v);
    }
    let bad = || format!("expected an angle like 0.5, pi/2 or 3*pi/4, got '{text}'");
    let (head, tail) = text.split_once("pi").ok_or_else(bad)?;
    let head = head.trim().trim_end_matches('*').trim();
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let tail = tail.trim();
    let divisor = if tail.is_empty() {
        1.0
    } else {
        let d = tail.strip_prefix('/').ok_or_else(bad)?;
        d.trim().parse::<f64>().map_err(|_| bad())?
    };
    let value = factor * PI / divisor;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Comma-separated values; an empty string gives an empty list.
pub fn parse_list<T>(text: &str, item: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| item(s.trim())).collect()
}

pub fn parse_bool(text: &str) -> Result<bool, String> {
    match text.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(format!("expected true or false, got '{other}'")),
    }
}

pub fn parse_count(text: &str) -> Result<usize, String> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| format!("expected a non-negative integer, got '{}'", text.trim()))
}
