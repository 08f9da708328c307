//! WebAssembly bindings used by the static demo page in `www/`.
//!
//! Curves come back as flat `Float64Array`s: the time grid first, then one
//! block of the same length per curve.

use std::f64::consts::FRAC_PI_2;

use wasm_bindgen::prelude::*;

use qcav_core::evolution::uniform_grid;
use qcav_core::fockspace::{FockCutoff, C64};
use qcav_core::gaussian::decoherence_series;
use qcav_core::physical::{CavityGeometry, DeskScale, DeviceSpec, DEFAULT_LOOP_AREA};
use qcav_core::protocol::{storage_grid, transfer_curves};

const STORAGE_CUTOFF: usize = 30;
const DECOHERENCE_CUTOFF: usize = 60;

fn cutoff(n: usize) -> FockCutoff {
    FockCutoff::new(n).expect("static cutoff")
}

fn fmt(value: Option<f64>, unit: &str) -> String {
    match value {
        Some(v) => format!("{v:.6e} {unit}").trim_end().to_string(),
        None => "unavailable".to_string(),
    }
}

/// Derived device numbers as `key = value unit` lines. Lengths in mm,
/// frequency in GHz, energies in µeV.
#[wasm_bindgen]
pub fn device_report(
    radius_mm: f64,
    length_mm: f64,
    frequency_ghz: f64,
    e_c_uev: f64,
    e_j_uev: f64,
    phi_e: f64,
) -> Result<String, String> {
    let frequency_hz = frequency_ghz * 1e9;
    let geometry =
        CavityGeometry::for_frequency(radius_mm * 1e-3, length_mm * 1e-3, frequency_hz).map_err(|e| e.to_string())?;
    let spec = DeviceSpec {
        geometry,
        frequency_hz,
        e_c_ev: e_c_uev * 1e-6,
        e_j_ev: e_j_uev * 1e-6,
        loop_area: DEFAULT_LOOP_AREA,
        phi_e,
    };
    let r = spec.derive().map_err(|e| e.to_string())?;
    let lines = [
        ("mode_volume", Some(r.mode_volume), "m^3"),
        ("field_amplitude", Some(r.field), "T"),
        ("phi0", Some(r.phi0), ""),
        ("eta", Some(r.eta), "rad/s"),
        ("delta", Some(r.delta), "rad/s"),
        ("resonant_gate_charge", r.resonant_gate_charge, ""),
        ("storage_time", r.storage_time, "s"),
    ];
    Ok(lines
        .iter()
        .map(|(k, v, u)| format!("{k} = {}\n", fmt(*v, u)))
        .collect())
}

/// Transfer probability over `[0, π/η]` at ω/η = 50: times, closed form,
/// then explicit evolution.
#[wasm_bindgen]
pub fn transfer_curve(n_points: usize) -> Result<Vec<f64>, String> {
    let p = DeskScale::storage()
        .params(FRAC_PI_2, cutoff(STORAGE_CUTOFF))
        .map_err(|e| e.to_string())?;
    let grid = storage_grid(&p, n_points).map_err(|e| e.to_string())?;
    let curves = transfer_curves(&p, &grid).map_err(|e| e.to_string())?;
    Ok([grid, curves.analytic.values, curves.numeric.values].concat())
}

/// Closed-form decoherence factor on `[0, t_end]` (units of 1/ω) for each
/// amplitude in `alphas`, at bias flux `phi_e`.
#[wasm_bindgen]
pub fn decoherence_curves(phi_e: f64, alphas: Vec<f64>, t_end: f64, n_points: usize) -> Result<Vec<f64>, String> {
    let p = DeskScale::decoherence()
        .params(phi_e, cutoff(DECOHERENCE_CUTOFF))
        .map_err(|e| e.to_string())?;
    let grid = uniform_grid(0.0, t_end, n_points).map_err(|e| e.to_string())?;
    let mut out = grid.clone();
    for a in alphas {
        let series = decoherence_series(&p, C64::new(a, 0.0), &grid).map_err(|e| e.to_string())?;
        out.extend(series.values);
    }
    Ok(out)
}
