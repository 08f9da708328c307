use std::f64::consts::PI;

use rayon::prelude::*;

use qcav_core::evolution::{uniform_grid, TraceSeries};
use qcav_core::fockspace::{FockCutoff, C64};
use qcav_core::gaussian::decoherence_series;
use qcav_core::oracle::{numeric_decoherence, BranchModel};
use qcav_core::physical::{couplings, storage_time, warnings, DeskScale, ParamWarning, SystemParams};
use qcav_core::protocol::{transfer_curves, transfer_probability_analytic};

use crate::config::{Mode, NumericModel, RunConfig, Scale};
use crate::error::CliError;
use crate::output::{fmt_num, Table};

pub const STORAGE_CUTOFF: usize = 30;
pub const DECOHERENCE_CUTOFF: usize = 60;
pub const DEFAULT_POINTS: usize = 2001;
/// Desk-scale decoherence window, long enough for one revival.
pub const DESK_DECOHERENCE_END: f64 = 100.0;

/// Text to emit plus diagnostics for stderr.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub text: String,
    pub warnings: Vec<String>,
}

pub fn run(cfg: &RunConfig) -> Result<Report, CliError> {
    match cfg.mode {
        Mode::Params => cmd_params(cfg),
        Mode::Storage => cmd_storage(cfg),
        Mode::Decoherence => cmd_decoherence(cfg),
        Mode::Sweep => cmd_sweep(cfg),
    }
}

fn cutoff(cfg: &RunConfig, default: usize) -> Result<FockCutoff, CliError> {
    Ok(FockCutoff::new(cfg.cutoff.unwrap_or(default))?)
}

fn grid(cfg: &RunConfig, default_end: f64) -> Result<Vec<f64>, CliError> {
    let start = cfg.grid.t_start.unwrap_or(0.0);
    let end = cfg.grid.t_end.unwrap_or(default_end);
    let n = cfg.grid.n_points.unwrap_or(DEFAULT_POINTS);
    if !(end > start) {
        return Err(CliError::Config(format!("t_end ({end}) must exceed t_start ({start})")));
    }
    Ok(uniform_grid(start, end, n)?)
}

fn describe(w: &ParamWarning) -> String {
    match w {
        ParamWarning::StrongFluxNonlinearity { phi0_sqrt_n } => format!(
            "warning: phi0*sqrt(n_max) = {phi0_sqrt_n:.3}; the second-order flux expansion is poor at this cutoff"
        ),
    }
}

fn with_unit(value: Option<f64>, unit: &str) -> String {
    match value {
        Some(v) if unit.is_empty() => fmt_num(v),
        Some(v) => format!("{} {unit}", fmt_num(v)),
        None => "unavailable".to_string(),
    }
}

/// Device-derived quantities as `key = value unit` lines.
pub fn cmd_params(cfg: &RunConfig) -> Result<Report, CliError> {
    let r = cfg.device(cfg.phi_e)?.derive()?;
    let lines = [
        ("mode_volume", Some(r.mode_volume), "m^3"),
        ("field_amplitude", Some(r.field), "T"),
        ("phi0", Some(r.phi0), ""),
        ("omega", Some(r.omega), "rad/s"),
        ("e_c", Some(r.e_c), "rad/s"),
        ("e_j", Some(r.e_j), "rad/s"),
        ("phi_e", Some(cfg.phi_e), "rad"),
        ("eta", Some(r.eta), "rad/s"),
        ("delta", Some(r.delta), "rad/s"),
        ("eta_max", Some(r.eta_max), "rad/s"),
        ("delta_max", Some(r.delta_max), "rad/s"),
        ("resonant_gate_charge", r.resonant_gate_charge, ""),
        ("storage_time", r.storage_time, "s"),
    ];
    let text = lines
        .iter()
        .map(|(k, v, u)| format!("{k} = {}\n", with_unit(*v, u)))
        .collect();
    Ok(Report {
        text,
        warnings: Vec::new(),
    })
}

fn storage_params(cfg: &RunConfig) -> Result<SystemParams, CliError> {
    let c = cutoff(cfg, STORAGE_CUTOFF)?;
    Ok(match cfg.scale {
        Scale::Device => cfg.device(cfg.phi_e)?.system_params(0.5, c)?,
        Scale::Desk => cfg.desk_scale(DeskScale::storage()).params(cfg.phi_e, c)?,
    })
}

/// Transfer probability: `t, P_analytic[, P_numeric, abs_diff]`.
pub fn cmd_storage(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = storage_params(cfg)?;
    let t_store = storage_time(couplings(&p).eta)?;
    let times = grid(cfg, 2.0 * t_store)?;
    let mut table;
    if cfg.numeric {
        let curves = transfer_curves(&p, &times)?;
        table = Table::new(["t", "P_analytic", "P_numeric", "abs_diff"].map(String::from).to_vec());
        for (i, t) in times.iter().enumerate() {
            let a = curves.analytic.values[i];
            let n = curves.numeric.values[i];
            table.push(vec![fmt_num(*t), fmt_num(a), fmt_num(n), fmt_num((a - n).abs())]);
        }
    } else {
        table = Table::new(["t", "P_analytic"].map(String::from).to_vec());
        for t in &times {
            table.push(vec![fmt_num(*t), fmt_num(transfer_probability_analytic(&p, *t)?)]);
        }
    }
    Ok(Report {
        text: table.to_csv()?,
        warnings: Vec::new(),
    })
}

fn decoherence_params(cfg: &RunConfig, phi_e: f64) -> Result<SystemParams, CliError> {
    let c = cutoff(cfg, DECOHERENCE_CUTOFF)?;
    Ok(match cfg.scale {
        Scale::Device => cfg.device(phi_e)?.system_params(0.5, c)?,
        Scale::Desk => cfg.desk_scale(DeskScale::decoherence()).params(phi_e, c)?,
    })
}

fn decoherence_grid(cfg: &RunConfig, p: &SystemParams) -> Result<Vec<f64>, CliError> {
    let end = match cfg.scale {
        Scale::Device => 4.0 * PI / p.omega,
        Scale::Desk => DESK_DECOHERENCE_END,
    };
    grid(cfg, end)
}

fn model(cfg: &RunConfig) -> BranchModel {
    match cfg.model {
        NumericModel::Exact => BranchModel::ExactCosine,
        NumericModel::Quadratic => BranchModel::Quadratic,
    }
}

/// Column-name form of an amplitude: `1`, `0.5`, `-2`.
fn alpha_tag(a: f64) -> String {
    format!("{a}")
}

struct Curves {
    analytic: TraceSeries,
    numeric: Option<TraceSeries>,
}

fn curves(cfg: &RunConfig, p: &SystemParams, alpha: f64, times: &[f64]) -> Result<Curves, CliError> {
    let a = C64::new(alpha, 0.0);
    let analytic = decoherence_series(p, a, times)?;
    let numeric = if cfg.numeric {
        Some(numeric_decoherence(p, a, times, model(cfg))?)
    } else {
        None
    };
    Ok(Curves { analytic, numeric })
}

/// `t`, then `D_analytic_a<α>` and `D_numeric_a<α>` for each amplitude.
pub fn cmd_decoherence(cfg: &RunConfig) -> Result<Report, CliError> {
    let p = decoherence_params(cfg, cfg.phi_e)?;
    let times = decoherence_grid(cfg, &p)?;
    let per_alpha = cfg
        .alphas
        .par_iter()
        .map(|&a| curves(cfg, &p, a, &times))
        .collect::<Result<Vec<_>, _>>()?;
    let mut header = vec!["t".to_string()];
    for &a in &cfg.alphas {
        header.push(format!("D_analytic_a{}", alpha_tag(a)));
        if cfg.numeric {
            header.push(format!("D_numeric_a{}", alpha_tag(a)));
        }
    }
    let mut table = Table::new(header);
    for (i, t) in times.iter().enumerate() {
        let mut row = vec![fmt_num(*t)];
        for c in &per_alpha {
            row.push(fmt_num(c.analytic.values[i]));
            if let Some(n) = &c.numeric {
                row.push(fmt_num(n.values[i]));
            }
        }
        table.push(row);
    }
    Ok(Report {
        text: table.to_csv()?,
        warnings: warnings(&p).iter().map(describe).collect(),
    })
}

/// Minimum of `D` over the time grid at one sweep point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepPoint {
    pub phi_e: f64,
    pub alpha: f64,
    pub min_analytic: f64,
    pub t_at_min: f64,
    pub min_numeric: Option<f64>,
}

fn sweep_point(cfg: &RunConfig, phi_e: f64, alpha: f64) -> Result<SweepPoint, CliError> {
    let p = decoherence_params(cfg, phi_e)?;
    let times = decoherence_grid(cfg, &p)?;
    let c = curves(cfg, &p, alpha, &times)?;
    let (i_min, min_analytic) = c.analytic.values.iter().copied().enumerate().fold(
        (0, f64::INFINITY),
        |best, (i, v)| if v < best.1 { (i, v) } else { best },
    );
    Ok(SweepPoint {
        phi_e,
        alpha,
        min_analytic,
        t_at_min: times[i_min],
        min_numeric: c.numeric.as_ref().map(TraceSeries::min),
    })
}

/// All `(φ_e, α)` points, `φ_e` outermost, evaluated in parallel but
/// returned in grid order.
pub fn sweep_points(cfg: &RunConfig) -> Result<Vec<SweepPoint>, CliError> {
    let phis = cfg.sweep_phi_e.clone().unwrap_or_else(|| vec![cfg.phi_e]);
    let alphas = cfg.sweep_alpha.clone().unwrap_or_else(|| cfg.alphas.clone());
    let grid: Vec<(f64, f64)> = phis
        .iter()
        .flat_map(|&phi| alphas.iter().map(move |&a| (phi, a)))
        .collect();
    grid.par_iter().map(|&(phi, a)| sweep_point(cfg, phi, a)).collect()
}

/// Marks, for each α, the points whose minimum `D` is largest.
pub fn optimal_flags(points: &[SweepPoint]) -> Vec<bool> {
    points
        .iter()
        .map(|p| {
            let best = points
                .iter()
                .filter(|q| q.alpha == p.alpha)
                .map(|q| q.min_analytic)
                .fold(f64::NEG_INFINITY, f64::max);
            p.min_analytic >= best - 1e-9 * best.abs().max(1e-300)
        })
        .collect()
}

/// `phi_e, alpha, min_D_analytic, t_at_min[, min_D_numeric], optimal`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Report, CliError> {
    let points = sweep_points(cfg)?;
    let flags = optimal_flags(&points);
    let mut header = vec!["phi_e", "alpha", "min_D_analytic", "t_at_min"];
    if cfg.numeric {
        header.push("min_D_numeric");
    }
    header.push("optimal");
    let mut table = Table::new(header.into_iter().map(String::from).collect());
    for (pt, best) in points.iter().zip(flags) {
        let mut row = vec![
            fmt_num(pt.phi_e),
            fmt_num(pt.alpha),
            fmt_num(pt.min_analytic),
            fmt_num(pt.t_at_min),
        ];
        if let Some(n) = pt.min_numeric {
            row.push(fmt_num(n));
        }
        row.push(if best { "1" } else { "0" }.to_string());
        table.push(row);
    }
    Ok(Report {
        text: table.to_csv()?,
        warnings: Vec::new(),
    })
}
