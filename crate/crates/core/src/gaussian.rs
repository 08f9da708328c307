//! Closed-form branch dynamics under the second-order Hamiltonian.
//!
//! With `s = (-1)^k`, branch `k` evolves under
//! `H_k = A a†a - sδ(aa + a†a†) + sηQ + s(δ - E_J cos φ_e)`, `A = ω + 2sδ`.
//! It maps a coherent state `|α>` to the squeezed coherent state
//! `e^{iθ}|β, μ, ν>` (see [`SqueezedParams`]) with
//!
//! * `Ω = √(ω² + 4sδω)`, `N = Ω/ω`, so `ω + 4sδ = ΩN`
//! * `μ = cos Ωt + i(A/Ω) sin Ωt`, `ν = 2isδ sin Ωt / Ω`
//! * `γ = -isη/(ΩN)`, `β = α + γ(cos Ωt + iN sin Ωt - 1)`
//! * `θ = -E_0 t + At/2 - Im(γ ᾱ) + Im(γ' ᾱ')` with `α' = α - γ`,
//!   `γ' = μγ - νγ̄`, `E_0 = -η²/(ΩN) + s(δ - E_J cos φ_e)`.
//!
//! `θ` also carries the sign that keeps `μ^{-1/2}` continuous in `t`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::evolution::TraceSeries;
pub use crate::fockspace::SqueezedParams;
use crate::fockspace::{FockCutoff, C64};
use crate::hamiltonians::Branch;
use crate::physical::{couplings, DeskScale, SystemParams};

const DEGENERATE_TOL: f64 = 1e-14;
const COS_ZERO_TOL: f64 = 1e-12;

/// Default amplitudes for the decoherence curves.
pub const DEFAULT_ALPHAS: [f64; 4] = [0.0, 1.0, 2.0, 3.0];

/// `Ω_k` and `N_k = Ω_k / ω` for one branch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchFrequencies {
    pub omega_k: f64,
    pub n_k: f64,
}

pub fn branch_frequencies(k: Branch, p: &SystemParams) -> Result<BranchFrequencies> {
    let delta = couplings(p).delta;
    let squared = p.omega * p.omega + 4.0 * k.sign() * delta * p.omega;
    if !(squared > 0.0) || !(p.omega > 0.0) {
        return Err(Error::SqueezingUnstable { omega: p.omega, delta });
    }
    let omega_k = squared.sqrt();
    Ok(BranchFrequencies {
        omega_k,
        n_k: omega_k / p.omega,
    })
}

/// Parameters of `e^{-iH_k t}|α>`.
pub fn branch_params(k: Branch, p: &SystemParams, alpha: C64, t: f64) -> Result<SqueezedParams> {
    let BranchFrequencies { omega_k, n_k } = branch_frequencies(k, p)?;
    let c = couplings(p);
    let s = k.sign();
    let i = C64::i();
    let a = p.omega + 2.0 * s * c.delta;
    let x = omega_k * t;
    let (sin, cos) = x.sin_cos();

    // A/Ω = √(1 + (2δ/Ω)²) exactly; this form keeps |μ|² - |ν|² = 1 to
    // rounding even where Ω² comes from a cancellation
    let q = 2.0 * c.delta / omega_k;
    let mu = C64::new(cos, (1.0 + q * q).sqrt() * sin);
    let nu = i * (s * q * sin);
    let gamma = -i * (s * c.eta / (omega_k * n_k));
    let beta = alpha + gamma * C64::new(cos - 1.0, n_k * sin);

    let alpha_shifted = alpha - gamma;
    let gamma_t = mu * gamma - nu * gamma.conj();
    let energy = -c.eta * c.eta / (omega_k * n_k) + s * (c.delta - p.e_j * p.phi_e.cos());
    let winding = ((x - mu.arg()) / (2.0 * PI)).round();
    let theta =
        -energy * t + 0.5 * a * t - (gamma * alpha.conj()).im + (gamma_t * alpha_shifted.conj()).im + PI * winding;

    Ok(SqueezedParams { beta, mu, nu, theta })
}

fn log_vacuum_amplitude(p: &SqueezedParams) -> C64 {
    -0.5 * p.mu.ln() - 0.5 * p.beta.norm_sqr() - p.nu.conj() * p.beta * p.beta / (2.0 * p.mu) + C64::new(0.0, p.theta)
}

/// `<d1|d0>` for two squeezed coherent states.
///
/// In the Bargmann picture `<z|d> = N exp(bz + cz²/2)` with `b = β/μ`,
/// `c = ν/μ`, and the Gaussian integral gives
/// `N̄1 N0 (1 - c̄1 c0)^{-1/2} exp[(b̄1² c0 + b0² c̄1 + 2 b̄1 b0) / (2(1 - c̄1 c0))]`.
pub fn squeezed_overlap(p1: &SqueezedParams, p0: &SqueezedParams) -> Result<C64> {
    p1.check()?;
    p0.check()?;
    let cross = p1.mu.conj() * p0.mu - p1.nu.conj() * p0.nu;
    if cross.norm() < DEGENERATE_TOL {
        return Err(Error::DegenerateDenominator);
    }
    let b1 = (p1.beta / p1.mu).conj();
    let c1 = (p1.nu / p1.mu).conj();
    let b0 = p0.beta / p0.mu;
    let c0 = p0.nu / p0.mu;
    let denom = cross / (p1.mu.conj() * p0.mu);
    let exponent = (b1 * b1 * c0 + b0 * b0 * c1 + 2.0 * b1 * b0) / (2.0 * denom);
    let log = log_vacuum_amplitude(p1).conj() + log_vacuum_amplitude(p0) - 0.5 * denom.ln() + exponent;
    Ok(log.exp())
}

/// `D(t) = |<d_1(t)|d_0(t)>|`.
pub fn decoherence_factor(p: &SystemParams, alpha: C64, t: f64) -> Result<f64> {
    let d1 = branch_params(Branch::Minus, p, alpha, t)?;
    let d0 = branch_params(Branch::Plus, p, alpha, t)?;
    Ok(squeezed_overlap(&d1, &d0)?.norm())
}

pub fn decoherence_series(p: &SystemParams, alpha: C64, times: &[f64]) -> Result<TraceSeries> {
    let values = times
        .iter()
        .map(|&t| decoherence_factor(p, alpha, t))
        .collect::<Result<Vec<_>>>()?;
    TraceSeries::new(times.to_vec(), values, format!("D_analytic(alpha={})", alpha.re))
}

/// `D(t) = exp[-(8η²/ω²) sin²(ωt/2)]`, valid when `cos φ_e = 0` so the
/// branches are displaced but not squeezed.
pub fn displacement_factor(p: &SystemParams, t: f64) -> Result<f64> {
    if p.phi_e.cos().abs() > COS_ZERO_TOL {
        return Err(Error::PreconditionViolated(format!(
            "displacement-only form needs cos(phi_e) = 0, got phi_e = {}",
            p.phi_e
        )));
    }
    let ratio = couplings(p).eta / p.omega;
    let s = (0.5 * p.omega * t).sin();
    Ok((-8.0 * ratio * ratio * s * s).exp())
}

/// Time `2π / |Ω_0 - Ω_1|` after which the two branch oscillations
/// come back into phase.
pub fn revival_time(p: &SystemParams) -> Result<f64> {
    let w0 = branch_frequencies(Branch::Plus, p)?.omega_k;
    let w1 = branch_frequencies(Branch::Minus, p)?.omega_k;
    let gap = (w0 - w1).abs();
    if gap == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(2.0 * PI / gap)
}

/// One `D(t)` curve per real amplitude `α`.
pub fn decoherence_curves(p: &SystemParams, alphas: &[f64], grid: &[f64]) -> Result<Vec<TraceSeries>> {
    alphas
        .iter()
        .map(|&a| decoherence_series(p, C64::new(a, 0.0), grid))
        .collect()
}

fn analytic_cutoff() -> FockCutoff {
    FockCutoff::new(60).expect("static cutoff")
}

/// Squeezing-only curves at `φ_e = 0`.
pub fn squeezing_curves(scale: &DeskScale, alphas: &[f64], grid: &[f64]) -> Result<Vec<TraceSeries>> {
    decoherence_curves(&scale.params(0.0, analytic_cutoff())?, alphas, grid)
}

/// Displacement-only curves at `φ_e = π/2`.
pub fn displacement_curves(scale: &DeskScale, alphas: &[f64], grid: &[f64]) -> Result<Vec<TraceSeries>> {
    decoherence_curves(&scale.params(FRAC_PI_2, analytic_cutoff())?, alphas, grid)
}
