//! Device arithmetic: cavity geometry to field amplitude and flux coupling,
//! and the record of system parameters every Hamiltonian is built from.
//!
//! Inside [`SystemParams`] energies are stored as angular frequencies
//! (`E / ħ`, rad/s), so every Hamiltonian is written with `ħ = 1`. For
//! dimensionless desk-scale runs the same fields hold numbers in units of
//! the cavity frequency.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::constants::{ev_to_rad_per_s, hz_to_rad_per_s, EPSILON_0, FLUX_QUANTUM, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::fockspace::FockCutoff;

/// Symmetric two-mirror resonator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityGeometry {
    /// Mirror curvature radius R, m.
    pub mirror_radius: f64,
    /// Mirror separation L, m.
    pub length: f64,
    /// Mode wavelength, m.
    pub wavelength: f64,
}

impl CavityGeometry {
    pub fn new(mirror_radius: f64, length: f64, wavelength: f64) -> Result<Self> {
        for (what, value) in [
            ("mirror radius", mirror_radius),
            ("cavity length", length),
            ("wavelength", wavelength),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::OutOfRange { what, value });
            }
        }
        Ok(CavityGeometry {
            mirror_radius,
            length,
            wavelength,
        })
    }

    /// Geometry whose wavelength is `c / frequency`.
    pub fn for_frequency(mirror_radius: f64, length: f64, frequency_hz: f64) -> Result<Self> {
        Self::new(mirror_radius, length, SPEED_OF_LIGHT / frequency_hz)
    }
}

/// Volume of the fundamental Gaussian mode, `V = (π/4) w0² L` with
/// `w0² = (λ/2π) sqrt(L (2R - L))`.
pub fn mode_volume(g: &CavityGeometry) -> Result<f64> {
    let limit = 2.0 * g.mirror_radius;
    if g.length >= limit {
        return Err(Error::UnstableResonator {
            length: g.length,
            limit,
        });
    }
    let waist_sq = g.wavelength / (2.0 * PI) * (g.length * (limit - g.length)).sqrt();
    Ok(PI / 4.0 * waist_sq * g.length)
}

/// Vacuum magnetic field amplitude `sqrt(ħω / (ε0 V c²))`, tesla.
pub fn field_amplitude(omega: f64, volume: f64) -> f64 {
    (HBAR * omega / (EPSILON_0 * volume * SPEED_OF_LIGHT * SPEED_OF_LIGHT)).sqrt()
}

/// Dimensionless quantum-flux amplitude `π S B / Φ0`.
pub fn phi0(loop_area: f64, field: f64) -> f64 {
    PI * loop_area * field / FLUX_QUANTUM
}

/// Full parameter set of the qubit-cavity Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    /// Charging energy E_C / ħ.
    pub e_c: f64,
    /// Josephson energy E_J / ħ.
    pub e_j: f64,
    /// Gate charge n_g.
    pub n_g: f64,
    /// Classical flux phase φ_e = π Φ_e / Φ0, radians.
    pub phi_e: f64,
    /// Quantum flux amplitude φ0.
    pub phi0: f64,
    /// Cavity angular frequency ω.
    pub omega: f64,
    pub cutoff: FockCutoff,
}

/// Couplings derived from [`SystemParams`], all angular frequencies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedCouplings {
    /// First-order coupling η = φ0 E_J sin φ_e.
    pub eta: f64,
    /// Second-order coupling δ = φ0² E_J cos φ_e / 2.
    pub delta: f64,
    /// 8 E_C (n_g - 1/2).
    pub qubit_splitting: f64,
}

/// Soft regime checks that do not block a run.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamWarning {
    /// φ0 sqrt(n_max) is not small, so the flux is no longer a weak perturbation.
    StrongFluxNonlinearity { phi0_sqrt_n: f64 },
}

impl std::fmt::Display for ParamWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamWarning::StrongFluxNonlinearity { phi0_sqrt_n } => {
                write!(
                    f,
                    "phi0*sqrt(n_max) = {phi0_sqrt_n:.3} > 0.1: flux nonlinearity is not weak"
                )
            }
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.e_c, self.e_j, self.n_g, self.phi_e, self.phi0, self.omega];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        if !(self.omega > 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        if self.phi0 < 0.0 {
            return Err(Error::InvalidParams(format!(
                "phi0 must be non-negative, got {}",
                self.phi0
            )));
        }
        if self.e_j < 0.0 {
            return Err(Error::InvalidParams(format!(
                "E_J must be non-negative, got {}",
                self.e_j
            )));
        }
        if self.e_c < 3.0 * self.e_j {
            return Err(Error::InvalidParams(format!(
                "charge regime requires E_C >= 3 E_J (E_C = {}, E_J = {})",
                self.e_c, self.e_j
            )));
        }
        Ok(())
    }

    /// Dimensionless set used for Hamiltonian cross-checks:
    /// φ0 = 0.05, E_J = ω = 1, n_g = 1/2, cutoff 30.
    pub fn desk() -> Self {
        SystemParams {
            e_c: 4.0,
            e_j: 1.0,
            n_g: 0.5,
            phi_e: FRAC_PI_2,
            phi0: 0.05,
            omega: 1.0,
            cutoff: FockCutoff::new(30).expect("static cutoff"),
        }
    }

    /// Parameters realizing the couplings `eta` and `delta` at flux amplitude
    /// `phi0`, by solving `E_J sin φ_e = η/φ0` and `E_J cos φ_e = 2δ/φ0²`.
    ///
    /// The gate charge is set to 1/2 and E_C large enough for both the
    /// charge regime and a resonant gate charge below one.
    pub fn from_couplings(omega: f64, eta: f64, delta: f64, phi0: f64, cutoff: FockCutoff) -> Result<Self> {
        if !(phi0 > 0.0) {
            return Err(Error::InvalidParams(format!("phi0 must be positive, got {phi0}")));
        }
        let sin_part = eta / phi0;
        let cos_part = 2.0 * delta / (phi0 * phi0);
        let e_j = sin_part.hypot(cos_part);
        let phi_e = if e_j == 0.0 { 0.0 } else { sin_part.atan2(cos_part) };
        let params = SystemParams {
            e_c: (4.0 * e_j).max(omega),
            e_j,
            n_g: 0.5,
            phi_e,
            phi0,
            omega,
            cutoff,
        };
        params.validate()?;
        Ok(params)
    }

    /// Copy with a different gate charge.
    pub fn with_gate_charge(self, n_g: f64) -> Self {
        SystemParams { n_g, ..self }
    }

    pub fn with_cutoff(self, cutoff: FockCutoff) -> Self {
        SystemParams { cutoff, ..self }
    }
}

pub fn couplings(p: &SystemParams) -> DerivedCouplings {
    DerivedCouplings {
        eta: p.phi0 * p.e_j * p.phi_e.sin(),
        delta: 0.5 * p.phi0 * p.phi0 * p.e_j * p.phi_e.cos(),
        qubit_splitting: 8.0 * p.e_c * (p.n_g - 0.5),
    }
}

pub fn warnings(p: &SystemParams) -> Vec<ParamWarning> {
    let mut out = Vec::new();
    let phi0_sqrt_n = p.phi0 * (p.cutoff.n_max() as f64).sqrt();
    if phi0_sqrt_n > 0.1 {
        out.push(ParamWarning::StrongFluxNonlinearity { phi0_sqrt_n });
    }
    out
}

/// Gate charge at which the qubit splitting `8 E_C (n_g - 1/2)` equals `omega`.
/// Both arguments are angular frequencies.
pub fn resonance_gate_charge(e_c: f64, omega: f64) -> Result<f64> {
    if !(e_c > 0.0) {
        return Err(Error::OutOfRange {
            what: "charging energy",
            value: e_c,
        });
    }
    let n_g = 0.5 + omega / (8.0 * e_c);
    if !(0.5..=1.0).contains(&n_g) {
        return Err(Error::OutOfRange {
            what: "resonant gate charge",
            value: n_g,
        });
    }
    Ok(n_g)
}

/// Time `π / (2|η|)` for a full qubit-to-cavity transfer.
pub fn storage_time(eta: f64) -> Result<f64> {
    if eta == 0.0 || !eta.is_finite() {
        return Err(Error::ZeroCoupling);
    }
    Ok(PI / (2.0 * eta.abs()))
}

/// A physical device in SI units, from which [`SystemParams`] are derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviceSpec {
    pub geometry: CavityGeometry,
    /// Cavity frequency f, Hz (ω = 2πf).
    pub frequency_hz: f64,
    pub e_c_ev: f64,
    pub e_j_ev: f64,
    /// SQUID loop area S, m².
    pub loop_area: f64,
    pub phi_e: f64,
}

/// Everything [`DeviceSpec::derive`] reports.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviceReport {
    pub mode_volume: f64,
    pub field: f64,
    pub phi0: f64,
    pub omega: f64,
    pub e_c: f64,
    pub e_j: f64,
    pub eta: f64,
    pub delta: f64,
    /// φ0 E_J, the coupling at φ_e = π/2.
    pub eta_max: f64,
    /// φ0² E_J / 2, the coupling at φ_e = 0.
    pub delta_max: f64,
    pub resonant_gate_charge: Option<f64>,
    /// `None` when η = 0.
    pub storage_time: Option<f64>,
}

/// Back-solved SQUID loop area giving φ0 = 1.14e-5 with the default cavity.
pub const DEFAULT_LOOP_AREA: f64 = 9.98e-11;

impl DeviceSpec {
    /// R = 2.55 mm, L = 5 mm, f = 30 GHz, E_C = 122 µeV, E_J = 34 µeV,
    /// S = 9.98e-11 m², φ_e = π/2.
    pub fn reference() -> Self {
        let frequency_hz = 30e9;
        DeviceSpec {
            geometry: CavityGeometry::for_frequency(2.55e-3, 5e-3, frequency_hz).expect("static geometry"),
            frequency_hz,
            e_c_ev: 122e-6,
            e_j_ev: 34e-6,
            loop_area: DEFAULT_LOOP_AREA,
            phi_e: FRAC_PI_2,
        }
    }

    pub fn derive(&self) -> Result<DeviceReport> {
        if !(self.frequency_hz > 0.0) {
            return Err(Error::OutOfRange {
                what: "cavity frequency",
                value: self.frequency_hz,
            });
        }
        if !(self.loop_area >= 0.0) {
            return Err(Error::OutOfRange {
                what: "loop area",
                value: self.loop_area,
            });
        }
        let volume = mode_volume(&self.geometry)?;
        let omega = hz_to_rad_per_s(self.frequency_hz);
        let field = field_amplitude(omega, volume);
        let phi0 = phi0(self.loop_area, field);
        let e_c = ev_to_rad_per_s(self.e_c_ev);
        let e_j = ev_to_rad_per_s(self.e_j_ev);
        let eta = phi0 * e_j * self.phi_e.sin();
        Ok(DeviceReport {
            mode_volume: volume,
            field,
            phi0,
            omega,
            e_c,
            e_j,
            eta,
            delta: 0.5 * phi0 * phi0 * e_j * self.phi_e.cos(),
            eta_max: phi0 * e_j,
            delta_max: 0.5 * phi0 * phi0 * e_j,
            resonant_gate_charge: resonance_gate_charge(e_c, omega).ok(),
            storage_time: storage_time(eta).ok(),
        })
    }

    /// Hamiltonian parameters of this device at gate charge `n_g`.
    pub fn system_params(&self, n_g: f64, cutoff: FockCutoff) -> Result<SystemParams> {
        let report = self.derive()?;
        let params = SystemParams {
            e_c: report.e_c,
            e_j: report.e_j,
            n_g,
            phi_e: self.phi_e,
            phi0: report.phi0,
            omega: report.omega,
            cutoff,
        };
        params.validate()?;
        Ok(params)
    }
}

/// Dimensionless family of devices with ω = 1 whose couplings follow
/// `η = eta_max sin φ_e`, `δ = delta_max cos φ_e`.
///
/// Each point is realized at the small flux amplitude `phi0`, so the exact
/// cosine Hamiltonian stays close to its second-order expansion while the
/// couplings are large enough to see within a few hundred cavity periods.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeskScale {
    pub eta_max: f64,
    pub delta_max: f64,
    pub phi0: f64,
}

impl DeskScale {
    /// ω/η = 50 at φ_e = π/2.
    pub fn storage() -> Self {
        DeskScale {
            eta_max: 0.02,
            delta_max: 0.0002,
            phi0: 0.02,
        }
    }

    /// η/ω = 0.3 at φ_e = π/2, δ/ω = 0.02 at φ_e = 0.
    pub fn decoherence() -> Self {
        DeskScale {
            eta_max: 0.3,
            delta_max: 0.02,
            phi0: 1e-4,
        }
    }

    pub fn params(&self, phi_e: f64, cutoff: FockCutoff) -> Result<SystemParams> {
        let eta = self.eta_max * phi_e.sin();
        // cos(π/2) is 6e-17 in floating point; treat that as exactly zero
        let cos = phi_e.cos();
        let delta = if cos.abs() < 1e-15 { 0.0 } else { self.delta_max * cos };
        SystemParams::from_couplings(1.0, eta, delta, self.phi0, cutoff)
    }
}
