//! Storing a qubit state in the cavity by a resonant Jaynes-Cummings swap.
//!
//! Phase convention: with the Hamiltonian of [`build_jc`], the state
//! `(α|0>_q + β|1>_q)|0>_c` evolves into
//! `α e^{iωt/2}|0,0> + β e^{-iωt/2}(cos ηt |1,0> - sin ηt |0,1>)`.
//! The target `|0>_q (α e^{iωπ/4η}|0> - β e^{-iωπ/4η}|1>)` is that state at
//! `t = π/2η`, and the overlap gives
//! `P(t) = |α|⁴ + |β|⁴ sin²ηt + 2|α|²|β|² cos(ωt - ωπ/2η) sin ηt`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::evolution::{uniform_grid, Spectrum, TraceSeries};
use crate::fockspace::{tensor, FockCutoff, Space, StateVector, C64};
use crate::hamiltonians::build_jc;
use crate::oracle::numeric_transfer;
use crate::physical::{couplings, storage_time, SystemParams};

const NORM_TOL: f64 = 1e-10;

/// Default number of points on the transfer grid.
pub const STORAGE_POINTS: usize = 2001;

/// Qubit state `alpha|0> + beta|1>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitAmplitudes {
    alpha: C64,
    beta: C64,
}

impl QubitAmplitudes {
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized(norm));
        }
        Ok(QubitAmplitudes { alpha, beta })
    }

    /// `(|0> + |1>)/√2`.
    pub fn equal() -> Self {
        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        QubitAmplitudes { alpha: s, beta: s }
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    pub fn qubit_state(&self) -> StateVector {
        StateVector::from_vec(Space::Qubit, vec![self.alpha, self.beta]).expect("two amplitudes")
    }
}

/// `(α|0>_q + β|1>_q) ⊗ |0>_c`.
pub fn initial_state(q: &QubitAmplitudes, cutoff: FockCutoff) -> StateVector {
    let vacuum = StateVector::fock(0, cutoff).expect("vacuum fits any cutoff");
    tensor(&q.qubit_state(), &vacuum).expect("qubit and cavity factors")
}

fn transfer_phase(p: &SystemParams) -> Result<f64> {
    let eta = couplings(p).eta;
    if eta == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(p.omega * PI / (4.0 * eta))
}

/// `|0>_q ⊗ (α e^{iωπ/4η}|0>_c - β e^{-iωπ/4η}|1>_c)`.
pub fn target_state(q: &QubitAmplitudes, p: &SystemParams) -> Result<StateVector> {
    let phase = transfer_phase(p)?;
    let cavity = StateVector::from_vec(
        Space::Cavity(p.cutoff),
        (0..p.cutoff.dim())
            .map(|n| match n {
                0 => q.alpha * C64::from_polar(1.0, phase),
                1 => -q.beta * C64::from_polar(1.0, -phase),
                _ => C64::new(0.0, 0.0),
            })
            .collect(),
    )?;
    tensor(&StateVector::qubit(0), &cavity)
}

/// `P(t)` for equal amplitudes:
/// `1/4 + (1/2) cos(ωt - ωπ/2η) sin ηt + (1/4) sin²ηt`.
pub fn transfer_probability_analytic(p: &SystemParams, t: f64) -> Result<f64> {
    transfer_probability(&QubitAmplitudes::equal(), p, t)
}

/// `P(t)` for general amplitudes, clamped at zero against round-off.
pub fn transfer_probability(q: &QubitAmplitudes, p: &SystemParams, t: f64) -> Result<f64> {
    let phase = transfer_phase(p)?;
    let eta = couplings(p).eta;
    let a2 = q.alpha.norm_sqr();
    let b2 = q.beta.norm_sqr();
    let s = (eta * t).sin();
    let value = a2 * a2 + b2 * b2 * s * s + 2.0 * a2 * b2 * (p.omega * t - 2.0 * phase).cos() * s;
    Ok(value.max(0.0))
}

/// Fidelities of the two basis transfers at `t = π/2η`:
/// `|0,0> -> |0,0>` and `|1,0> -> |0,1>`, both up to phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StorageMap {
    pub time: f64,
    pub ground_fidelity: f64,
    pub excited_fidelity: f64,
}

pub fn storage_map(p: &SystemParams) -> Result<StorageMap> {
    let time = storage_time(couplings(p).eta)?;
    let spectrum = Spectrum::new(&build_jc(p)?)?;
    let c = p.cutoff;
    let ground = spectrum.evolve(&StateVector::product(0, 0, c)?, time)?;
    let excited = spectrum.evolve(&StateVector::product(1, 0, c)?, time)?;
    Ok(StorageMap {
        time,
        ground_fidelity: ground.fidelity(&StateVector::product(0, 0, c)?)?,
        excited_fidelity: excited.fidelity(&StateVector::product(0, 1, c)?)?,
    })
}

/// `n` points on `[0, π/η]`; with odd `n` the midpoint is the storage time.
pub fn storage_grid(p: &SystemParams, n: usize) -> Result<Vec<f64>> {
    let t = storage_time(couplings(p).eta)?;
    uniform_grid(0.0, 2.0 * t, n)
}

/// Analytic and numeric transfer curves on a common grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferCurves {
    pub analytic: TraceSeries,
    pub numeric: TraceSeries,
}

impl TransferCurves {
    pub fn max_abs_diff(&self) -> f64 {
        self.analytic.max_abs_diff(&self.numeric).expect("curves share a grid")
    }
}

/// Equal-amplitude transfer probability from the closed form and from
/// explicit Jaynes-Cummings evolution.
pub fn transfer_curves(p: &SystemParams, grid: &[f64]) -> Result<TransferCurves> {
    let analytic = grid
        .iter()
        .map(|&t| transfer_probability_analytic(p, t))
        .collect::<Result<Vec<_>>>()?;
    let analytic = TraceSeries::new(grid.to_vec(), analytic, "P_analytic")?;
    let q = QubitAmplitudes::equal();
    let numeric = numeric_transfer(p, q.alpha, q.beta, grid)?;
    Ok(TransferCurves { analytic, numeric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{reduced_cavity, reduced_qubit};
    use crate::physical::DeskScale;
    use std::f64::consts::FRAC_PI_2;

    fn storage_params() -> SystemParams {
        DeskScale::storage()
            .params(FRAC_PI_2, FockCutoff::new(4).unwrap())
            .unwrap()
    }

    #[test]
    fn amplitudes_must_be_normalized() {
        let one = C64::new(1.0, 0.0);
        assert!(matches!(QubitAmplitudes::new(one, one), Err(Error::NotNormalized(_))));
        assert!(QubitAmplitudes::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).is_ok());
    }

    #[test]
    fn initial_state_reduced_matrices() {
        let q = QubitAmplitudes::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let psi = initial_state(&q, FockCutoff::new(3).unwrap());
        let rq = reduced_qubit(&psi).unwrap();
        assert!((rq.element(0, 0).re - 0.36).abs() < 1e-15);
        assert!((rq.element(0, 1) - q.alpha() * q.beta().conj()).norm() < 1e-15);
        assert!((rq.element(1, 0) - q.alpha().conj() * q.beta()).norm() < 1e-15);
        let rc = reduced_cavity(&psi).unwrap();
        assert!((rc.element(0, 0).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ground_state_is_a_target_fixed_point() {
        let p = storage_params();
        let q = QubitAmplitudes::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0)).unwrap();
        let target = target_state(&q, &p).unwrap();
        let f = target.fidelity(&StateVector::product(0, 0, p.cutoff).unwrap()).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
    }

    #[test]
    fn target_has_no_excited_qubit_component() {
        let p = storage_params();
        let target = target_state(&QubitAmplitudes::equal(), &p).unwrap();
        let rq = reduced_qubit(&target).unwrap();
        assert_eq!(rq.element(1, 1).norm(), 0.0);
        let rc = reduced_cavity(&target).unwrap();
        assert!((rc.element(0, 0).re - 0.5).abs() < 1e-15);
        assert!((rc.element(1, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn analytic_probability_endpoints() {
        let p = storage_params();
        let t = storage_time(couplings(&p).eta).unwrap();
        assert!((transfer_probability_analytic(&p, t).unwrap() - 1.0).abs() < 1e-12);
        assert!((transfer_probability_analytic(&p, 0.0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn analytic_matches_numeric_on_coarse_grid() {
        let p = storage_params();
        let grid = storage_grid(&p, 201).unwrap();
        let curves = transfer_curves(&p, &grid).unwrap();
        assert!(curves.max_abs_diff() < 1e-6);
    }

    #[test]
    fn general_amplitudes_match_numeric() {
        let p = storage_params();
        let q = QubitAmplitudes::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let grid = storage_grid(&p, 101).unwrap();
        let numeric = numeric_transfer(&p, q.alpha(), q.beta(), &grid).unwrap();
        for (t, v) in grid.iter().zip(&numeric.values) {
            assert!((transfer_probability(&q, &p, *t).unwrap() - v).abs() < 1e-8);
        }
    }

    #[test]
    fn storage_map_swaps_excitation() {
        let m = storage_map(&storage_params()).unwrap();
        assert!(m.ground_fidelity > 1.0 - 1e-12);
        assert!(m.excited_fidelity > 1.0 - 1e-12);
    }

    #[test]
    fn cavity_purity_during_transfer() {
        let p = storage_params();
        let eta = couplings(&p).eta;
        let spectrum = Spectrum::new(&build_jc(&p).unwrap()).unwrap();
        let psi0 = initial_state(&QubitAmplitudes::equal(), p.cutoff);
        let purity = |t: f64| reduced_cavity(&spectrum.evolve(&psi0, t).unwrap()).unwrap().purity();
        assert!((purity(0.0) - 1.0).abs() < 1e-12);
        assert!((purity(FRAC_PI_2 / eta) - 1.0).abs() < 1e-8);
        let rc = reduced_cavity(&spectrum.evolve(&psi0, FRAC_PI_2 / eta).unwrap()).unwrap();
        assert!((rc.element(0, 0).re - 0.5).abs() < 1e-8);
        assert!((rc.element(1, 1).re - 0.5).abs() < 1e-8);
        for frac in [0.2, 0.5, 0.8] {
            assert!(purity(frac * FRAC_PI_2 / eta) < 1.0 - 1e-6);
        }
    }

    #[test]
    fn zero_coupling_has_no_target() {
        let p = SystemParams::desk().with_cutoff(FockCutoff::new(3).unwrap());
        let p = SystemParams { phi_e: 0.0, ..p };
        assert_eq!(target_state(&QubitAmplitudes::equal(), &p), Err(Error::ZeroCoupling));
    }
}
