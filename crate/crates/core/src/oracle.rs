//! Brute-force reference computations on the truncated Fock space.
//!
//! Everything here is built from explicit Hamiltonian matrices and exact
//! propagation; no closed-form dynamics are used.

use crate::error::{Error, Result};
use crate::evolution::{Spectrum, TraceSeries};
use crate::fockspace::{coherent_state, joint_index, overlap, Operator, Space, StateVector, C64};
use crate::hamiltonians::{build_branch, build_expanded, build_expanded_branch, build_jc, build_measurement, Branch};
use crate::physical::{couplings, SystemParams};

/// Population allowed in the two highest Fock levels at any time.
pub const OCCUPANCY_BOUND: f64 = 1e-8;

/// Which branch Hamiltonians drive the reference evolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchModel {
    /// `cos(φ_e + φ0 Q)` evaluated exactly on the truncated space.
    ExactCosine,
    /// The cosine expanded to second order in `φ0`.
    Quadratic,
}

fn branch_hamiltonian(model: BranchModel, k: Branch, p: &SystemParams) -> Result<Operator> {
    match model {
        BranchModel::ExactCosine => build_branch(k, p),
        BranchModel::Quadratic => build_expanded_branch(k, p),
    }
}

fn monitored(states: Vec<StateVector>) -> Result<Vec<StateVector>> {
    for (index, psi) in states.iter().enumerate() {
        let occupancy = psi.top_occupancy(2);
        if !(occupancy < OCCUPANCY_BOUND) {
            return Err(Error::TruncationDuringEvolution { index, occupancy });
        }
    }
    Ok(states)
}

/// `|<α| e^{iH_1 t} e^{-iH_0 t} |α>|` on each time point.
pub fn numeric_decoherence(p: &SystemParams, alpha: C64, times: &[f64], model: BranchModel) -> Result<TraceSeries> {
    let psi0 = coherent_state(alpha, p.cutoff)?;
    let mut branches = Vec::with_capacity(2);
    for k in Branch::BOTH {
        let h = branch_hamiltonian(model, k, p)?;
        branches.push(monitored(Spectrum::new(&h)?.evolve_series(&psi0, times)?)?);
    }
    let values = branches[1]
        .iter()
        .zip(&branches[0])
        .map(|(d1, d0)| overlap(d1, d0).map(|z| z.norm()))
        .collect::<Result<Vec<_>>>()?;
    TraceSeries::new(times.to_vec(), values, format!("D_numeric(alpha={alpha})"))
}

/// `|<target| e^{-iH_JC t} |initial>|²` for the qubit state `a|0> + b|1>`
/// stored into an empty cavity.
pub fn numeric_transfer(p: &SystemParams, a: C64, b: C64, times: &[f64]) -> Result<TraceSeries> {
    let eta = couplings(p).eta;
    if eta == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    let cutoff = p.cutoff;
    let space = Space::Joint(cutoff);
    let mut initial = vec![C64::new(0.0, 0.0); space.dim()];
    initial[joint_index(0, 0, cutoff)] = a;
    initial[joint_index(1, 0, cutoff)] = b;
    let initial = StateVector::from_vec(space, initial)?;

    let phase = p.omega * std::f64::consts::PI / (4.0 * eta);
    let mut target = vec![C64::new(0.0, 0.0); space.dim()];
    target[joint_index(0, 0, cutoff)] = a * C64::from_polar(1.0, phase);
    target[joint_index(0, 1, cutoff)] = -b * C64::from_polar(1.0, -phase);
    let target = StateVector::from_vec(space, target)?;

    let states = monitored(Spectrum::new(&build_jc(p)?)?.evolve_series(&initial, times)?)?;
    let values = states
        .iter()
        .map(|psi| overlap(&target, psi).map(|z| z.norm_sqr()))
        .collect::<Result<Vec<_>>>()?;
    TraceSeries::new(times.to_vec(), values, "P_numeric")
}

/// Largest entry of `H_measurement - H_expanded` over Fock levels
/// `0..=n_max/2` in both qubit blocks, at `n_g = 1/2`.
pub fn expansion_error(p: &SystemParams) -> Result<f64> {
    let p = p.with_gate_charge(0.5);
    let exact = build_measurement(&p)?;
    let expanded = build_expanded(&p)?;
    let cutoff = p.cutoff;
    let half = cutoff.n_max() / 2;
    let mut worst: f64 = 0.0;
    for q in 0..2 {
        for r in 0..2 {
            for m in 0..=half {
                for n in 0..=half {
                    let i = joint_index(q, m, cutoff);
                    let j = joint_index(r, n, cutoff);
                    worst = worst.max((exact.element(i, j) - expanded.element(i, j)).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// `log2(error(φ0) / error(φ0/2))`, the observed order of the expansion error.
pub fn expansion_order(p: &SystemParams) -> Result<f64> {
    let coarse = expansion_error(p)?;
    let fine = expansion_error(&SystemParams {
        phi0: 0.5 * p.phi0,
        ..*p
    })?;
    if fine == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    Ok((coarse / fine).log2())
}
