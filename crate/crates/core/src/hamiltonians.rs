//! Hamiltonian builders on the truncated qubit ⊗ cavity space (ħ = 1).
//!
//! The flux through the SQUID is `φ_e + φ0 Q` with the Hermitian quadrature
//! `Q = -i(a - a†)`. The operator cosine is evaluated exactly on the
//! truncated space by diagonalizing `Q`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::evolution::hermitian_eigen;
use crate::fockspace::{annihilation, number, qubit_ops, qubit_projector, tensor, FockCutoff, Operator, Space, C64};
use crate::physical::{couplings, SystemParams};

const GATE_CHARGE_TOL: f64 = 1e-12;

/// Cavity branch correlated with a `σ_x` eigenstate: `Plus` (k = 0) with
/// eigenvalue +1, `Minus` (k = 1) with eigenvalue -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    pub fn from_index(k: usize) -> Result<Self> {
        match k {
            0 => Ok(Branch::Plus),
            1 => Ok(Branch::Minus),
            _ => Err(Error::OutOfRange {
                what: "branch index",
                value: k as f64,
            }),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }

    /// `(-1)^k`, the `σ_x` eigenvalue.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamiltonianKind {
    FullCosine,
    JaynesCummings,
    Measurement,
    Branch(Branch),
    ExpandedSecondOrder,
}

pub fn build(kind: HamiltonianKind, p: &SystemParams) -> Result<Operator> {
    match kind {
        HamiltonianKind::FullCosine => build_full(p),
        HamiltonianKind::JaynesCummings => build_jc(p),
        HamiltonianKind::Measurement => build_measurement(p),
        HamiltonianKind::Branch(k) => build_branch(k, p),
        HamiltonianKind::ExpandedSecondOrder => build_expanded(p),
    }
}

/// `Q = -i(a - a†)`.
pub fn quadrature(cutoff: FockCutoff) -> Operator {
    let a = annihilation(cutoff);
    let diff = &a - &a.dagger();
    let q = diff.scale(C64::new(0.0, -1.0));
    Operator::new_hermitian(q.space(), q.into_matrix()).expect("quadrature is Hermitian")
}

/// `cos(φ_e + φ0 Q)` on the truncated cavity space.
///
/// Written as `cos φ_e · 1 + f(Q)` with
/// `f(x) = -2 sin(φ_e + φ0 x / 2) sin(φ0 x / 2)`, so the small flux-dependent
/// part keeps full relative precision when `E_J` is large.
pub fn flux_cosine(phi_e: f64, phi0: f64, cutoff: FockCutoff) -> Operator {
    let q = quadrature(cutoff);
    let (values, v) = hermitian_eigen(q.matrix());
    let shifted = DVector::from_iterator(
        cutoff.dim(),
        values.iter().map(|&x| {
            let half = 0.5 * phi0 * x;
            C64::new(-2.0 * (phi_e + half).sin() * half.sin(), 0.0)
        }),
    );
    let mut m = &v * DMatrix::from_diagonal(&shifted) * v.adjoint();
    for i in 0..cutoff.dim() {
        m[(i, i)] += phi_e.cos();
    }
    // V D V† is Hermitian up to rounding; restore it exactly
    let m = (&m + m.adjoint()).unscale(2.0);
    Operator::new_hermitian(Space::Cavity(cutoff), m).expect("cosine of a Hermitian operator")
}

fn cavity_identity(cutoff: FockCutoff) -> Operator {
    Operator::identity(Space::Cavity(cutoff))
}

fn embed_cavity(op: &Operator) -> Result<Operator> {
    tensor(&Operator::identity(Space::Qubit), op)
}

fn check_tuned(p: &SystemParams) -> Result<()> {
    if (p.n_g - 0.5).abs() > GATE_CHARGE_TOL {
        return Err(Error::GateChargeNotTuned(p.n_g));
    }
    Ok(())
}

fn hermitian(op: Operator) -> Result<Operator> {
    Operator::new_hermitian(op.space(), op.into_matrix())
}

/// Spin-boson Hamiltonian with the exact flux cosine:
/// `H = 4E_C (n_g - 1/2) σ_z - E_J cos(φ_e + φ0 Q) σ_x + ω a†a`.
pub fn build_full(p: &SystemParams) -> Result<Operator> {
    p.validate()?;
    let cutoff = p.cutoff;
    let s = qubit_ops();
    let charge = tensor(&s.sigma_z, &cavity_identity(cutoff))? * (4.0 * p.e_c * (p.n_g - 0.5));
    let josephson = tensor(&s.sigma_x, &flux_cosine(p.phi_e, p.phi0, cutoff))? * (-p.e_j);
    let field = embed_cavity(&number(cutoff))? * p.omega;
    hermitian(&(&charge + &josephson) + &field)
}

/// Resonant Jaynes-Cummings model
/// `H = -(ω/2) σ_z + ω a†a + iη (σ_- a - σ_+ a†)`.
///
/// `|1>_q` is the excited level, degenerate with `|0>_q|1>_c`, and the
/// coupling sends `|1>_q|0>_c` to `-iη |0>_q|1>_c`.
pub fn build_jc(p: &SystemParams) -> Result<Operator> {
    p.validate()?;
    let cutoff = p.cutoff;
    let eta = couplings(p).eta;
    let s = qubit_ops();
    let a = annihilation(cutoff);
    let qubit = tensor(&s.sigma_z, &cavity_identity(cutoff))? * (-0.5 * p.omega);
    let field = embed_cavity(&number(cutoff))? * p.omega;
    let absorb = tensor(&s.sigma_minus, &a)?;
    let emit = tensor(&s.sigma_plus, &a.dagger())?;
    let coupling = (&absorb - &emit).scale(C64::new(0.0, eta));
    hermitian(&(&qubit + &field) + &coupling)
}

/// Relative detuning `(8E_C(n_g - 1/2) - ω) / ω` of the qubit from the cavity.
pub fn jc_detuning(p: &SystemParams) -> f64 {
    (couplings(p).qubit_splitting - p.omega) / p.omega
}

/// Excitation number `|1><1|_q + a†a`, conserved by [`build_jc`].
pub fn excitation_number(cutoff: FockCutoff) -> Result<Operator> {
    let excited = tensor(&qubit_projector(1), &cavity_identity(cutoff))?;
    Ok(&excited + &embed_cavity(&number(cutoff))?)
}

/// Measurement-model Hamiltonian `-E_J cos(φ_e + φ0 Q) σ_x + ω a†a`,
/// i.e. [`build_full`] at `n_g = 1/2`.
pub fn build_measurement(p: &SystemParams) -> Result<Operator> {
    check_tuned(p)?;
    build_full(p)
}

/// Cavity-only Hamiltonian seen by the `σ_x` eigenstate `k`:
/// `H_k = -(-1)^k E_J cos(φ_e + φ0 Q) + ω a†a`.
pub fn build_branch(k: Branch, p: &SystemParams) -> Result<Operator> {
    check_tuned(p)?;
    p.validate()?;
    let cutoff = p.cutoff;
    let cosine = flux_cosine(p.phi_e, p.phi0, cutoff) * (-k.sign() * p.e_j);
    hermitian(&cosine + &(number(cutoff) * p.omega))
}

/// `E_J cos φ_e - η Q - δ Q²`: the flux cosine times `E_J` expanded to
/// second order in `φ0`.
fn expanded_josephson(p: &SystemParams) -> Operator {
    let cutoff = p.cutoff;
    let c = couplings(p);
    let q = quadrature(cutoff);
    let q2 = &q * &q;
    let constant = cavity_identity(cutoff) * (p.e_j * p.phi_e.cos());
    &(&constant - &(q * c.eta)) - &(q2 * c.delta)
}

/// Second-order expansion of [`build_full`]:
/// `H = 4E_C(n_g - 1/2) σ_z - [E_J cos φ_e + δ(aa + a†a† - aa† - a†a) + iη(a - a†)] σ_x + ω a†a`.
pub fn build_expanded(p: &SystemParams) -> Result<Operator> {
    p.validate()?;
    let cutoff = p.cutoff;
    let s = qubit_ops();
    let charge = tensor(&s.sigma_z, &cavity_identity(cutoff))? * (4.0 * p.e_c * (p.n_g - 0.5));
    let josephson = tensor(&s.sigma_x, &expanded_josephson(p))? * -1.0;
    let field = embed_cavity(&number(cutoff))? * p.omega;
    hermitian(&(&charge + &josephson) + &field)
}

/// Branch `k` of [`build_expanded`]: `ω a†a - (-1)^k (E_J cos φ_e - η Q - δ Q²)`.
pub fn build_expanded_branch(k: Branch, p: &SystemParams) -> Result<Operator> {
    check_tuned(p)?;
    p.validate()?;
    let josephson = expanded_josephson(p) * -k.sign();
    hermitian(&josephson + &(number(p.cutoff) * p.omega))
}

/// `U = Hadamard ⊗ 1`, whose qubit columns are the `σ_x` eigenstates
/// `(|0> ± |1>)/√2`.
pub fn sigma_x_rotation(cutoff: FockCutoff) -> Result<Operator> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(s, 0.0), C64::new(s, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)],
    );
    tensor(&Operator::new(Space::Qubit, h)?, &cavity_identity(cutoff))
}
