//! Truncated bosonic Fock space and the qubit tensor algebra built on it.
//!
//! Joint qubit-cavity vectors are stored qubit-major: the basis state
//! `|q>_q ⊗ |n>_c` sits at index `q * (n_max + 1) + n`, so a qubit index
//! never depends on the cutoff.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest probability mass a coherent or squeezed state may lose to
/// truncation before synthesis is refused.
pub const TRUNCATION_BOUND: f64 = 1e-6;

const HERMITIAN_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-10;
const BOGOLIUBOV_TOL: f64 = 1e-9;

/// Highest retained photon number. The cavity space has dimension `n_max + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(FockCutoff(n_max))
    }

    pub fn n_max(self) -> usize {
        self.0
    }

    pub fn dim(self) -> usize {
        self.0 + 1
    }
}

/// Which Hilbert space a vector or matrix lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Qubit,
    Cavity(FockCutoff),
    Joint(FockCutoff),
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::Qubit => 2,
            Space::Cavity(c) => c.dim(),
            Space::Joint(c) => 2 * c.dim(),
        }
    }

    pub fn cutoff(self) -> Option<FockCutoff> {
        match self {
            Space::Qubit => None,
            Space::Cavity(c) | Space::Joint(c) => Some(c),
        }
    }
}

/// Index of `|q>_q ⊗ |n>_c` in the joint basis.
pub fn joint_index(q: usize, n: usize, cutoff: FockCutoff) -> usize {
    q * cutoff.dim() + n
}

fn check_same(a: Space, b: Space) -> Result<()> {
    if a != b {
        return Err(Error::SpaceMismatch(a, b));
    }
    Ok(())
}

/// Pure state: complex amplitudes over one of the three spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
    space: Space,
}

impl StateVector {
    pub fn new(space: Space, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                space,
                expected: space.dim(),
                got: amplitudes.len(),
            });
        }
        Ok(StateVector { amplitudes, space })
    }

    pub fn from_vec(space: Space, amplitudes: Vec<C64>) -> Result<Self> {
        Self::new(space, DVector::from_vec(amplitudes))
    }

    /// Unit vector `index` of `space`.
    ///
    /// Panics if `index` is outside the space.
    pub fn basis(space: Space, index: usize) -> Self {
        let mut amplitudes = DVector::zeros(space.dim());
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector { amplitudes, space }
    }

    /// Fock state `|n>` of the cavity.
    pub fn fock(n: usize, cutoff: FockCutoff) -> Result<Self> {
        if n > cutoff.n_max() {
            return Err(Error::OutOfRange {
                what: "photon number",
                value: n as f64,
            });
        }
        Ok(Self::basis(Space::Cavity(cutoff), n))
    }

    /// Qubit basis state `|q>_q`, `q` in {0, 1}.
    pub fn qubit(q: usize) -> Self {
        assert!(q < 2, "qubit index must be 0 or 1");
        Self::basis(Space::Qubit, q)
    }

    /// Product basis state `|q>_q ⊗ |n>_c`.
    pub fn product(q: usize, n: usize, cutoff: FockCutoff) -> Result<Self> {
        tensor(&Self::qubit(q), &Self::fock(n, cutoff)?)
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Rescale to unit norm.
    pub fn normalized(self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::PreconditionViolated(
                "cannot normalize a zero or non-finite vector".into(),
            ));
        }
        Ok(StateVector {
            amplitudes: self.amplitudes.unscale(norm),
            space: self.space,
        })
    }

    pub fn scaled(&self, factor: C64) -> Self {
        StateVector {
            amplitudes: self.amplitudes.map(|z| z * factor),
            space: self.space,
        }
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(overlap(self, other)?.norm_sqr())
    }

    /// Population held in the `levels` highest Fock levels (summed over the
    /// qubit for joint states). Zero for a bare qubit.
    pub fn top_occupancy(&self, levels: usize) -> f64 {
        let Some(cutoff) = self.space.cutoff() else {
            return 0.0;
        };
        let dim = cutoff.dim();
        let first = dim.saturating_sub(levels);
        let blocks = self.space.dim() / dim;
        (0..blocks)
            .flat_map(|b| (first..dim).map(move |n| b * dim + n))
            .map(|i| self.amplitudes[i].norm_sqr())
            .sum()
    }
}

/// `<psi1|psi2>`, conjugate-linear in the first argument.
pub fn overlap(psi1: &StateVector, psi2: &StateVector) -> Result<C64> {
    check_same(psi1.space, psi2.space)?;
    Ok(psi1.amplitudes.dotc(&psi2.amplitudes))
}

/// Dense operator on one of the three spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    matrix: DMatrix<C64>,
    space: Space,
    hermitian: bool,
}

impl Operator {
    pub fn new(space: Space, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = space.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                space,
                expected: dim,
                got: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Operator {
            matrix,
            space,
            hermitian: false,
        })
    }

    /// Like [`Operator::new`] but verifies Hermiticity and sets the flag.
    pub fn new_hermitian(space: Space, matrix: DMatrix<C64>) -> Result<Self> {
        let mut op = Self::new(space, matrix)?;
        let dev = op.hermiticity_error();
        if dev > HERMITIAN_TOL * op.max_abs().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        op.hermitian = true;
        Ok(op)
    }

    pub(crate) fn from_parts(space: Space, matrix: DMatrix<C64>, hermitian: bool) -> Self {
        debug_assert_eq!(matrix.nrows(), space.dim());
        Operator {
            matrix,
            space,
            hermitian,
        }
    }

    pub fn identity(space: Space) -> Self {
        Self::from_parts(space, DMatrix::identity(space.dim(), space.dim()), true)
    }

    pub fn zeros(space: Space) -> Self {
        Self::from_parts(space, DMatrix::zeros(space.dim(), space.dim()), true)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// The Hermitian hint carried by this operator.
    pub fn hermitian_flag(&self) -> bool {
        self.hermitian
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// `max |M - M†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn dagger(&self) -> Operator {
        Self::from_parts(self.space, self.matrix.adjoint(), self.hermitian)
    }

    pub fn scale(&self, factor: C64) -> Operator {
        let keeps = self.hermitian && factor.im == 0.0;
        Self::from_parts(self.space, self.matrix.map(|z| z * factor), keeps)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        check_same(self.space, psi.space)?;
        Ok(StateVector {
            amplitudes: &self.matrix * &psi.amplitudes,
            space: self.space,
        })
    }

    /// `<psi|M|psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        let m_psi = self.apply(psi)?;
        overlap(psi, &m_psi)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        check_same(self.space, other.space)?;
        let m = &self.matrix * &other.matrix - &other.matrix * &self.matrix;
        Ok(Self::from_parts(self.space, m, false))
    }
}

impl Add for &Operator {
    type Output = Operator;

    /// Panics on a space mismatch, like matrix addition with bad shapes.
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator space mismatch");
        Operator::from_parts(self.space, &self.matrix + &rhs.matrix, self.hermitian && rhs.hermitian)
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator space mismatch");
        Operator::from_parts(self.space, &self.matrix - &rhs.matrix, self.hermitian && rhs.hermitian)
    }
}

impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator space mismatch");
        Operator::from_parts(self.space, &self.matrix * &rhs.matrix, false)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;

    fn mul(self, rhs: f64) -> Operator {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Mul<f64> for Operator {
    type Output = Operator;

    fn mul(mut self, rhs: f64) -> Operator {
        self.matrix.scale_mut(rhs);
        self
    }
}

/// Cavity annihilation operator, `<n-1|a|n> = sqrt(n)`.
pub fn annihilation(cutoff: FockCutoff) -> Operator {
    let dim = cutoff.dim();
    let mut m = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    Operator::from_parts(Space::Cavity(cutoff), m, false)
}

pub fn creation(cutoff: FockCutoff) -> Operator {
    annihilation(cutoff).dagger()
}

/// `a†a`, diagonal with entries `0..=n_max`.
pub fn number(cutoff: FockCutoff) -> Operator {
    let diag = DVector::from_iterator(cutoff.dim(), (0..cutoff.dim()).map(|n| C64::new(n as f64, 0.0)));
    Operator::from_parts(Space::Cavity(cutoff), DMatrix::from_diagonal(&diag), true)
}

/// Quasi-spin operators in the charge basis.
///
/// `sigma_z = |0><0| - |1><1|`, `sigma_x = |0><1| + |1><0|`,
/// `sigma_plus = |0><1|` raises the `sigma_z` eigenvalue, `sigma_minus = |1><0|`.
#[derive(Clone, Debug)]
pub struct QubitOps {
    pub sigma_x: Operator,
    pub sigma_z: Operator,
    pub sigma_plus: Operator,
    pub sigma_minus: Operator,
}

pub fn qubit_ops() -> QubitOps {
    let c = |re: f64| C64::new(re, 0.0);
    let z = c(0.0);
    let sx = DMatrix::from_row_slice(2, 2, &[z, c(1.0), c(1.0), z]);
    let sz = DMatrix::from_row_slice(2, 2, &[c(1.0), z, z, c(-1.0)]);
    let sp = DMatrix::from_row_slice(2, 2, &[z, c(1.0), z, z]);
    let sm = DMatrix::from_row_slice(2, 2, &[z, z, c(1.0), z]);
    QubitOps {
        sigma_x: Operator::from_parts(Space::Qubit, sx, true),
        sigma_z: Operator::from_parts(Space::Qubit, sz, true),
        sigma_plus: Operator::from_parts(Space::Qubit, sp, false),
        sigma_minus: Operator::from_parts(Space::Qubit, sm, false),
    }
}

/// `|q><q|` on the qubit.
pub fn qubit_projector(q: usize) -> Operator {
    let mut m = DMatrix::zeros(2, 2);
    m[(q, q)] = C64::new(1.0, 0.0);
    Operator::from_parts(Space::Qubit, m, true)
}

/// Bogoliubov data of a squeezed coherent state: the eigenvalue `beta` of
/// `A = mu a - nu a†`, and an extra global phase `theta`.
///
/// The state is normalized so that, before the `theta` phase,
/// `<0|beta, mu, nu> = mu^{-1/2} exp(-|beta|^2/2 - conj(nu) beta^2 / (2 mu))`
/// with the principal square root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezedParams {
    pub beta: C64,
    pub mu: C64,
    pub nu: C64,
    pub theta: f64,
}

impl SqueezedParams {
    /// Plain coherent state `|alpha>`.
    pub fn coherent(alpha: C64) -> Self {
        SqueezedParams {
            beta: alpha,
            mu: C64::new(1.0, 0.0),
            nu: C64::new(0.0, 0.0),
            theta: 0.0,
        }
    }

    /// `|mu|^2 - |nu|^2`, which must be one.
    pub fn bogoliubov_norm(&self) -> f64 {
        self.mu.norm_sqr() - self.nu.norm_sqr()
    }

    pub fn check(&self) -> Result<()> {
        let norm = self.bogoliubov_norm();
        if !((norm - 1.0).abs() <= BOGOLIUBOV_TOL) {
            return Err(Error::InvalidBogoliubov(norm));
        }
        Ok(())
    }

    /// Vacuum amplitude `<0|state>` including the `theta` phase.
    pub fn vacuum_amplitude(&self) -> C64 {
        let exponent = -0.5 * self.beta.norm_sqr() - self.nu.conj() * self.beta * self.beta / (2.0 * self.mu);
        self.mu.sqrt().inv() * exponent.exp() * C64::from_polar(1.0, self.theta)
    }
}

fn truncated(amplitudes: Vec<C64>, cutoff: FockCutoff) -> Result<StateVector> {
    let kept: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
    let loss = (1.0 - kept).max(0.0);
    if !(loss <= TRUNCATION_BOUND) {
        return Err(Error::Truncation {
            loss,
            bound: TRUNCATION_BOUND,
            n_max: cutoff.n_max(),
        });
    }
    StateVector::from_vec(Space::Cavity(cutoff), amplitudes)?.normalized()
}

/// Coherent state `|alpha>`, renormalized after truncation.
pub fn coherent_state(alpha: C64, cutoff: FockCutoff) -> Result<StateVector> {
    let mut amps = Vec::with_capacity(cutoff.dim());
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps.push(c);
    for n in 1..cutoff.dim() {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    truncated(amps, cutoff)
}

/// Squeezed coherent state `e^{i theta} |beta, mu, nu>`.
///
/// Built from the three-term recursion
/// `mu sqrt(n+1) c_{n+1} - nu sqrt(n) c_{n-1} = beta c_n`, started from the
/// exact vacuum amplitude so the discarded tail mass is `1 - sum |c_n|^2`.
pub fn squeezed_state(params: &SqueezedParams, cutoff: FockCutoff) -> Result<StateVector> {
    params.check()?;
    let SqueezedParams { beta, mu, nu, .. } = *params;
    let mut amps = Vec::with_capacity(cutoff.dim());
    amps.push(params.vacuum_amplitude());
    for n in 0..cutoff.n_max() {
        let prev = if n == 0 {
            C64::new(0.0, 0.0)
        } else {
            amps[n - 1] * nu * (n as f64).sqrt()
        };
        let next = (beta * amps[n] + prev) / (mu * ((n + 1) as f64).sqrt());
        amps.push(next);
    }
    truncated(amps, cutoff)
}

/// Qubit-major tensor product.
pub trait Tensor: Sized {
    fn tensor(qubit: &Self, cavity: &Self) -> Result<Self>;
}

pub fn tensor<T: Tensor>(qubit: &T, cavity: &T) -> Result<T> {
    T::tensor(qubit, cavity)
}

fn joint_space(q: Space, c: Space) -> Result<Space> {
    match (q, c) {
        (Space::Qubit, Space::Cavity(cutoff)) => Ok(Space::Joint(cutoff)),
        (Space::Qubit, other) => Err(Error::SpaceMismatch(Space::Cavity(FockCutoff(1)), other)),
        (other, _) => Err(Error::SpaceMismatch(Space::Qubit, other)),
    }
}

impl Tensor for Operator {
    fn tensor(qubit: &Self, cavity: &Self) -> Result<Self> {
        let space = joint_space(qubit.space, cavity.space)?;
        Ok(Operator::from_parts(
            space,
            qubit.matrix.kronecker(&cavity.matrix),
            qubit.hermitian && cavity.hermitian,
        ))
    }
}

impl Tensor for StateVector {
    fn tensor(qubit: &Self, cavity: &Self) -> Result<Self> {
        let space = joint_space(qubit.space, cavity.space)?;
        StateVector::new(space, qubit.amplitudes.kronecker(&cavity.amplitudes))
    }
}

/// Density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<C64>,
    space: Space,
}

impl DensityMatrix {
    /// Validates trace, Hermiticity and the eigenvalue floor.
    pub fn new(space: Space, matrix: DMatrix<C64>) -> Result<Self> {
        let op = Operator::new(space, matrix)?;
        let rho = DensityMatrix {
            space,
            matrix: op.into_matrix(),
        };
        let trace = rho.trace();
        if (trace - 1.0).norm() > DENSITY_TOL {
            return Err(Error::PreconditionViolated(format!("density matrix trace {trace}")));
        }
        let dev = Operator::from_parts(space, rho.matrix.clone(), false).hermiticity_error();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        if rho.min_eigenvalue() < -DENSITY_TOL {
            return Err(Error::PreconditionViolated(format!(
                "density matrix has eigenvalue {}",
                rho.min_eigenvalue()
            )));
        }
        Ok(rho)
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &StateVector) -> Self {
        DensityMatrix {
            matrix: &psi.amplitudes * psi.amplitudes.adjoint(),
            space: psi.space,
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()).unscale(2.0);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Which factor survives a partial trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Keep {
    Qubit,
    Cavity,
}

/// Trace out one factor of a joint qubit-cavity density matrix.
pub fn partial_trace(rho: &DensityMatrix, keep: Keep) -> Result<DensityMatrix> {
    let Space::Joint(cutoff) = rho.space else {
        return Err(Error::SpaceMismatch(
            Space::Joint(FockCutoff(rho.space.cutoff().map_or(1, |c| c.n_max()))),
            rho.space,
        ));
    };
    let d = cutoff.dim();
    let m = &rho.matrix;
    let (space, matrix) = match keep {
        Keep::Qubit => {
            let reduced = DMatrix::from_fn(2, 2, |a, b| (0..d).map(|n| m[(a * d + n, b * d + n)]).sum());
            (Space::Qubit, reduced)
        }
        Keep::Cavity => {
            let reduced = DMatrix::from_fn(d, d, |i, j| (0..2).map(|q| m[(q * d + i, q * d + j)]).sum());
            (Space::Cavity(cutoff), reduced)
        }
    };
    Ok(DensityMatrix { matrix, space })
}
