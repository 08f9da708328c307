//! Exact unitary evolution `exp(-iHt)` by Hermitian eigendecomposition.

use std::cell::Cell;
use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::fockspace::{partial_trace, DensityMatrix, Keep, Operator, Space, StateVector, C64};

const HERMITIAN_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 12;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

thread_local! {
    static DECOMPOSITIONS: Cell<u64> = const { Cell::new(0) };
    static APPLICATIONS: Cell<u64> = const { Cell::new(0) };
}

/// Work done on the current thread since the last [`reset_counters`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub decompositions: u64,
    pub applications: u64,
}

pub fn counters() -> OpCounts {
    OpCounts {
        decompositions: DECOMPOSITIONS.with(Cell::get),
        applications: APPLICATIONS.with(Cell::get),
    }
}

pub fn reset_counters() {
    DECOMPOSITIONS.with(|c| c.set(0));
    APPLICATIONS.with(|c| c.set(0));
}

fn bump(counter: &'static std::thread::LocalKey<Cell<u64>>) {
    counter.with(|c| c.set(c.get() + 1));
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// The implicit-QR result from nalgebra can leave residuals `‖HV − VΛ‖` near
/// 1e-8, so it is polished with cyclic Jacobi sweeps on `V†HV`, which is
/// already nearly diagonal.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> (DVector<f64>, DMatrix<C64>) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut v = eig.eigenvectors;
    let mut a = v.adjoint() * m * &v;
    let scale = a.norm().max(f64::MIN_POSITIVE);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = DVector::from_iterator(n, order.iter().map(|&i| a[(i, i)].re));
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Zeroes `a[(p, q)]` by the unitary `U = diag(1, e^{-iφ}) G` applied as
/// `a ← U†aU`, `v ← vU`, where `G` is the real Jacobi rotation of the
/// phase-corrected 2×2 block.
fn jacobi_rotate(a: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let d = (apq / r).conj();
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let u = [[C64::new(c, 0.0), C64::new(s, 0.0)], [-d * s, d * c]];
    let n = a.nrows();
    for k in 0..n {
        let (kp, kq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = kp * u[0][0] + kq * u[1][0];
        a[(k, q)] = kp * u[0][1] + kq * u[1][1];
        let (kp, kq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = kp * u[0][0] + kq * u[1][0];
        v[(k, q)] = kp * u[0][1] + kq * u[1][1];
    }
    for k in 0..n {
        let (pk, qk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = u[0][0].conj() * pk + u[1][0].conj() * qk;
        a[(q, k)] = u[0][1].conj() * pk + u[1][1].conj() * qk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);
}

/// Cached eigendecomposition `H = shift + V diag(λ) V†`.
///
/// The mean diagonal is split off as `shift` and applied as a global phase,
/// which keeps the eigenphases small for large `t`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    id: u64,
    space: Space,
    shift: f64,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<C64>,
}

impl Spectrum {
    pub fn new(h: &Operator) -> Result<Self> {
        let err = h.hermiticity_error();
        if err > HERMITIAN_TOL * h.max_abs().max(1.0) {
            return Err(Error::NotHermitian(err));
        }
        let dim = h.space().dim();
        let shift = (0..dim).map(|i| h.element(i, i).re).sum::<f64>() / dim as f64;
        let mut m = h.matrix().clone();
        for i in 0..dim {
            m[(i, i)] -= shift;
        }
        let m = (&m + m.adjoint()).unscale(2.0);
        let (eigenvalues, eigenvectors) = hermitian_eigen(&m);
        bump(&DECOMPOSITIONS);
        Ok(Spectrum {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            space: h.space(),
            shift,
            eigenvalues,
            eigenvectors,
        })
    }

    /// Identifier shared by every propagator built from this decomposition.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn space(&self) -> Space {
        self.space
    }

    /// Eigenvalues of `H`, ascending.
    pub fn energies(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|e| e + self.shift).collect()
    }

    fn phases(&self, t: f64) -> DVector<C64> {
        let global = C64::from_polar(1.0, -self.shift * t);
        self.eigenvalues.map(|e| global * C64::from_polar(1.0, -e * t))
    }

    pub fn propagator(&self, t: f64) -> Propagator {
        let v = &self.eigenvectors;
        let u = v * DMatrix::from_diagonal(&self.phases(t)) * v.adjoint();
        Propagator {
            unitary: Operator::new(self.space, u).expect("dimensions match"),
            time: t,
            hamiltonian_id: self.id,
        }
    }

    /// `exp(-iHt) ψ0` for each `t`, one matrix-vector product per time.
    pub fn evolve_series(&self, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
        if psi0.space() != self.space {
            return Err(Error::SpaceMismatch(self.space, psi0.space()));
        }
        let v = &self.eigenvectors;
        let coeffs = v.ad_mul(psi0.amplitudes());
        times
            .iter()
            .map(|&t| {
                bump(&APPLICATIONS);
                let rotated = coeffs.component_mul(&self.phases(t));
                StateVector::new(self.space, v * rotated)
            })
            .collect()
    }

    pub fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        Ok(self.evolve_series(psi0, &[t])?.remove(0))
    }
}

/// `U = exp(-iHt)` for a fixed Hamiltonian and time.
#[derive(Clone, Debug)]
pub struct Propagator {
    pub unitary: Operator,
    pub time: f64,
    pub hamiltonian_id: u64,
}

impl Propagator {
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        bump(&APPLICATIONS);
        self.unitary.apply(psi)
    }

    /// `‖U†U - 1‖_max`.
    pub fn unitarity_error(&self) -> f64 {
        let u = self.unitary.matrix();
        let mut g = u.ad_mul(u);
        for i in 0..g.nrows() {
            g[(i, i)] -= C64::new(1.0, 0.0);
        }
        g.iter().fold(0.0, |m, z| m.max(z.norm()))
    }
}

pub fn propagator(h: &Operator, t: f64) -> Result<Propagator> {
    Ok(Spectrum::new(h)?.propagator(t))
}

pub fn evolve_series(h: &Operator, psi0: &StateVector, times: &[f64]) -> Result<Vec<StateVector>> {
    Spectrum::new(h)?.evolve_series(psi0, times)
}

pub fn reduced_qubit(psi: &StateVector) -> Result<DensityMatrix> {
    partial_trace(&DensityMatrix::from_pure(psi), Keep::Qubit)
}

pub fn reduced_cavity(psi: &StateVector) -> Result<DensityMatrix> {
    partial_trace(&DensityMatrix::from_pure(psi), Keep::Cavity)
}

/// A real-valued curve sampled on a strictly increasing time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub label: String,
}

impl TraceSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidParams(format!(
                "{} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParams("times must be strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::OutOfRange {
                what: "series value",
                value: *v,
            });
        }
        Ok(TraceSeries {
            times,
            values,
            label: label.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest pointwise `|a - b|` against a series on the same grid.
    pub fn max_abs_diff(&self, other: &TraceSeries) -> Result<f64> {
        if self.times != other.times {
            return Err(Error::InvalidParams("series grids differ".into()));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// `n` evenly spaced points from `start` to `end` inclusive.
pub fn uniform_grid(start: f64, end: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("grid needs at least 2 points, got {n}")));
    }
    if !(end > start) || !start.is_finite() || !end.is_finite() {
        return Err(Error::InvalidParams(format!("bad grid interval [{start}, {end}]")));
    }
    let step = (end - start) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| start + step * i as f64).collect();
    grid[n - 1] = end;
    Ok(grid)
}
