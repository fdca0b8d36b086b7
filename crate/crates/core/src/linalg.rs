//! Dense complex linear algebra for small bipartite systems.
//!
//! Bipartite vectors use the index convention `|j⟩_A |k⟩_B ↦ j·d_B + k`
//! everywhere in the crate: [`tensor`], [`partial_trace`], the Bell state
//! constructors and the constraint builders all rely on it.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use nalgebra::Complex;

pub type C64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<C64>;

/// Tolerance on the norm of a [`StateVector`].
pub const NORM_TOL: f64 = 1e-12;
/// Entrywise Hermiticity / unit-trace tolerance of a [`DensityOperator`].
pub const DENSITY_TOL: f64 = 1e-12;
/// Eigenvalues in `(-EIGEN_CLIP, 0)` are treated as zero.
pub const EIGEN_CLIP: f64 = 1e-10;

/// One of the two parties of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::A => f.write_str("A"),
            Side::B => f.write_str("B"),
        }
    }
}

pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// `e^{iθ}`.
pub fn phase(theta: f64) -> C64 {
    Complex::from_polar(1.0, theta)
}

pub fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

/// Largest entrywise modulus of `a - b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `h - h†`.
pub fn hermiticity_deviation(h: &ComplexMatrix) -> f64 {
    if !h.is_square() {
        return f64::INFINITY;
    }
    let n = h.nrows();
    let mut dev: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            dev = dev.max((h[(r, c)] - h[(c, r)].conj()).norm());
        }
    }
    dev
}

/// Largest entrywise deviation of `u u†` from the identity.
pub fn unitarity_deviation(u: &ComplexMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(&(u * u.adjoint()), &identity(u.nrows()))
}

/// `min_phase max |a - e^{iθ} b|`, with the phase fixed by the largest entry of `b`.
pub fn phase_aligned_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let (idx, pivot) = b.iter().enumerate().fold((0, 0.0), |acc, (i, z)| if z.norm() > acc.1 { (i, z.norm()) } else { acc });
    if pivot == 0.0 {
        return a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    }
    let ratio = a.as_slice()[idx] / b.as_slice()[idx];
    let theta = if ratio.norm() > 0.0 { ratio / C64::from(ratio.norm()) } else { C64::from(1.0) };
    max_abs_diff(a, &(b * theta))
}

pub fn trace(m: &ComplexMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Kronecker product with `(a ⊗ b)[i·b.rows + k][j·b.cols + l] = a[i][j]·b[k][l]`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Unit vector in `C^dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Normalizes `amplitudes`; fails on an empty or zero vector.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_vector(DVector::from_vec(amplitudes))
    }

    pub fn from_vector(v: DVector<C64>) -> Result<Self> {
        let norm = v.norm();
        if v.is_empty() || !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidState(format!("cannot normalize vector of norm {norm:e}")));
        }
        Ok(StateVector { amplitudes: v / C64::from(norm) })
    }

    /// Takes `amplitudes` as given, requiring unit norm within [`NORM_TOL`].
    pub fn unit(amplitudes: Vec<C64>) -> Result<Self> {
        let v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if v.is_empty() || (norm - 1.0).abs().is_nan() || (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("expected a unit vector, norm is {norm}")));
        }
        Ok(StateVector { amplitudes: v })
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[index] = C64::from(1.0);
        StateVector { amplitudes: v }
    }

    /// `|a⟩ ⊗ |b⟩`.
    pub fn product(a: &StateVector, b: &StateVector) -> Self {
        StateVector { amplitudes: a.amplitudes.kronecker(&b.amplitudes) }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn get(&self, i: usize) -> C64 {
        self.amplitudes[i]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `U|self⟩`. `U` is assumed unitary; the result is renormalized.
    pub fn apply(&self, u: &ComplexMatrix) -> Result<StateVector> {
        if u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch { expected: u.ncols(), actual: self.dim() });
        }
        StateVector::from_vector(u * &self.amplitudes)
    }

    pub fn projector(&self) -> DensityOperator {
        DensityOperator { matrix: &self.amplitudes * self.amplitudes.adjoint() }
    }

    /// Coefficient matrix `M[j][k] = ψ[j·d_B + k]`.
    pub fn coefficient_matrix(&self, (da, db): (usize, usize)) -> Result<ComplexMatrix> {
        if da * db != self.dim() {
            return Err(Error::DimensionMismatch { expected: da * db, actual: self.dim() });
        }
        Ok(ComplexMatrix::from_fn(da, db, |j, k| self.amplitudes[j * db + k]))
    }

    /// Local dimension `d` of a vector in `C^(d·d)`.
    pub fn square_local_dim(&self) -> Result<usize> {
        let d = (self.dim() as f64).sqrt().round() as usize;
        if d * d != self.dim() || d < 1 {
            return Err(Error::InvalidState(format!("dimension {} is not a perfect square", self.dim())));
        }
        Ok(d)
    }
}

/// Trace-one positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidState(format!("density operator must be square, got {:?}", matrix.shape())));
        }
        let dev = hermiticity_deviation(&matrix);
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = trace(&matrix);
        if (tr - C64::from(1.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let rho = DensityOperator { matrix };
        let min = rho.eigenvalues()[0];
        if min < -EIGEN_CLIP {
            return Err(Error::NotPositive(format!("minimum eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    /// Rescales a PSD matrix to unit trace.
    pub fn normalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = trace(&matrix).re;
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize trace {tr:e}")));
        }
        let mut m = matrix / C64::from(tr);
        symmetrize(&mut m);
        DensityOperator::new(m)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator { matrix: identity(d) / C64::from(d as f64) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        sorted_eigenvalues(&self.matrix)
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<DensityOperator> {
        if u.ncols() != self.dim() || !u.is_square() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: u.ncols() });
        }
        let mut m = u * &self.matrix * u.adjoint();
        symmetrize(&mut m);
        Ok(DensityOperator { matrix: m })
    }

    /// Probability-weighted mixture.
    pub fn mixture(weights: &[f64], states: &[DensityOperator]) -> Result<DensityOperator> {
        let first = states.first().ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        if weights.len() != states.len() {
            return Err(Error::DimensionMismatch { expected: states.len(), actual: weights.len() });
        }
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != first.dim() {
                return Err(Error::DimensionMismatch { expected: first.dim(), actual: s.dim() });
            }
            acc += &s.matrix * C64::from(*w);
        }
        DensityOperator::normalized(acc)
    }
}

fn symmetrize(m: &mut ComplexMatrix) {
    let h = (&*m + m.adjoint()) * C64::from(0.5);
    *m = h;
}

fn sorted_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut vals: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Partial trace of a general `(dA·dB)`-square matrix, keeping `keep`.
pub fn partial_trace_matrix(m: &ComplexMatrix, (da, db): (usize, usize), keep: Side) -> Result<ComplexMatrix> {
    let n = da * db;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: m.nrows() });
    }
    let out = match keep {
        Side::A => ComplexMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()),
        Side::B => ComplexMatrix::from_fn(db, db, |k, l| (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()),
    };
    Ok(out)
}

pub fn partial_trace(rho: &DensityOperator, dims: (usize, usize), keep: Side) -> Result<DensityOperator> {
    let mut m = partial_trace_matrix(&rho.matrix, dims, keep)?;
    symmetrize(&mut m);
    Ok(DensityOperator { matrix: m })
}

/// Reduced state of a pure bipartite vector, computed from its coefficient
/// matrix without forming the full projector.
pub fn reduced_state(psi: &StateVector, dims: (usize, usize), keep: Side) -> Result<DensityOperator> {
    let c = psi.coefficient_matrix(dims)?;
    let mut m = match keep {
        Side::A => &c * c.adjoint(),
        Side::B => c.transpose() * c.map(|z| z.conj()),
    };
    symmetrize(&mut m);
    Ok(DensityOperator { matrix: m })
}

/// Ascending eigenvalues with eigenvectors as the matching orthonormal columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<Eigensystem> {
    let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = hermiticity_deviation(h);
    if dev > 1e-10 * scale {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let mut sym = h.clone();
    symmetrize(&mut sym);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = h.nrows();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(Eigensystem { eigenvalues, eigenvectors })
}

fn entropy_term(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    rho.eigenvalues()
        .into_iter()
        .map(|l| if l < 0.0 && l > -EIGEN_CLIP { 0.0 } else { l })
        .map(entropy_term)
        .sum()
}

/// Shannon entropy in bits; `0·log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() {
        return Err(Error::InvalidProbabilities("empty list".into()));
    }
    if let Some(x) = p.iter().find(|&&x| x < -1e-12 || !x.is_finite()) {
        return Err(Error::InvalidProbabilities(format!("entry {x} is negative or not finite")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
    }
    Ok(p.iter().map(|&x| entropy_term(x.max(0.0))).sum())
}
