//! Condition R as a homogeneous real linear system on Hermitian operators.
//!
//! The unknown is an effect `X = K†K` (trace left free) written in
//! [`HermitianBasis`] coordinates. Orthogonality preservation contributes the
//! rows `⟨ψ_i| X⊗I |ψ_j⟩ = 0` (`i < j`, real and imaginary parts). The
//! maximal-mixedness requirement on the other party's average post-measurement
//! state contributes `Σ_i W_i X̄ W_i† − Tr(X)·I = 0`, where `W_i` is the Schmidt
//! unitary of `ψ_i` and `X̄` the entrywise conjugate. `X = I` always solves
//! both, so the verdict asks only whether the solution space is larger than
//! `span{I}`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bell::{mes_deviation, schmidt_unitary, BellSet, MES_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c64, hermitian_eigensystem, identity, trace, ComplexMatrix, Side, StateVector, C64};

/// Default relative rank cut for [`solution_space`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Pairwise orthogonality tolerance required of input ensembles.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Real basis of the `d²`-dimensional space of Hermitian `d×d` matrices:
/// `E_jj` for each `j`, then for `j < k` the pair `E_jk + E_kj`, `i(E_jk − E_kj)`.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    d: usize,
    elements: Vec<ComplexMatrix>,
    /// `(j, k, antisymmetric)` per element.
    layout: Vec<(usize, usize, bool)>,
}

impl HermitianBasis {
    pub fn new(d: usize) -> Self {
        let mut layout: Vec<(usize, usize, bool)> = (0..d).map(|j| (j, j, false)).collect();
        for j in 0..d {
            for k in j + 1..d {
                layout.push((j, k, false));
                layout.push((j, k, true));
            }
        }
        let elements = layout
            .iter()
            .map(|&(j, k, anti)| {
                let mut e = ComplexMatrix::zeros(d, d);
                if j == k {
                    e[(j, j)] = c64(1.0, 0.0);
                } else if anti {
                    e[(j, k)] = c64(0.0, 1.0);
                    e[(k, j)] = c64(0.0, -1.0);
                } else {
                    e[(j, k)] = c64(1.0, 0.0);
                    e[(k, j)] = c64(1.0, 0.0);
                }
                e
            })
            .collect();
        HermitianBasis { d, elements, layout }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// `(j, k, antisymmetric)` for element `e`.
    pub fn layout(&self, e: usize) -> (usize, usize, bool) {
        self.layout[e]
    }

    /// Position of the `(j, k)` element, symmetric or antisymmetric part.
    pub fn position(&self, j: usize, k: usize, antisymmetric: bool) -> Option<usize> {
        let (j, k) = if j <= k { (j, k) } else { (k, j) };
        self.layout.iter().position(|&l| l == (j, k, antisymmetric && j != k))
    }

    /// `sqrt(Tr(E_e²))`: 1 on the diagonal, `√2` off it.
    pub fn norm(&self, e: usize) -> f64 {
        let (j, k, _) = self.layout[e];
        if j == k {
            1.0
        } else {
            std::f64::consts::SQRT_2
        }
    }

    /// Coordinates of the Hermitian part of `x`.
    pub fn coordinates(&self, x: &ComplexMatrix) -> Vec<f64> {
        self.layout
            .iter()
            .map(|&(j, k, anti)| {
                let z = (x[(j, k)] + x[(k, j)].conj()) * 0.5;
                if j == k {
                    z.re
                } else if anti {
                    z.im
                } else {
                    z.re
                }
            })
            .collect()
    }

    pub fn reconstruct(&self, coords: &[f64]) -> ComplexMatrix {
        assert_eq!(coords.len(), self.len(), "coordinate count");
        let mut x = ComplexMatrix::zeros(self.d, self.d);
        for (c, e) in coords.iter().zip(&self.elements) {
            x += e * C64::from(*c);
        }
        x
    }

    /// Coordinates of `X̄` given those of `X`.
    pub fn conjugate_coordinates(&self, coords: &[f64]) -> Vec<f64> {
        coords.iter().zip(&self.layout).map(|(&c, &(_, _, anti))| if anti { -c } else { c }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Part {
    Re,
    Im,
}

/// Provenance of one constraint row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowLabel {
    Orthogonality { i: usize, j: usize, part: Part, side: Side },
    Mixedness { row: usize, col: usize, part: Part, side: Side },
}

/// Real linear functionals on Hermitian coordinates, one per row.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    d: usize,
    rows: Vec<Vec<f64>>,
    labels: Vec<RowLabel>,
}

impl ConstraintSystem {
    pub fn empty(d: usize) -> Self {
        ConstraintSystem { d, rows: Vec::new(), labels: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>, label: RowLabel) -> Result<()> {
        if row.len() != self.d * self.d {
            return Err(Error::DimensionMismatch { expected: self.d * self.d, actual: row.len() });
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidState("constraint row has non-finite entries".into()));
        }
        self.rows.push(row);
        self.labels.push(label);
        Ok(())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stacked(&self, other: &ConstraintSystem) -> Result<ConstraintSystem> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d, actual: other.d });
        }
        let mut out = self.clone();
        out.rows.extend(other.rows.iter().cloned());
        out.labels.extend(other.labels.iter().copied());
        Ok(out)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[RowLabel] {
        &self.labels
    }

    /// Row-by-row value of each functional at `x`.
    pub fn residuals(&self, x: &ComplexMatrix) -> Vec<f64> {
        let coords = HermitianBasis::new(self.d).coordinates(x);
        self.rows.iter().map(|r| r.iter().zip(&coords).map(|(a, b)| a * b).sum()).collect()
    }
}

/// Common local dimension of an ensemble of bipartite states in `C^(d·d)`.
fn ensemble_dim(states: &[StateVector]) -> Result<usize> {
    let first = states.first().ok_or_else(|| Error::InvalidState("empty ensemble".into()))?;
    let d = first.square_local_dim()?;
    if let Some(s) = states.iter().find(|s| s.dim() != first.dim()) {
        return Err(Error::DimensionMismatch { expected: first.dim(), actual: s.dim() });
    }
    Ok(d)
}

fn check_orthogonal(states: &[StateVector]) -> Result<()> {
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let overlap = states[i].inner(&states[j]).norm();
            if overlap > ORTHOGONALITY_TOL {
                return Err(Error::NotOrthogonal { i, j, overlap });
            }
        }
    }
    Ok(())
}

/// Orthogonality-preservation rows for an effect applied on `measuring_side`.
pub fn op_constraints(states: &[StateVector], measuring_side: Side) -> Result<ConstraintSystem> {
    let d = ensemble_dim(states)?;
    check_orthogonal(states)?;
    let basis = HermitianBasis::new(d);
    let coeffs: Vec<ComplexMatrix> = states.iter().map(|s| s.coefficient_matrix((d, d))).collect::<Result<_>>()?;
    let mut cs = ConstraintSystem::empty(d);
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            // ⟨ψ_i|E⊗I|ψ_j⟩ = Tr(E C_j C_i†),  ⟨ψ_i|I⊗E|ψ_j⟩ = Tr(E C_jᵀ C̄_i)
            let g = match measuring_side {
                Side::A => &coeffs[j] * coeffs[i].adjoint(),
                Side::B => coeffs[j].transpose() * coeffs[i].map(|z| z.conj()),
            };
            let values: Vec<C64> = basis.elements().iter().map(|e| trace(&(e * &g))).collect();
            cs.push(values.iter().map(|z| z.re).collect(), RowLabel::Orthogonality { i, j, part: Part::Re, side: measuring_side })?;
            cs.push(values.iter().map(|z| z.im).collect(), RowLabel::Orthogonality { i, j, part: Part::Im, side: measuring_side })?;
        }
    }
    Ok(cs)
}

/// Maximal-mixedness rows for the other party's average post-measurement
/// state. Defined only for `m = d` maximally entangled states.
pub fn mixedness_constraints(states: &[StateVector], measuring_side: Side) -> Result<ConstraintSystem> {
    let d = ensemble_dim(states)?;
    if states.len() != d {
        return Err(Error::MixednessNeedsMEqualsD { m: states.len(), d });
    }
    let unitaries: Vec<ComplexMatrix> = states.iter().map(|s| schmidt_unitary(s, measuring_side)).collect::<Result<_>>()?;
    let basis = HermitianBasis::new(d);
    let images: Vec<ComplexMatrix> = basis
        .elements()
        .iter()
        .map(|e| {
            let conj = e.map(|z| z.conj());
            let sum: ComplexMatrix = unitaries.iter().map(|w| w * &conj * w.adjoint()).fold(ComplexMatrix::zeros(d, d), |a, b| a + b);
            sum - identity(d) * trace(e)
        })
        .collect();
    let mut cs = ConstraintSystem::empty(d);
    for r in 0..d {
        for c in r..d {
            cs.push(images.iter().map(|m| m[(r, c)].re).collect(), RowLabel::Mixedness { row: r, col: c, part: Part::Re, side: measuring_side })?;
            if r != c {
                cs.push(images.iter().map(|m| m[(r, c)].im).collect(), RowLabel::Mixedness { row: r, col: c, part: Part::Im, side: measuring_side })?;
            }
        }
    }
    Ok(cs)
}

/// Orthonormal (trace inner product) basis of the Hermitian solutions of a
/// [`ConstraintSystem`].
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    d: usize,
    basis: Vec<ComplexMatrix>,
    singular_values: Vec<f64>,
}

impl SolutionSpace {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Descending singular values of the column-normalized constraint matrix,
    /// padded with zeros to `d²` entries.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// True when the space is `span{I}`.
    pub fn is_trivial(&self) -> bool {
        self.dimension() == 1 && self.contains_identity(1e-9)
    }

    /// Whether `I` lies in the span, measured by its projection residual.
    pub fn contains_identity(&self, tol: f64) -> bool {
        self.residual_of(&identity(self.d)) < tol
    }

    /// Trace-norm distance from `x` to its projection on the span.
    pub fn residual_of(&self, x: &ComplexMatrix) -> f64 {
        let mut proj = ComplexMatrix::zeros(self.d, self.d);
        for b in &self.basis {
            proj += b * trace(&(b.adjoint() * x));
        }
        (x - proj).norm()
    }

    /// Unit-norm element orthogonal to `I`, if the space has one.
    pub fn non_identity_element(&self) -> Option<ComplexMatrix> {
        let id = identity(self.d) / C64::from((self.d as f64).sqrt());
        self.basis
            .iter()
            .map(|b| b - &id * trace(&(&id * b)))
            .map(|x| {
                let n = x.norm();
                (n, x)
            })
            .filter(|(n, _)| *n > 1e-6)
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(n, x)| x / C64::from(n))
    }
}

/// Nullspace by SVD with the rank cut at `tol_rel · σ_max`.
pub fn solution_space(cs: &ConstraintSystem, tol_rel: f64) -> SolutionSpace {
    let d = cs.d();
    let n = d * d;
    let basis = HermitianBasis::new(d);
    // Work in trace-orthonormal coordinates y_e = c_e·‖E_e‖.
    let rows = cs.len().max(n);
    let mut a = DMatrix::<f64>::zeros(rows, n);
    for (r, row) in cs.rows().iter().enumerate() {
        for e in 0..n {
            a[(r, e)] = row[e] / basis.norm(e);
        }
    }
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let cut = tol_rel * singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values.iter().filter(|&&s| s > cut && s > 0.0).count();
    let null: Vec<ComplexMatrix> = order[rank..]
        .iter()
        .map(|&i| {
            let y = v_t.row(i);
            let coords: Vec<f64> = (0..n).map(|e| y[e] / basis.norm(e)).collect();
            basis.reconstruct(&coords)
        })
        .collect();
    SolutionSpace { d, basis: null, singular_values }
}

/// Nullspace dimensions for one measuring side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideDims {
    /// Orthogonality preservation alone.
    pub op_only: usize,
    /// Orthogonality preservation plus maximal mixedness.
    pub op_plus_r: usize,
    /// Maximal mixedness alone.
    pub r_only: usize,
}

impl SideDims {
    /// Whether the mixedness rows alone already force orthogonality
    /// preservation (equal dimensions, since the joint space is a subspace).
    pub fn mixedness_implies_op(&self) -> bool {
        self.r_only == self.op_plus_r
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// Only `K†K ∝ I` survives for both starting parties: LOCC-indistinguishable.
    FailsR,
    /// A non-trivial effect survives for at least one starting party.
    PassesR,
    /// More states than the local dimension.
    TriviallyIndistinguishable,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Outcome::FailsR => "FailsR",
            Outcome::PassesR => "PassesR",
            Outcome::TriviallyIndistinguishable => "TriviallyIndistinguishable",
        })
    }
}

/// Solution spaces for one measuring side.
#[derive(Debug, Clone)]
pub struct SideAnalysis {
    pub side: Side,
    pub op_only: SolutionSpace,
    pub op_plus_r: SolutionSpace,
    pub r_only: SolutionSpace,
}

impl SideAnalysis {
    pub fn dims(&self) -> SideDims {
        SideDims { op_only: self.op_only.dimension(), op_plus_r: self.op_plus_r.dimension(), r_only: self.r_only.dimension() }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub outcome: Outcome,
    pub alice: Option<SideAnalysis>,
    pub bob: Option<SideAnalysis>,
    /// Traceless, unit-norm joint solution with the side it acts on.
    pub witness: Option<(Side, ComplexMatrix)>,
}

impl Verdict {
    pub fn alice_dims(&self) -> Option<SideDims> {
        self.alice.as_ref().map(SideAnalysis::dims)
    }

    pub fn bob_dims(&self) -> Option<SideDims> {
        self.bob.as_ref().map(SideAnalysis::dims)
    }

    /// Alice-start and Bob-start joint dimensions agree (vacuous when absent).
    pub fn sides_agree(&self) -> bool {
        match (self.alice_dims(), self.bob_dims()) {
            (Some(a), Some(b)) => a.op_plus_r == b.op_plus_r,
            _ => true,
        }
    }
}

pub fn analyze_side(states: &[StateVector], side: Side, tol_rel: f64) -> Result<SideAnalysis> {
    let op = op_constraints(states, side)?;
    let mix = mixedness_constraints(states, side)?;
    Ok(SideAnalysis {
        side,
        op_only: solution_space(&op, tol_rel),
        op_plus_r: solution_space(&op.stacked(&mix)?, tol_rel),
        r_only: solution_space(&mix, tol_rel),
    })
}

/// Condition R on pairwise orthogonal maximally entangled states in `C^(d·d)`.
pub fn condition_r_verdict(states: &[StateVector], tol_rel: f64) -> Result<Verdict> {
    let d = ensemble_dim(states)?;
    check_orthogonal(states)?;
    for s in states {
        let dev = mes_deviation(s)?;
        if dev > MES_TOL {
            return Err(Error::NotMaximallyEntangled { deviation: dev });
        }
    }
    let m = states.len();
    if m > d {
        return Ok(Verdict { outcome: Outcome::TriviallyIndistinguishable, alice: None, bob: None, witness: None });
    }
    if m < d {
        return Err(Error::Unsupported(format!("condition R for m = {m} < d = {d} has no linear recipe")));
    }
    let alice = analyze_side(states, Side::A, tol_rel)?;
    let bob = analyze_side(states, Side::B, tol_rel)?;
    let witness = alice
        .op_plus_r
        .non_identity_element()
        .map(|x| (Side::A, x))
        .or_else(|| bob.op_plus_r.non_identity_element().map(|x| (Side::B, x)));
    let outcome = if alice.op_plus_r.dimension() == 1 && bob.op_plus_r.dimension() == 1 { Outcome::FailsR } else { Outcome::PassesR };
    Ok(Verdict { outcome, alice: Some(alice), bob: Some(bob), witness })
}

pub fn condition_r_for_set(set: &BellSet, tol_rel: f64) -> Result<Verdict> {
    condition_r_verdict(&set.states(), tol_rel)
}

/// Interval `[lo, hi]` of `ε` for which `I + εX` stays positive semidefinite.
pub fn psd_perturbation_range(x: &ComplexMatrix) -> Result<(f64, f64)> {
    let e = hermitian_eigensystem(x)?;
    let (min, max) = (e.eigenvalues[0], *e.eigenvalues.last().expect("non-empty"));
    let hi = if min < 0.0 { -1.0 / min } else { f64::INFINITY };
    let lo = if max > 0.0 { -1.0 / max } else { f64::NEG_INFINITY };
    Ok((lo, hi))
}

/// Effect `I + εX` scaled to the midpoint of the positive range, usable as
/// one element of a two-outcome measurement `{E, 2I − E}/2`.
pub fn witness_effect(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (_, hi) = psd_perturbation_range(x)?;
    let eps = if hi.is_finite() { 0.5 * hi } else { 0.5 };
    Ok(identity(x.nrows()) + x * C64::from(eps))
}

/// Coordinates of `x` as a column vector; mostly useful in tests.
pub fn coordinate_vector(x: &ComplexMatrix) -> DVector<f64> {
    DVector::from_vec(HermitianBasis::new(x.nrows()).coordinates(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{bell_state, BellIndex};
    use crate::linalg::{hermiticity_deviation, max_abs_diff};

    fn ens2() -> Vec<StateVector> {
        BellSet::from_pairs(4, &[(0, 0), (1, 1), (3, 1), (3, 2)]).unwrap().states()
    }

    #[test]
    fn hermitian_basis_roundtrip_and_orthogonality() {
        let b = HermitianBasis::new(4);
        assert_eq!(b.len(), 16);
        for (i, x) in b.elements().iter().enumerate() {
            assert!(hermiticity_deviation(x) < 1e-15);
            for (j, y) in b.elements().iter().enumerate() {
                let ip = trace(&(x * y));
                let expect = if i == j { b.norm(i).powi(2) } else { 0.0 };
                assert!((ip - c64(expect, 0.0)).norm() < 1e-14);
            }
        }
        let coords: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = b.reconstruct(&coords);
        assert!(b.coordinates(&x).iter().zip(&coords).all(|(a, c)| (a - c).abs() < 1e-12));
        let conj = b.reconstruct(&b.conjugate_coordinates(&coords));
        assert!(max_abs_diff(&conj, &x.map(|z| z.conj())) < 1e-15);
    }

    #[test]
    fn identity_annihilates_op_and_mixedness_rows() {
        let states = ens2();
        for side in [Side::A, Side::B] {
            for cs in [op_constraints(&states, side).unwrap(), mixedness_constraints(&states, side).unwrap()] {
                assert!(cs.residuals(&identity(4)).iter().all(|r| r.abs() < 1e-12));
            }
        }
    }

    #[test]
    fn op_rejects_non_orthogonal() {
        let a = bell_state(2, BellIndex::new(0, 0)).unwrap();
        assert!(matches!(op_constraints(&[a.clone(), a], Side::A), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn mixedness_requires_m_equals_d() {
        let states = BellSet::from_pairs(4, &[(0, 0), (1, 1), (3, 1)]).unwrap().states();
        assert!(matches!(mixedness_constraints(&states, Side::A), Err(Error::MixednessNeedsMEqualsD { m: 3, d: 4 })));
    }

    #[test]
    fn mixedness_rejects_non_mes() {
        let mut states = BellSet::from_pairs(2, &[(0, 0)]).unwrap().states();
        states.push(StateVector::basis(4, 1));
        assert!(matches!(mixedness_constraints(&states, Side::A), Err(Error::NotMaximallyEntangled { .. })));
    }

    #[test]
    fn ens2_op_only_space() {
        let states = ens2();
        let op = op_constraints(&states, Side::A).unwrap();
        assert_eq!(op.len(), 12);
        let sol = solution_space(&op, DEFAULT_RANK_TOL);
        assert_eq!(sol.dimension(), 5);
        for x in sol.basis() {
            for (j, k) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
                assert!(x[(j, k)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn ens2_joint_space_is_identity() {
        let states = ens2();
        for side in [Side::A, Side::B] {
            let a = analyze_side(&states, side, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(a.op_plus_r.dimension(), 1);
            assert!(a.op_plus_r.is_trivial());
            assert_eq!(a.r_only.dimension(), 2);
        }
    }

    #[test]
    fn solution_space_trivial_systems() {
        let empty = ConstraintSystem::empty(4);
        let full = solution_space(&empty, DEFAULT_RANK_TOL);
        assert_eq!(full.dimension(), 16);
        // every traceless basis direction as a row
        let b = HermitianBasis::new(3);
        let mut cs = ConstraintSystem::empty(3);
        for e in 1..9 {
            let mut row = vec![0.0; 9];
            if e < 3 {
                row[0] = 1.0;
                row[e] = -1.0;
            } else {
                row[e] = 1.0;
            }
            cs.push(row, RowLabel::Mixedness { row: 0, col: 0, part: Part::Re, side: Side::A }).unwrap();
        }
        let sol = solution_space(&cs, DEFAULT_RANK_TOL);
        assert_eq!(sol.dimension(), 1);
        let x = &sol.basis()[0];
        let scaled = x / x[(0, 0)];
        assert!(max_abs_diff(&scaled, &identity(3)) < 1e-12);
        assert_eq!(b.len(), 9);
    }

    #[test]
    fn solution_basis_is_orthonormal_and_annihilates_rows() {
        let states = BellSet::from_pairs(4, &[(0, 0), (0, 1), (0, 2), (0, 3)]).unwrap().states();
        for side in [Side::A, Side::B] {
            let a = analyze_side(&states, side, DEFAULT_RANK_TOL).unwrap();
            let cs = op_constraints(&states, side).unwrap().stacked(&mixedness_constraints(&states, side).unwrap()).unwrap();
            let basis = a.op_plus_r.basis();
            assert!(basis.len() > 1);
            for (i, x) in basis.iter().enumerate() {
                assert!(hermiticity_deviation(x) < 1e-10);
                assert!(cs.residuals(x).iter().all(|r| r.abs() < 1e-9 * x.norm()));
                for (j, y) in basis.iter().enumerate() {
                    let ip = trace(&(x.adjoint() * y));
                    assert!((ip - c64(if i == j { 1.0 } else { 0.0 }, 0.0)).norm() < 1e-10);
                }
            }
            assert!(a.op_plus_r.contains_identity(1e-9));
        }
    }

    #[test]
    fn verdict_examples() {
        let fails = condition_r_verdict(&ens2(), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(fails.outcome, Outcome::FailsR);
        assert!(fails.witness.is_none());
        assert_eq!(fails.alice_dims().unwrap(), SideDims { op_only: 5, op_plus_r: 1, r_only: 2 });

        let set0 = BellSet::from_pairs(4, &[(0, 0), (0, 1), (0, 2), (0, 3)]).unwrap();
        let passes = condition_r_for_set(&set0, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(passes.outcome, Outcome::PassesR);
        let (side, w) = passes.witness.clone().unwrap();
        assert_eq!(side, Side::A);
        assert!(trace(&w).norm() < 1e-9);
        let (lo, hi) = psd_perturbation_range(&w).unwrap();
        assert!(lo < 0.0 && hi > 0.0);
        let effect = witness_effect(&w).unwrap();
        assert!(hermitian_eigensystem(&effect).unwrap().eigenvalues[0] >= -1e-12);

        let five = BellSet::from_pairs(4, &[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)]).unwrap();
        assert_eq!(condition_r_for_set(&five, DEFAULT_RANK_TOL).unwrap().outcome, Outcome::TriviallyIndistinguishable);

        let three = BellSet::from_pairs(4, &[(0, 0), (0, 1), (0, 2)]).unwrap();
        assert!(matches!(condition_r_for_set(&three, DEFAULT_RANK_TOL), Err(Error::Unsupported(_))));
    }
}
