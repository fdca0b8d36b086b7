//! One-way LOCC protocols in which Alice measures in a fixed orthonormal basis
//! and Bob then discriminates orthogonal residual states.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bell::{equivalence_classes, shift_unitary, BellIndex, BellSet};
use crate::constraints::{condition_r_for_set, Outcome, SideDims};
use crate::error::{Error, Result};
use crate::linalg::{c64, phase, StateVector, C64};

/// Probability below which an outcome is treated as not occurring.
pub const REACH_TOL: f64 = 1e-12;
/// Default tolerance on Bob-residual overlaps.
pub const VERIFY_TOL: f64 = 1e-9;
/// Gram-matrix tolerance for user-supplied bases.
pub const BASIS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Provenance {
    Set0Standard,
    Set0Fourier,
    Set1,
    Set2,
    Set3,
    Set4,
    Set5,
    Set6,
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Alice's rank-one projective measurement `{|u_α⟩⟨u_α|}`.
#[derive(Debug, Clone)]
pub struct OneWayProtocol {
    d: usize,
    alice_basis: Vec<StateVector>,
    provenance: Provenance,
    translation: BellIndex,
}

fn gram_deviation(basis: &[StateVector]) -> f64 {
    let mut dev: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { c64(1.0, 0.0) } else { C64::from(0.0) };
            dev = dev.max((a.inner(b) - target).norm());
        }
    }
    dev
}

impl OneWayProtocol {
    pub fn new(alice_basis: Vec<StateVector>, provenance: Provenance) -> Result<Self> {
        Self::with_tolerance(alice_basis, provenance, BASIS_TOL)
    }

    fn with_tolerance(alice_basis: Vec<StateVector>, provenance: Provenance, tol: f64) -> Result<Self> {
        let d = alice_basis.len();
        if d < 2 {
            return Err(Error::InvalidState("measurement basis needs at least two vectors".into()));
        }
        if let Some(v) = alice_basis.iter().find(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, actual: v.dim() });
        }
        let deviation = gram_deviation(&alice_basis);
        if deviation > tol {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(OneWayProtocol { d, alice_basis, provenance, translation: BellIndex::new(0, 0) })
    }

    /// Basis from rows of amplitudes, each row scaled by `scale`.
    fn from_rows(rows: &[[C64; 4]], scale: f64, provenance: Provenance) -> Result<Self> {
        let basis = rows.iter().map(|r| StateVector::unit(r.iter().map(|&z| z * scale).collect())).collect::<Result<_>>()?;
        Self::with_tolerance(basis, provenance, 1e-12)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alice_basis(&self) -> &[StateVector] {
        &self.alice_basis
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn translation(&self) -> BellIndex {
        self.translation
    }

    /// The protocol for the translate `S + Δ` of any set this one verifies:
    /// every basis vector is moved by the Alice-side shift for `Δ`.
    pub fn transport(&self, delta: BellIndex) -> Result<OneWayProtocol> {
        let u = shift_unitary(self.d, delta)?;
        let alice_basis = self.alice_basis.iter().map(|v| v.apply(&u)).collect::<Result<_>>()?;
        Ok(OneWayProtocol {
            d: self.d,
            alice_basis,
            provenance: self.provenance,
            translation: self.translation.translate(delta, self.d),
        })
    }

    /// Compact description, e.g. `Set1@(2,3)`.
    pub fn summary(&self) -> ProtocolSummary {
        ProtocolSummary { provenance: self.provenance, translation: self.translation }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProtocolSummary {
    pub provenance: Provenance,
    pub translation: BellIndex,
}

impl fmt::Display for ProtocolSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@({},{})", self.provenance, self.translation.n, self.translation.m)
    }
}

/// One state's branch after Alice observes a given outcome.
#[derive(Debug, Clone)]
pub struct Residual {
    pub probability: f64,
    /// Normalized Bob state, absent when the branch is unreachable.
    pub state: Option<StateVector>,
}

/// `result[α][i]`: state `i` after Alice obtains `u_α`.
pub fn bob_residuals(states: &[StateVector], alice_basis: &[StateVector]) -> Result<Vec<Vec<Residual>>> {
    let d = alice_basis.len();
    let deviation = gram_deviation(alice_basis);
    if deviation > BASIS_TOL {
        return Err(Error::NotOrthonormal { deviation });
    }
    if let Some(s) = states.iter().find(|s| s.dim() != d * d) {
        return Err(Error::DimensionMismatch { expected: d * d, actual: s.dim() });
    }
    alice_basis
        .iter()
        .map(|u| {
            states
                .iter()
                .map(|psi| {
                    let r: Vec<C64> = (0..d).map(|k| (0..d).map(|j| u.get(j).conj() * psi.get(j * d + k)).sum()).collect();
                    let probability: f64 = r.iter().map(|z| z.norm_sqr()).sum();
                    let state = if probability > REACH_TOL { Some(StateVector::new(r)?) } else { None };
                    Ok(Residual { probability, state })
                })
                .collect()
        })
        .collect()
}

/// Largest overlap between surviving Bob residuals over all outcomes.
pub fn worst_overlap(states: &[StateVector], protocol: &OneWayProtocol) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for outcome in bob_residuals(states, protocol.alice_basis())? {
        let alive: Vec<&StateVector> = outcome.iter().filter_map(|r| r.state.as_ref()).collect();
        for i in 0..alive.len() {
            for j in i + 1..alive.len() {
                worst = worst.max(alive[i].inner(alive[j]).norm());
            }
        }
    }
    Ok(worst)
}

/// Whether Bob can identify the state after every outcome of Alice's
/// measurement. Unreachable branches drop out; the survivors must be
/// pairwise orthogonal within `tol`.
pub fn verify_protocol(states: &[StateVector], protocol: &OneWayProtocol, tol: f64) -> Result<bool> {
    Ok(worst_overlap(states, protocol)? <= tol)
}

fn c(re: f64, im: f64) -> C64 {
    c64(re, im)
}

/// Standard and Fourier bases, available in every dimension.
pub fn generic_bases(d: usize) -> Result<Vec<OneWayProtocol>> {
    let standard = (0..d).map(|k| StateVector::basis(d, k)).collect();
    let scale = 1.0 / (d as f64).sqrt();
    let fourier = (0..d)
        .map(|l| {
            StateVector::unit((0..d).map(|j| phase(2.0 * std::f64::consts::PI * ((l * j) % d) as f64 / d as f64) * scale).collect())
        })
        .collect::<Result<_>>()?;
    Ok(vec![
        OneWayProtocol::with_tolerance(standard, Provenance::Set0Standard, 1e-12)?,
        OneWayProtocol::with_tolerance(fourier, Provenance::Set0Fourier, 1e-12)?,
    ])
}

/// The eight `d = 4` measurement bases, in search order.
pub fn catalog_bases(d: usize) -> Result<Vec<OneWayProtocol>> {
    if d != 4 {
        return Err(Error::Unsupported(format!("the basis catalog exists only for d = 4, not d = {d}")));
    }
    let e = phase(std::f64::consts::FRAC_PI_4);
    let e3 = phase(3.0 * std::f64::consts::FRAC_PI_4);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let zero = C64::from(0.0);
    let half = 0.5;
    let r2 = std::f64::consts::FRAC_1_SQRT_2;

    let mut out = generic_bases(4)?;
    out.push(OneWayProtocol::from_rows(
        &[[-e, one, e, one], [e, one, -e, one], [e3, -one, e3, one], [e.conj(), -one, e.conj(), one]],
        half,
        Provenance::Set1,
    )?);
    out.push(OneWayProtocol::from_rows(
        &[[-i, zero, one, zero], [i, zero, one, zero], [zero, -i, zero, one], [zero, i, zero, one]],
        r2,
        Provenance::Set2,
    )?);
    out.push(OneWayProtocol::from_rows(
        &[[-e3, one, e3, one], [e3, one, -e3, one], [e, -one, e, one], [-e, -one, -e, one]],
        half,
        Provenance::Set3,
    )?);
    out.push(OneWayProtocol::from_rows(
        &[[one, -one, -one, one], [-one, -one, one, one], [one, i, one, i], [one, -i, one, -i]],
        half,
        Provenance::Set4,
    )?);
    out.push(OneWayProtocol::from_rows(
        &[[-one, zero, one, zero], [zero, one, zero, one], [zero, -one, zero, one], [one, zero, one, zero]],
        r2,
        Provenance::Set5,
    )?);
    out.push(OneWayProtocol::from_rows(
        &[[-i, -i, one, one], [i, i, one, one], [i, -i, -one, one], [-i, i, -one, one]],
        half,
        Provenance::Set6,
    )?);
    Ok(out)
}

/// Candidate bases for dimension `d`: the full catalog at `d = 4`, otherwise
/// the standard and Fourier bases.
pub fn candidate_bases(d: usize) -> Result<Vec<OneWayProtocol>> {
    if d == 4 {
        catalog_bases(d)
    } else {
        generic_bases(d)
    }
}

/// First verified candidate, trying each base protocol at every translation
/// in lexicographic order before moving to the next base.
pub fn find_protocol_among(set: &BellSet, bases: &[OneWayProtocol], tol: f64) -> Result<Option<OneWayProtocol>> {
    let states = set.states();
    let d = set.d();
    for base in bases.iter().filter(|b| b.d() == d) {
        for o in 0..d * d {
            let candidate = base.transport(BellIndex::from_ordinal(o, d))?;
            if verify_protocol(&states, &candidate, tol)? {
                return Ok(Some(candidate));
            }
        }
    }
    Ok(None)
}

pub fn find_protocol(set: &BellSet) -> Result<Option<OneWayProtocol>> {
    find_protocol_among(set, &candidate_bases(set.d())?, VERIFY_TOL)
}

/// Serializable result for one equivalence class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub representative: BellSet,
    pub member_count: usize,
    pub verdict: Outcome,
    pub alice: Option<SideDims>,
    pub bob: Option<SideDims>,
    pub protocol: Option<ProtocolSummary>,
}

impl ClassReport {
    pub fn analyze(representative: BellSet, member_count: usize, bases: &[OneWayProtocol], tol_rel: f64) -> Result<ClassReport> {
        let verdict = condition_r_for_set(&representative, tol_rel)?;
        let protocol = match verdict.outcome {
            Outcome::PassesR => find_protocol_among(&representative, bases, VERIFY_TOL)?.map(|p| p.summary()),
            _ => None,
        };
        Ok(ClassReport {
            alice: verdict.alice_dims(),
            bob: verdict.bob_dims(),
            verdict: verdict.outcome,
            representative,
            member_count,
            protocol,
        })
    }
}

/// Aggregate view of a classification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub fails_r: usize,
    pub passes_r: usize,
    pub passes_r_with_protocol: usize,
    pub trivially_indistinguishable: usize,
}

impl Tally {
    pub fn of(reports: &[ClassReport]) -> Tally {
        let mut t = Tally::default();
        for r in reports {
            match r.verdict {
                Outcome::FailsR => t.fails_r += 1,
                Outcome::PassesR => {
                    t.passes_r += 1;
                    t.passes_r_with_protocol += usize::from(r.protocol.is_some());
                }
                Outcome::TriviallyIndistinguishable => t.trivially_indistinguishable += 1,
            }
        }
        t
    }
}

/// One report per equivalence class, ordered by representative. Work runs on
/// the current rayon pool; the order never depends on it.
pub fn classify_all(d: usize, k: usize, tol_rel: f64) -> Result<Vec<ClassReport>> {
    if (d, k) != (4, 4) {
        return Err(Error::Unsupported(format!("classification is defined for d = 4, k = 4, not d = {d}, k = {k}")));
    }
    let bases = catalog_bases(d)?;
    let classes = equivalence_classes(d, k);
    classes
        .into_par_iter()
        .map(|c| {
            let size = c.size();
            ClassReport::analyze(c.representative, size, &bases, tol_rel)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::DEFAULT_RANK_TOL;
    use crate::linalg::phase_aligned_diff;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(pairs: &[(usize, usize)]) -> BellSet {
        BellSet::from_pairs(4, pairs).unwrap()
    }

    fn state_close(a: &StateVector, b: &StateVector) -> bool {
        let col = |s: &StateVector| nalgebra::DMatrix::from_column_slice(s.dim(), 1, s.amplitudes().as_slice());
        phase_aligned_diff(&col(a), &col(b)) < 1e-12
    }

    #[test]
    fn catalog_is_eight_orthonormal_bases() {
        let cat = catalog_bases(4).unwrap();
        assert_eq!(cat.len(), 8);
        for p in &cat {
            assert!(gram_deviation(p.alice_basis()) < 1e-12);
        }
        assert!(catalog_bases(3).is_err());
        let set5 = &cat[6];
        assert_eq!(set5.provenance(), Provenance::Set5);
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let expect = StateVector::unit(vec![c(-r2, 0.0), c(0.0, 0.0), c(r2, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(state_close(&set5.alice_basis()[0], &expect));
    }

    #[test]
    fn printed_set4_vectors_are_not_a_basis_that_works() {
        // (1,-1,-1,1), (-1,-1,1,1), (-1,1,-1,1), i(1,1,1,1) — as printed
        let one = c(1.0, 0.0);
        let i = c(0.0, 1.0);
        let rows = [[one, -one, -one, one], [-one, -one, one, one], [-one, one, -one, one], [i, i, i, i]];
        let p = OneWayProtocol::from_rows(&rows, 0.5, Provenance::Custom).unwrap();
        let s = set(&[(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert!(find_protocol_among(&s, &[p], VERIFY_TOL).unwrap().is_none());
        let corrected = &catalog_bases(4).unwrap()[5];
        assert!(verify_protocol(&s.states(), corrected, VERIFY_TOL).unwrap());
    }

    #[test]
    fn standard_basis_residuals_on_column_family() {
        let s = set(&[(2, 0), (1, 1), (3, 2), (0, 3)]);
        let std = &generic_bases(4).unwrap()[0];
        let res = bob_residuals(&s.states(), std.alice_basis()).unwrap();
        for (k, outcome) in res.iter().enumerate() {
            for (i, r) in outcome.iter().enumerate() {
                assert!((r.probability - 0.25).abs() < 1e-12);
                let m = s.indices()[i].m;
                let expect = StateVector::basis(4, (k + m) % 4);
                assert!(state_close(r.state.as_ref().unwrap(), &expect));
            }
        }
        assert!(verify_protocol(&s.states(), std, VERIFY_TOL).unwrap());
    }

    #[test]
    fn fourier_residuals_are_phase_vectors() {
        let s = set(&[(0, 2), (1, 0), (2, 3), (3, 1)]);
        let fourier = &generic_bases(4).unwrap()[1];
        let res = bob_residuals(&s.states(), fourier.alice_basis()).unwrap();
        for (l, outcome) in res.iter().enumerate() {
            for (i, r) in outcome.iter().enumerate() {
                let n = s.indices()[i].n;
                let m = s.indices()[i].m;
                // Bob holds Σ_j e^{2πi j(n−l)/4} |j⊕m⟩ / 2
                let mut v = vec![C64::from(0.0); 4];
                for j in 0..4 {
                    v[(j + m) % 4] = phase(std::f64::consts::FRAC_PI_2 * ((j * (n + 4 - l)) % 4) as f64) * 0.5;
                }
                assert!(state_close(r.state.as_ref().unwrap(), &StateVector::unit(v).unwrap()));
            }
        }
        assert!(verify_protocol(&s.states(), fourier, VERIFY_TOL).unwrap());
    }

    #[test]
    fn mes_outcomes_are_uniform_under_any_catalog_basis() {
        let s = set(&[(0, 0), (1, 1), (3, 1), (3, 2)]);
        for p in catalog_bases(4).unwrap() {
            for outcome in bob_residuals(&s.states(), p.alice_basis()).unwrap() {
                assert!(outcome.iter().all(|r| (r.probability - 0.25).abs() < 1e-12));
            }
        }
    }

    #[test]
    fn diagonal_set_is_in_both_set0_families() {
        let s = set(&[(0, 0), (1, 1), (2, 2), (3, 3)]);
        let generic = generic_bases(4).unwrap();
        assert!(generic.iter().all(|b| verify_protocol(&s.states(), b, VERIFY_TOL).unwrap()));
        assert_eq!(find_protocol(&s).unwrap().unwrap().provenance(), Provenance::Set0Standard);
    }

    #[test]
    fn ens2_has_no_protocol() {
        assert!(find_protocol(&set(&[(0, 0), (1, 1), (3, 1), (3, 2)])).unwrap().is_none());
    }

    #[test]
    fn catalog_examples_verify() {
        let found = find_protocol(&set(&[(0, 0), (0, 1), (0, 2), (0, 3)])).unwrap().unwrap();
        assert_eq!(found.provenance(), Provenance::Set0Standard);
        let set6 = &catalog_bases(4).unwrap()[7];
        assert!(verify_protocol(&set(&[(0, 0), (0, 2), (2, 0), (2, 2)]).states(), set6, VERIFY_TOL).unwrap());
        let set1 = &catalog_bases(4).unwrap()[2];
        assert!(verify_protocol(&set(&[(0, 0), (0, 1), (1, 3), (2, 1)]).states(), set1, VERIFY_TOL).unwrap());
        let found = find_protocol(&set(&[(0, 0), (0, 1), (1, 3), (2, 1)])).unwrap().unwrap();
        assert_eq!(found.provenance(), Provenance::Set1);
    }

    #[test]
    fn bad_inputs() {
        let v = StateVector::basis(2, 0);
        assert!(matches!(OneWayProtocol::new(vec![v.clone(), v.clone()], Provenance::Custom), Err(Error::NotOrthonormal { .. })));
        let states = set(&[(0, 0)]).states();
        assert!(bob_residuals(&states, &[v.clone(), StateVector::basis(2, 1)]).is_err());
    }

    #[test]
    fn transport_follows_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let verified = [
            (set(&[(0, 0), (0, 1), (1, 3), (2, 1)]), 2usize),
            (set(&[(0, 0), (0, 2), (2, 0), (2, 2)]), 7),
            (set(&[(0, 0), (0, 1), (1, 0), (1, 1)]), 5),
        ];
        let cat = catalog_bases(4).unwrap();
        for _ in 0..10 {
            let (s, b) = &verified[rng.gen_range(0..verified.len())];
            let delta = BellIndex::new(rng.gen_range(0..4), rng.gen_range(0..4));
            let moved = cat[*b].transport(delta).unwrap();
            assert!(verify_protocol(&s.translate(delta).states(), &moved, VERIFY_TOL).unwrap());
            assert_eq!(moved.translation(), delta);
        }
    }

    #[test]
    fn weak_choices_of_set_fail_standard_basis() {
        // repeated m value ⇒ two residuals coincide for every outcome
        let s = set(&[(0, 0), (1, 0), (2, 1), (3, 2)]);
        assert!(!verify_protocol(&s.states(), &generic_bases(4).unwrap()[0], VERIFY_TOL).unwrap());
    }

    #[test]
    fn three_states_in_d3_have_a_generic_protocol_or_pass() {
        for s in crate::bell::enumerate_sets(3, 3).take(20) {
            let v = condition_r_for_set(&s, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(v.outcome, Outcome::PassesR);
        }
    }
}
