//! Post-measurement states, their reduced states, and the Holevo-like upper
//! bound on locally accessible information
//! `S(ρ̄_A) + S(ρ̄_B) − max_X Σ_i p_i S(ρ_i^X)`.
//!
//! Also the two-block effect family that keeps the four states
//! `ψ_00, ψ_11, ψ_31, ψ_32` of `C^4 ⊗ C^4` orthogonal, with closed-form spectra
//! used to cross-check the numerics.

use serde::{Deserialize, Serialize};

use crate::bell::BellSet;
use crate::error::{Error, Result};
use crate::linalg::{
    identity, reduced_state, shannon_entropy, tensor, von_neumann_entropy, ComplexMatrix, DensityOperator, Side, StateVector, C64,
};

/// Probability below which an outcome counts as unreachable.
pub const UNREACHABLE_TOL: f64 = 1e-14;

/// Pure bipartite states in `C^d ⊗ C^d` with prior probabilities.
#[derive(Debug, Clone)]
pub struct Ensemble {
    d: usize,
    states: Vec<StateVector>,
    probs: Vec<f64>,
}

impl Ensemble {
    pub fn new(states: Vec<StateVector>, probs: Vec<f64>) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidState("empty ensemble".into()))?;
        let d = first.square_local_dim()?;
        if let Some(s) = states.iter().find(|s| s.dim() != first.dim()) {
            return Err(Error::DimensionMismatch { expected: first.dim(), actual: s.dim() });
        }
        if probs.len() != states.len() {
            return Err(Error::InvalidProbabilities(format!("{} probabilities for {} states", probs.len(), states.len())));
        }
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidProbabilities("negative or non-finite entry".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidProbabilities(format!("entries sum to {total}")));
        }
        Ok(Ensemble { d, states, probs })
    }

    pub fn uniform(states: Vec<StateVector>) -> Result<Self> {
        let m = states.len().max(1);
        Ensemble::new(states, vec![1.0 / m as f64; m])
    }

    pub fn from_set(set: &BellSet) -> Result<Self> {
        Ensemble::uniform(set.states())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Per-state reduced states and their weighted average on `side`.
    pub fn reduced(&self, side: Side) -> Result<(Vec<DensityOperator>, DensityOperator)> {
        let parts: Vec<DensityOperator> = self.states.iter().map(|s| reduced_state(s, (self.d, self.d), side)).collect::<Result<_>>()?;
        let avg = DensityOperator::mixture(&self.probs, &parts)?;
        Ok((parts, avg))
    }
}

/// Apply `K ⊗ I` (side A) or `I ⊗ K` (side B); returns the outcome weight
/// `⟨ψ|K†K ⊗ I|ψ⟩` and the normalized output.
pub fn post_measurement_state(psi: &StateVector, k: &ComplexMatrix, side: Side) -> Result<(f64, StateVector)> {
    let d = k.nrows();
    if k.ncols() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: k.ncols() });
    }
    if psi.dim() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, actual: psi.dim() });
    }
    let op = match side {
        Side::A => tensor(k, &identity(d)),
        Side::B => tensor(&identity(d), k),
    };
    let out = &op * psi.amplitudes();
    let probability = out.norm_squared();
    if probability < UNREACHABLE_TOL {
        return Err(Error::UnreachableOutcome { probability });
    }
    Ok((probability, StateVector::from_vector(out)?))
}

/// Reduced states after one measurement branch.
#[derive(Debug, Clone)]
pub struct Pmrs {
    /// Outcome weight per input state.
    pub probabilities: Vec<f64>,
    pub alice: Vec<DensityOperator>,
    pub bob: Vec<DensityOperator>,
    /// Averages weighted by the posterior `p_i q_i / Σ_j p_j q_j`.
    pub alice_average: DensityOperator,
    pub bob_average: DensityOperator,
    /// The post-measurement ensemble itself, with posterior weights.
    pub post: Ensemble,
}

pub fn pmrs(ensemble: &Ensemble, k: &ComplexMatrix, side: Side) -> Result<Pmrs> {
    let branches: Vec<(f64, StateVector)> = ensemble.states().iter().map(|s| post_measurement_state(s, k, side)).collect::<Result<_>>()?;
    let joint: Vec<f64> = branches.iter().zip(ensemble.probs()).map(|((q, _), p)| p * q).collect();
    let total: f64 = joint.iter().sum();
    let posterior: Vec<f64> = joint.iter().map(|x| x / total).collect();
    let (probabilities, states): (Vec<f64>, Vec<StateVector>) = branches.into_iter().unzip();
    let post = Ensemble::new(states, posterior)?;
    let (alice, alice_average) = post.reduced(Side::A)?;
    let (bob, bob_average) = post.reduced(Side::B)?;
    Ok(Pmrs { probabilities, alice, bob, alice_average, bob_average, post })
}

/// Holevo-like bound in bits for an ensemble of pure bipartite states.
pub fn holevo_like_bound(ensemble: &Ensemble) -> Result<f64> {
    let (alice, alice_avg) = ensemble.reduced(Side::A)?;
    let (bob, bob_avg) = ensemble.reduced(Side::B)?;
    let weighted = |parts: &[DensityOperator]| -> f64 { parts.iter().zip(ensemble.probs()).map(|(r, p)| p * von_neumann_entropy(r)).sum() };
    let subtract = weighted(&alice).max(weighted(&bob));
    Ok(von_neumann_entropy(&alice_avg) + von_neumann_entropy(&bob_avg) - subtract)
}

/// Parameters of the two-block effect
/// `K†K = a0·I + μ0(cos ζ σ_z + sin ζ σ_x) ⊕ μ1(cos η σ_z + sin η σ_x)`
/// acting on the even (`|0⟩, |2⟩`) and odd (`|1⟩, |3⟩`) levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ens2Params {
    pub a0: f64,
    pub mu0: f64,
    pub mu1: f64,
    pub zeta: f64,
    pub eta: f64,
}

impl Ens2Params {
    pub fn new(a0: f64, mu0: f64, mu1: f64, zeta: f64, eta: f64) -> Result<Self> {
        let p = Ens2Params { a0, mu0, mu1, zeta, eta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.a0, self.mu0, self.mu1, self.zeta, self.eta].iter().any(|x| !x.is_finite()) {
            return Err(Error::NotPositive("parameters must be finite".into()));
        }
        if self.a0 <= 0.0 {
            return Err(Error::NotPositive(format!("a0 = {} must be positive", self.a0)));
        }
        if self.mu0.abs() > self.a0 || self.mu1.abs() > self.a0 {
            return Err(Error::NotPositive(format!("need |mu0|, |mu1| <= a0 = {}", self.a0)));
        }
        Ok(())
    }

    /// `(1 ± μ0/a0)/4, (1 ± μ1/a0)/4` — the spectrum shared by every post state.
    pub fn state_spectrum(&self) -> [f64; 4] {
        let (x, y) = (self.mu0 / self.a0, self.mu1 / self.a0);
        [(1.0 + x) / 4.0, (1.0 - x) / 4.0, (1.0 + y) / 4.0, (1.0 - y) / 4.0]
    }

    /// `(1 ± μ0/2a0)/4, (1 ± μ1/2a0)/4` — Bob's average after the outcome.
    pub fn bob_average_spectrum(&self) -> [f64; 4] {
        let (x, y) = (self.mu0 / (2.0 * self.a0), self.mu1 / (2.0 * self.a0));
        [(1.0 + x) / 4.0, (1.0 - x) / 4.0, (1.0 + y) / 4.0, (1.0 - y) / 4.0]
    }

    /// The bound after the outcome, which reduces to the entropy of Bob's average.
    pub fn closed_form_bound(&self) -> f64 {
        shannon_entropy(&self.bob_average_spectrum()).expect("spectrum is a distribution")
    }

    /// Eigenpairs of the effect, in the order `a0+μ0, a0−μ0, a0+μ1, a0−μ1`.
    pub fn eigenpairs(&self) -> [(f64, [f64; 4]); 4] {
        let (cz, sz) = ((self.zeta / 2.0).cos(), (self.zeta / 2.0).sin());
        let (ce, se) = ((self.eta / 2.0).cos(), (self.eta / 2.0).sin());
        [
            (self.a0 + self.mu0, [cz, 0.0, sz, 0.0]),
            (self.a0 - self.mu0, [-sz, 0.0, cz, 0.0]),
            (self.a0 + self.mu1, [0.0, ce, 0.0, se]),
            (self.a0 - self.mu1, [0.0, -se, 0.0, ce]),
        ]
    }
}

fn spectral_sum(p: &Ens2Params, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    p.validate()?;
    let mut m = ComplexMatrix::zeros(4, 4);
    for (lambda, v) in p.eigenpairs() {
        let w = f(lambda.max(0.0));
        for r in 0..4 {
            for c in 0..4 {
                m[(r, c)] += C64::from(w * v[r] * v[c]);
            }
        }
    }
    Ok(m)
}

/// The effect `K†K`.
pub fn ens2_effect(p: &Ens2Params) -> Result<ComplexMatrix> {
    spectral_sum(p, |l| l)
}

/// `K = √(K†K)`, i.e. the left unitary fixed to the identity.
pub fn ens2_kraus(p: &Ens2Params) -> Result<ComplexMatrix> {
    spectral_sum(p, f64::sqrt)
}

/// `U·√(K†K)`, for checking that the left unitary does not matter.
pub fn ens2_kraus_with_left_unitary(p: &Ens2Params, u: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(u * ens2_kraus(p)?)
}

pub fn ens2_set() -> BellSet {
    BellSet::from_pairs(4, &[(0, 0), (1, 1), (3, 1), (3, 2)]).expect("valid indices")
}

/// The four ens2 states after Alice's outcome `K`.
pub fn ens2_post_ensemble(p: &Ens2Params) -> Result<Ensemble> {
    let k = ens2_kraus(p)?;
    Ok(pmrs(&Ensemble::from_set(&ens2_set())?, &k, Side::A)?.post)
}
