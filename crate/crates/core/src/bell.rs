//! Generalized Bell states `|ψ_nm⟩ = d^{-1/2} Σ_j e^{2πi jn/d} |j⟩|j⊕m⟩`,
//! the Weyl unitaries that connect them, and the local-unitary equivalence
//! classes of Bell index sets.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{identity, max_abs_diff, phase, reduced_state, unitarity_deviation, ComplexMatrix, Side, StateVector, C64};

/// Label `(n, m)` of a generalized Bell state. Validity against a dimension
/// is checked by [`BellSet::new`] and [`bell_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BellIndex {
    pub n: usize,
    pub m: usize,
}

impl BellIndex {
    pub const fn new(n: usize, m: usize) -> Self {
        BellIndex { n, m }
    }

    pub fn check(self, d: usize) -> Result<Self> {
        if d < 2 || self.n >= d || self.m >= d {
            return Err(Error::InvalidIndex { n: self.n, m: self.m, d });
        }
        Ok(self)
    }

    /// `(n + Δn, m + Δm) mod d`.
    pub fn translate(self, delta: BellIndex, d: usize) -> BellIndex {
        BellIndex { n: (self.n + delta.n) % d, m: (self.m + delta.m) % d }
    }

    /// Flat position `n·d + m`, which orders indices lexicographically.
    pub fn ordinal(self, d: usize) -> usize {
        self.n * d + self.m
    }

    pub fn from_ordinal(ordinal: usize, d: usize) -> BellIndex {
        BellIndex { n: ordinal / d, m: ordinal % d }
    }
}

impl From<(usize, usize)> for BellIndex {
    fn from((n, m): (usize, usize)) -> Self {
        BellIndex { n, m }
    }
}

/// Sorted set of distinct Bell indices at a fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BellSet {
    d: usize,
    indices: Vec<BellIndex>,
}

impl BellSet {
    pub fn new(d: usize, indices: impl IntoIterator<Item = BellIndex>) -> Result<Self> {
        let mut indices: Vec<BellIndex> = indices.into_iter().map(|i| i.check(d)).collect::<Result<_>>()?;
        indices.sort();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateIndex { n: w[0].n, m: w[0].m });
        }
        Ok(BellSet { d, indices })
    }

    /// Shorthand for literal `(n, m)` pairs.
    pub fn from_pairs(d: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        BellSet::new(d, pairs.iter().copied().map(BellIndex::from))
    }

    /// Parses `"00,11,31,32"` (two-digit tokens, `d ≤ 9`) or the extended
    /// `"0.0,11.3"` form.
    pub fn parse(d: usize, spec: &str) -> Result<Self> {
        let token = |t: &str| -> Result<BellIndex> {
            let t = t.trim();
            let (n, m) = if let Some((n, m)) = t.split_once('.') {
                (n, m)
            } else if t.len() == 2 && t.is_ascii() {
                t.split_at(1)
            } else {
                return Err(Error::Parse(format!("bad Bell index token {t:?}")));
            };
            let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad Bell index token {t:?}")));
            Ok(BellIndex::new(parse(n)?, parse(m)?))
        };
        if spec.trim().is_empty() {
            return Err(Error::Parse("empty set specification".into()));
        }
        BellSet::new(d, spec.split(',').map(token).collect::<Result<Vec<_>>>()?)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[BellIndex] {
        &self.indices
    }

    pub fn contains(&self, idx: BellIndex) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    pub fn translate(&self, delta: BellIndex) -> BellSet {
        let mut indices: Vec<BellIndex> = self.indices.iter().map(|i| i.translate(delta, self.d)).collect();
        indices.sort();
        BellSet { d: self.d, indices }
    }

    /// All `d²` translates, in lexicographic order of the offset.
    pub fn translates(&self) -> impl Iterator<Item = (BellIndex, BellSet)> + '_ {
        let d = self.d;
        (0..d * d).map(move |o| {
            let delta = BellIndex::from_ordinal(o, d);
            (delta, self.translate(delta))
        })
    }

    /// Lexicographically smallest translate.
    pub fn canonical_form(&self) -> BellSet {
        self.translates().map(|(_, s)| s).min().expect("d² ≥ 4 translates")
    }

    pub fn states(&self) -> Vec<StateVector> {
        self.indices.iter().map(|&i| bell_state(self.d, i).expect("indices validated")).collect()
    }
}

impl fmt::Display for BellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens = self.indices.iter().map(|i| if self.d <= 9 { format!("{}{}", i.n, i.m) } else { format!("{}.{}", i.n, i.m) });
        f.write_str(&tokens.join(","))
    }
}

pub fn bell_state(d: usize, idx: BellIndex) -> Result<StateVector> {
    idx.check(d)?;
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![C64::from(0.0); d * d];
    for j in 0..d {
        let theta = 2.0 * std::f64::consts::PI * ((j * idx.n) % d) as f64 / d as f64;
        v[j * d + (j + idx.m) % d] = phase(theta) * amp;
    }
    StateVector::new(v)
}

/// `U_nm = Σ_j e^{2πi jn/d} |j⊕m⟩⟨j|`.
pub fn weyl_unitary(d: usize, idx: BellIndex) -> Result<ComplexMatrix> {
    idx.check(d)?;
    let mut u = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let theta = 2.0 * std::f64::consts::PI * ((j * idx.n) % d) as f64 / d as f64;
        u[((j + idx.m) % d, j)] = phase(theta);
    }
    Ok(u)
}

/// Alice-side unitary sending `|ψ_s⟩` to `|ψ_{s+Δ}⟩` up to phase, i.e.
/// `U_{Δn, -Δm}`.
pub fn shift_unitary(d: usize, delta: BellIndex) -> Result<ComplexMatrix> {
    delta.check(d)?;
    weyl_unitary(d, BellIndex::new(delta.n, (d - delta.m) % d))
}

/// Tolerance for the MES test in [`schmidt_unitary`].
pub const MES_TOL: f64 = 1e-8;

/// Largest deviation of either reduced state of `psi` from `I/d`.
pub fn mes_deviation(psi: &StateVector) -> Result<f64> {
    let d = psi.square_local_dim()?;
    let target = identity(d) / C64::from(d as f64);
    let mut dev: f64 = 0.0;
    for side in [Side::A, Side::B] {
        dev = dev.max(max_abs_diff(reduced_state(psi, (d, d), side)?.matrix(), &target));
    }
    Ok(dev)
}

/// Unitary `W` with `|ψ⟩ = d^{-1/2} Σ_j |j⟩ ⊗ W|j⟩` for `measuring_side = A`,
/// or `|ψ⟩ = d^{-1/2} Σ_j W|j⟩ ⊗ |j⟩` for `B`.
pub fn schmidt_unitary(psi: &StateVector, measuring_side: Side) -> Result<ComplexMatrix> {
    let d = psi.square_local_dim()?;
    let dev = mes_deviation(psi)?;
    if dev > MES_TOL {
        return Err(Error::NotMaximallyEntangled { deviation: dev });
    }
    let c = psi.coefficient_matrix((d, d))? * C64::from((d as f64).sqrt());
    let w = match measuring_side {
        Side::A => c.transpose(),
        Side::B => c,
    };
    debug_assert!(unitarity_deviation(&w) < 1e-6);
    Ok(w)
}

/// All `C(d², k)` sets in lexicographic order.
pub fn enumerate_sets(d: usize, k: usize) -> impl Iterator<Item = BellSet> {
    (0..d * d).combinations(k).map(move |c| BellSet { d, indices: c.into_iter().map(|o| BellIndex::from_ordinal(o, d)).collect() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub representative: BellSet,
    pub members: Vec<BellSet>,
}

impl EquivalenceClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// Orbits of `k`-subsets under simultaneous index translation, ordered by
/// representative.
pub fn equivalence_classes(d: usize, k: usize) -> Vec<EquivalenceClass> {
    let mut classes: BTreeMap<BellSet, Vec<BellSet>> = BTreeMap::new();
    for s in enumerate_sets(d, k) {
        classes.entry(s.canonical_form()).or_default().push(s);
    }
    classes.into_iter().map(|(representative, members)| EquivalenceClass { representative, members }).collect()
}
