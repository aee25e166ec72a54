//! Translating between permutation-flavor and pair-flavor data.
//!
//! A permutation `pi` is read as the pair `(tau^{-1}, pi ∘ tau^{-1})` for a
//! labeling `tau` of positions by letters. A Rauzy move changes which labeling
//! is needed afterwards, `tau' = tau ∘ sigma_t`, and conjugating the
//! permutation matrix by the two labelings gives the pair matrix:
//! `Θ = Ψ_τ · A · Ψ_τ'ᵀ`.

use crate::combinatorics::{Labeling, Pair, Permutation, Row};
use crate::error::{Error, Result};
use crate::matrix::VisitationMatrix;
use crate::rauzy::{decode_a, Flavor, PermMoveData};
use crate::zorich::{annotate, ZorichPath};

/// The letters-by-positions 0/1 matrix with a one at `(tau(j), j)`.
pub fn psi_matrix(tau: &Labeling) -> VisitationMatrix {
    let n = tau.n();
    let mut m = VisitationMatrix::zeros(n);
    for j in 1..=n {
        m.set(tau.apply(j).0, j - 1, 1);
    }
    m
}

/// The relabeling caused by a single move of type `t`; `k = pi^{-1}(n)`.
pub fn sigma(t: Row, k: usize, n: usize) -> Result<Permutation> {
    match t {
        Row::Zero => Ok(Permutation::identity(n)),
        Row::One => delta(k, n),
    }
}

/// Fixes `1..=k`, sends `k+1` to `n` and shifts `k+2..=n` down by one.
pub fn delta(k: usize, n: usize) -> Result<Permutation> {
    if k == 0 || k >= n {
        return Err(Error::BadK { k, n });
    }
    let image = (1..=n)
        .map(|j| match j {
            j if j <= k => j,
            j if j == k + 1 => n,
            j => j - 1,
        })
        .collect();
    Permutation::new(image)
}

/// Relabeling after a decoded (possibly accelerated) move.
pub fn relabeling(data: &PermMoveData, n: usize) -> Result<Permutation> {
    match *data {
        PermMoveData::TypeZero { .. } => Ok(Permutation::identity(n)),
        PermMoveData::TypeOne { k, power } => Ok(delta(k, n)?.pow(power)),
    }
}

/// A pair-flavor path obtained from a permutation-flavor one, together with
/// the labeling in force before each matrix (and after the last one).
#[derive(Clone, Debug)]
pub struct LiftedPath {
    pub path: ZorichPath,
    pub labelings: Vec<Labeling>,
    pub types: Vec<Row>,
}

impl LiftedPath {
    /// The two pair readings of a starting permutation. Exactly these pairs
    /// (with the listed type assignments) start the lifted path when `perm`
    /// starts the permutation path.
    pub fn candidate_starts(&self, perm: &Permutation) -> Result<[(Pair, Vec<Row>); 2]> {
        let pair = Pair::lift(perm, &self.labelings[0])?;
        let flipped = self.types.iter().map(|t| t.other()).collect();
        Ok([(pair.inverse(), flipped), (pair, self.types.clone())])
    }

    pub fn final_labeling(&self) -> &Labeling {
        self.labelings.last().expect("at least the starting labeling")
    }
}

/// Lifts every matrix with the labeling in force at its step.
pub fn lift_zorich_path(a_path: &ZorichPath, tau: &Labeling) -> Result<(ZorichPath, Labeling)> {
    let lifted = lift_with_labelings(a_path, tau)?;
    let last = lifted.final_labeling().clone();
    Ok((lifted.path, last))
}

pub fn lift_with_labelings(a_path: &ZorichPath, tau: &Labeling) -> Result<LiftedPath> {
    if a_path.flavor != Flavor::Permutation {
        return Err(Error::InvalidInput("only permutation-flavor paths can be lifted".into()));
    }
    let n = tau.n();
    let mut labelings = vec![tau.clone()];
    let mut matrices = Vec::with_capacity(a_path.len());
    let mut types = Vec::with_capacity(a_path.len());
    for (idx, a) in a_path.matrices.iter().enumerate() {
        if a.n() != n {
            return Err(Error::AlphabetMismatch(format!(
                "matrix {} is {}x{}, labeling has {n} letters",
                idx + 1,
                a.n(),
                a.n()
            )));
        }
        let data = decode_a(a).map_err(|e| annotate(e, idx))?;
        let current = labelings.last().expect("non-empty");
        let next = current.then(&relabeling(&data, n)?);
        matrices.push(&(&psi_matrix(current) * a) * &psi_matrix(&next).transpose());
        types.push(data.type_tag());
        labelings.push(next);
    }
    let path = ZorichPath { flavor: Flavor::Pair, matrices, grouping: a_path.grouping.clone() };
    Ok(LiftedPath { path, labelings, types })
}
