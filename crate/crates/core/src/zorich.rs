//! Zorich acceleration: grouping runs of same-type Rauzy moves, reading
//! winner/loser data back off the product matrices, and splitting products
//! with large entries into factors whose entries are at most one.

use std::collections::BTreeSet;

use crate::combinatorics::{Letter, Row};
use crate::error::{Error, Result};
use crate::lifting;
use crate::matrix::VisitationMatrix;
use crate::rauzy::{c_completeness, decode_a, Flavor, InductionState, PermMoveData, RauzyPath, Segmentation};

/// A sequence of accelerated matrices, optionally remembering how it was
/// grouped from an underlying Rauzy path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZorichPath {
    pub flavor: Flavor,
    pub matrices: Vec<VisitationMatrix>,
    /// Number of Rauzy moves in each block, when known.
    pub grouping: Option<Vec<usize>>,
}

impl ZorichPath {
    pub fn new(flavor: Flavor, matrices: Vec<VisitationMatrix>) -> ZorichPath {
        ZorichPath { flavor, matrices, grouping: None }
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn n(&self) -> Option<usize> {
        self.matrices.first().map(VisitationMatrix::n)
    }

    pub fn product(&self) -> Option<VisitationMatrix> {
        self.n().map(|n| VisitationMatrix::product(n, &self.matrices))
    }
}

/// Multiplies the matrices of `path` block by block. `blocks` lists block sizes.
pub fn accelerate<S: InductionState>(path: &RauzyPath<S>, blocks: &[usize]) -> Result<ZorichPath> {
    if blocks.iter().sum::<usize>() != path.len() || blocks.contains(&0) {
        return Err(Error::InvalidInput(format!(
            "grouping {blocks:?} does not split a path of {} moves into non-empty blocks",
            path.len()
        )));
    }
    let n = path.last_state().size();
    let mut matrices = Vec::with_capacity(blocks.len());
    let mut start = 0;
    for (b, &len) in blocks.iter().enumerate() {
        let moves = &path.moves[start..start + len];
        if moves.iter().any(|m| m.type_tag != moves[0].type_tag) {
            return Err(Error::MixedTypeBlock { block: b + 1, what: "move types" });
        }
        matrices.push(VisitationMatrix::product(n, &path.matrices[start..start + len]));
        start += len;
    }
    Ok(ZorichPath { flavor: S::FLAVOR, matrices, grouping: Some(blocks.to_vec()) })
}

/// Maximal runs of equal types, the coarsest valid grouping.
pub fn maximal_runs(types: &[Row]) -> Vec<usize> {
    let mut runs: Vec<usize> = Vec::new();
    for (i, t) in types.iter().enumerate() {
        if i > 0 && types[i - 1] == *t {
            *runs.last_mut().expect("run already open") += 1;
        } else {
            runs.push(1);
        }
    }
    runs
}

/// Winner/loser data of one accelerated matrix whose off-diagonal support is a single row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZorichMove {
    pub winner: Letter,
    pub losers: BTreeSet<Letter>,
    pub max: i64,
    pub losers_max: BTreeSet<Letter>,
    pub losers_min: BTreeSet<Letter>,
}

impl ZorichMove {
    /// Number of underlying Rauzy steps.
    pub fn steps(&self) -> usize {
        (self.losers_max.len() as i64 * self.max + self.losers_min.len() as i64 * (self.max - 1)) as usize
    }
}

pub fn extract_move(theta: &VisitationMatrix) -> Result<ZorichMove> {
    let n = theta.n();
    if (0..n).any(|i| theta.get(i, i) != 1) {
        return Err(Error::MalformedMatrix("accelerated matrix must have a unit diagonal".into()));
    }
    let off: Vec<_> = theta.off_diagonal().collect();
    let Some(&(row, _, _)) = off.first() else {
        return Err(Error::MalformedMatrix("identity matrix describes no move".into()));
    };
    if off.iter().any(|&(i, _, _)| i != row) {
        return Err(Error::MalformedMatrix("off-diagonal entries span more than one winner row".into()));
    }
    let max = off.iter().map(|&(_, _, v)| v).max().expect("non-empty");
    let mut mv = ZorichMove {
        winner: Letter(row),
        losers: BTreeSet::new(),
        max,
        losers_max: BTreeSet::new(),
        losers_min: BTreeSet::new(),
    };
    for (_, col, v) in off {
        let b = Letter(col);
        mv.losers.insert(b);
        if v == max {
            mv.losers_max.insert(b);
        } else if v == max - 1 {
            mv.losers_min.insert(b);
        } else {
            return Err(Error::MalformedMatrix(format!(
                "entry {v} in the winner row is neither the maximum {max} nor one less"
            )));
        }
    }
    Ok(mv)
}

/// Splits a winner-row product into `max` factors with entries at most one:
/// `max - 1` copies of the full-loser factor followed by the maximal-loser factor.
pub fn breakup(theta: &VisitationMatrix) -> Result<Vec<VisitationMatrix>> {
    let mv = extract_move(theta)?;
    if mv.max == 1 {
        return Ok(vec![theta.clone()]);
    }
    let factor = |losers: &BTreeSet<Letter>| {
        let mut m = VisitationMatrix::identity(theta.n());
        for b in losers {
            m.set(mv.winner.0, b.0, 1);
        }
        m
    };
    let full = factor(&mv.losers);
    let mut out = vec![full; (mv.max - 1) as usize];
    out.push(factor(&mv.losers_max));
    Ok(out)
}

/// Breaks every pair-flavor matrix up and returns its `(winner, losers)` moves in order.
pub fn normalized_moves(matrices: &[VisitationMatrix]) -> Result<Vec<(Letter, BTreeSet<Letter>)>> {
    let mut out = Vec::new();
    for (idx, m) in matrices.iter().enumerate() {
        let pieces = breakup(m).map_err(|e| annotate(e, idx))?;
        for piece in pieces {
            let mv = extract_move(&piece)?;
            out.push((mv.winner, mv.losers));
        }
    }
    Ok(out)
}

pub(crate) fn annotate(e: Error, idx: usize) -> Error {
    match e {
        Error::MalformedMatrix(msg) => Error::MalformedMatrix(format!("matrix {}: {msg}", idx + 1)),
        other => other,
    }
}

/// Each matrix's winner together with its number of underlying Rauzy steps.
///
/// Permutation-flavor winners are positions (`n` for type 0, `k` for type 1)
/// stored as `Letter(position - 1)`.
pub fn winners_with_multiplicity(path: &ZorichPath) -> Result<Vec<(Letter, usize)>> {
    path.matrices
        .iter()
        .enumerate()
        .map(|(idx, m)| {
            let r = match path.flavor {
                Flavor::Pair => extract_move(m).map(|mv| (mv.winner, mv.steps())),
                Flavor::Permutation => decode_a(m).map(|d| match d {
                    PermMoveData::TypeZero { .. } => (Letter(m.n() - 1), d.steps()),
                    PermMoveData::TypeOne { k, power } => (Letter(k - 1), power),
                }),
            };
            r.map_err(|e| annotate(e, idx))
        })
        .collect()
}

/// Winner sequence with every block's winner repeated once per underlying step,
/// expressed over the pair alphabet (permutation paths are lifted with the
/// identity labeling first).
pub fn expanded_winners(path: &ZorichPath) -> Result<Vec<Letter>> {
    let pair_path;
    let path = match path.flavor {
        Flavor::Pair => path,
        Flavor::Permutation => {
            let n = path.n().unwrap_or(0);
            pair_path = lifting::lift_zorich_path(path, &crate::combinatorics::Labeling::identity(n))?.0;
            &pair_path
        }
    };
    Ok(winners_with_multiplicity(path)?.into_iter().flat_map(|(w, count)| std::iter::repeat_n(w, count)).collect())
}

pub fn zorich_c_completeness(path: &ZorichPath) -> Result<Segmentation> {
    let n = path.n().unwrap_or(0);
    Ok(c_completeness(&expanded_winners(path)?, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Pair;
    use crate::rauzy::is_complete;

    fn eq3_path() -> RauzyPath<Pair> {
        let pair = Pair::from_indices(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0]).unwrap();
        RauzyPath::simulate(pair, &[Row::One; 6]).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<Letter> {
        v.iter().map(|&i| Letter(i)).collect()
    }

    #[test]
    fn one_block_gives_the_accelerated_matrix() {
        let z = accelerate(&eq3_path(), &[6]).unwrap();
        assert_eq!(z.matrices[0].row(0), &[1, 1, 1, 2, 2]);
        let mv = extract_move(&z.matrices[0]).unwrap();
        assert_eq!(mv.winner, Letter(0));
        assert_eq!(mv.losers, set(&[1, 2, 3, 4]));
        assert_eq!(mv.max, 2);
        assert_eq!(mv.losers_max, set(&[3, 4]));
        assert_eq!(mv.losers_min, set(&[1, 2]));
        assert_eq!(winners_with_multiplicity(&z).unwrap(), vec![(Letter(0), 6)]);
    }

    #[test]
    fn two_blocks_match_the_consecutive_pair() {
        let z = accelerate(&eq3_path(), &[4, 2]).unwrap();
        assert_eq!(z.matrices[0].row(0), &[1, 1, 1, 1, 1]);
        assert_eq!(z.matrices[1].row(0), &[1, 0, 0, 1, 1]);
        let first = extract_move(&z.matrices[0]).unwrap();
        assert_eq!((first.max, first.losers.len()), (1, 4));
        assert!(first.losers_min.is_empty());
        assert_eq!(winners_with_multiplicity(&z).unwrap(), vec![(Letter(0), 4), (Letter(0), 2)]);
    }

    #[test]
    fn singleton_blocks_are_the_rauzy_matrices() {
        let path = eq3_path();
        let z = accelerate(&path, &[1; 6]).unwrap();
        assert_eq!(z.matrices, path.matrices);
        assert!(winners_with_multiplicity(&ZorichPath::new(Flavor::Pair, vec![])).unwrap().is_empty());
    }

    #[test]
    fn mixed_blocks_and_bad_groupings_are_rejected() {
        let pair = Pair::from_indices(&[0, 1, 2], &[2, 1, 0]).unwrap();
        let path = RauzyPath::simulate(pair, &[Row::Zero, Row::One]).unwrap();
        assert_eq!(accelerate(&path, &[2]).unwrap_err(), Error::MixedTypeBlock { block: 1, what: "move types" });
        assert!(accelerate(&path, &[1]).is_err());
        assert!(accelerate(&path, &[0, 2]).is_err());
    }

    #[test]
    fn breakup_factors_multiply_back() {
        let theta = accelerate(&eq3_path(), &[6]).unwrap().matrices.remove(0);
        let parts = breakup(&theta).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(extract_move(&parts[0]).unwrap().losers, set(&[1, 2, 3, 4]));
        assert_eq!(extract_move(&parts[1]).unwrap().losers, set(&[3, 4]));
        assert_eq!(VisitationMatrix::product(5, &parts), theta);
        let single = VisitationMatrix::elementary(4, 2, 1);
        assert_eq!(breakup(&single).unwrap(), vec![single]);
    }

    #[test]
    fn malformed_products_are_rejected() {
        let mut gap = VisitationMatrix::identity(4);
        gap.set(0, 1, 3);
        gap.set(0, 2, 1);
        assert!(extract_move(&gap).is_err());
        let mut two_rows = VisitationMatrix::elementary(4, 0, 1);
        two_rows.set(2, 3, 1);
        assert!(extract_move(&two_rows).is_err());
        assert!(extract_move(&VisitationMatrix::identity(3)).is_err());
    }

    #[test]
    fn completeness_of_the_one_block_path() {
        let z = accelerate(&eq3_path(), &[6]).unwrap();
        let w = expanded_winners(&z).unwrap();
        assert_eq!(w, vec![Letter(0); 6]);
        assert!(!is_complete(&w, 5));
        assert_eq!(zorich_c_completeness(&z).unwrap().count, 0);
    }

    #[test]
    fn runs_of_types() {
        use Row::*;
        assert_eq!(maximal_runs(&[One, One, Zero, One, One, One]), vec![2, 1, 3]);
        assert!(maximal_runs(&[]).is_empty());
    }
}
