//! Forward Rauzy induction on pairs and permutations.

use std::collections::{BTreeMap, BTreeSet};

use crate::combinatorics::{Letter, Pair, Permutation, Row};
use crate::error::{Error, Result};
use crate::matrix::VisitationMatrix;

/// Observable data of one induction step (or of one accelerated block).
///
/// For permutation-flavor moves the letters are positions `1..=n` stored as
/// `Letter(position - 1)`, read through the lift `(id, pi)`: a type-0 move has
/// winner `n`, a type-1 move has winner `k = pi^{-1}(n)` and loser `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveRecord {
    pub winner: Letter,
    pub losers: BTreeSet<Letter>,
    pub type_tag: Option<Row>,
    pub k: Option<usize>,
    pub power: usize,
}

impl MoveRecord {
    pub fn rauzy(winner: Letter, loser: Letter, t: Row) -> MoveRecord {
        MoveRecord { winner, losers: BTreeSet::from([loser]), type_tag: Some(t), k: None, power: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.losers.is_empty() {
            return Err(Error::InvalidInput("move has an empty loser set".into()));
        }
        if self.losers.contains(&self.winner) {
            return Err(Error::InvalidInput(format!("winner {} is also a loser", self.winner)));
        }
        if self.power == 0 {
            return Err(Error::InvalidInput("move power must be positive".into()));
        }
        if self.k.is_some() && self.type_tag != Some(Row::One) {
            return Err(Error::InvalidInput("k is only meaningful for type-1 moves".into()));
        }
        Ok(())
    }
}

/// Which kind of combinatorial data a path of matrices describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Matrices indexed by alphabet letters (`Θ` and its products).
    Pair,
    /// Matrices indexed by positions (`A` and its products).
    Permutation,
}

/// Combinatorial data on which Rauzy induction acts.
pub trait InductionState: Clone {
    const FLAVOR: Flavor;
    fn size(&self) -> usize;
    fn irreducible(&self) -> bool;
    fn rauzy_step(&self, t: Row) -> Result<(Self, VisitationMatrix, MoveRecord)>;
}

/// One Rauzy move of type `t` on an irreducible pair.
pub fn rauzy_step_pair(pair: &Pair, t: Row) -> Result<(Pair, VisitationMatrix, MoveRecord)> {
    if !pair.is_irreducible() {
        return Err(Error::NonIrreducible);
    }
    let n = pair.n();
    let w = pair.rightmost(t);
    let l = pair.rightmost(t.other());
    let mut moved: Vec<Letter> = pair.row(t.other())[..n - 1].to_vec();
    let at = pair.position(t.other(), w);
    moved.insert(at, l);
    let next = match t {
        Row::Zero => Pair::from_rows(pair.row(Row::Zero).to_vec(), moved)?,
        Row::One => Pair::from_rows(moved, pair.row(Row::One).to_vec())?,
    };
    Ok((next, VisitationMatrix::elementary(n, w.0, l.0), MoveRecord::rauzy(w, l, t)))
}

/// The matrix of a type-1 move on permutations with `k = pi^{-1}(n)`.
pub fn type_one_matrix(n: usize, k: usize) -> Result<VisitationMatrix> {
    if k == 0 || k >= n {
        return Err(Error::BadK { k, n });
    }
    let mut a = VisitationMatrix::zeros(n);
    for i in 1..=n {
        for j in 1..=n {
            let one = (i == j && i <= k) || (j == i + 1 && j > k) || (i == n && j == k + 1);
            if one {
                a.set(i - 1, j - 1, 1);
            }
        }
    }
    Ok(a)
}

/// One Rauzy move of type `t` on an irreducible permutation.
pub fn rauzy_step_perm(perm: &Permutation, t: Row) -> Result<(Permutation, VisitationMatrix, MoveRecord)> {
    if !perm.is_irreducible() {
        return Err(Error::NonIrreducible);
    }
    let n = perm.n();
    let k = perm.inverse().apply(n);
    match t {
        Row::Zero => {
            let last = perm.apply(n);
            let image = (1..=n)
                .map(|i| {
                    let v = perm.apply(i);
                    if v <= last {
                        v
                    } else if v < n {
                        v + 1
                    } else {
                        last + 1
                    }
                })
                .collect();
            let a = VisitationMatrix::elementary(n, n - 1, k - 1);
            Ok((Permutation::new(image)?, a, MoveRecord::rauzy(Letter(n - 1), Letter(k - 1), Row::Zero)))
        }
        Row::One => {
            let image = (1..=n)
                .map(|i| {
                    if i <= k {
                        perm.apply(i)
                    } else if i == k + 1 {
                        perm.apply(n)
                    } else {
                        perm.apply(i - 1)
                    }
                })
                .collect();
            let mut rec = MoveRecord::rauzy(Letter(k - 1), Letter(n - 1), Row::One);
            rec.k = Some(k);
            Ok((Permutation::new(image)?, type_one_matrix(n, k)?, rec))
        }
    }
}

impl InductionState for Pair {
    const FLAVOR: Flavor = Flavor::Pair;
    fn size(&self) -> usize {
        self.n()
    }
    fn irreducible(&self) -> bool {
        self.is_irreducible()
    }
    fn rauzy_step(&self, t: Row) -> Result<(Self, VisitationMatrix, MoveRecord)> {
        rauzy_step_pair(self, t)
    }
}

impl InductionState for Permutation {
    const FLAVOR: Flavor = Flavor::Permutation;
    fn size(&self) -> usize {
        self.n()
    }
    fn irreducible(&self) -> bool {
        self.is_irreducible()
    }
    fn rauzy_step(&self, t: Row) -> Result<(Self, VisitationMatrix, MoveRecord)> {
        rauzy_step_perm(self, t)
    }
}

/// A finite Rauzy path together with every state it visits.
#[derive(Clone, Debug)]
pub struct RauzyPath<S> {
    /// `states[j]` is the state before move `j`; `states.len() == moves.len() + 1`.
    pub states: Vec<S>,
    pub moves: Vec<MoveRecord>,
    pub matrices: Vec<VisitationMatrix>,
}

impl<S: InductionState> RauzyPath<S> {
    pub fn start(start: S) -> Result<Self> {
        if !start.irreducible() {
            return Err(Error::NonIrreducible);
        }
        Ok(RauzyPath { states: vec![start], moves: Vec::new(), matrices: Vec::new() })
    }

    pub fn simulate(start: S, types: &[Row]) -> Result<Self> {
        let mut path = Self::start(start)?;
        for &t in types {
            path.push(t)?;
        }
        Ok(path)
    }

    pub fn push(&mut self, t: Row) -> Result<()> {
        let (next, m, rec) = self.last_state().rauzy_step(t)?;
        self.states.push(next);
        self.matrices.push(m);
        self.moves.push(rec);
        Ok(())
    }

    pub fn last_state(&self) -> &S {
        self.states.last().expect("a path always has a start")
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn types(&self) -> Vec<Row> {
        self.moves.iter().map(|m| m.type_tag.expect("simulated moves carry a type")).collect()
    }

    pub fn winners(&self) -> Vec<Letter> {
        self.moves.iter().map(|m| m.winner).collect()
    }
}

/// Winner and loser of a single Rauzy matrix on pairs. The type is not recoverable.
pub fn decode_theta(theta: &VisitationMatrix) -> Result<(Letter, Letter)> {
    let n = theta.n();
    if (0..n).any(|i| theta.get(i, i) != 1) {
        return Err(Error::MalformedMatrix("diagonal of a Rauzy matrix must be all ones".into()));
    }
    let off: Vec<_> = theta.off_diagonal().collect();
    match off.as_slice() {
        [(w, l, 1)] => Ok((Letter(*w), Letter(*l))),
        [] => Err(Error::MalformedMatrix("identity matrix describes no move".into())),
        _ => Err(Error::MalformedMatrix("expected exactly one off-diagonal entry equal to 1".into())),
    }
}

/// What a permutation-flavor (accelerated) matrix reveals about its moves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermMoveData {
    /// Product of type-0 matrices: how often each position (1-based) lost to `n`.
    TypeZero { loser_counts: BTreeMap<usize, i64> },
    /// `power`-th power of the type-1 matrix with `k = pi^{-1}(n)`.
    TypeOne { k: usize, power: usize },
}

impl PermMoveData {
    pub fn type_tag(&self) -> Row {
        match self {
            PermMoveData::TypeZero { .. } => Row::Zero,
            PermMoveData::TypeOne { .. } => Row::One,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match self {
            PermMoveData::TypeZero { .. } => None,
            PermMoveData::TypeOne { k, .. } => Some(*k),
        }
    }

    /// Number of underlying Rauzy steps.
    pub fn steps(&self) -> usize {
        match self {
            PermMoveData::TypeZero { loser_counts } => loser_counts.values().sum::<i64>() as usize,
            PermMoveData::TypeOne { power, .. } => *power,
        }
    }
}

/// Reads the type (and `k`, power) off a permutation-flavor matrix.
pub fn decode_a(a: &VisitationMatrix) -> Result<PermMoveData> {
    let n = a.n();
    if n < 2 {
        return Err(Error::MalformedMatrix("matrix must be at least 2x2".into()));
    }
    let unit_diagonal = (0..n).all(|i| a.get(i, i) == 1);
    if unit_diagonal {
        let off: Vec<_> = a.off_diagonal().collect();
        if !off.is_empty() && off.iter().all(|&(i, _, _)| i == n - 1) {
            let loser_counts = off.into_iter().map(|(_, j, v)| (j + 1, v)).collect();
            return Ok(PermMoveData::TypeZero { loser_counts });
        }
    }
    let budget = a.entry_sum() - n as i64;
    for k in 1..n {
        let base = type_one_matrix(n, k)?;
        let mut cur = base.clone();
        let mut power = 1usize;
        while cur.entry_sum() <= a.entry_sum() {
            if cur == *a {
                return Ok(PermMoveData::TypeOne { k, power });
            }
            if power as i64 >= budget {
                break;
            }
            cur = &cur * &base;
            power += 1;
        }
    }
    Err(Error::MalformedMatrix(
        "neither a type-0 product (off-diagonal support in row n) nor a power of a type-1 matrix".into(),
    ))
}

pub fn is_complete(winners: &[Letter], n: usize) -> bool {
    let mut seen = vec![false; n];
    for w in winners {
        seen[w.0] = true;
    }
    seen.into_iter().all(|s| s)
}

/// Greedy split of a winner sequence into consecutive complete blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    /// Number of complete blocks.
    pub count: usize,
    /// Exclusive end index of each block. The last block absorbs any
    /// incomplete tail, so the final entry equals the sequence length.
    pub ends: Vec<usize>,
}

pub fn c_completeness(winners: &[Letter], n: usize) -> Segmentation {
    let mut ends = Vec::new();
    let mut seen = vec![false; n];
    let mut missing = n;
    for (i, w) in winners.iter().enumerate() {
        if !seen[w.0] {
            seen[w.0] = true;
            missing -= 1;
            if missing == 0 {
                ends.push(i + 1);
                seen.iter_mut().for_each(|s| *s = false);
                missing = n;
            }
        }
    }
    if let Some(last) = ends.last_mut() {
        *last = winners.len();
    }
    Segmentation { count: ends.len(), ends }
}

/// Completeness of a permutation-flavor path read directly off its matrices:
/// every row of the product has at least two non-zero entries.
pub fn perm_product_complete(matrices: &[VisitationMatrix]) -> bool {
    let Some(first) = matrices.first() else { return false };
    let prod = VisitationMatrix::product(first.n(), matrices);
    let complete = prod.rows().all(|r| r.iter().filter(|&&v| v != 0).count() >= 2);
    complete
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq3() -> Pair {
        Pair::from_indices(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0]).unwrap()
    }

    fn letters(v: &[usize]) -> Vec<Letter> {
        v.iter().map(|&i| Letter(i)).collect()
    }

    #[test]
    fn first_type_one_step_from_reversed_pair() {
        let (next, theta, rec) = rauzy_step_pair(&eq3(), Row::One).unwrap();
        assert_eq!(rec.winner, Letter(0));
        assert_eq!(rec.losers, BTreeSet::from([Letter(4)]));
        assert_eq!(next.row(Row::Zero), letters(&[0, 4, 1, 2, 3]).as_slice());
        assert_eq!(next.row(Row::One), eq3().row(Row::One));
        assert_eq!(decode_theta(&theta).unwrap(), (Letter(0), Letter(4)));
    }

    #[test]
    fn six_type_one_steps_multiply_to_the_zorich_matrix() {
        let path = RauzyPath::simulate(eq3(), &[Row::One; 6]).unwrap();
        let losers: Vec<usize> = path.moves.iter().map(|m| m.losers.iter().next().unwrap().0 + 1).collect();
        assert_eq!(losers, vec![5, 4, 3, 2, 5, 4]);
        let prod = VisitationMatrix::product(5, &path.matrices);
        let expected = VisitationMatrix::from_rows(vec![
            vec![1, 1, 1, 2, 2],
            vec![0, 1, 0, 0, 0],
            vec![0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 1],
        ])
        .unwrap();
        assert_eq!(prod, expected);
    }

    #[test]
    fn theta_minus_identity_is_a_single_unit() {
        let path = RauzyPath::simulate(eq3(), &[Row::Zero, Row::One, Row::One, Row::Zero, Row::Zero]).unwrap();
        for (m, rec) in path.matrices.iter().zip(&path.moves) {
            let off: Vec<_> = m.off_diagonal().collect();
            assert_eq!(off, vec![(rec.winner.0, rec.losers.iter().next().unwrap().0, 1)]);
            assert_eq!(m.determinant(), 1);
        }
    }

    #[test]
    fn permutation_steps_on_three_letters() {
        let pi = Permutation::new(vec![3, 2, 1]).unwrap();
        let (p0, a0, r0) = rauzy_step_perm(&pi, Row::Zero).unwrap();
        assert_eq!(p0.image(), &[2, 3, 1]);
        assert_eq!(a0, VisitationMatrix::elementary(3, 2, 0));
        assert_eq!(r0.k, None);
        let (p1, a1, r1) = rauzy_step_perm(&pi, Row::One).unwrap();
        assert_eq!(p1.image(), &[3, 1, 2]);
        assert_eq!(r1.k, Some(1));
        assert_eq!(a1.determinant().abs(), 1);
    }

    #[test]
    fn reducible_inputs_are_errors() {
        let id = Permutation::identity(3);
        assert_eq!(rauzy_step_perm(&id, Row::Zero).unwrap_err(), Error::NonIrreducible);
        let p = Pair::from_indices(&[0, 1, 2], &[1, 0, 2]).unwrap();
        assert_eq!(rauzy_step_pair(&p, Row::One).unwrap_err(), Error::NonIrreducible);
    }

    #[test]
    fn decode_theta_rejects_bad_shapes() {
        assert!(decode_theta(&VisitationMatrix::identity(3)).is_err());
        let mut two = VisitationMatrix::elementary(3, 0, 1);
        two.set(0, 2, 1);
        assert!(decode_theta(&two).is_err());
        let mut big = VisitationMatrix::identity(3);
        big.set(1, 2, 2);
        assert!(decode_theta(&big).is_err());
    }

    #[test]
    fn decode_permutation_matrices() {
        // k = 1 type-1 matrix and its square, plus a type-0 product
        let a1 = VisitationMatrix::from_rows(vec![
            vec![1, 1, 0, 0, 0],
            vec![0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![0, 0, 0, 0, 1],
            vec![0, 1, 0, 0, 0],
        ])
        .unwrap();
        assert_eq!(decode_a(&a1).unwrap(), PermMoveData::TypeOne { k: 1, power: 1 });
        assert_eq!(decode_a(&a1.pow(2)).unwrap(), PermMoveData::TypeOne { k: 1, power: 2 });
        let a0 = VisitationMatrix::from_rows(vec![
            vec![1, 0, 0, 0, 0],
            vec![0, 1, 0, 0, 0],
            vec![0, 0, 1, 0, 0],
            vec![0, 0, 0, 1, 0],
            vec![1, 0, 0, 0, 1],
        ])
        .unwrap();
        let d = decode_a(&a0).unwrap();
        assert_eq!(d.type_tag(), Row::Zero);
        assert_eq!(d, PermMoveData::TypeZero { loser_counts: BTreeMap::from([(1, 1)]) });
        assert!(decode_a(&VisitationMatrix::identity(4)).is_err());
        assert!(decode_a(&VisitationMatrix::elementary(4, 1, 2)).is_err());
    }

    #[test]
    fn completeness_examples() {
        let abc: Vec<Letter> = [4, 2, 3, 2, 4, 0, 1].iter().map(|&i| Letter(i)).collect();
        assert!(is_complete(&abc, 5));
        assert_eq!(c_completeness(&abc, 5).count, 1);
        let partial = letters(&[0, 3, 5]);
        assert!(!is_complete(&partial, 6));
        assert_eq!(c_completeness(&partial, 6), Segmentation { count: 0, ends: vec![] });
        assert!(!is_complete(&[], 3));
        let twice: Vec<Letter> = abc.iter().chain(abc.iter()).copied().collect();
        assert_eq!(c_completeness(&twice, 5), Segmentation { count: 2, ends: vec![7, 14] });
    }

    #[test]
    fn greedy_tail_joins_last_block() {
        let w = letters(&[0, 1, 0, 0]);
        assert_eq!(c_completeness(&w, 2), Segmentation { count: 1, ends: vec![4] });
        let w = letters(&[0, 1, 1, 0, 1]);
        assert_eq!(c_completeness(&w, 2), Segmentation { count: 2, ends: vec![2, 5] });
    }
}
