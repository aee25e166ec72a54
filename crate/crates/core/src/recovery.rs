//! Recovering the initial pair or permutation of an induction path from its
//! matrices alone.
//!
//! Moves are processed from last to first. Knowledge is kept as ordered
//! partitions of each row; every move refines and reorders them. Going
//! backwards over a move of type `t` with winner `w` and loser set `L`:
//!
//! * row `t` is unchanged by the move, and `w` is its rightmost letter, so
//!   `w` is split off as the last singleton;
//! * in row `1 - t` the losers sat at the far right before the move and
//!   directly after `w` afterwards, so they are lifted out of their blocks and
//!   appended at the end, with `w` separated from whatever preceded the losers.

use std::collections::BTreeSet;

use crate::combinatorics::{Letter, Row};
use crate::error::{Error, Result};
use crate::lifting::delta;
use crate::matrix::VisitationMatrix;
use crate::partition::{OrderedPartition, PartialOrdering, PartiallyOrderedPair};
use crate::rauzy::{decode_a, PermMoveData};
use crate::zorich::{annotate, breakup, extract_move};

/// How a recovery step rearranged the loser row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// Initial partitions built from the last move.
    Seed,
    /// Winner and losers in one block.
    SameBlock,
    /// Losers in one block, winner at the end of the previous block.
    AdjacentBlock,
    /// Losers spread over several blocks, the first of which holds the winner.
    SpanWithWinner,
    /// Losers spread over several blocks, winner at the end of the preceding one.
    SpanAfterWinner,
    /// Type-1 permutation move: only a relabeling of positions.
    Relabel,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry<S> {
    /// 1-based index of the move that produced this state.
    pub move_index: usize,
    pub type_tag: Row,
    pub kind: StepKind,
    pub state: S,
}

#[derive(Clone, Debug, Default)]
pub struct RecoveryOptions {
    /// Record every intermediate state.
    pub trace: bool,
    /// Permutation recovery only: relabel for a type-1 move without first
    /// splitting the position `k` (whose image must be `n`) off the last block.
    /// This is the shorter classical relabeling, but it can leave
    /// permutations in the answer that do not start the path.
    pub verbatim_type_one: bool,
}

impl RecoveryOptions {
    pub fn traced() -> Self {
        RecoveryOptions { trace: true, ..Self::default() }
    }

    pub fn verbatim() -> Self {
        RecoveryOptions { trace: true, verbatim_type_one: true }
    }
}

#[derive(Clone, Debug)]
pub struct PairRecovery {
    pub pop: PartiallyOrderedPair,
    /// Type of each move for pairs agreeing with `pop`; agreeing pairs'
    /// inverses realize the path with every type flipped.
    pub types: Vec<Row>,
    /// States in processing order, i.e. for moves `N, N-1, ..., 1`.
    pub trace: Vec<TraceEntry<PartiallyOrderedPair>>,
}

impl PairRecovery {
    /// State just before move `j` (1-based), when traced.
    pub fn state_before(&self, j: usize) -> Option<&PartiallyOrderedPair> {
        self.trace.iter().find(|e| e.move_index == j).map(|e| &e.state)
    }
}

#[derive(Clone, Debug)]
pub struct PermRecovery {
    pub ordering: PartialOrdering,
    pub types: Vec<Row>,
    pub trace: Vec<TraceEntry<PartialOrdering>>,
}

type Blocks<T> = Vec<BTreeSet<T>>;

/// Splits `w` off the last block as a trailing singleton.
fn split_winner<T: Ord + Copy>(q: &OrderedPartition<T>, w: T) -> std::result::Result<OrderedPartition<T>, String> {
    if !q.last().contains(&w) {
        return Err("the winner is not in the rightmost block of its row".into());
    }
    let mut blocks: Blocks<T> = q.blocks().to_vec();
    blocks.last_mut().expect("non-empty").remove(&w);
    blocks.push(BTreeSet::from([w]));
    Ok(OrderedPartition::new(blocks).expect("still a partition"))
}

/// Undoes the placement of `losers` right after `w` in the loser row.
fn move_losers_back<T: Ord + Copy>(
    q: &OrderedPartition<T>,
    w: T,
    losers: &BTreeSet<T>,
) -> std::result::Result<(OrderedPartition<T>, StepKind), String> {
    if losers.contains(&w) {
        return Err("the winner is among its own losers".into());
    }
    let blocks = q.blocks();
    let touched: Vec<usize> = (0..blocks.len()).filter(|&i| !blocks[i].is_disjoint(losers)).collect();
    let (Some(&i0), Some(&i1)) = (touched.first(), touched.last()) else {
        return Err("the losers are not letters of this row".into());
    };
    if touched.len() != i1 - i0 + 1 {
        return Err("the losers do not form an interval of blocks".into());
    }
    if touched.iter().map(|&i| blocks[i].intersection(losers).count()).sum::<usize>() != losers.len() {
        return Err("some losers are not letters of this row".into());
    }
    if (i0 + 1..i1).any(|i| !blocks[i].is_subset(losers)) {
        return Err("a block strictly inside the loser interval contains a non-loser".into());
    }
    let wb = q.block_of(w).ok_or("the winner is not a letter of this row")?;
    let minus = |b: &BTreeSet<T>, drop: &BTreeSet<T>| b.difference(drop).copied().collect::<BTreeSet<T>>();
    let only_w = BTreeSet::from([w]);
    let mut out: Blocks<T> = Vec::with_capacity(blocks.len() + 3);
    let kind;
    if i0 == i1 {
        let i = i0;
        if wb == i {
            kind = StepKind::SameBlock;
            out.extend(blocks[..i].iter().cloned());
            out.push(minus(&blocks[i], losers));
        } else if i > 0 && wb == i - 1 {
            kind = StepKind::AdjacentBlock;
            out.extend(blocks[..i - 1].iter().cloned());
            out.push(minus(&blocks[i - 1], &only_w));
            out.push(only_w);
            out.push(minus(&blocks[i], losers));
        } else {
            return Err("the winner does not immediately precede the losers".into());
        }
        out.extend(blocks[i + 1..].iter().cloned());
        out.push(losers.clone());
    } else if wb == i0 {
        kind = StepKind::SpanWithWinner;
        let mut dropped = losers.clone();
        dropped.insert(w);
        out.extend(blocks[..i0].iter().cloned());
        out.push(minus(&blocks[i0], &dropped));
        out.push(only_w);
        out.push(minus(&blocks[i1], losers));
        out.extend(blocks[i1 + 1..].iter().cloned());
        out.push(blocks[i0].intersection(losers).copied().collect());
        out.extend(blocks[i0 + 1..i1].iter().cloned());
        out.push(blocks[i1].intersection(losers).copied().collect());
    } else if i0 > 0 && wb == i0 - 1 && blocks[i0].is_subset(losers) {
        kind = StepKind::SpanAfterWinner;
        out.extend(blocks[..i0 - 1].iter().cloned());
        out.push(minus(&blocks[i0 - 1], &only_w));
        out.push(only_w);
        out.push(minus(&blocks[i1], losers));
        out.extend(blocks[i1 + 1..].iter().cloned());
        out.extend(blocks[i0..i1].iter().cloned());
        out.push(blocks[i1].intersection(losers).copied().collect());
    } else {
        return Err("the winner does not immediately precede the losers".into());
    }
    Ok((OrderedPartition::new(out).expect("rearranging blocks keeps a partition"), kind))
}

/// The state before a move of type `t`, given the state after it.
pub(crate) fn step_back(
    pop: &PartiallyOrderedPair,
    t: Row,
    w: Letter,
    losers: &BTreeSet<Letter>,
) -> std::result::Result<(PartiallyOrderedPair, StepKind), String> {
    let fixed = split_winner(pop.row(t), w)?;
    let (moved, kind) = move_losers_back(pop.row(t.other()), w, losers)?;
    let mut before = pop.clone();
    before.rows[t.index()] = fixed;
    before.rows[t.other().index()] = moved;
    Ok((before, kind))
}

fn unrealizable(step: usize) -> impl Fn(String) -> Error {
    move |reason| Error::Unrealizable { step, reason }
}

fn check_letters(n: usize, moves: &[(Letter, BTreeSet<Letter>)]) -> Result<()> {
    for (j, (w, losers)) in moves.iter().enumerate() {
        if losers.is_empty() {
            return Err(Error::InvalidInput(format!("move {} has no losers", j + 1)));
        }
        if std::iter::once(w).chain(losers).any(|a| a.0 >= n) {
            return Err(Error::AlphabetMismatch(format!(
                "move {} uses a letter outside the {n}-letter alphabet",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Recovers what the winner/loser data forces on the initial pair.
///
/// Loser sets must come from matrices with entries at most one; use
/// [`recover_pair_from_matrices`] for raw accelerated matrices.
pub fn recover_pair(n: usize, moves: &[(Letter, BTreeSet<Letter>)], options: &RecoveryOptions) -> Result<PairRecovery> {
    if n < 3 {
        return Err(Error::BadN { n, reason: "recovery needs at least three letters".into() });
    }
    check_letters(n, moves)?;
    let mut trace = Vec::new();
    let Some((w_last, l_last)) = moves.last() else {
        return Ok(PairRecovery { pop: PartiallyOrderedPair::coarsest(n), types: vec![], trace });
    };
    let all: BTreeSet<Letter> = (0..n).map(Letter).collect();
    let big = moves.len();
    let seed =
        |drop: &BTreeSet<Letter>| OrderedPartition::new(vec![all.difference(drop).copied().collect(), drop.clone()]);
    let mut pop = PartiallyOrderedPair::new(seed(&BTreeSet::from([*w_last]))?, seed(l_last)?)?;
    let mut types = vec![Row::Zero; big];
    if options.trace {
        trace.push(TraceEntry { move_index: big, type_tag: Row::Zero, kind: StepKind::Seed, state: pop.clone() });
    }
    for j in (0..big - 1).rev() {
        let (w, losers) = &moves[j];
        let t = if *w == moves[j + 1].0 { types[j + 1] } else { types[j + 1].other() };
        types[j] = t;
        let kind;
        (pop, kind) = step_back(&pop, t, *w, losers).map_err(unrealizable(j + 1))?;
        if options.trace {
            trace.push(TraceEntry { move_index: j + 1, type_tag: t, kind, state: pop.clone() });
        }
    }
    Ok(PairRecovery { pop, types, trace })
}

/// Breaks accelerated pair-flavor matrices up and recovers from the result.
pub fn recover_pair_from_matrices(matrices: &[VisitationMatrix], options: &RecoveryOptions) -> Result<PairRecovery> {
    let n = matrices.first().map(VisitationMatrix::n).ok_or_else(|| Error::InvalidInput("no matrices".into()))?;
    let moves = crate::zorich::normalized_moves(matrices)?;
    recover_pair(n, &moves, options)
}

/// A permutation-flavor move after normalization to entries at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PermMove {
    /// Type 0 with the set of positions that lost to `n`.
    Zero { losers: BTreeSet<usize> },
    /// `power` consecutive type-1 moves with `k = pi^{-1}(n)`.
    One { k: usize, power: usize },
}

impl PermMove {
    pub fn type_tag(&self) -> Row {
        match self {
            PermMove::Zero { .. } => Row::Zero,
            PermMove::One { .. } => Row::One,
        }
    }
}

/// Decodes permutation-flavor matrices, splitting type-0 products with entries above one.
pub fn normalize_perm_matrices(matrices: &[VisitationMatrix]) -> Result<Vec<PermMove>> {
    let mut out = Vec::new();
    for (idx, a) in matrices.iter().enumerate() {
        match decode_a(a).map_err(|e| annotate(e, idx))? {
            PermMoveData::TypeOne { k, power } => out.push(PermMove::One { k, power }),
            PermMoveData::TypeZero { .. } => {
                for piece in breakup(a).map_err(|e| annotate(e, idx))? {
                    let mv = extract_move(&piece)?;
                    out.push(PermMove::Zero { losers: mv.losers.iter().map(|b| b.0 + 1).collect() });
                }
            }
        }
    }
    Ok(out)
}

/// Recovers what the matrices force on the initial permutation, working on
/// positions directly.
pub fn recover_perm(matrices: &[VisitationMatrix], options: &RecoveryOptions) -> Result<PermRecovery> {
    let n = matrices.first().map(VisitationMatrix::n).ok_or_else(|| Error::InvalidInput("no matrices".into()))?;
    if n < 3 {
        return Err(Error::BadN { n, reason: "recovery needs at least three letters".into() });
    }
    if let Some(i) = matrices.iter().position(|m| m.n() != n) {
        return Err(Error::MalformedMatrix(format!("matrix {} is not {n}x{n}", i + 1)));
    }
    recover_perm_moves(n, &normalize_perm_matrices(matrices)?, options)
}

pub fn recover_perm_moves(n: usize, moves: &[PermMove], options: &RecoveryOptions) -> Result<PermRecovery> {
    let mut trace = Vec::new();
    let types: Vec<Row> = moves.iter().map(PermMove::type_tag).collect();
    let Some(last) = moves.last() else {
        return Ok(PermRecovery { ordering: PartialOrdering::coarsest_positions(n), types, trace });
    };
    let all: BTreeSet<usize> = (1..=n).collect();
    let big = moves.len();
    let tail = match last {
        PermMove::Zero { losers } => losers.clone(),
        PermMove::One { k, .. } => BTreeSet::from([*k]),
    };
    if tail.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::AlphabetMismatch(format!("move {big} names a position outside 1..{n}")));
    }
    let mut q = OrderedPartition::new(vec![all.difference(&tail).copied().collect(), tail])?;
    if options.trace {
        trace.push(TraceEntry { move_index: big, type_tag: last.type_tag(), kind: StepKind::Seed, state: q.clone() });
    }
    for j in (0..big - 1).rev() {
        let err = unrealizable(j + 1);
        let kind;
        match &moves[j] {
            PermMove::One { k, power } => {
                let relabel = delta(*k, n)?.pow(*power);
                if !q.last().contains(k) {
                    return Err(err(format!("position {k} must carry the largest value")));
                }
                let source = if options.verbatim_type_one { q } else { split_winner(&q, *k).map_err(&err)? };
                let blocks = source.blocks().iter().map(|b| b.iter().map(|&i| relabel.apply(i)).collect()).collect();
                q = OrderedPartition::new(blocks)?;
                kind = StepKind::Relabel;
            }
            PermMove::Zero { losers } => {
                let (next, k) = move_losers_back(&q, n, losers).map_err(&err)?;
                q = next;
                kind = k;
            }
        }
        if options.trace {
            trace.push(TraceEntry { move_index: j + 1, type_tag: types[j], kind, state: q.clone() });
        }
    }
    Ok(PermRecovery { ordering: q, types, trace })
}

/// Row uncertainties `(u0, u1)` at the start of each complete segment.
///
/// `ends` are the exclusive segment ends of a greedy complete segmentation of
/// the moves (see [`crate::rauzy::c_completeness`]). Entry `k - 1` of the
/// result belongs to segment `k`, i.e. the state just before move
/// `ends[k - 2] + 1` (move 1 for the first segment); a final entry
/// `(n - 1, n - 1)` stands for the knowledge before any move is processed.
pub fn uncertainty_profile(recovery: &PairRecovery, ends: &[usize]) -> Result<Vec<(usize, usize)>> {
    let n = recovery.pop.n();
    let mut out = Vec::with_capacity(ends.len() + 1);
    for k in 0..ends.len() {
        let first_move = if k == 0 { 1 } else { ends[k - 1] + 1 };
        let state = recovery.state_before(first_move).ok_or_else(|| {
            Error::PreconditionFailed(format!("no traced state for move {first_move}; run recovery with tracing"))
        })?;
        out.push((state.uncertainty(Row::Zero), state.uncertainty(Row::One)));
    }
    out.push((n - 1, n - 1));
    Ok(out)
}

/// Checks `u(k) <= (u(k+1) - 1) / 2` wherever `u(k)` is positive; a row that
/// is already resolved cannot shrink further.
pub fn halving_violations(profile: &[(usize, usize)]) -> Vec<(usize, Row)> {
    let mut bad = Vec::new();
    for k in 0..profile.len().saturating_sub(1) {
        for t in Row::BOTH {
            let (now, before) = match t {
                Row::Zero => (profile[k].0, profile[k + 1].0),
                Row::One => (profile[k].1, profile[k + 1].1),
            };
            if now > 0 && 2 * now + 1 > before {
                bad.push((k + 1, t));
            }
        }
    }
    bad
}
