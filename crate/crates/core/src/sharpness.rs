//! Paths whose initial pair cannot be recovered, showing that the completeness
//! needed for uniqueness cannot be lowered.
//!
//! Everything here is built backwards, in the order recovery consumes moves:
//! a [`Builder`] holds the partially ordered pair that the moves chosen so far
//! force, and each new (earlier) move is picked from what that pair says about
//! the rightmost letters. The recovered state after every construction is
//! therefore exactly the one the construction aims for.
//!
//! The constructions keep the partially ordered pair in *Form X*: each row has
//! at most one block with more than one letter, and it is leftmost; the
//! leftmost singleton of each row (its pivot) is the rightmost letter of the
//! other row.

use std::collections::{BTreeMap, BTreeSet};

use crate::combinatorics::{Letter, Row};
use crate::error::{Error, Result};
use crate::partition::{agreeing_pairs, OrderedPartition, PartiallyOrderedPair};
use crate::rauzy::c_completeness;
use crate::recovery::step_back;

/// A Form X partially ordered pair together with its pivot letters, indexed by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormXWitness {
    pub pop: PartiallyOrderedPair,
    pub pivots: [Letter; 2],
}

impl FormXWitness {
    pub fn pivot(&self, t: Row) -> Letter {
        self.pivots[t.index()]
    }

    /// Letters with a known position in row `t`.
    pub fn singletons(&self, t: Row) -> BTreeSet<Letter> {
        self.pop.row(t).singletons()
    }

    /// Letters known in row `t` but not in the other row.
    pub fn known_only_in(&self, t: Row) -> BTreeSet<Letter> {
        self.singletons(t).difference(&self.singletons(t.other())).copied().collect()
    }

    /// Largest number of letters left without a position in either row.
    pub fn unresolved(&self) -> usize {
        Row::BOTH.iter().map(|&t| self.pop.row(t).unresolved().len()).max().unwrap_or(0)
    }

    fn covers_alphabet(&self) -> bool {
        self.singletons(Row::Zero).union(&self.singletons(Row::One)).count() == self.pop.n()
    }
}

fn leftmost_singleton(q: &OrderedPartition<Letter>) -> Option<Letter> {
    q.blocks().iter().find(|b| b.len() == 1).and_then(|b| b.first().copied())
}

fn sole(block: &BTreeSet<Letter>) -> Option<Letter> {
    (block.len() == 1).then(|| *block.first().expect("one element"))
}

/// Checks the Form X conditions; the pivots must be two different letters.
pub fn is_form_x(pop: &PartiallyOrderedPair) -> Option<FormXWitness> {
    for t in Row::BOTH {
        if pop.row(t).blocks().iter().skip(1).any(|b| b.len() > 1) {
            return None;
        }
    }
    let mut pivots = [Letter(0); 2];
    for t in Row::BOTH {
        let a = leftmost_singleton(pop.row(t))?;
        if sole(pop.row(t.other()).last()) != Some(a) {
            return None;
        }
        pivots[t.index()] = a;
    }
    (pivots[0] != pivots[1]).then(|| FormXWitness { pop: pop.clone(), pivots })
}

/// 1-based positions of the letters of a row whose position is known.
fn known_positions(q: &OrderedPartition<Letter>) -> BTreeMap<Letter, usize> {
    let mut out = BTreeMap::new();
    let mut before = 0;
    for block in q.blocks() {
        if let Some(a) = sole(block) {
            out.insert(a, before + 1);
        }
        before += block.len();
    }
    out
}

fn precondition(msg: impl Into<String>) -> Error {
    Error::PreconditionFailed(msg.into())
}

/// Accumulates moves from the last one backwards.
#[derive(Clone, Debug)]
struct Builder {
    pop: PartiallyOrderedPair,
    /// Winner, loser and type of each move, latest first.
    moves: Vec<(Letter, Letter, Row)>,
}

impl Builder {
    fn new(pop: PartiallyOrderedPair) -> Self {
        Builder { pop, moves: Vec::new() }
    }

    /// Prepends a move, inferring its type the way recovery does.
    fn push(&mut self, w: Letter, loser: Letter) -> Result<()> {
        let t = match self.moves.last() {
            Some(&(prev, _, t)) if prev == w => t,
            Some(&(_, _, t)) => t.other(),
            None if self.pop.row(Row::Zero).last().contains(&w) => Row::Zero,
            None => Row::One,
        };
        let (before, _) = step_back(&self.pop, t, w, &BTreeSet::from([loser]))
            .map_err(|why| precondition(format!("move ({w}, {loser}) cannot end here: {why}")))?;
        self.pop = before;
        self.moves.push((w, loser, t));
        Ok(())
    }

    fn rightmost(&self, t: Row) -> Result<Letter> {
        sole(self.pop.row(t).last())
            .ok_or_else(|| precondition(format!("rightmost block of row {t} is not a singleton")))
    }

    /// The letter known to follow `a` directly in row `t`.
    fn successor(&self, t: Row, a: Letter) -> Result<Letter> {
        let blocks = self.pop.row(t).blocks();
        let i = self.pop.row(t).block_of(a).expect("every letter is in every row");
        match (sole(&blocks[i]), blocks.get(i + 1).and_then(sole)) {
            (Some(_), Some(next)) => Ok(next),
            _ => Err(precondition(format!("the letter after {a} in row {t} is not determined"))),
        }
    }

    /// Prepends a move of type `t`; without an explicit loser it must be the
    /// known successor of the winner.
    fn back(&mut self, t: Row, loser: Option<Letter>) -> Result<Letter> {
        let w = self.rightmost(t)?;
        let loser = match loser {
            Some(l) => l,
            None => self.successor(t.other(), w)?,
        };
        self.push(w, loser)?;
        Ok(w)
    }

    /// Prepends type-`t` moves until `done` holds, at most `n` of them.
    fn back_until(&mut self, t: Row, done: impl Fn(&Self) -> Result<bool>) -> Result<()> {
        for _ in 0..=self.pop.n() {
            if done(self)? {
                return Ok(());
            }
            self.back(t, None)?;
        }
        Err(precondition(format!("rotating with type {t} never reached the target")))
    }

    fn path_order(&self) -> Vec<(Letter, Letter)> {
        self.moves.iter().rev().map(|&(w, l, _)| (w, l)).collect()
    }

    fn form_x(&self) -> Result<FormXWitness> {
        is_form_x(&self.pop).ok_or_else(|| precondition("the construction left Form X"))
    }
}

fn form_x_covering(b: &Builder) -> Result<FormXWitness> {
    let x = is_form_x(&b.pop).ok_or_else(|| precondition("not Form X"))?;
    if !x.covers_alphabet() {
        return Err(precondition("some letter is unknown in both rows"));
    }
    Ok(x)
}

/// Prepends a cycle that starts and ends at the current pair and in which
/// exactly the letters known in both rows win.
fn refresh_on(b: &mut Builder) -> Result<()> {
    let start = form_x_covering(b)?;
    let n = start.pop.n();
    let h = known_positions(start.pop.row(Row::Zero));
    let j = known_positions(start.pop.row(Row::One));
    let mut common: Vec<Letter> =
        start.singletons(Row::Zero).intersection(&start.singletons(Row::One)).copied().collect();
    common.sort_by_key(|a| std::cmp::Reverse(h[a]));
    if common.len() < 2 {
        return Err(precondition("fewer than two letters are known in both rows"));
    }
    for i in (0..common.len() - 1).rev() {
        for _ in 0..h[&common[i]] - h[&common[i + 1]] {
            b.back(Row::One, None)?;
        }
        for _ in 0..n - j[&common[i]] {
            b.back(Row::Zero, None)?;
        }
    }
    if b.pop != start.pop {
        return Err(precondition("the refresh cycle did not close"));
    }
    Ok(())
}

/// Prepends a path after which the letters known only in row `r` have all
/// won and only half of them (rounded down) remain known only in row `r`.
fn halve_on(b: &mut Builder, r: Row) -> Result<()> {
    let end = form_x_covering(b)?;
    let o = r.other();
    let positions = known_positions(end.pop.row(r));
    let mut only: Vec<Letter> = end.known_only_in(r).into_iter().collect();
    if only.len() < 4 {
        return Err(precondition(format!("{} letters known only in row {r}; at least four are needed", only.len())));
    }
    only.sort_by_key(|a| positions[a]);
    let (a_r, a_o) = (end.pivot(r), end.pivot(o));
    for pair in only.chunks_exact(2) {
        let [b1, b2] = order_for_pairing(b, r, pair[0], pair[1], a_o);
        b.back_until(o, |s| Ok(s.rightmost(r)? == b1))?;
        b.back(r, Some(b2))?;
        b.back_until(o, |s| Ok(s.rightmost(r)? == a_o))?;
        b.back_until(r, |s| Ok(s.rightmost(o)? == a_r))?;
    }
    if only.len() % 2 == 1 {
        let b3 = *only.last().expect("odd length");
        b.back_until(o, |s| Ok(s.rightmost(r)? == b3))?;
        b.back(r, Some(a_o))?;
        b.back_until(r, |s| Ok(s.rightmost(o)? == a_r))?;
    }
    b.form_x().map(|_| ())
}

/// Of two letters known only in row `r`, the one that comes first after the
/// pivot `a_o` when the part of row `r` after its leftmost singleton is read cyclically.
fn order_for_pairing(b: &Builder, r: Row, x: Letter, y: Letter, a_o: Letter) -> [Letter; 2] {
    let mut known: Vec<(usize, Letter)> = known_positions(b.pop.row(r)).into_iter().map(|(a, p)| (p, a)).collect();
    known.sort();
    let tail: Vec<Letter> = known.into_iter().skip(1).map(|(_, a)| a).collect();
    let from = tail.iter().position(|&a| a == a_o).map_or(0, |i| i + 1);
    let first = tail.iter().cycle().skip(from).take(tail.len()).find(|&&a| a == x || a == y);
    if first == Some(&x) {
        [x, y]
    } else {
        [y, x]
    }
}

/// A cycle at the witness in which every letter known in both rows wins and
/// no other letter does. Moves are listed in path order.
pub fn refresh_cycle_path(witness: &FormXWitness) -> Result<Vec<(Letter, Letter)>> {
    let mut b = Builder::new(witness.pop.clone());
    refresh_on(&mut b)?;
    Ok(b.path_order())
}

/// A path ending at the witness whose start is again Form X, in which every
/// letter known only in row `r` wins and only half of those letters (rounded
/// down) are still known only in row `r` at the start. Moves are in path order.
pub fn halving_path(witness: &FormXWitness, r: Row) -> Result<(Vec<(Letter, Letter)>, FormXWitness)> {
    let mut b = Builder::new(witness.pop.clone());
    halve_on(&mut b, r)?;
    let start = b.form_x()?;
    Ok((b.path_order(), start))
}

/// A Rauzy path that is `floor(log2 n) - 1` complete but does not determine
/// its initial pair, even up to inverse.
#[derive(Clone, Debug)]
pub struct AmbiguousPath {
    pub n: usize,
    /// Winner and loser of each Rauzy move, in path order.
    pub moves: Vec<(Letter, Letter)>,
    /// Types for pairs agreeing with `start`.
    pub types: Vec<Row>,
    /// The number of complete subpaths the construction concatenates.
    pub complete_blocks: usize,
    /// The Form X pair recovered at the start of each complete subpath, latest first.
    pub checkpoints: Vec<FormXWitness>,
}

impl AmbiguousPath {
    /// What recovery leaves of the initial pair.
    pub fn start(&self) -> &FormXWitness {
        self.checkpoints.last().expect("at least one complete subpath")
    }

    pub fn loser_sets(&self) -> Vec<(Letter, BTreeSet<Letter>)> {
        self.moves.iter().map(|&(w, l)| (w, BTreeSet::from([l]))).collect()
    }

    pub fn winners(&self) -> Vec<Letter> {
        self.moves.iter().map(|&(w, _)| w).collect()
    }
}

/// The completeness the ambiguous path reaches: `floor(log2 n) - 1`.
pub fn ambiguous_completeness(n: usize) -> usize {
    (n.ilog2() as usize).saturating_sub(1)
}

pub fn build_ambiguous_path(n: usize) -> Result<AmbiguousPath> {
    if n < 8 {
        return Err(Error::BadN { n, reason: "the ambiguous path construction needs n >= 8".into() });
    }
    let letter = |i: usize| Letter(i - 1);
    let mut b = Builder::new(PartiallyOrderedPair::coarsest(n));
    for i in 1..n {
        b.push(letter(i), letter(i + 1))?;
    }
    for loser in (1..=n - 2).rev().step_by(2) {
        b.push(letter(n), letter(loser))?;
    }
    let mut checkpoints = vec![b.form_x()?];
    let complete_blocks = ambiguous_completeness(n);
    for _ in 1..complete_blocks {
        let known = Row::BOTH
            .into_iter()
            .find(|&t| b.pop.row(t).is_fully_singleton())
            .ok_or_else(|| precondition("neither row is fully known"))?;
        refresh_on(&mut b)?;
        halve_on(&mut b, known)?;
        checkpoints.push(b.form_x()?);
    }
    let types = b.moves.iter().rev().map(|&(_, _, t)| t).collect();
    let path = AmbiguousPath { n, moves: b.path_order(), types, complete_blocks, checkpoints };
    debug_assert_eq!(c_completeness(&path.winners(), n).count, complete_blocks);
    Ok(path)
}

/// For each row, the letters without a known position there that nevertheless
/// sit at the same position in every agreeing irreducible pair.
pub fn has_definitive_positions(pop: &PartiallyOrderedPair) -> Result<[BTreeSet<Letter>; 2]> {
    let mut seen: [BTreeMap<Letter, Option<usize>>; 2] = Default::default();
    let mut any = false;
    for pair in agreeing_pairs(pop, true)? {
        any = true;
        for t in Row::BOTH {
            for a in pop.row(t).unresolved() {
                let p = pair.position(t, a);
                seen[t.index()]
                    .entry(a)
                    .and_modify(|q| {
                        if *q != Some(p) {
                            *q = None
                        }
                    })
                    .or_insert(Some(p));
            }
        }
    }
    if !any {
        return Err(precondition("no irreducible pair agrees with this partially ordered pair"));
    }
    Ok(seen.map(|m| m.into_iter().filter(|(_, p)| p.is_some()).map(|(a, _)| a).collect()))
}
