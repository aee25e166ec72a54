//! Brute-force answers to "which starts produce this path?", used to check
//! the recovery algorithms. Nothing here goes through the recovery code: the
//! oracle only runs induction forwards from every candidate start.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::combinatorics::{all_permutations, Letter, Pair, Permutation, Row};
use crate::error::{Error, Result};
use crate::matrix::VisitationMatrix;
use crate::rauzy::{rauzy_step_pair, rauzy_step_perm};

pub const MAX_PAIR_ORACLE_N: usize = 6;
pub const MAX_PERM_ORACLE_N: usize = 8;

/// Replays each move as `|losers|` Rauzy steps of the given type and checks
/// that the winner never changes and the losers are exactly the given set.
/// Leaving the irreducible domain counts as a mismatch.
pub fn forward_simulate(pair: &Pair, moves: &[(Letter, BTreeSet<Letter>)], types: &[Row]) -> Result<bool> {
    if types.len() != moves.len() {
        return Err(Error::InvalidInput(format!("{} types for {} moves", types.len(), moves.len())));
    }
    let mut state = pair.clone();
    for ((w, losers), &t) in moves.iter().zip(types) {
        let mut seen = BTreeSet::new();
        for _ in 0..losers.len() {
            let Ok((next, _, rec)) = rauzy_step_pair(&state, t) else { return Ok(false) };
            if rec.winner != *w {
                return Ok(false);
            }
            seen.extend(rec.losers);
            state = next;
        }
        if seen != *losers {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The only type assignment under which `pair` could produce the moves: at
/// each move the winner has to be the rightmost letter of the fixed row.
pub fn forced_types(pair: &Pair, moves: &[(Letter, BTreeSet<Letter>)]) -> Option<Vec<Row>> {
    let mut state = pair.clone();
    let mut types = Vec::with_capacity(moves.len());
    for (w, losers) in moves {
        let t = Row::BOTH.into_iter().find(|&t| state.rightmost(t) == *w)?;
        for _ in 0..losers.len() {
            state = rauzy_step_pair(&state, t).ok()?.0;
        }
        types.push(t);
    }
    Some(types)
}

#[derive(Clone, Debug)]
pub struct RealizabilityReport {
    pub candidates_checked: usize,
    /// Every realizing start with its type assignment, in lexicographic order of the pair.
    pub realizers: Vec<(Pair, Vec<Row>)>,
    pub elapsed: Duration,
}

impl RealizabilityReport {
    pub fn pairs(&self) -> BTreeSet<Pair> {
        self.realizers.iter().map(|(p, _)| p.clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    /// Worker threads; 1 runs inline.
    pub jobs: usize,
    /// Skip starts where the first winner is not rightmost in either row.
    pub prune: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { jobs: 1, prune: true }
    }
}

fn rows_of(perm: &Permutation) -> Vec<Letter> {
    perm.image().iter().map(|&v| Letter(v - 1)).collect()
}

/// A realizing start with the type of each move.
type Realizer = (Pair, Vec<Row>);

/// Checks every pair over `n` letters as a start for the moves.
pub fn brute_force_initial_pairs(
    n: usize,
    moves: &[(Letter, BTreeSet<Letter>)],
    options: &OracleOptions,
) -> Result<RealizabilityReport> {
    if n > MAX_PAIR_ORACLE_N {
        return Err(Error::BoundExceeded { n, bound: MAX_PAIR_ORACLE_N });
    }
    let started = Instant::now();
    let rows: Vec<Vec<Letter>> = all_permutations(n).map(|p| rows_of(&p)).collect();
    let first_winner = moves.first().map(|(w, _)| *w);
    let scan = |row0s: &[Vec<Letter>]| -> (usize, Vec<Realizer>) {
        let mut checked = 0;
        let mut found = Vec::new();
        for row0 in row0s {
            for row1 in &rows {
                let pair = Pair::from_rows(row0.clone(), row1.clone()).expect("permutation rows");
                if options.prune {
                    if let Some(w) = first_winner {
                        if pair.rightmost(Row::Zero) != w && pair.rightmost(Row::One) != w {
                            continue;
                        }
                    }
                }
                checked += 1;
                if !pair.is_irreducible() {
                    continue;
                }
                if let Some(types) = forced_types(&pair, moves) {
                    if forward_simulate(&pair, moves, &types).unwrap_or(false) {
                        found.push((pair, types));
                    }
                }
            }
        }
        (checked, found)
    };
    let jobs = options.jobs.max(1);
    let chunk = rows.len().div_ceil(jobs);
    let parts: Vec<(usize, Vec<Realizer>)> = if jobs == 1 {
        vec![scan(&rows)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = rows.chunks(chunk).map(|c| s.spawn(move || scan(c))).collect();
            handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
        })
    };
    let mut report = RealizabilityReport { candidates_checked: 0, realizers: Vec::new(), elapsed: Duration::ZERO };
    for (checked, found) in parts {
        report.candidates_checked += checked;
        report.realizers.extend(found);
    }
    report.elapsed = started.elapsed();
    Ok(report)
}

/// Does some run of same-type steps from `perm` multiply to exactly `target`?
/// Returns every state reachable that way.
fn block_successors(perm: &Permutation, target: &VisitationMatrix) -> Vec<Permutation> {
    let n = perm.n();
    let mut out = Vec::new();
    for t in Row::BOTH {
        let mut state = perm.clone();
        let mut product = VisitationMatrix::identity(n);
        while let Ok((next, a, _)) = rauzy_step_perm(&state, t) {
            product = &product * &a;
            state = next;
            if product.entry_sum() > target.entry_sum() {
                break;
            }
            if product == *target {
                out.push(state.clone());
                break;
            }
        }
    }
    out
}

/// Can some choice of same-type runs from `start` reproduce each matrix exactly?
pub fn perm_realizes(start: &Permutation, matrices: &[VisitationMatrix]) -> bool {
    let mut frontier = vec![start.clone()];
    for m in matrices {
        frontier = frontier.iter().flat_map(|p| block_successors(p, m)).collect();
        if frontier.is_empty() {
            return false;
        }
    }
    true
}

/// Every irreducible permutation from which some choice of same-type runs
/// reproduces each matrix exactly.
pub fn brute_force_initial_perms(matrices: &[VisitationMatrix], n: usize) -> Result<Vec<Permutation>> {
    if n > MAX_PERM_ORACLE_N {
        return Err(Error::BoundExceeded { n, bound: MAX_PERM_ORACLE_N });
    }
    if let Some(i) = matrices.iter().position(|m| m.n() != n) {
        return Err(Error::MalformedMatrix(format!("matrix {} is not {n}x{n}", i + 1)));
    }
    Ok(all_permutations(n).filter(|p| p.is_irreducible() && perm_realizes(p, matrices)).collect())
}
