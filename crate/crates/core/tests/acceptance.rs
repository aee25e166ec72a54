//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built without the test harness so the verdicts are always printed. The
//! process fails when a criterion fails for any reason other than the known
//! discrepancy in the eight-letter reference values, whose FAIL line is still printed
//! together with the evidence.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use iet_rewind::lifting::lift_with_labelings;
use iet_rewind::oracle::{brute_force_initial_pairs, forced_types, forward_simulate, OracleOptions};
use iet_rewind::partition::{agreeing_up_to_inverse, enumerate_agreeing, OrderedPartition, PartiallyOrderedPair};
use iet_rewind::rauzy::{c_completeness, Flavor, RauzyPath};
use iet_rewind::recovery::{halving_violations, recover_pair, recover_perm, uncertainty_profile, RecoveryOptions};
use iet_rewind::sharpness::build_ambiguous_path;
use iet_rewind::zorich::{accelerate, breakup, maximal_runs, ZorichPath};
use iet_rewind::{Labeling, Letter, Pair, Permutation, Row, VisitationMatrix};

struct Verdict {
    pass: bool,
    summary: String,
    details: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { pass: true, summary: String::new(), details: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.pass = false;
            self.details.push(format!("mismatch: {what}"));
        }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.details.push(line.into());
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        self.check(elapsed < limit, format!("runtime {elapsed:.2?} exceeds {limit:?}"));
    }
}

fn numbered(blocks: &[&[usize]]) -> OrderedPartition<Letter> {
    OrderedPartition::from_vecs(blocks.iter().map(|b| b.iter().map(|&i| Letter(i - 1)).collect()).collect()).unwrap()
}

/// Letters printed by their 1-based names.
fn show(q: &OrderedPartition<Letter>) -> String {
    let blocks: Vec<String> = q
        .to_vecs()
        .iter()
        .map(|b| format!("{{{}}}", b.iter().map(|a| (a.0 + 1).to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("({})", blocks.join(","))
}

fn positions(blocks: &[&[usize]]) -> OrderedPartition<usize> {
    OrderedPartition::from_vecs(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
}

fn realizes(pair: &Pair, moves: &[Move]) -> bool {
    forced_types(pair, moves).is_some_and(|types| forward_simulate(pair, moves, &types).unwrap_or(false))
}

/// The smallest `C` with `2^(C+1) >= n + 1`, i.e. `ceil(log2(n + 1) - 1)`.
fn needed_completeness(n: usize) -> usize {
    (0..).find(|c| 1usize << (c + 1) > n).unwrap()
}

/// Returns the verdict and whether its failure is the known discrepancy.
fn golden_examples() -> (Verdict, bool) {
    let mut v = Verdict::new();
    let clock = Instant::now();

    let rec = recover_pair(6, &incomplete_six(), &RecoveryOptions::default()).unwrap();
    v.check(rec.pop.rows[0] == numbered(&[&[2, 3, 4], &[6], &[5], &[1]]), "six letters: row 0");
    v.check(rec.pop.rows[1] == numbered(&[&[5, 6], &[1], &[4], &[2, 3]]), "six letters: row 1");
    let six_count = agreeing_up_to_inverse(&rec.pop).unwrap().len();
    v.check(six_count == 48, format!("six letters: {six_count} starts, expected 48"));

    let (abc, moves) = complete_five();
    let rec = recover_pair(5, &moves, &RecoveryOptions::default()).unwrap();
    let alphabetic: Vec<Letter> = abc.letters().collect();
    let reversed: Vec<Letter> = alphabetic.iter().rev().copied().collect();
    let expected = Pair::from_rows(alphabetic, reversed).unwrap();
    let unique = rec.pop.unique_pair();
    v.check(
        unique.as_ref().is_some_and(|p| *p == expected || p.inverse() == expected),
        "five letters: unique (alphabetic, reversed) start",
    );

    let eight = complete_eight();
    let rec = recover_pair(8, &eight, &RecoveryOptions::traced()).unwrap();
    let before_two = rec.state_before(2).unwrap();
    v.check(
        before_two.rows[0] == numbered(&[&[2, 4, 6, 8], &[1], &[3], &[5], &[7]]),
        "eight letters: row 0 after the seed",
    );
    v.check(
        before_two.rows[1] == numbered(&[&[1, 3, 5, 7], &[2], &[4], &[6], &[8]]),
        "eight letters: row 1 after the seed",
    );
    let reference_q0 = numbered(&[&[2, 8], &[5], &[7], &[4, 6], &[1], &[3]]);
    let reference_q1 = numbered(&[&[1, 3, 5, 7], &[2], &[4], &[6], &[8]]);
    let q1_ok = rec.pop.rows[1] == reference_q1;
    v.check(q1_ok, "eight letters: final row 1");
    let q0_ok = rec.pop.rows[0] == reference_q0;
    v.check(
        q0_ok,
        format!("eight letters: final row 0 is {}, reference {}", show(&rec.pop.rows[0]), show(&reference_q0)),
    );
    let eight_count = agreeing_up_to_inverse(&rec.pop).unwrap().len();
    let count_ok = eight_count == 192;
    v.check(count_ok, format!("eight letters: {eight_count} starts (with inverses), reference 192"));
    // evidence for the discrepancy: nothing agreeing with the reference partitions starts the path,
    // while everything agreeing with the recovered ones does
    let reference = PartiallyOrderedPair::new(reference_q0, reference_q1).unwrap();
    let reference_candidates = enumerate_agreeing(&reference, true).unwrap();
    let reference_realize = reference_candidates.iter().filter(|p| realizes(p, &eight)).count();
    let ours = enumerate_agreeing(&rec.pop, true).unwrap();
    let ours_realize = ours.iter().filter(|p| realizes(p, &eight)).count();
    v.note(format!(
        "eight letters: reference row 0 admits {} pairs of which {reference_realize} start the path; recovered row 0 admits {} of which {ours_realize} do",
        reference_candidates.len(),
        ours.len()
    ));
    let discrepancy_confirmed = reference_realize == 0 && ours_realize == ours.len() && eight_count == 2 * ours.len();

    let exact = recover_perm(&four_permutation_matrices(), &RecoveryOptions::default()).unwrap();
    v.check(exact.ordering == positions(&[&[2, 3, 5], &[4], &[1]]), "four matrices: final ordering");
    let literal = recover_perm(&six_permutation_matrices(), &RecoveryOptions::verbatim()).unwrap();
    let states: Vec<_> = literal.trace.iter().map(|e| e.state.clone()).collect();
    let reference_lines = vec![
        positions(&[&[4, 5], &[1, 2, 3]]),
        positions(&[&[2, 5], &[1, 3, 4]]),
        positions(&[&[2], &[5], &[4], &[1, 3]]),
        positions(&[&[4], &[3], &[2], &[1, 5]]),
        positions(&[&[4], &[3], &[2], &[5], &[1]]),
        positions(&[&[3], &[2], &[5], &[4], &[1]]),
    ];
    v.check(states == reference_lines, "six matrices: intermediate orderings");
    let pi = literal.ordering.unique_permutation();
    v.check(pi.as_ref().is_some_and(|p| p.image() == [5, 2, 1, 4, 3]), "six matrices: unique (5,2,1,4,3)");
    if recover_perm(&six_permutation_matrices(), &RecoveryOptions::default()).is_err() {
        v.note("six matrices: reproduced by the literal relabeling; the exact relabeling rejects the sequence as no start produces it");
    }

    v.within(clock.elapsed(), Duration::from_secs(1));
    let known = !v.pass && discrepancy_confirmed && !q0_ok && !count_ok && {
        // every other check passed
        v.details.iter().filter(|d| d.starts_with("mismatch")).count() == 2
    };
    v.summary = format!("worked examples (eight-letter example: {eight_count} starts vs reference 192)");
    (v, known)
}

fn matrix_identities() -> Verdict {
    let mut v = Verdict::new();
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut paths, mut factors) = (0, 0);
    let unimodular = |m: &VisitationMatrix| m.determinant().abs() == 1;
    for _ in 0..120 {
        let n = rng.gen_range(3..=8);
        let len = rng.gen_range(1..=30);
        let types = random_types(&mut rng, len);
        let path = RauzyPath::simulate(random_pair(&mut rng, n), &types).unwrap();
        let zorich = accelerate(&path, &maximal_runs(&types)).unwrap();
        for theta in &zorich.matrices {
            let pieces = breakup(theta).unwrap();
            factors += pieces.len();
            v.check(VisitationMatrix::product(n, &pieces) == *theta, "breakup product");
            v.check(pieces.iter().all(unimodular), "breakup determinant");
        }
        v.check(path.matrices.iter().chain(&zorich.matrices).all(unimodular), "pair determinant");
        paths += 1;
    }
    for _ in 0..120 {
        let n = rng.gen_range(3..=8);
        let perm = random_permutation(&mut rng, n);
        let len = rng.gen_range(1..=30);
        let types = random_types(&mut rng, len);
        let a_path = RauzyPath::simulate(perm.clone(), &types).unwrap();
        v.check(a_path.matrices.iter().all(unimodular), "permutation determinant");
        let mut letters: Vec<Letter> = (0..n).map(Letter).collect();
        letters.shuffle(&mut rng);
        let tau = Labeling::new(letters).unwrap();
        let lifted = lift_with_labelings(&ZorichPath::new(Flavor::Permutation, a_path.matrices.clone()), &tau).unwrap();
        // independent reading: run the pair obtained from the same labeling
        let pair_path = RauzyPath::simulate(Pair::lift(&perm, &tau).unwrap(), &types).unwrap();
        v.check(lifted.path.matrices == pair_path.matrices, "lifted matrices equal the pair run");
        v.check(lifted.types == types, "lifted types");
        paths += 1;
    }
    v.within(clock.elapsed(), Duration::from_secs(30));
    v.summary = format!("matrix identities on {paths} paths ({factors} breakup factors)");
    v
}

struct UniquenessRun {
    verdict: Verdict,
    halving: Verdict,
}

fn uniqueness_and_halving() -> UniquenessRun {
    let mut v = Verdict::new();
    let mut h = Verdict::new();
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut pair_runs, mut perm_runs, mut boundaries) = (0, 0, 0);
    for _ in 0..300 {
        let n = rng.gen_range(3..=8);
        let c = needed_completeness(n);
        let mut path = RauzyPath::start(random_pair(&mut rng, n)).unwrap();
        while c_completeness(&path.winners(), n).count < c {
            path.push(random_type(&mut rng)).unwrap();
        }
        let moves: Vec<Move> = path.moves.iter().map(|m| (m.winner, m.losers.clone())).collect();
        let rec = recover_pair(n, &moves, &RecoveryOptions::traced()).unwrap();
        let truth = &path.states[0];
        let found = rec.pop.unique_pair();
        v.check(
            found.as_ref().is_some_and(|p| p == truth || p.inverse() == *truth),
            format!("pair start {truth:?} not recovered"),
        );
        let segments = c_completeness(&path.winners(), n);
        let profile = uncertainty_profile(&rec, &segments.ends).unwrap();
        boundaries += profile.len() - 1;
        let bad = halving_violations(&profile);
        h.check(bad.is_empty(), format!("n = {n}, profile {profile:?}, violations {bad:?}"));
        pair_runs += 1;
    }
    for _ in 0..250 {
        let n = rng.gen_range(3..=8);
        let c = needed_completeness(n);
        let perm = random_permutation(&mut rng, n);
        let lifted = Pair::lift(&perm, &Labeling::identity(n)).unwrap();
        let mut path = RauzyPath::start(perm.clone()).unwrap();
        let mut shadow = RauzyPath::start(lifted).unwrap();
        while c_completeness(&shadow.winners(), n).count < c {
            let t = random_type(&mut rng);
            path.push(t).unwrap();
            shadow.push(t).unwrap();
        }
        let rec = recover_perm(&path.matrices, &RecoveryOptions::default()).unwrap();
        let found: Option<Permutation> = rec.ordering.unique_permutation();
        v.check(found.as_ref() == Some(&perm), format!("permutation start {:?} not recovered", perm.image()));
        perm_runs += 1;
    }
    v.within(clock.elapsed(), Duration::from_secs(120));
    v.summary = format!("uniqueness after C-complete paths ({pair_runs} pair starts, {perm_runs} permutation starts)");
    h.summary = format!("uncertainty halving at {boundaries} segment boundaries");
    UniquenessRun { verdict: v, halving: h }
}

fn oracle_and_symmetry() -> (Verdict, Verdict) {
    let mut v = Verdict::new();
    let mut s = Verdict::new();
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut incomplete, mut checked_realizers) = (0, 0);
    let paths = 120;
    for _ in 0..paths {
        let n = rng.gen_range(3..=5);
        let len = rng.gen_range(1..=14);
        let types = random_types(&mut rng, len);
        let path = RauzyPath::simulate(random_pair(&mut rng, n), &types).unwrap();
        incomplete += usize::from(c_completeness(&path.winners(), n).count == 0);
        let moves: Vec<Move> = path.moves.iter().map(|m| (m.winner, m.losers.clone())).collect();
        let expected =
            agreeing_up_to_inverse(&recover_pair(n, &moves, &RecoveryOptions::default()).unwrap().pop).unwrap();
        let report = brute_force_initial_pairs(n, &moves, &OracleOptions { jobs: 2, prune: true }).unwrap();
        v.check(report.pairs() == expected, format!("n = {n}, {} moves", moves.len()));
        for (pair, types) in &report.realizers {
            let flipped: Vec<Row> = types.iter().map(|t| t.other()).collect();
            s.check(forward_simulate(&pair.inverse(), &moves, &flipped).unwrap(), format!("inverse of {pair:?}"));
            checked_realizers += 1;
        }
    }
    v.within(clock.elapsed(), Duration::from_secs(300));
    v.summary = format!("recovery equals brute force on {paths} paths ({incomplete} incomplete)");
    s.summary = format!("inverse realizes with flipped types for {checked_realizers} realizers");
    (v, s)
}

fn sharpness() -> Verdict {
    let mut v = Verdict::new();
    let clock = Instant::now();
    for n in [8, 9, 12, 16] {
        let path = build_ambiguous_path(n).unwrap();
        let c = n.ilog2() as usize - 1;
        let measured = c_completeness(&path.winners(), n).count;
        v.check(measured == c, format!("n = {n}: {measured}-complete, expected {c}"));
        let unresolved = path.start().unresolved();
        v.check(unresolved == n >> c, format!("n = {n}: {unresolved} unresolved letters, expected {}", n >> c));
        let moves = path.loser_sets();
        let realizers: BTreeSet<Pair> =
            enumerate_agreeing(&path.start().pop, true).unwrap().into_iter().filter(|p| realizes(p, &moves)).collect();
        let distinct = realizers.iter().any(|p| realizers.iter().any(|q| q != p && *q != p.inverse()));
        v.check(distinct, format!("n = {n}: fewer than two non-inverse starts"));
        v.note(format!(
            "n = {n}: {measured}-complete, {} moves, {unresolved} unresolved, {} realizing starts",
            moves.len(),
            realizers.len()
        ));
    }
    v.within(clock.elapsed(), Duration::from_secs(60));
    v.summary = "ambiguous C-complete paths for n in {8, 9, 12, 16}".into();
    v
}

fn report(index: usize, v: &Verdict, known: bool) {
    let status = match (v.pass, known) {
        (true, _) => "PASS",
        (false, true) => "FAIL (known reference discrepancy, see details)",
        (false, false) => "FAIL",
    };
    println!("criterion {index}: {status} - {}", v.summary);
    for d in &v.details {
        println!("    {d}");
    }
}

fn main() {
    let (golden, golden_known) = golden_examples();
    let identities = matrix_identities();
    let UniquenessRun { verdict: uniqueness, halving } = uniqueness_and_halving();
    let (oracle, symmetry) = oracle_and_symmetry();
    let sharp = sharpness();

    report(1, &golden, golden_known);
    report(2, &identities, false);
    report(3, &uniqueness, false);
    report(4, &oracle, false);
    report(5, &sharp, false);
    report(6, &halving, false);
    report(7, &symmetry, false);

    let unexpected = (!golden.pass && !golden_known) as usize
        + [&identities, &uniqueness, &oracle, &sharp, &halving, &symmetry].iter().filter(|v| !v.pass).count();
    if unexpected > 0 {
        println!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
