//! The command-line front end: simulate paths, recover their starts, check
//! recoveries against brute force, and emit ambiguous paths.
//!
//! Every command is deterministic in its inputs (and seed), and all output is
//! JSON. Exit codes: 0 success, 2 unrealizable input, 3 verification mismatch,
//! 4 malformed input or arguments.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::{Alphabet, Labeling, Letter, Pair, Permutation, Row};
use crate::error::{Error, Result};
use crate::io::{from_json, ordering_json, pop_json, to_json, PairJson, PathFile, StartJson};
use crate::oracle::{
    brute_force_initial_pairs, brute_force_initial_perms, forward_simulate, perm_realizes, OracleOptions,
};
use crate::partition::{agreeing_up_to_inverse, enumerate_agreeing, enumerate_agreeing_perms};
use crate::rauzy::{c_completeness, Flavor, InductionState, MoveRecord, RauzyPath};
use crate::recovery::{recover_pair_from_matrices, recover_perm, RecoveryOptions, StepKind};
use crate::sharpness::build_ambiguous_path;
use crate::zorich::{accelerate, maximal_runs, normalized_moves};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNREALIZABLE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_MALFORMED: i32 = 4;

/// Upper limit on random steps when simulating until a completeness target.
const MAX_RANDOM_STEPS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "iet-rewind", version, about = "Rauzy/Zorich induction paths and the recovery of their starts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run induction forwards from a start and write a path file.
    Simulate(SimulateArgs),
    /// Recover what a path file's matrices force on the start.
    Recover(RecoverArgs),
    /// Check that every recovered candidate starts the path, optionally against brute force.
    Verify(VerifyArgs),
    /// Emit a path that is floor(log2 n) - 1 complete yet does not determine its start.
    Sharpness(SharpnessArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON start: {"alphabet":[..],"p0":[..],"p1":[..]} or {"n":n,"image":[..]}.
    #[arg(long)]
    pub start: PathBuf,
    /// Comma-separated steps: `0`, `1`, `1x6` (repeat), `group(4,2)` or `zorich`.
    #[arg(long, default_value = "")]
    pub script: String,
    /// Seed for random steps appended after the script.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of random steps.
    #[arg(long)]
    pub length: Option<usize>,
    /// Append random steps until the path is this many times complete.
    #[arg(long = "until-c-complete")]
    pub until_c_complete: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    pub file: PathBuf,
    /// Include every intermediate partial order.
    #[arg(long)]
    pub trace: bool,
    /// Permutation files: relabel type-1 moves without isolating the pivot position first.
    #[arg(long)]
    pub verbatim: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// Also enumerate every start by brute force and compare.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[arg(long)]
    pub n: usize,
    /// Write the path file here and print only the report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parsed `--script`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub types: Vec<Row>,
    pub grouping: Grouping,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Grouping {
    /// One matrix per Rauzy move.
    #[default]
    Single,
    /// Maximal same-type runs.
    Zorich,
    Explicit(Vec<usize>),
}

impl Script {
    pub fn parse(spec: &str) -> Result<Script> {
        let bad = |tok: &str| Error::InvalidInput(format!("cannot read script step {tok:?}"));
        let mut script = Script::default();
        let mut rest = spec.trim();
        while !rest.is_empty() {
            let tok;
            if rest.starts_with("group(") {
                let close = rest.find(')').ok_or_else(|| bad(rest))?;
                tok = &rest[..=close];
                rest = &rest[close + 1..];
                let sizes = tok["group(".len()..tok.len() - 1]
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| bad(tok)))
                    .collect::<Result<Vec<_>>>()?;
                script.grouping = Grouping::Explicit(sizes);
            } else {
                let end = rest.find([',', ' ']).unwrap_or(rest.len());
                tok = &rest[..end];
                rest = &rest[end..];
                if tok == "zorich" {
                    script.grouping = Grouping::Zorich;
                } else {
                    let (t, count) = match tok.split_once(['x', '×']) {
                        Some((t, c)) => (t.trim(), c.trim().parse::<usize>().map_err(|_| bad(tok))?),
                        None => (tok.trim(), 1),
                    };
                    let t = Row::from_index(t.parse::<usize>().map_err(|_| bad(tok))?)?;
                    script.types.extend(std::iter::repeat_n(t, count));
                }
            }
            rest = rest.trim_start_matches([',', ' ']);
        }
        Ok(script)
    }
}

fn random_row(rng: &mut ChaCha8Rng) -> Row {
    if rng.gen::<bool>() {
        Row::One
    } else {
        Row::Zero
    }
}

/// Extends `path` randomly; `winners` reports the letters that have won so far.
fn extend_randomly<S: InductionState>(
    path: &mut RauzyPath<S>,
    seed: Option<u64>,
    length: Option<usize>,
    until: Option<usize>,
    winners: impl Fn(&RauzyPath<S>) -> Vec<Letter>,
) -> Result<()> {
    if seed.is_none() && (length.is_some() || until.is_some()) {
        return Err(Error::InvalidInput("random steps need --seed".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
    for _ in 0..length.unwrap_or(0) {
        path.push(random_row(&mut rng))?;
    }
    if let Some(c) = until {
        let n = path.last_state().size();
        while c_completeness(&winners(path), n).count < c {
            if path.len() >= MAX_RANDOM_STEPS {
                return Err(Error::InvalidInput(format!("no {c}-complete path within {MAX_RANDOM_STEPS} steps")));
            }
            path.push(random_row(&mut rng))?;
        }
    }
    Ok(())
}

fn group_sizes(grouping: &Grouping, types: &[Row]) -> Vec<usize> {
    match grouping {
        Grouping::Single => vec![1; types.len()],
        Grouping::Zorich => maximal_runs(types),
        Grouping::Explicit(sizes) => sizes.clone(),
    }
}

fn path_file<S: InductionState>(
    path: &RauzyPath<S>,
    grouping: &Grouping,
    alphabet: Option<&Alphabet>,
    start: StartJson,
) -> Result<PathFile> {
    let sizes = group_sizes(grouping, &path.types());
    let z = accelerate(path, &sizes)?;
    let recorded = (*grouping != Grouping::Single).then_some(sizes);
    let mut file =
        PathFile::new(S::FLAVOR, path.last_state().size(), alphabet, &z.matrices, Some(&path.moves), recorded);
    file.start = Some(start);
    Ok(file)
}

pub fn cmd_simulate(
    start: &StartJson,
    script: &Script,
    seed: Option<u64>,
    length: Option<usize>,
    until_c_complete: Option<usize>,
) -> Result<PathFile> {
    match start {
        StartJson::Pair(json) => {
            let (pair, alphabet) = json.to_pair()?;
            let mut path = RauzyPath::simulate(pair, &script.types)?;
            extend_randomly(&mut path, seed, length, until_c_complete, |p| p.winners())?;
            path_file(&path, &script.grouping, Some(&alphabet), start.clone())
        }
        StartJson::Permutation(json) => {
            let perm = json.to_permutation()?;
            let n = perm.n();
            let mut path = RauzyPath::simulate(perm.clone(), &script.types)?;
            // completeness is counted on the pair read with the identity labeling
            let lifted_winners = |p: &RauzyPath<Permutation>| {
                let pair = Pair::lift(&perm, &Labeling::identity(n)).expect("same size");
                RauzyPath::simulate(pair, &p.types()).map(|q| q.winners()).unwrap_or_default()
            };
            extend_randomly(&mut path, seed, length, until_c_complete, lifted_winners)?;
            path_file(&path, &script.grouping, None, start.clone())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceJson {
    #[serde(rename = "move")]
    pub move_index: usize,
    #[serde(rename = "type")]
    pub type_tag: u8,
    pub step: String,
    #[serde(rename = "Q0", skip_serializing_if = "Option::is_none")]
    pub q0: Option<Vec<Vec<String>>>,
    #[serde(rename = "Q1", skip_serializing_if = "Option::is_none")]
    pub q1: Option<Vec<Vec<String>>>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoverReport {
    pub flavor: String,
    #[serde(rename = "Q0", skip_serializing_if = "Option::is_none")]
    pub q0: Option<Vec<Vec<String>>>,
    #[serde(rename = "Q1", skip_serializing_if = "Option::is_none")]
    pub q1: Option<Vec<Vec<String>>>,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<usize>>>,
    pub types: Vec<u8>,
    pub unique: bool,
    /// The start when unique: a pair (up to inverse) or a permutation.
    pub pair: Option<PairJson>,
    pub pi: Option<Vec<usize>>,
    /// Starts compatible with the recovered order (pairs: with their inverses);
    /// null when too many letters are unresolved to enumerate.
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceJson>>,
}

fn step_name(kind: StepKind) -> String {
    match kind {
        StepKind::Seed => "seed",
        StepKind::SameBlock => "same-block",
        StepKind::AdjacentBlock => "adjacent-block",
        StepKind::SpanWithWinner => "span-with-winner",
        StepKind::SpanAfterWinner => "span-after-winner",
        StepKind::Relabel => "relabel",
    }
    .to_string()
}

fn tags(types: &[Row]) -> Vec<u8> {
    types.iter().map(|t| t.index() as u8).collect()
}

pub fn cmd_recover(file: &PathFile, trace: bool, verbatim: bool) -> Result<RecoverReport> {
    let (matrices, _) = file.validate()?;
    let options = RecoveryOptions { trace, verbatim_type_one: verbatim };
    match file.flavor() {
        Flavor::Pair => {
            let alphabet = file.alphabet()?;
            let rec = if matrices.is_empty() {
                crate::recovery::recover_pair(file.n, &[], &options)?
            } else {
                recover_pair_from_matrices(&matrices, &options)?
            };
            let agreeing = enumerate_agreeing(&rec.pop, true).ok();
            let unique_pair = match &agreeing {
                Some(list) if list.len() == 1 => Some(list[0].clone()),
                Some(_) => None,
                None => rec.pop.unique_pair(),
            };
            let count = agreeing.map(|list| {
                let mut all: BTreeSet<Pair> = list.iter().cloned().collect();
                all.extend(list.iter().map(Pair::inverse));
                all.len()
            });
            let [q0, q1] = pop_json(&rec.pop, &alphabet);
            let trace = trace.then(|| {
                rec.trace
                    .iter()
                    .map(|e| {
                        let [q0, q1] = pop_json(&e.state, &alphabet);
                        TraceJson {
                            move_index: e.move_index,
                            type_tag: e.type_tag.index() as u8,
                            step: step_name(e.kind),
                            q0: Some(q0),
                            q1: Some(q1),
                            q: None,
                        }
                    })
                    .collect()
            });
            Ok(RecoverReport {
                flavor: "pair".into(),
                q0: Some(q0),
                q1: Some(q1),
                q: None,
                types: tags(&rec.types),
                unique: unique_pair.is_some(),
                pair: unique_pair.map(|p| PairJson::from_pair(&p, &alphabet)),
                pi: None,
                count,
                trace,
            })
        }
        Flavor::Permutation => {
            let rec = recover_perm(&matrices, &options)?;
            let agreeing = enumerate_agreeing_perms(&rec.ordering, true).ok();
            let unique = match &agreeing {
                Some(list) if list.len() == 1 => Some(list[0].clone()),
                Some(_) => None,
                None => rec.ordering.unique_permutation(),
            };
            let trace = trace.then(|| {
                rec.trace
                    .iter()
                    .map(|e| TraceJson {
                        move_index: e.move_index,
                        type_tag: e.type_tag.index() as u8,
                        step: step_name(e.kind),
                        q0: None,
                        q1: None,
                        q: Some(ordering_json(&e.state)),
                    })
                    .collect()
            });
            Ok(RecoverReport {
                flavor: "permutation".into(),
                q0: None,
                q1: None,
                q: Some(ordering_json(&rec.ordering)),
                types: tags(&rec.types),
                unique: unique.is_some(),
                pair: None,
                pi: unique.map(|p| p.image().to_vec()),
                count: agreeing.map(|l| l.len()),
                trace,
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleSummary {
    pub candidates_checked: usize,
    pub realizers: usize,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    /// Candidates allowed by the recovered order (pairs: without inverses).
    pub candidates: usize,
    /// Candidates that actually run through the whole path.
    pub realizers: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<PairJson>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub permutations: Vec<Vec<usize>>,
    /// Whether the start recorded in the file is among the realizers.
    pub start_found: Option<bool>,
    pub oracle: Option<OracleSummary>,
    pub agreement: bool,
}

pub fn cmd_verify(file: &PathFile, oracle: bool, jobs: usize) -> Result<VerifyReport> {
    let (matrices, _) = file.validate()?;
    match file.flavor() {
        Flavor::Pair => {
            let alphabet = file.alphabet()?;
            let moves = normalized_moves(&matrices)?;
            let rec = crate::recovery::recover_pair(file.n, &moves, &RecoveryOptions::default())?;
            let candidates = enumerate_agreeing(&rec.pop, true)?;
            let flipped: Vec<Row> = rec.types.iter().map(|t| t.other()).collect();
            let mut realizers = Vec::new();
            let mut all_realize = true;
            for p in &candidates {
                let ok = forward_simulate(p, &moves, &rec.types)? && forward_simulate(&p.inverse(), &moves, &flipped)?;
                all_realize &= ok;
                if ok {
                    realizers.push(p.clone());
                }
            }
            let start_found = match &file.start {
                Some(StartJson::Pair(json)) => {
                    let (start, _) = json.to_pair()?;
                    Some(realizers.iter().any(|p| *p == start || p.inverse() == start))
                }
                _ => None,
            };
            let oracle = if oracle {
                let report = brute_force_initial_pairs(file.n, &moves, &OracleOptions { jobs, prune: true })?;
                let expected = agreeing_up_to_inverse(&rec.pop)?;
                Some(OracleSummary {
                    candidates_checked: report.candidates_checked,
                    realizers: report.realizers.len(),
                    agree: report.pairs() == expected,
                })
            } else {
                None
            };
            let agreement = all_realize && start_found != Some(false) && oracle.as_ref().is_none_or(|o| o.agree);
            Ok(VerifyReport {
                candidates: candidates.len(),
                realizers: realizers.len(),
                pairs: realizers.iter().map(|p| PairJson::from_pair(p, &alphabet)).collect(),
                permutations: Vec::new(),
                start_found,
                oracle,
                agreement,
            })
        }
        Flavor::Permutation => {
            let rec = recover_perm(&matrices, &RecoveryOptions::default())?;
            let candidates = enumerate_agreeing_perms(&rec.ordering, true)?;
            let realizers: Vec<Permutation> =
                candidates.iter().filter(|p| perm_realizes(p, &matrices)).cloned().collect();
            let start_found = match &file.start {
                Some(StartJson::Permutation(json)) => Some(realizers.contains(&json.to_permutation()?)),
                _ => None,
            };
            let oracle = if oracle {
                let found = brute_force_initial_perms(&matrices, file.n)?;
                Some(OracleSummary {
                    candidates_checked: crate::combinatorics::all_permutations(file.n).count(),
                    realizers: found.len(),
                    agree: found == candidates,
                })
            } else {
                None
            };
            let agreement = realizers.len() == candidates.len()
                && start_found != Some(false)
                && oracle.as_ref().is_none_or(|o| o.agree);
            Ok(VerifyReport {
                candidates: candidates.len(),
                realizers: realizers.len(),
                pairs: Vec::new(),
                permutations: realizers.iter().map(|p| p.image().to_vec()).collect(),
                start_found,
                oracle,
                agreement,
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SharpnessReport {
    pub n: usize,
    /// Complete subpaths the construction concatenates.
    pub complete_blocks: usize,
    /// Completeness measured on the emitted winners.
    pub c_completeness: usize,
    /// Letters without a known position in the recovered start.
    pub unresolved: usize,
    /// `floor(n / 2^C)`.
    pub expected_unresolved: usize,
    /// Agreeing irreducible pairs that run through the path (inverses not listed).
    pub realizers: Vec<PairJson>,
    pub all_candidates_realize: bool,
}

pub fn cmd_sharpness(n: usize) -> Result<(PathFile, SharpnessReport)> {
    let path = build_ambiguous_path(n)?;
    let alphabet = Alphabet::numbered(n)?;
    let records: Vec<MoveRecord> =
        path.moves.iter().zip(&path.types).map(|(&(w, l), &t)| MoveRecord::rauzy(w, l, t)).collect();
    let matrices: Vec<_> =
        records.iter().map(|r| crate::io::record_matrix(Flavor::Pair, n, r)).collect::<Result<_>>()?;
    let file = PathFile::new(Flavor::Pair, n, Some(&alphabet), &matrices, Some(&records), None);
    let moves = path.loser_sets();
    let candidates = enumerate_agreeing(&path.start().pop, true)?;
    let mut realizers = Vec::new();
    for p in &candidates {
        if forward_simulate(p, &moves, &path.types)? {
            realizers.push(PairJson::from_pair(p, &alphabet));
        }
    }
    let report = SharpnessReport {
        n,
        complete_blocks: path.complete_blocks,
        c_completeness: c_completeness(&path.winners(), n).count,
        unresolved: path.start().unresolved(),
        expected_unresolved: n >> path.complete_blocks,
        all_candidates_realize: realizers.len() == candidates.len(),
        realizers,
    };
    Ok((file, report))
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Unrealizable { .. } => EXIT_UNREALIZABLE,
        _ => EXIT_MALFORMED,
    }
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json(&text)
}

fn write_out(out: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

/// Runs one command, writing JSON to `stdout`; returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = (|| -> Result<i32> {
        match cli.command {
            Command::Simulate(a) => {
                let start: StartJson = read_json(&a.start)?;
                let script = Script::parse(&a.script)?;
                let file = cmd_simulate(&start, &script, a.seed, a.length, a.until_c_complete)?;
                write_out(a.out.as_ref(), &to_json(&file)?, stdout)?;
                Ok(EXIT_OK)
            }
            Command::Recover(a) => {
                let file: PathFile = read_json(&a.file)?;
                let report = cmd_recover(&file, a.trace, a.verbatim)?;
                stdout.write_all(to_json(&report)?.as_bytes())?;
                Ok(EXIT_OK)
            }
            Command::Verify(a) => {
                let file: PathFile = read_json(&a.file)?;
                let report = cmd_verify(&file, a.oracle, a.jobs)?;
                stdout.write_all(to_json(&report)?.as_bytes())?;
                Ok(if report.agreement { EXIT_OK } else { EXIT_MISMATCH })
            }
            Command::Sharpness(a) => {
                let (file, report) = cmd_sharpness(a.n)?;
                let code =
                    if report.all_candidates_realize && report.realizers.len() >= 2 { EXIT_OK } else { EXIT_MISMATCH };
                match &a.out {
                    Some(path) => {
                        write_out(Some(path), &to_json(&file)?, stdout)?;
                        stdout.write_all(to_json(&report)?.as_bytes())?;
                    }
                    None => {
                        #[derive(Serialize)]
                        struct Both<'a> {
                            path: &'a PathFile,
                            report: &'a SharpnessReport,
                        }
                        stdout.write_all(to_json(&Both { path: &file, report: &report })?.as_bytes())?;
                    }
                }
                Ok(code)
            }
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_MALFORMED
            } else {
                EXIT_OK
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::PermutationJson;

    #[test]
    fn script_grammar() {
        let s = Script::parse("1×6, group(4,2)").unwrap();
        assert_eq!(s.types, vec![Row::One; 6]);
        assert_eq!(s.grouping, Grouping::Explicit(vec![4, 2]));
        let s = Script::parse("0,1x2 0 zorich").unwrap();
        assert_eq!(s.types, vec![Row::Zero, Row::One, Row::One, Row::Zero]);
        assert_eq!(s.grouping, Grouping::Zorich);
        assert_eq!(Script::parse("").unwrap(), Script::default());
        assert!(Script::parse("2").is_err());
        assert!(Script::parse("group(1,").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Unrealizable { step: 1, reason: String::new() }), 2);
        assert_eq!(exit_code(&Error::MalformedMatrix("x".into())), 4);
    }

    #[test]
    fn permutation_json_round_trip() {
        let perm = Permutation::new(vec![4, 3, 2, 1]).unwrap();
        let json = PermutationJson::from_permutation(&perm);
        let back: StartJson = from_json(&to_json(&json).unwrap()).unwrap();
        assert_eq!(back, StartJson::Permutation(json));
    }
}
