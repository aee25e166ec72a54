//! Paths that are floor(log2 n) - 1 complete but leave the initial pair
//! undetermined, even up to inverse.
//!
//! Run with `cargo run --release --example sharpness [n ...]`.

use iet_rewind::oracle::forward_simulate;
use iet_rewind::partition::enumerate_agreeing;
use iet_rewind::rauzy::c_completeness;
use iet_rewind::recovery::{recover_pair, RecoveryOptions};
use iet_rewind::sharpness::build_ambiguous_path;
use iet_rewind::Alphabet;

fn main() -> iet_rewind::Result<()> {
    let sizes: Vec<usize> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let sizes = if sizes.is_empty() { vec![8, 9, 12, 16] } else { sizes };
    for n in sizes {
        let path = build_ambiguous_path(n)?;
        let rec = recover_pair(n, &path.loser_sets(), &RecoveryOptions::default())?;
        let starts = enumerate_agreeing(&rec.pop, true)?;
        let realizing =
            starts.iter().filter(|p| forward_simulate(p, &path.loser_sets(), &rec.types).unwrap_or(false)).count();
        println!(
            "n = {n:>2}: {} moves, {}-complete, {} letters unresolved (n / 2^C = {}), {} agreeing pairs, {} run through the path",
            path.moves.len(),
            c_completeness(&path.winners(), n).count,
            path.start().unresolved(),
            n >> path.complete_blocks,
            starts.len(),
            realizing,
        );
        println!("        recovered start: {}", rec.pop.render(&Alphabet::numbered(n)?));
    }
    Ok(())
}
