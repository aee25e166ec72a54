//! Recovering the initial pair of a random complete path from its matrices alone.
//!
//! Run with `cargo run --example recover_pair [seed]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iet_rewind::partition::agreeing_up_to_inverse;
use iet_rewind::rauzy::{c_completeness, RauzyPath};
use iet_rewind::recovery::{recover_pair_from_matrices, RecoveryOptions};
use iet_rewind::zorich::{accelerate, maximal_runs};
use iet_rewind::{Alphabet, Pair, Row};

fn main() -> iet_rewind::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Pair::from_indices(&[0, 1, 2, 3, 4, 5], &[3, 5, 1, 4, 0, 2])?;
    let mut path = RauzyPath::start(start.clone())?;
    while c_completeness(&path.winners(), 6).count < 2 {
        path.push(if rng.gen::<bool>() { Row::One } else { Row::Zero })?;
    }
    let zorich = accelerate(&path, &maximal_runs(&path.types()))?;
    println!("{} Rauzy moves, {} Zorich matrices, 2-complete", path.len(), zorich.len());

    let names = Alphabet::numbered(6)?;
    let rec = recover_pair_from_matrices(&zorich.matrices, &RecoveryOptions::traced())?;
    for entry in rec.trace.iter().take(4) {
        println!("before move {:>3} ({:?}): {}", entry.move_index, entry.kind, entry.state.render(&names));
    }
    println!("...\nrecovered: {}", rec.pop.render(&names));
    let starts = agreeing_up_to_inverse(&rec.pop)?;
    println!("candidate starts (with inverses): {}", starts.len());
    println!("true start {start:?} among them: {}", starts.contains(&start));
    Ok(())
}
