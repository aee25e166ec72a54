//! Recovering a starting permutation from four Zorich matrices. The fourth
//! matrix is a type-0 block with two losers and the first and third are
//! type-1 powers, so only a partial ordering of positions survives.
//!
//! Run with `cargo run --example recover_permutation`.

use iet_rewind::oracle::brute_force_initial_perms;
use iet_rewind::partition::enumerate_agreeing_perms;
use iet_rewind::recovery::{recover_perm, RecoveryOptions};
use iet_rewind::VisitationMatrix;

fn matrix(rows: [[i64; 5]; 5]) -> VisitationMatrix {
    VisitationMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).expect("square")
}

fn main() -> iet_rewind::Result<()> {
    let matrices = vec![
        matrix([[1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [0, 1, 0, 0, 0]]),
        matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 0, 0, 0, 1]]),
        matrix([[1, 1, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]),
        matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 0, 1, 0, 1]]),
    ];
    let rec = recover_perm(&matrices, &RecoveryOptions::traced())?;
    for entry in &rec.trace {
        println!("Q before matrix {} ({:?}, type {}): {}", entry.move_index, entry.kind, entry.type_tag, entry.state);
    }
    let candidates = enumerate_agreeing_perms(&rec.ordering, true)?;
    println!("\n{} permutations agree with {}:", candidates.len(), rec.ordering);
    for p in &candidates {
        println!("  {p:?}");
    }
    let oracle = brute_force_initial_perms(&matrices, 5)?;
    println!("brute force over all 120 permutations finds the same set: {}", oracle == candidates);
    Ok(())
}
