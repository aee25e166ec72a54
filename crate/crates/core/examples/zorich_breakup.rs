//! Accelerating six type-1 moves into two Zorich matrices and breaking an
//! accelerated matrix back into factors with entries at most one.
//!
//! Run with `cargo run --example zorich_breakup`.

use iet_rewind::rauzy::RauzyPath;
use iet_rewind::zorich::{accelerate, breakup, extract_move, maximal_runs};
use iet_rewind::{Alphabet, Pair, Row, VisitationMatrix};

fn print(m: &VisitationMatrix) {
    for row in m.rows() {
        println!("  {row:?}");
    }
}

fn main() -> iet_rewind::Result<()> {
    let abc = Alphabet::latin(5)?;
    let start = Pair::from_indices(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0])?;
    let path = RauzyPath::simulate(start, &[Row::One; 6])?;

    let coarsest = accelerate(&path, &maximal_runs(&path.types()))?;
    println!("one Zorich step for all six moves:");
    print(&coarsest.matrices[0]);

    let grouped = accelerate(&path, &[4, 2])?;
    for (i, m) in grouped.matrices.iter().enumerate() {
        let mv = extract_move(m)?;
        let losers: String = mv.losers.iter().map(|&a| abc.name(a)).collect();
        println!("\ngroup {} (winner {}, losers {losers}, {} moves):", i + 1, abc.name(mv.winner), mv.steps());
        print(m);
    }

    let factors = breakup(&coarsest.matrices[0])?;
    println!("\nbreakup of the single Zorich matrix into {} factors:", factors.len());
    for f in &factors {
        print(f);
        println!();
    }
    let rebuilt = VisitationMatrix::product(5, &factors);
    println!("product of the factors equals the Zorich matrix: {}", rebuilt == coarsest.matrices[0]);
    Ok(())
}
