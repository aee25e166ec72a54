//! Forward Rauzy induction on a pair and on its projected permutation.
//!
//! Run with `cargo run --example rauzy_steps`.

use iet_rewind::rauzy::RauzyPath;
use iet_rewind::{Alphabet, Pair, Row};

fn main() -> iet_rewind::Result<()> {
    let abc = Alphabet::latin(5)?;
    let start = Pair::from_indices(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0])?;
    let types = [Row::Zero, Row::One, Row::One, Row::Zero, Row::One];
    let path = RauzyPath::simulate(start.clone(), &types)?;
    let show = |p: &Pair, t: Row| p.row(t).iter().map(|&a| abc.name(a)).collect::<Vec<_>>().join(" ");

    for (j, rec) in path.moves.iter().enumerate() {
        let state = &path.states[j];
        let losers: Vec<&str> = rec.losers.iter().map(|&a| abc.name(a)).collect();
        println!(
            "[{}] {} / {}   type {}  winner {}  loser {}",
            j + 1,
            show(state, Row::Zero),
            show(state, Row::One),
            rec.type_tag.expect("simulated"),
            abc.name(rec.winner),
            losers.join(""),
        );
    }
    let end = path.last_state();
    println!("end: {} / {}", show(end, Row::Zero), show(end, Row::One));

    let perm_path = RauzyPath::simulate(start.project(), &types)?;
    println!("\npermutation {:?} under the same types:", start.project());
    for (j, (m, rec)) in perm_path.matrices.iter().zip(&perm_path.moves).enumerate() {
        println!("A_{} (type {}, k = {:?}):", j + 1, rec.type_tag.expect("simulated"), rec.k);
        for row in m.rows() {
            println!("  {row:?}");
        }
    }
    Ok(())
}
