//! Comparing recovery with exhaustive search on random short paths.
//!
//! Run with `cargo run --release --example oracle_check [count]`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use iet_rewind::oracle::{brute_force_initial_pairs, OracleOptions};
use iet_rewind::partition::agreeing_up_to_inverse;
use iet_rewind::rauzy::RauzyPath;
use iet_rewind::recovery::{recover_pair, RecoveryOptions};
use iet_rewind::{all_permutations, Pair, Permutation, Row};

fn main() -> iet_rewind::Result<()> {
    let count: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut agree = 0;
    for _ in 0..count {
        let n = rng.gen_range(3..=5);
        let perms: Vec<Permutation> = all_permutations(n).collect();
        let start = loop {
            let rows = [perms.choose(&mut rng).expect("non-empty"), perms.choose(&mut rng).expect("non-empty")];
            let to_rows = |p: &Permutation| p.image().iter().map(|&v| v - 1).collect::<Vec<_>>();
            let pair = Pair::from_indices(&to_rows(rows[0]), &to_rows(rows[1]))?;
            if pair.is_irreducible() {
                break pair;
            }
        };
        let types: Vec<Row> =
            (0..rng.gen_range(1..=12)).map(|_| if rng.gen::<bool>() { Row::One } else { Row::Zero }).collect();
        let path = RauzyPath::simulate(start, &types)?;
        let moves: Vec<_> = path.moves.iter().map(|m| (m.winner, m.losers.clone())).collect();
        let recovered = agreeing_up_to_inverse(&recover_pair(n, &moves, &RecoveryOptions::default())?.pop)?;
        let report = brute_force_initial_pairs(n, &moves, &OracleOptions { jobs: 2, prune: true })?;
        let same = report.pairs() == recovered;
        agree += usize::from(same);
        println!(
            "n = {n}, {:>2} moves: recovery allows {:>4} starts, brute force finds {:>4} of {:>5} checked -> {}",
            moves.len(),
            recovered.len(),
            report.realizers.len(),
            report.candidates_checked,
            if same { "agree" } else { "DISAGREE" },
        );
    }
    println!("{agree}/{count} paths agree");
    Ok(())
}
