//! Reading a permutation path as a pair path through a labeling of positions.
//!
//! Run with `cargo run --example lifting`.

use iet_rewind::lifting::{lift_with_labelings, psi_matrix};
use iet_rewind::rauzy::{Flavor, RauzyPath};
use iet_rewind::zorich::ZorichPath;
use iet_rewind::{Labeling, Pair, Permutation, Row};

fn names(labeling: &Labeling) -> Vec<usize> {
    labeling.letters().iter().map(|a| a.0 + 1).collect()
}

fn main() -> iet_rewind::Result<()> {
    let perm = Permutation::new(vec![4, 1, 3, 5, 2])?;
    let types = [Row::One, Row::One, Row::Zero, Row::One, Row::Zero, Row::Zero];
    let perm_path = RauzyPath::simulate(perm.clone(), &types)?;
    let a_path = ZorichPath::new(Flavor::Permutation, perm_path.matrices.clone());

    let tau = Labeling::identity(5);
    let lifted = lift_with_labelings(&a_path, &tau)?;
    let pair = Pair::lift(&perm, &tau)?;
    let pair_path = RauzyPath::simulate(pair.clone(), &types)?;

    println!("permutation {perm:?} read as the pair {pair:?}");
    for (j, labeling) in lifted.labelings.iter().enumerate().take(types.len()) {
        let psi = psi_matrix(labeling);
        let identical = lifted.path.matrices[j] == pair_path.matrices[j];
        println!(
            "step {}: type {}, labeling {:?}, Psi is a permutation matrix: {}, lifted matrix matches pair step: {identical}",
            j + 1,
            types[j],
            names(labeling),
            (&psi * &psi.transpose()).is_identity(),
        );
    }
    println!("final labeling {:?}", names(lifted.final_labeling()));
    for (start, t) in lifted.candidate_starts(&perm)? {
        let again = RauzyPath::simulate(start.clone(), &t)?;
        println!(
            "start {start:?} with types {t:?} reproduces the lifted matrices: {}",
            again.matrices == lifted.path.matrices
        );
    }
    Ok(())
}
