//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use iet_rewind::{all_permutations, Alphabet, Letter, Pair, Permutation, Row, VisitationMatrix};

pub type Move = (Letter, BTreeSet<Letter>);

pub fn numbered_moves(raw: &[(usize, &[usize])]) -> Vec<Move> {
    raw.iter().map(|(w, l)| (Letter(w - 1), l.iter().map(|&i| Letter(i - 1)).collect())).collect()
}

pub fn named_moves(alphabet: &Alphabet, raw: &[(&str, &str)]) -> Vec<Move> {
    let letter = |s: char| alphabet.letter(&s.to_string()).unwrap();
    raw.iter().map(|(w, l)| (letter(w.chars().next().unwrap()), l.chars().map(letter).collect())).collect()
}

pub fn incomplete_six() -> Vec<Move> {
    numbered_moves(&[(1, &[2, 3]), (4, &[1, 5]), (6, &[2, 3, 4])])
}

pub fn complete_five() -> (Alphabet, Vec<Move>) {
    let abc = Alphabet::latin(5).unwrap();
    let moves =
        named_moves(&abc, &[("E", "AB"), ("C", "E"), ("D", "C"), ("C", "D"), ("E", "CD"), ("A", "CDE"), ("B", "A")]);
    (abc, moves)
}

pub fn complete_eight() -> Vec<Move> {
    numbered_moves(&[
        (8, &[1, 2, 3, 4, 6]),
        (7, &[8]),
        (6, &[7]),
        (5, &[6]),
        (4, &[5]),
        (3, &[4]),
        (2, &[3]),
        (1, &[2]),
    ])
}

pub fn matrix(rows: [[i64; 5]; 5]) -> VisitationMatrix {
    VisitationMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

pub fn four_permutation_matrices() -> Vec<VisitationMatrix> {
    vec![
        matrix([[1, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [0, 1, 0, 0, 0]]),
        matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 0, 0, 0, 1]]),
        matrix([[1, 1, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0]]),
        matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 0, 1, 0, 1]]),
    ]
}

pub fn six_permutation_matrices() -> Vec<VisitationMatrix> {
    let mut m = four_permutation_matrices();
    m.push(matrix([[1, 1, 1, 1, 0], [0, 0, 0, 0, 1], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]));
    m.push(matrix([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 1, 1, 0, 1]]));
    m
}

/// The accelerated matrix of one normalized move: identity plus a 1 in row
/// `winner` for every loser column.
pub fn move_matrix(n: usize, (winner, losers): &Move) -> VisitationMatrix {
    let mut m = VisitationMatrix::identity(n);
    for l in losers {
        m.set(winner.0, l.0, 1);
    }
    m
}

pub fn random_pair(rng: &mut impl Rng, n: usize) -> Pair {
    let perms: Vec<Permutation> = all_permutations(n).collect();
    let rows = |p: &Permutation| p.image().iter().map(|&v| v - 1).collect::<Vec<_>>();
    loop {
        let (a, b) = (perms.choose(rng).unwrap(), perms.choose(rng).unwrap());
        let pair = Pair::from_indices(&rows(a), &rows(b)).unwrap();
        if pair.is_irreducible() {
            return pair;
        }
    }
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    loop {
        let mut image: Vec<usize> = (1..=n).collect();
        image.shuffle(rng);
        let perm = Permutation::new(image).unwrap();
        if perm.is_irreducible() {
            return perm;
        }
    }
}

pub fn random_type(rng: &mut impl Rng) -> Row {
    if rng.gen::<bool>() {
        Row::One
    } else {
        Row::Zero
    }
}

pub fn random_types(rng: &mut impl Rng, len: usize) -> Vec<Row> {
    (0..len).map(|_| random_type(rng)).collect()
}
