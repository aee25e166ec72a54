//! Recover the initial combinatorial data of Rauzy and Zorich induction
//! paths from their visitation matrices.

pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod io;
pub mod lifting;
pub mod matrix;
pub mod oracle;
pub mod partition;
pub mod rauzy;
pub mod recovery;
pub mod sharpness;
pub mod zorich;

pub use combinatorics::{all_permutations, Alphabet, Labeling, Letter, Pair, Permutation, Row};
pub use error::{Error, Result};
pub use matrix::VisitationMatrix;
