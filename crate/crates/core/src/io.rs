//! JSON representations of pairs, permutations, partial orders and path files.
//!
//! Pair letters are written as symbol strings; permutation positions are
//! written as 1-based integers. Matrices are row-major integer arrays whose
//! rows and columns follow the alphabet order (pairs) or `1..n` (permutations).

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{Alphabet, Letter, Pair, Permutation, Row};
use crate::error::{Error, Result};
use crate::lifting::delta;
use crate::matrix::VisitationMatrix;
use crate::partition::{OrderedPartition, PartialOrdering, PartiallyOrderedPair};
use crate::rauzy::{type_one_matrix, Flavor, MoveRecord};

pub const PATH_FILE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub alphabet: Vec<String>,
    pub p0: Vec<String>,
    pub p1: Vec<String>,
}

impl PairJson {
    pub fn from_pair(pair: &Pair, alphabet: &Alphabet) -> PairJson {
        let names = |t: Row| pair.row(t).iter().map(|&a| alphabet.name(a).to_string()).collect();
        PairJson { alphabet: alphabet.symbols().to_vec(), p0: names(Row::Zero), p1: names(Row::One) }
    }

    pub fn to_pair(&self) -> Result<(Pair, Alphabet)> {
        let alphabet = Alphabet::new(self.alphabet.iter().cloned())?;
        let letters = |row: &[String]| row.iter().map(|s| alphabet.letter(s)).collect::<Result<Vec<_>>>();
        let pair = Pair::from_rows(letters(&self.p0)?, letters(&self.p1)?)?;
        Ok((pair, alphabet))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationJson {
    pub n: usize,
    pub image: Vec<usize>,
}

impl PermutationJson {
    pub fn from_permutation(perm: &Permutation) -> PermutationJson {
        PermutationJson { n: perm.n(), image: perm.image().to_vec() }
    }

    pub fn to_permutation(&self) -> Result<Permutation> {
        if self.image.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "permutation of size {} lists {} images",
                self.n,
                self.image.len()
            )));
        }
        Permutation::new(self.image.clone())
    }
}

/// Either kind of starting data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StartJson {
    Pair(PairJson),
    Permutation(PermutationJson),
}

/// A letter by symbol or a position by number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Token {
    Position(usize),
    Symbol(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveJson {
    pub winner: Token,
    pub losers: Vec<Token>,
    #[serde(rename = "type")]
    pub type_tag: Option<u8>,
    pub k: Option<usize>,
    pub power: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlavorJson {
    Pair,
    Permutation,
}

impl From<Flavor> for FlavorJson {
    fn from(f: Flavor) -> Self {
        match f {
            Flavor::Pair => FlavorJson::Pair,
            Flavor::Permutation => FlavorJson::Permutation,
        }
    }
}

impl From<FlavorJson> for Flavor {
    fn from(f: FlavorJson) -> Self {
        match f {
            FlavorJson::Pair => Flavor::Pair,
            FlavorJson::Permutation => Flavor::Permutation,
        }
    }
}

/// A path on disk: its matrices, optionally the Rauzy moves behind them, and
/// how the moves were grouped into accelerated matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFile {
    pub version: u32,
    pub flavor: FlavorJson,
    /// Matrix index legend for pair-flavor files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
    pub n: usize,
    /// The start used to generate the file; recovery never reads it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<StartJson>,
    pub matrices: Vec<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moves: Option<Vec<MoveJson>>,
    /// Number of moves multiplied into each matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grouping: Option<Vec<usize>>,
}

fn row_tag(t: Row) -> u8 {
    t.index() as u8
}

fn move_to_json(rec: &MoveRecord, flavor: Flavor, alphabet: Option<&Alphabet>) -> MoveJson {
    let token = |a: Letter| match (flavor, alphabet) {
        (Flavor::Pair, Some(alpha)) => Token::Symbol(alpha.name(a).to_string()),
        _ => Token::Position(a.0 + 1),
    };
    MoveJson {
        winner: token(rec.winner),
        losers: rec.losers.iter().map(|&a| token(a)).collect(),
        type_tag: rec.type_tag.map(row_tag),
        k: rec.k,
        power: rec.power,
    }
}

impl PathFile {
    pub fn new(
        flavor: Flavor,
        n: usize,
        alphabet: Option<&Alphabet>,
        matrices: &[VisitationMatrix],
        moves: Option<&[MoveRecord]>,
        grouping: Option<Vec<usize>>,
    ) -> PathFile {
        PathFile {
            version: PATH_FILE_VERSION,
            flavor: flavor.into(),
            alphabet: alphabet.map(|a| a.symbols().to_vec()),
            n,
            start: None,
            matrices: matrices.iter().map(VisitationMatrix::to_rows).collect(),
            moves: moves.map(|ms| ms.iter().map(|m| move_to_json(m, flavor, alphabet)).collect()),
            grouping,
        }
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor.into()
    }

    /// The alphabet for pair files: the listed one, else `1..n`.
    pub fn alphabet(&self) -> Result<Alphabet> {
        match &self.alphabet {
            Some(symbols) => Alphabet::new(symbols.iter().cloned()),
            None => Alphabet::numbered(self.n),
        }
    }

    /// Parses the matrices, reporting the 1-based index of a bad one.
    pub fn parsed_matrices(&self) -> Result<Vec<VisitationMatrix>> {
        self.matrices
            .iter()
            .enumerate()
            .map(|(i, rows)| {
                let m = VisitationMatrix::from_rows(rows.clone())
                    .map_err(|e| Error::MalformedMatrix(format!("matrix {}: {e}", i + 1)))?;
                if m.n() != self.n {
                    return Err(Error::MalformedMatrix(format!(
                        "matrix {} is {}x{}, file declares n = {}",
                        i + 1,
                        m.n(),
                        m.n(),
                        self.n
                    )));
                }
                if m.determinant().abs() != 1 {
                    return Err(Error::MalformedMatrix(format!("matrix {} is not unimodular", i + 1)));
                }
                Ok(m)
            })
            .collect()
    }

    fn token_letter(&self, token: &Token, alphabet: &Alphabet) -> Result<Letter> {
        match (self.flavor, token) {
            (FlavorJson::Pair, Token::Symbol(s)) => alphabet.letter(s),
            (FlavorJson::Pair, Token::Position(p)) => alphabet.letter(&p.to_string()),
            (FlavorJson::Permutation, Token::Position(p)) if (1..=self.n).contains(p) => Ok(Letter(p - 1)),
            (FlavorJson::Permutation, t) => {
                Err(Error::InvalidInput(format!("{t:?} is not a position in 1..={}", self.n)))
            }
        }
    }

    pub fn parsed_moves(&self) -> Result<Option<Vec<MoveRecord>>> {
        let Some(moves) = &self.moves else { return Ok(None) };
        let alphabet = self.alphabet()?;
        let mut out = Vec::with_capacity(moves.len());
        for (i, m) in moves.iter().enumerate() {
            let at = |e: Error| Error::InvalidInput(format!("move {}: {e}", i + 1));
            let type_tag = m.type_tag.map(|t| Row::from_index(t as usize)).transpose().map_err(at)?;
            let rec = MoveRecord {
                winner: self.token_letter(&m.winner, &alphabet).map_err(at)?,
                losers: m
                    .losers
                    .iter()
                    .map(|t| self.token_letter(t, &alphabet))
                    .collect::<Result<BTreeSet<_>>>()
                    .map_err(at)?,
                type_tag,
                k: m.k,
                power: m.power,
            };
            rec.validate().map_err(at)?;
            out.push(rec);
        }
        Ok(Some(out))
    }

    /// Loads and checks internal consistency: sizes, and that moves (when
    /// present) multiply to the listed matrices under the grouping.
    pub fn validate(&self) -> Result<(Vec<VisitationMatrix>, Option<Vec<MoveRecord>>)> {
        if self.version != PATH_FILE_VERSION {
            return Err(Error::InvalidInput(format!("unsupported path file version {}", self.version)));
        }
        if let Some(symbols) = &self.alphabet {
            if symbols.len() != self.n {
                return Err(Error::AlphabetMismatch(format!("{} symbols listed for n = {}", symbols.len(), self.n)));
            }
        }
        let matrices = self.parsed_matrices()?;
        let moves = self.parsed_moves()?;
        if let Some(moves) = &moves {
            let grouping = self.grouping.clone().unwrap_or_else(|| vec![1; moves.len()]);
            if grouping.iter().sum::<usize>() != moves.len()
                || grouping.len() != matrices.len()
                || grouping.contains(&0)
            {
                return Err(Error::InvalidInput("grouping does not match the numbers of moves and matrices".into()));
            }
            let mut rest = moves.as_slice();
            for (i, (&size, expected)) in grouping.iter().zip(&matrices).enumerate() {
                let (block, tail) = rest.split_at(size);
                rest = tail;
                let factors =
                    block.iter().map(|m| record_matrix(self.flavor(), self.n, m)).collect::<Result<Vec<_>>>()?;
                if VisitationMatrix::product(self.n, &factors) != *expected {
                    return Err(Error::MalformedMatrix(format!("matrix {} does not match its moves", i + 1)));
                }
            }
        }
        Ok((matrices, moves))
    }

    pub fn load(path: &Path) -> Result<PathFile> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        from_json(&text)
    }
}

/// The matrix of one move record: a single Rauzy step, or for permutations a
/// power of the type-1 matrix.
pub fn record_matrix(flavor: Flavor, n: usize, rec: &MoveRecord) -> Result<VisitationMatrix> {
    if let (Flavor::Permutation, Some(Row::One)) = (flavor, rec.type_tag) {
        let k = rec.k.ok_or_else(|| Error::InvalidInput("type-1 permutation move without k".into()))?;
        delta(k, n)?;
        return Ok(type_one_matrix(n, k)?.pow(rec.power));
    }
    if rec.power != 1 || rec.losers.len() != 1 {
        return Err(Error::InvalidInput("only type-1 permutation moves may be accelerated in a path file".into()));
    }
    let mut m = VisitationMatrix::identity(n);
    for l in &rec.losers {
        m.set(rec.winner.0, l.0, 1);
    }
    Ok(m)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON: {e}")))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Blocks of an ordered partition, as symbol names.
pub fn partition_json(q: &OrderedPartition<Letter>, alphabet: &Alphabet) -> Vec<Vec<String>> {
    q.blocks().iter().map(|b| b.iter().map(|&a| alphabet.name(a).to_string()).collect()).collect()
}

pub fn pop_json(pop: &PartiallyOrderedPair, alphabet: &Alphabet) -> [Vec<Vec<String>>; 2] {
    [partition_json(pop.row(Row::Zero), alphabet), partition_json(pop.row(Row::One), alphabet)]
}

pub fn ordering_json(q: &PartialOrdering) -> Vec<Vec<usize>> {
    q.to_vecs()
}
