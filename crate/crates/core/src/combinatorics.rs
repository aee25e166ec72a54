//! Alphabets, pairs of orderings, permutations and the maps between them.
//!
//! Positions are 1-based in every public signature. A [`Pair`] over an
//! alphabet of `n` letters stores each row in position order, so
//! `pair.row(Row::Zero)[0]` is the letter that `p0` sends to position 1.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a symbol inside an [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub usize);

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One of the two rows of a pair. A move of type `t` keeps row `t` fixed,
/// so the same enum doubles as the move type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Row {
    Zero,
    One,
}

impl Row {
    pub const BOTH: [Row; 2] = [Row::Zero, Row::One];

    pub fn index(self) -> usize {
        match self {
            Row::Zero => 0,
            Row::One => 1,
        }
    }

    pub fn other(self) -> Row {
        match self {
            Row::Zero => Row::One,
            Row::One => Row::Zero,
        }
    }

    pub fn from_index(i: usize) -> Result<Row> {
        match i {
            0 => Ok(Row::Zero),
            1 => Ok(Row::One),
            _ => Err(Error::InvalidInput(format!("type/row must be 0 or 1, got {i}"))),
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Ordered list of at least two distinct symbol names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, Letter>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Alphabet> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.len() < 2 {
            return Err(Error::InvalidInput(format!("an alphabet needs at least two symbols, got {}", symbols.len())));
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), Letter(i)).is_some() {
                return Err(Error::InvalidInput(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    /// The alphabet `1, 2, ..., n`.
    pub fn numbered(n: usize) -> Result<Alphabet> {
        Alphabet::new((1..=n).map(|i| i.to_string()))
    }

    /// The alphabet `A, B, C, ...` (at most 26 letters).
    pub fn latin(n: usize) -> Result<Alphabet> {
        if n > 26 {
            return Err(Error::InvalidInput(format!("latin alphabet has 26 letters, asked for {n}")));
        }
        Alphabet::new((0..n).map(|i| ((b'A' + i as u8) as char).to_string()))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.symbols[a.0]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.index.get(name).copied().ok_or_else(|| Error::InvalidInput(format!("unknown symbol {name:?}")))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.symbols.len()).map(Letter)
    }
}

/// A pair `(p0, p1)` of bijections from the letters `0..n` onto positions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pair {
    rows: [Vec<Letter>; 2],
    pos: [Vec<usize>; 2],
}

impl fmt::Debug for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |t: usize| self.rows[t].iter().map(|a| a.0.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "Pair[{} / {}]", r(0), r(1))
    }
}

fn positions_of(row: &[Letter]) -> Result<Vec<usize>> {
    let n = row.len();
    let mut pos = vec![usize::MAX; n];
    for (i, a) in row.iter().enumerate() {
        if a.0 >= n || pos[a.0] != usize::MAX {
            return Err(Error::InvalidInput(format!("row is not a bijection onto 0..{n}")));
        }
        pos[a.0] = i;
    }
    Ok(pos)
}

impl Pair {
    /// Builds a pair from its two rows listed in position order.
    pub fn from_rows(row0: Vec<Letter>, row1: Vec<Letter>) -> Result<Pair> {
        if row0.len() != row1.len() {
            return Err(Error::InvalidInput("rows have different lengths".into()));
        }
        if row0.len() < 2 {
            return Err(Error::InvalidInput("a pair needs at least two letters".into()));
        }
        let pos = [positions_of(&row0)?, positions_of(&row1)?];
        Ok(Pair { rows: [row0, row1], pos })
    }

    /// Builds a pair from rows given as letter indices.
    pub fn from_indices(row0: &[usize], row1: &[usize]) -> Result<Pair> {
        Pair::from_rows(row0.iter().map(|&i| Letter(i)).collect(), row1.iter().map(|&i| Letter(i)).collect())
    }

    /// Builds a pair from the maps `p0`, `p1` given as 1-based positions indexed by letter.
    pub fn from_positions(p0: &[usize], p1: &[usize]) -> Result<Pair> {
        let invert = |p: &[usize]| -> Result<Vec<Letter>> {
            let n = p.len();
            let mut row = vec![Letter(usize::MAX); n];
            for (a, &q) in p.iter().enumerate() {
                if q == 0 || q > n || row[q - 1].0 != usize::MAX {
                    return Err(Error::InvalidInput(format!("positions are not a bijection onto 1..{n}")));
                }
                row[q - 1] = Letter(a);
            }
            Ok(row)
        };
        Pair::from_rows(invert(p0)?, invert(p1)?)
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    /// Letters of row `t` in position order.
    pub fn row(&self, t: Row) -> &[Letter] {
        &self.rows[t.index()]
    }

    /// `p_t(a)`, 1-based.
    pub fn position(&self, t: Row, a: Letter) -> usize {
        self.pos[t.index()][a.0] + 1
    }

    /// `p_t^{-1}(i)` for 1-based `i`.
    pub fn letter_at(&self, t: Row, i: usize) -> Letter {
        self.rows[t.index()][i - 1]
    }

    pub fn rightmost(&self, t: Row) -> Letter {
        *self.rows[t.index()].last().expect("pairs are non-empty")
    }

    pub fn is_irreducible(&self) -> bool {
        let n = self.n();
        let mut reach = 0;
        for k in 0..n - 1 {
            reach = reach.max(self.pos[1][self.rows[0][k].0]);
            if reach == k {
                return false;
            }
        }
        true
    }

    /// The row swap `(p1, p0)`.
    pub fn inverse(&self) -> Pair {
        Pair { rows: [self.rows[1].clone(), self.rows[0].clone()], pos: [self.pos[1].clone(), self.pos[0].clone()] }
    }

    /// `p1 ∘ p0^{-1}`.
    pub fn project(&self) -> Permutation {
        let image = self.rows[0].iter().map(|&a| self.pos[1][a.0] + 1).collect();
        Permutation { image }
    }

    /// Renames letters: letter `a` of the result is `rename[a]` here, i.e. the
    /// result is `(p0 ∘ rename, p1 ∘ rename)`.
    pub fn rename(&self, rename: &[Letter]) -> Result<Pair> {
        let n = self.n();
        if rename.len() != n {
            return Err(Error::AlphabetMismatch(format!("renaming has {} entries for {n} letters", rename.len())));
        }
        let back = positions_of(rename)?;
        let row = |t: usize| self.rows[t].iter().map(|a| Letter(back[a.0])).collect::<Vec<_>>();
        Pair::from_rows(row(0), row(1))
    }

    /// Lifts `perm` to the pair `(tau^{-1}, perm ∘ tau^{-1})`.
    pub fn lift(perm: &Permutation, tau: &Labeling) -> Result<Pair> {
        let n = perm.n();
        if tau.n() != n {
            return Err(Error::AlphabetMismatch(format!("labeling has {} entries, permutation {n}", tau.n())));
        }
        let row0: Vec<Letter> = (1..=n).map(|j| tau.apply(j)).collect();
        let mut row1 = vec![Letter(0); n];
        for j in 1..=n {
            row1[perm.apply(j) - 1] = tau.apply(j);
        }
        Pair::from_rows(row0, row1)
    }
}

/// A bijection of `1..=n`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.image)
    }
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Permutation> {
        let n = image.len();
        let mut seen = vec![false; n + 1];
        for &v in &image {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidInput(format!("{image:?} is not a permutation of 1..{n}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { image: (1..=n).collect() }
    }

    /// `i ↦ n + 1 - i`.
    pub fn reversal(n: usize) -> Permutation {
        Permutation { image: (1..=n).rev().collect() }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1]
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.n()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v - 1] = i + 1;
        }
        Permutation { image }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n(), "composing permutations of different sizes");
        Permutation { image: other.image.iter().map(|&i| self.apply(i)).collect() }
    }

    pub fn pow(&self, p: usize) -> Permutation {
        let mut out = Permutation::identity(self.n());
        for _ in 0..p {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_irreducible(&self) -> bool {
        let n = self.n();
        let mut reach = 0;
        for k in 1..n {
            reach = reach.max(self.image[k - 1]);
            if reach == k {
                return false;
            }
        }
        true
    }
}

/// A bijection `tau` from positions `1..=n` onto the letters of an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling {
    tau: Vec<Letter>,
}

impl Labeling {
    pub fn new(tau: Vec<Letter>) -> Result<Labeling> {
        positions_of(&tau)?;
        Ok(Labeling { tau })
    }

    pub fn identity(n: usize) -> Labeling {
        Labeling { tau: (0..n).map(Letter).collect() }
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    /// `tau(j)` for 1-based `j`.
    pub fn apply(&self, j: usize) -> Letter {
        self.tau[j - 1]
    }

    /// `tau^{-1}(a)`, 1-based.
    pub fn preimage(&self, a: Letter) -> usize {
        self.tau.iter().position(|&b| b == a).expect("labeling is a bijection") + 1
    }

    pub fn letters(&self) -> &[Letter] {
        &self.tau
    }

    /// `tau ∘ sigma`.
    pub fn then(&self, sigma: &Permutation) -> Labeling {
        assert_eq!(self.n(), sigma.n());
        Labeling { tau: (1..=self.n()).map(|j| self.apply(sigma.apply(j))).collect() }
    }
}

/// Lexicographic successor of a sequence; `false` once the last arrangement is reached.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// All permutations of `1..=n` in lexicographic order of their image sequences.
pub fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut cur: Option<Vec<usize>> = Some((1..=n).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        cur = if next_permutation(&mut next) { Some(next) } else { None };
        Some(Permutation { image: out })
    })
}

/// The first `k` letters by `p0` equal the first `k` letters by `p1` for some proper `k`.
#[cfg(test)]
fn reducible_by_definition(pair: &Pair) -> bool {
    use std::collections::BTreeSet;
    let n = pair.n();
    (1..n).any(|k| {
        let a: BTreeSet<_> = pair.row(Row::Zero)[..k].iter().collect();
        let b: BTreeSet<_> = pair.row(Row::One)[..k].iter().collect();
        a == b
    })
}
