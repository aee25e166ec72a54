//! Ordered partitions recording partial knowledge of an ordering, and the
//! enumeration of every total ordering compatible with one.

use std::collections::BTreeSet;
use std::fmt;

use crate::combinatorics::{next_permutation, Letter, Pair, Permutation, Row};
use crate::error::{Error, Result};

/// Environment variable bounding exhaustive enumerations: no row may leave
/// more than this many letters with an undetermined position.
pub const MAX_ENUM_VAR: &str = "IET_REWIND_MAX_ENUM";
pub const DEFAULT_MAX_ENUM: usize = 9;

/// Current enumeration bound, from [`MAX_ENUM_VAR`] when set and valid.
pub fn enumeration_bound() -> usize {
    std::env::var(MAX_ENUM_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_ENUM)
}

/// Deletes empty blocks, keeping the order of the others.
pub fn star<T: Ord>(blocks: Vec<BTreeSet<T>>) -> Result<Vec<BTreeSet<T>>> {
    let kept: Vec<_> = blocks.into_iter().filter(|b| !b.is_empty()).collect();
    if kept.is_empty() {
        return Err(Error::AllEmpty);
    }
    Ok(kept)
}

/// An ordered tuple of disjoint non-empty blocks. Every element of an earlier
/// block comes before every element of a later one; order inside a block is unknown.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderedPartition<T: Ord> {
    blocks: Vec<BTreeSet<T>>,
}

impl<T: Ord + Copy + fmt::Debug> fmt::Debug for OrderedPartition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b:?}")?;
        }
        write!(f, ")")
    }
}

impl<T: Ord + Copy> OrderedPartition<T> {
    /// Normalizes with [`star`] and checks the blocks are disjoint.
    pub fn new(blocks: Vec<BTreeSet<T>>) -> Result<Self> {
        let blocks = star(blocks)?;
        let total: usize = blocks.iter().map(BTreeSet::len).sum();
        let union: BTreeSet<T> = blocks.iter().flatten().copied().collect();
        if union.len() != total {
            return Err(Error::InvalidInput("blocks of an ordered partition must be disjoint".into()));
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn from_vecs(blocks: Vec<Vec<T>>) -> Result<Self> {
        Self::new(blocks.into_iter().map(|b| b.into_iter().collect()).collect())
    }

    pub fn blocks(&self) -> &[BTreeSet<T>] {
        &self.blocks
    }

    pub fn to_vecs(&self) -> Vec<Vec<T>> {
        self.blocks.iter().map(|b| b.iter().copied().collect()).collect()
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of elements covered.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(BTreeSet::len).sum()
    }

    pub fn block_of(&self, x: T) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&x))
    }

    pub fn last(&self) -> &BTreeSet<T> {
        self.blocks.last().expect("partitions are non-empty")
    }

    pub fn is_fully_singleton(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Elements whose block is a singleton.
    pub fn singletons(&self) -> BTreeSet<T> {
        self.blocks.iter().filter(|b| b.len() == 1).flatten().copied().collect()
    }

    /// Elements in non-singleton blocks.
    pub fn unresolved(&self) -> BTreeSet<T> {
        self.blocks.iter().filter(|b| b.len() > 1).flatten().copied().collect()
    }

    /// True iff listing `order` left to right visits the blocks in tuple order,
    /// i.e. each block occupies an interval and the intervals are ordered.
    pub fn is_respected_by(&self, order: impl IntoIterator<Item = T>) -> bool {
        let mut current = 0usize;
        let mut seen = 0usize;
        for x in order {
            match self.block_of(x) {
                Some(b) if b >= current => current = b,
                _ => return false,
            }
            seen += 1;
        }
        seen == self.size()
    }

    /// All total orders respecting the partition, in lexicographic order.
    pub fn arrangements(&self) -> Arrangements<T> {
        Arrangements { blocks: Some(self.to_vecs()) }
    }
}

/// Lazy lexicographic enumeration of the linear extensions of an ordered partition.
pub struct Arrangements<T> {
    blocks: Option<Vec<Vec<T>>>,
}

impl<T: Ord + Copy> Iterator for Arrangements<T> {
    type Item = Vec<T>;

    fn next(&mut self) -> Option<Vec<T>> {
        let blocks = self.blocks.as_mut()?;
        let out: Vec<T> = blocks.iter().flatten().copied().collect();
        let mut advanced = false;
        for b in blocks.iter_mut().rev() {
            if next_permutation(b) {
                advanced = true;
                break;
            }
            // wrapped around: `next_permutation` left it descending, restore ascending
            b.sort();
        }
        if !advanced {
            self.blocks = None;
        }
        Some(out)
    }
}

/// Partial knowledge of both rows of a pair.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartiallyOrderedPair {
    pub rows: [OrderedPartition<Letter>; 2],
}

/// `({2,3,5},{4},{1})`.
impl<T: Ord + fmt::Display> fmt::Display for OrderedPartition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "({})", blocks.join(","))
    }
}

impl fmt::Debug for PartiallyOrderedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q0={:?} Q1={:?}", self.rows[0], self.rows[1])
    }
}

impl PartiallyOrderedPair {
    pub fn new(q0: OrderedPartition<Letter>, q1: OrderedPartition<Letter>) -> Result<Self> {
        let a: BTreeSet<Letter> = q0.blocks().iter().flatten().copied().collect();
        let b: BTreeSet<Letter> = q1.blocks().iter().flatten().copied().collect();
        if a != b {
            return Err(Error::AlphabetMismatch("the two rows partition different letter sets".into()));
        }
        Ok(PartiallyOrderedPair { rows: [q0, q1] })
    }

    /// Convenience constructor from letter indices.
    pub fn from_indices(q0: &[&[usize]], q1: &[&[usize]]) -> Result<Self> {
        let conv = |q: &[&[usize]]| {
            OrderedPartition::from_vecs(q.iter().map(|b| b.iter().map(|&i| Letter(i)).collect()).collect())
        };
        Self::new(conv(q0)?, conv(q1)?)
    }

    /// The pair that carries no information at all.
    pub fn coarsest(n: usize) -> Self {
        let all: BTreeSet<Letter> = (0..n).map(Letter).collect();
        let q = OrderedPartition { blocks: vec![all] };
        PartiallyOrderedPair { rows: [q.clone(), q] }
    }

    /// Both rows with letters spelled by `alphabet`.
    pub fn render(&self, alphabet: &crate::combinatorics::Alphabet) -> String {
        let row = |q: &OrderedPartition<Letter>| {
            let blocks: Vec<String> =
                q.blocks().iter().map(|b| b.iter().map(|&a| alphabet.name(a)).collect::<Vec<_>>().join(",")).collect();
            format!("({{{}}})", blocks.join("},{"))
        };
        format!("Q0 = {}  Q1 = {}", row(&self.rows[0]), row(&self.rows[1]))
    }

    pub fn n(&self) -> usize {
        self.rows[0].size()
    }

    pub fn row(&self, t: Row) -> &OrderedPartition<Letter> {
        &self.rows[t.index()]
    }

    pub fn is_fully_singleton(&self) -> bool {
        self.rows.iter().all(OrderedPartition::is_fully_singleton)
    }

    /// The only agreeing pair, when both rows are fully resolved.
    pub fn unique_pair(&self) -> Option<Pair> {
        if !self.is_fully_singleton() {
            return None;
        }
        let row = |t: usize| self.rows[t].blocks().iter().flatten().copied().collect();
        Pair::from_rows(row(0), row(1)).ok()
    }

    /// Swaps the rows.
    pub fn inverse(&self) -> Self {
        PartiallyOrderedPair { rows: [self.rows[1].clone(), self.rows[0].clone()] }
    }

    /// Uncertainty of row `t`: `n` minus the number of blocks.
    pub fn uncertainty(&self, t: Row) -> usize {
        self.n() - self.row(t).len()
    }
}

pub fn agrees(pair: &Pair, pop: &PartiallyOrderedPair) -> Result<bool> {
    if pair.n() != pop.n() {
        return Err(Error::AlphabetMismatch(format!("pair has {} letters, partial order {}", pair.n(), pop.n())));
    }
    Ok(Row::BOTH.iter().all(|&t| pop.row(t).is_respected_by(pair.row(t).iter().copied())))
}

/// A partial ordering of positions by their images under a permutation.
pub type PartialOrdering = OrderedPartition<usize>;

/// `pi` agrees when positions in earlier blocks have smaller images.
pub fn perm_agrees(perm: &Permutation, q: &PartialOrdering) -> Result<bool> {
    if perm.n() != q.size() {
        return Err(Error::AlphabetMismatch(format!("permutation has {} entries, ordering {}", perm.n(), q.size())));
    }
    let by_value = perm.inverse();
    Ok(q.is_respected_by(by_value.image().iter().copied()))
}

impl PartialOrdering {
    pub fn coarsest_positions(n: usize) -> Self {
        OrderedPartition { blocks: vec![(1..=n).collect()] }
    }

    /// The only agreeing permutation, when every block is a singleton.
    pub fn unique_permutation(&self) -> Option<Permutation> {
        if !self.is_fully_singleton() {
            return None;
        }
        let order: Vec<usize> = self.blocks().iter().flatten().copied().collect();
        permutation_from_value_order(&order).ok()
    }
}

/// The permutation sending `order[v]` to `v + 1`.
fn permutation_from_value_order(order: &[usize]) -> Result<Permutation> {
    let mut image = vec![0; order.len()];
    for (v, &i) in order.iter().enumerate() {
        image[i - 1] = v + 1;
    }
    Permutation::new(image)
}

fn check_bound(n: usize) -> Result<()> {
    let bound = enumeration_bound();
    if n > bound {
        return Err(Error::BoundExceeded { n, bound });
    }
    Ok(())
}

/// Lazily lists pairs agreeing with `pop` in lexicographic order of `(row0, row1)`.
pub fn agreeing_pairs(pop: &PartiallyOrderedPair, irreducible_only: bool) -> Result<impl Iterator<Item = Pair> + '_> {
    check_bound(pop.rows.iter().map(|q| q.unresolved().len()).max().unwrap_or(0))?;
    let iter = pop.rows[0].arrangements().flat_map(move |row0| {
        pop.rows[1].arrangements().filter_map(move |row1| Pair::from_rows(row0.clone(), row1).ok())
    });
    Ok(iter.filter(move |p| !irreducible_only || p.is_irreducible()))
}

pub fn enumerate_agreeing(pop: &PartiallyOrderedPair, irreducible_only: bool) -> Result<Vec<Pair>> {
    Ok(agreeing_pairs(pop, irreducible_only)?.collect())
}

/// Agreeing irreducible pairs together with their inverses: the starts that a
/// recovered partial order allows once both type conventions are admitted.
pub fn agreeing_up_to_inverse(pop: &PartiallyOrderedPair) -> Result<BTreeSet<Pair>> {
    let mut out = BTreeSet::new();
    for p in agreeing_pairs(pop, true)? {
        out.insert(p.inverse());
        out.insert(p);
    }
    Ok(out)
}

/// Lazily lists permutations agreeing with `q`, ordered by their value order.
pub fn agreeing_permutations(
    q: &PartialOrdering,
    irreducible_only: bool,
) -> Result<impl Iterator<Item = Permutation> + '_> {
    check_bound(q.unresolved().len())?;
    Ok(q.arrangements()
        .filter_map(|order| permutation_from_value_order(&order).ok())
        .filter(move |p| !irreducible_only || p.is_irreducible()))
}

/// Agreeing permutations in lexicographic order of their image sequences.
pub fn enumerate_agreeing_perms(q: &PartialOrdering, irreducible_only: bool) -> Result<Vec<Permutation>> {
    let mut all: Vec<Permutation> = agreeing_permutations(q, irreducible_only)?.collect();
    all.sort();
    Ok(all)
}
