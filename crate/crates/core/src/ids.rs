//! Dense indices for arguments and propositions, and bitset-backed sets over them.

use std::fmt;
use std::marker::PhantomData;

use fixedbitset::FixedBitSet;

/// Position of an argument in a situation's canonical (sorted) argument list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arg(pub usize);

/// Position of a proposition in a situation's canonical (sorted) proposition list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prop(pub usize);

pub trait Index: Copy + Ord {
    fn index(self) -> usize;
    fn from_index(index: usize) -> Self;
}

impl Index for Arg {
    fn index(self) -> usize {
        self.0
    }
    fn from_index(index: usize) -> Self {
        Arg(index)
    }
}

impl Index for Prop {
    fn index(self) -> usize {
        self.0
    }
    fn from_index(index: usize) -> Self {
        Prop(index)
    }
}

/// A set of indices drawn from a universe of fixed size.
///
/// All binary operations assume both operands share the same universe size.
pub struct IdSet<I> {
    bits: FixedBitSet,
    _kind: PhantomData<I>,
}

pub type ArgSet = IdSet<Arg>;
pub type PropSet = IdSet<Prop>;

impl<I> Clone for IdSet<I> {
    fn clone(&self) -> Self {
        IdSet {
            bits: self.bits.clone(),
            _kind: PhantomData,
        }
    }
}

impl<I> PartialEq for IdSet<I> {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl<I> Eq for IdSet<I> {}

impl<I: Index> IdSet<I> {
    pub fn empty(universe: usize) -> Self {
        IdSet {
            bits: FixedBitSet::with_capacity(universe),
            _kind: PhantomData,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        IdSet {
            bits,
            _kind: PhantomData,
        }
    }

    pub fn from_iter_in(universe: usize, items: impl IntoIterator<Item = I>) -> Self {
        let mut set = Self::empty(universe);
        for item in items {
            set.insert(item);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, item: I) {
        self.bits.insert(item.index());
    }

    pub fn remove(&mut self, item: I) {
        self.bits.set(item.index(), false);
    }

    pub fn contains(&self, item: I) -> bool {
        self.bits.contains(item.index())
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = I> + '_ {
        self.bits.ones().map(I::from_index)
    }

    /// Smallest member, which is also the lowest identifier in canonical order.
    pub fn first(&self) -> Option<I> {
        self.bits.minimum().map(I::from_index)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        out.bits.toggle_range(..);
        out
    }

    /// Grows the universe, keeping members. Used when synthetic arguments are appended.
    pub fn grow(&mut self, universe: usize) {
        self.bits.grow(universe);
    }
}

impl<I: Index + fmt::Debug> fmt::Debug for IdSet<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
