//! Weight algebras used by the forest structures and the reference oracles.
//!
//! Three capability levels appear throughout the crate:
//!
//! * [`Semigroup`]: an associative, commutative `combine` and nothing else.
//!   Subtree aggregation needs only this.
//! * [`Monoid`]/[`Group`]: adds an identity, then inverses. Path sums need
//!   inverses; there is no efficient batched path aggregation for a bare
//!   semigroup (see [`crate::Error::SemigroupPathQuery`]).
//! * Ordered weights: a total order, used by path minima/maxima. The
//!   [`Min`] and [`Max`] wrappers turn any `Ord` scalar into a semigroup.

use std::fmt::Debug;

/// Commutative semigroup: `combine` must be associative and commutative.
pub trait Semigroup: Copy + Eq + Debug {
    fn combine(self, other: Self) -> Self;
}

/// Commutative monoid: a semigroup with an identity element.
pub trait Monoid: Semigroup {
    fn identity() -> Self;
}

/// Commutative group: a monoid where every element has an inverse,
/// i.e. `combine(x, inverse(x)) == identity()`.
pub trait Group: Monoid {
    fn inverse(self) -> Self;
}

/// Scalar edge-weight type accepted by the dynamic forest structures.
///
/// The structures need the group operations (for path sums and distances)
/// plus a total order (for minima/maxima and tie-breaking), all on one
/// scalar. Plain signed integers qualify.
pub trait GroupWeight: Copy + Ord + Eq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn neg(self) -> Self;

    fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }
}

macro_rules! impl_group_weight {
    ($($t:ty),*) => {$(
        impl GroupWeight for $t {
            fn zero() -> Self { 0 }
            fn add(self, other: Self) -> Self { self + other }
            fn neg(self) -> Self { -self }
        }
    )*};
}

impl_group_weight!(i8, i16, i32, i64, i128, isize);

/// Integers (or any `GroupWeight`) under addition.
#[derive(Copy, Clone, Eq, PartialEq, Debug, Hash)]
pub struct Sum<T>(pub T);

impl<T: GroupWeight> Semigroup for Sum<T> {
    fn combine(self, other: Self) -> Self {
        Sum(self.0.add(other.0))
    }
}

impl<T: GroupWeight> Monoid for Sum<T> {
    fn identity() -> Self {
        Sum(T::zero())
    }
}

impl<T: GroupWeight> Group for Sum<T> {
    fn inverse(self) -> Self {
        Sum(self.0.neg())
    }
}

/// Ordered weights under minimum.
#[derive(Copy, Clone, Eq, PartialEq, Debug, Hash)]
pub struct Min<T>(pub T);

impl<T: Copy + Ord + Eq + Debug> Semigroup for Min<T> {
    fn combine(self, other: Self) -> Self {
        Min(self.0.min(other.0))
    }
}

/// Ordered weights under maximum.
#[derive(Copy, Clone, Eq, PartialEq, Debug, Hash)]
pub struct Max<T>(pub T);

impl<T: Copy + Ord + Eq + Debug> Semigroup for Max<T> {
    fn combine(self, other: Self) -> Self {
        Max(self.0.max(other.0))
    }
}

/// Which aggregate a subtree or path query should fold with.
#[derive(Copy, Clone, Eq, PartialEq, Debug)]
pub enum AggKind {
    Sum,
    Min,
    Max,
}
