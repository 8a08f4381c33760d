use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Envy arithmetic: `u64` when the instance provably fits, `BigUint` otherwise.
pub(crate) trait Weight: Clone + Ord + Send + Sync {
    fn zero() -> Self;
    fn from_big(v: &BigUint) -> Self;
    fn to_big(&self) -> BigUint;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, k: usize) -> Self;
    fn absdiff(&self, other: &Self) -> Self;
}

impl Weight for u64 {
    fn zero() -> Self {
        0
    }
    fn from_big(v: &BigUint) -> Self {
        v.to_u64().expect("value checked to fit in u64")
    }
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, k: usize) -> Self {
        self * k as u64
    }
    fn absdiff(&self, other: &Self) -> Self {
        self.abs_diff(*other)
    }
}

impl Weight for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(v: &BigUint) -> Self {
        v.clone()
    }
    fn to_big(&self) -> BigUint {
        self.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, k: usize) -> Self {
        self * BigUint::from(k)
    }
    fn absdiff(&self, other: &Self) -> Self {
        if self > other {
            self - other
        } else {
            other - self
        }
    }
}

/// True when `edges * spread` leaves headroom in a u64, which bounds every
/// partial sum the solvers form.
pub(crate) fn fits_u64(edges: usize, spread: &BigUint) -> bool {
    let bound = spread * BigUint::from(edges.max(1));
    bound < BigUint::from(u64::MAX >> 2)
}
