use std::fmt::Debug;
use std::hash::Hash;

/// An element of a group acting on one of the backend spaces.
pub trait GroupElement: Clone + Eq + Hash + Debug + Send + Sync {
    fn identity() -> Self;
    /// Product `self * other` (apply `other` first when acting on the left).
    fn mul(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;

    /// `*self = self * other`.
    fn mul_assign(&mut self, other: &Self) {
        *self = self.mul(other);
    }

    fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}
