//! Variable subsets as bitmasks.
//!
//! Bit `i` set means variable `i` (schema order) is in the subset. Lattice
//! sweeps iterate masks in increasing integer order, which keeps every
//! report deterministic.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest number of variables a [`Subset`] can address.
pub const MAX_VARIABLES: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    /// Every variable of an `n`-variable schema.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VARIABLES, "at most {MAX_VARIABLES} variables");
        if n == MAX_VARIABLES {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_VARIABLES);
        Subset(1 << i)
    }

    /// Builds a subset from indices, checking each against `n`.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &i in indices {
            if i >= n || i >= MAX_VARIABLES {
                return Err(Error::IndexOutOfRange { index: i, len: n });
            }
            mask |= 1 << i;
        }
        Ok(Subset(mask))
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, i: usize) -> bool {
        i < MAX_VARIABLES && self.0 & (1 << i) != 0
    }

    pub const fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub const fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub const fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub const fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn with(self, i: usize) -> Subset {
        self.union(Subset::singleton(i))
    }

    pub fn without(self, i: usize) -> Subset {
        self.difference(Subset::singleton(i))
    }

    /// `(-1)^(|τ|+1)`: `+1` for odd sizes, `-1` for even sizes.
    pub const fn mobius_sign(self) -> f64 {
        if self.len() % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// Member indices in increasing order.
    pub fn indices(self) -> Indices {
        Indices(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.indices().collect()
    }

    /// Non-empty submasks in increasing integer order (including `self`).
    pub fn subsets(self) -> Submasks {
        Submasks {
            full: self.0,
            next: Some(self.0 & self.0.wrapping_neg()),
        }
        .normalized()
    }

    /// Every subset of an `n`-variable schema with `1 <= len <= max_len`,
    /// in increasing mask order.
    pub fn all_up_to(n: usize, max_len: usize) -> impl Iterator<Item = Subset> {
        let full = Subset::full(n).0 as u64;
        (1..=full)
            .map(|m| Subset(m as u32))
            .filter(move |s| s.len() <= max_len)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

#[derive(Clone)]
pub struct Indices(u32);

impl Iterator for Indices {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Indices {}

/// Ascending enumeration of the non-empty submasks of a mask.
pub struct Submasks {
    full: u32,
    next: Option<u32>,
}

impl Submasks {
    fn normalized(mut self) -> Self {
        if self.full == 0 {
            self.next = None;
        }
        self
    }
}

impl Iterator for Submasks {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        let cur = self.next?;
        // Increment within the bits of `full`: ((cur | !full) + 1) & full.
        let succ = (cur | !self.full).wrapping_add(1) & self.full;
        self.next = if succ == 0 { None } else { Some(succ) };
        Some(Subset(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn submasks_are_ascending_and_complete() {
        let s = Subset::from_mask(0b1011);
        let subs: Vec<u32> = s.subsets().map(Subset::mask).collect();
        assert_eq!(subs, [0b0001, 0b0010, 0b0011, 0b1000, 0b1001, 0b1010, 0b1011]);
        assert_eq!(Subset::EMPTY.subsets().count(), 0);
    }

    #[test]
    fn indices_and_sign() {
        let s = Subset::from_indices(&[4, 0, 2], 5).unwrap();
        assert_eq!(s.to_vec(), [0, 2, 4]);
        assert_eq!(s.mobius_sign(), 1.0);
        assert_eq!(s.without(2).mobius_sign(), -1.0);
        assert!(Subset::from_indices(&[5], 5).is_err());
    }

    #[test]
    fn all_up_to_respects_size_cap() {
        assert_eq!(Subset::all_up_to(4, 4).count(), 15);
        assert_eq!(Subset::all_up_to(4, 2).count(), 10);
    }
}
