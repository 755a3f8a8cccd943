//! Fixed-width unsigned counters for the sweep inner loop.
//!
//! Every partial configuration counted by a signature is a subset of the
//! edges already swept, so a counter of `E + 1` bits never overflows for a
//! rectangle with `E` edges. The width is chosen from that bound; additions
//! still check the final carry.

use std::ops::AddAssign;

use crate::BigCount;

pub trait Counter: Copy + Default + Send + Sync + AddAssign + 'static {
    fn one() -> Self;
    fn to_big(&self) -> BigCount;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wide<const N: usize>(pub [u64; N]);

impl<const N: usize> Default for Wide<N> {
    fn default() -> Self {
        Wide([0; N])
    }
}

impl<const N: usize> AddAssign for Wide<N> {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        let mut carry = false;
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            let (s1, c1) = a.overflowing_add(b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *a = s2;
            carry = c1 | c2;
        }
        assert!(!carry, "{}-limb counter overflow", N);
    }
}

impl<const N: usize> Counter for Wide<N> {
    fn one() -> Self {
        let mut w = [0; N];
        w[0] = 1;
        Wide(w)
    }

    fn to_big(&self) -> BigCount {
        BigCount::from_digits(&self.0, rug::integer::Order::Lsf)
    }
}

/// Number of edges of the `h x l` rectangle.
pub fn edge_count(h: u32, l: u32) -> u64 {
    let (h, l) = (h as u64, l as u64);
    (h + 1) * l + (l + 1) * h
}

/// Limbs needed to hold any count for the `h x l` rectangle.
pub fn limbs_needed(h: u32, l: u32) -> usize {
    (edge_count(h, l) as usize + 1).div_ceil(64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carries_propagate() {
        let mut a = Wide::<2>([u64::MAX, 0]);
        a += Wide::<2>::one();
        assert_eq!(a.0, [0, 1]);
        assert_eq!(a.to_big(), BigCount::from(1) << 64);
    }

    #[test]
    #[should_panic(expected = "overflow")]
    fn overflow_panics() {
        let mut a = Wide::<1>([u64::MAX]);
        a += Wide::<1>::one();
    }

    #[test]
    fn edge_counts() {
        assert_eq!(edge_count(1, 1), 4);
        assert_eq!(edge_count(0, 3), 3);
        assert_eq!(limbs_needed(10, 10), 4);
    }
}
