//! The additive output group shared by every scheme: integers modulo 2^64.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

/// Element of ℤ/2^64ℤ. Shares, payloads and correction values all live here.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupValue(pub u64);

impl GroupValue {
    pub const ZERO: GroupValue = GroupValue(0);
    pub const ONE: GroupValue = GroupValue(1);
    pub const MINUS_ONE: GroupValue = GroupValue(u64::MAX);

    pub fn from_i64(v: i64) -> Self {
        GroupValue(v as u64)
    }

    /// Returns `-self` when `flag` is set.
    #[inline]
    pub fn neg_if(self, flag: bool) -> Self {
        if flag {
            -self
        } else {
            self
        }
    }

    /// `self` when `flag` is set, zero otherwise.
    #[inline]
    pub fn select(self, flag: bool) -> Self {
        if flag {
            self
        } else {
            GroupValue::ZERO
        }
    }

    /// Reads the element as a signed integer in [-2^63, 2^63).
    pub fn as_signed(self) -> i64 {
        self.0 as i64
    }

    /// Interprets the element as a nonnegative count. Values at or above 2^63
    /// are treated as negative and rejected.
    pub fn as_count(self) -> Option<u64> {
        (self.0 < 1 << 63).then_some(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl From<u64> for GroupValue {
    fn from(v: u64) -> Self {
        GroupValue(v)
    }
}

impl Add for GroupValue {
    type Output = GroupValue;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        GroupValue(self.0.wrapping_add(rhs.0))
    }
}

impl Sub for GroupValue {
    type Output = GroupValue;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        GroupValue(self.0.wrapping_sub(rhs.0))
    }
}

impl Neg for GroupValue {
    type Output = GroupValue;
    #[inline]
    fn neg(self) -> Self {
        GroupValue(self.0.wrapping_neg())
    }
}

impl AddAssign for GroupValue {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for GroupValue {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Sum for GroupValue {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GroupValue::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a GroupValue> for GroupValue {
    fn sum<I: Iterator<Item = &'a GroupValue>>(iter: I) -> Self {
        iter.copied().sum()
    }
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
