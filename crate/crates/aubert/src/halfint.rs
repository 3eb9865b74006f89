//! Exact half-integers stored as twice their value.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integral(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    pub const fn is_positive(self) -> bool {
        self.twice > 0
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub const fn is_zero(self) -> bool {
        self.twice == 0
    }

    /// Integer value when integral.
    pub fn to_int(self) -> Option<i64> {
        self.is_integral().then_some(self.twice / 2)
    }

    /// `2x + 1`, the block size attached to exponent `x`.
    pub const fn block_size(self) -> i64 {
        self.twice + 1
    }

    /// Difference as an integer, when it is one.
    pub fn int_diff(self, other: HalfInt) -> Option<i64> {
        (self - other).to_int()
    }

    pub fn same_class(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid half-integer `{0}`")]
pub struct ParseHalfIntError(pub String);

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ParseHalfIntError(s.to_string());
        match s.split_once('/') {
            Some((num, "2")) => {
                let n: i64 = num.trim().parse().map_err(|_| err())?;
                Ok(HalfInt::from_twice(n))
            }
            Some(_) => Err(err()),
            None => s.parse::<i64>().map(HalfInt::int).map_err(|_| err()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a: HalfInt = "3/2".parse().unwrap();
        let b: HalfInt = "-1/2".parse().unwrap();
        assert_eq!(a + b, HalfInt::ONE);
        assert_eq!(a - b, HalfInt::int(2));
        assert_eq!(-a, HalfInt::from_twice(-3));
        assert!(!a.is_integral());
        assert_eq!(a.int_diff(b), Some(2));
        assert_eq!(a.int_diff(HalfInt::ONE), None);
        assert_eq!(a.block_size(), 4);
    }

    #[test]
    fn display_round_trips() {
        for t in -9..=9 {
            let h = HalfInt::from_twice(t);
            assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        }
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-3/2");
        assert_eq!(HalfInt::int(-2).to_string(), "-2");
    }

    #[test]
    fn rejects_other_denominators() {
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::int(2));
    }
}
