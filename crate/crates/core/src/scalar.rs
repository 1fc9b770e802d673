//! The scalar abstraction shared by polynomials and linear algebra.
//!
//! Everything in this crate is exact, so a scalar must be a field with
//! decidable equality. Two implementations ship with the crate: [`Rat`]
//! (arbitrary-precision rationals) and [`CycNum`](crate::CycNum)
//! (elements of a cyclotomic field).

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rat = BigRational;

/// An exact field of characteristic zero with a complex conjugation.
pub trait Field:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Send
    + Sync
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Canonical embedding of the rationals.
    fn from_rat(r: Rat) -> Self;

    /// Complex conjugation (an involutive field automorphism).
    fn conj(&self) -> Self;

    /// The rational value if the element lies in the prime field.
    fn to_rat(&self) -> Option<Rat>;

    fn from_i64(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    fn div_exact(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.clone() * &i)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rat(r: Rat) -> Self {
        r
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_rat(&self) -> Option<Rat> {
        Some(self.clone())
    }
}

/// Shorthand for a rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `Some(n)` when `r` is a positive integer.
pub fn positive_integer(r: &Rat) -> Option<u64> {
    if r.is_integer() && r.is_positive() {
        num_traits::ToPrimitive::to_u64(r.numer())
    } else {
        None
    }
}

/// Text form of a rational: `3`, `-1/2`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
