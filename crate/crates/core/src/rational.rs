//! Exact rational numbers backed by arbitrary-precision integers.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CoverError;

/// A fraction `a/b` kept in lowest terms with `b > 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn half() -> Self {
        Rational::new(1, 2)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Numerator as `i64`, if it fits.
    pub fn numer_i64(&self) -> Option<i64> {
        self.0.numer().to_i64()
    }

    /// Denominator as `i64`, if it fits.
    pub fn denom_i64(&self) -> Option<i64> {
        self.0.denom().to_i64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// True for `1/b` with `b >= 1`.
    pub fn is_unit_fraction(&self) -> bool {
        self.0.numer().is_one()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// Lossy conversion, for plotting columns only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Multiply by an integer.
    pub fn scale(&self, k: i64) -> Self {
        Rational(&self.0 * BigInt::from(k))
    }

    /// Returns `k` when `self * denom` is the integer `k`.
    pub fn as_multiple_of(&self, denom: i64) -> Option<i64> {
        let scaled = &self.0 * BigInt::from(denom);
        if scaled.is_integer() {
            scaled.to_integer().to_i64()
        } else {
            None
        }
    }

    /// The `n`-th harmonic number `1 + 1/2 + ... + 1/n`.
    pub fn harmonic(n: u64) -> Self {
        let mut acc = BigRational::zero();
        for i in 1..=n {
            acc += BigRational::new(BigInt::one(), BigInt::from(i));
        }
        Rational(acc)
    }

    /// Integer ceiling of a quotient of nonnegative integers.
    pub fn ceil_div(a: u64, b: u64) -> u64 {
        a.div_ceil(b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = CoverError;

    /// Accepts `a/b` or a bare integer `a`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoverError::Parse {
            line: 0,
            message: format!("invalid rational `{s}`"),
        };
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let numer: BigInt = n.parse().map_err(|_| bad())?;
        let denom: BigInt = d.parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(numer, denom))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}
