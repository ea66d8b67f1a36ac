//! Exact rationals and angles measured in fractions of a full turn.
//!
//! [`Rational`] wraps an arbitrary-precision fraction that is always stored
//! in lowest terms with a positive denominator. [`RationalAngle`] is an angle
//! φ given by φ/2π ∈ [0, 1); all angle handling in the crate goes through it,
//! so no angle is ever carried as a floating point radian value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{RaqmError, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(RaqmError::Domain("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    pub fn recip(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Rational(self.0.recip()))
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    /// Integer value if the denominator is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.to_integer())
    }

    pub fn to_usize(&self) -> Option<usize> {
        self.to_integer().and_then(|n| n.to_usize())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact square root if both numerator and denominator are perfect
    /// squares. Negative input is a domain error.
    pub fn sqrt_exact(&self) -> Result<Option<Rational>> {
        if self.is_negative() {
            return Err(RaqmError::Domain(format!(
                "square root of negative rational {self}"
            )));
        }
        let n = self.numer().magnitude();
        let d = self.denom().magnitude();
        Ok(match (exact_isqrt(n), exact_isqrt(d)) {
            (Some(sn), Some(sd)) => Some(Rational(BigRational::new(sn.into(), sd.into()))),
            _ => None,
        })
    }
}

/// Square root of a perfect square, `None` otherwise.
pub(crate) fn exact_isqrt(n: &BigUint) -> Option<BigUint> {
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Decides whether `r` is the square of a rational and returns the
/// non-negative root if so.
pub fn is_perfect_square(r: &Rational) -> Result<Option<Rational>> {
    r.sqrt_exact()
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = RaqmError;

    /// Accepts `"p/q"` or a bare integer `"p"`. Decimals are rejected.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| {
            BigInt::from_str(t.trim())
                .map_err(|_| RaqmError::Parse(format!("not a fraction: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::from_bigints(parse(n)?, parse(d)?),
            None => Ok(Rational::from_integer(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as for the underlying BigRational.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// An angle φ stored as the reduced fraction φ/2π ∈ [0, 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAngle {
    turns: Rational,
}

impl RationalAngle {
    /// Reduces `turns` modulo one.
    pub fn new(turns: Rational) -> Self {
        let frac = &turns - turns.floor();
        RationalAngle { turns: frac }
    }

    /// The angle 2π·n/l. Panics if `l == 0`.
    pub fn from_ratio(n: i64, l: i64) -> Self {
        Self::new(Rational::new(n, l))
    }

    pub fn zero() -> Self {
        RationalAngle {
            turns: Rational::zero(),
        }
    }

    pub fn turns(&self) -> &Rational {
        &self.turns
    }

    /// Denominator of φ/2π in lowest terms; 1 for the zero angle.
    pub fn reduced_denominator(&self) -> &BigInt {
        self.turns.denom()
    }

    /// Denominator as a machine integer when it fits.
    pub fn denominator_u64(&self) -> Option<u64> {
        self.turns.denom().to_u64()
    }

    pub fn doubled(&self) -> Self {
        Self::new(&self.turns * Rational::from_integer(2))
    }

    pub fn negated(&self) -> Self {
        Self::new(-&self.turns)
    }

    pub fn add(&self, other: &RationalAngle) -> Self {
        Self::new(&self.turns + &other.turns)
    }

    pub fn sub(&self, other: &RationalAngle) -> Self {
        Self::new(&self.turns - &other.turns)
    }

    /// Angle in degrees as an exact rational.
    pub fn degrees(&self) -> Rational {
        &self.turns * Rational::from_integer(360)
    }

    /// Ordering of cos φ against zero, decided from the quadrant.
    pub fn cos_sign(&self) -> Ordering {
        let quarter = Rational::new(1, 4);
        let three_quarters = Rational::new(3, 4);
        match (self.turns.cmp(&quarter), self.turns.cmp(&three_quarters)) {
            (Ordering::Less, _) => Ordering::Greater,
            (Ordering::Equal, _) | (_, Ordering::Equal) => Ordering::Equal,
            (Ordering::Greater, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        }
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} turn", self.turns)
    }
}

impl fmt::Debug for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalAngle({})", self.turns)
    }
}

impl FromStr for RationalAngle {
    type Err = RaqmError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(RationalAngle::new(s.parse()?))
    }
}

impl Serialize for RationalAngle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.turns.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalAngle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(RationalAngle::new(Rational::deserialize(deserializer)?))
    }
}
