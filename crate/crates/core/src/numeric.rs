//! High-precision real arithmetic for numeric cross-checks.
//!
//! Values are carried at [`WORKING_PRECISION`] bits; comparisons against the
//! exact layer use a tolerance of 2^-[`CHECK_BITS`].

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

use crate::rational::Rational;

pub const WORKING_PRECISION: usize = 256;

/// Agreement threshold for numeric evaluation of exact results: 2^-150.
pub const CHECK_BITS: i32 = 150;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct Real(BigFloat);

impl Real {
    const P: usize = WORKING_PRECISION;

    pub fn zero() -> Self {
        Real(BigFloat::from_u64(0, Self::P))
    }

    pub fn one() -> Self {
        Real(BigFloat::from_u64(1, Self::P))
    }

    pub fn from_i64(n: i64) -> Self {
        Real(BigFloat::from_i64(n, Self::P))
    }

    pub fn from_f64(x: f64) -> Self {
        Real(BigFloat::from_f64(x, Self::P))
    }

    pub fn from_rational(r: &Rational) -> Self {
        let parse = |s: String| {
            with_consts(|cc| BigFloat::parse(&s, Radix::Dec, Self::P, RM, cc))
        };
        let n = parse(r.numer().to_string());
        let d = parse(r.denom().to_string());
        Real(n.div(&d, Self::P, RM))
    }

    pub fn pi() -> Self {
        Real(with_consts(|cc| cc.pi(Self::P, RM)))
    }

    /// cos(2π·turns).
    pub fn cos_turns(turns: &Rational) -> Self {
        Self::radians_of(turns).cos()
    }

    /// sin(2π·turns).
    pub fn sin_turns(turns: &Rational) -> Self {
        Self::radians_of(turns).sin()
    }

    fn radians_of(turns: &Rational) -> Self {
        Self::from_rational(turns)
            .mul(&Self::pi())
            .mul(&Self::from_i64(2))
    }

    pub fn cos(&self) -> Self {
        Real(with_consts(|cc| self.0.cos(Self::P, RM, cc)))
    }

    pub fn sin(&self) -> Self {
        Real(with_consts(|cc| self.0.sin(Self::P, RM, cc)))
    }

    /// Square root; negative inputs within rounding noise of zero map to zero.
    pub fn sqrt(&self) -> Self {
        if self.0.is_negative() || self.0.is_zero() {
            return Self::zero();
        }
        Real(self.0.sqrt(Self::P, RM))
    }

    pub fn add(&self, o: &Real) -> Self {
        Real(self.0.add(&o.0, Self::P, RM))
    }

    pub fn sub(&self, o: &Real) -> Self {
        Real(self.0.sub(&o.0, Self::P, RM))
    }

    pub fn mul(&self, o: &Real) -> Self {
        Real(self.0.mul(&o.0, Self::P, RM))
    }

    pub fn div(&self, o: &Real) -> Self {
        Real(self.0.div(&o.0, Self::P, RM))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn neg(&self) -> Self {
        Real(self.0.neg())
    }

    pub fn abs(&self) -> Self {
        if self.0.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// True if |self| ≤ 2^-bits.
    pub fn is_negligible(&self, bits: i32) -> bool {
        if self.0.is_zero() {
            return true;
        }
        match self.0.exponent() {
            // |x| < 2^exponent for a normalised mantissa in [1/2, 1).
            Some(e) => e <= -bits,
            None => false,
        }
    }

    /// |self − other| ≤ 2^-bits.
    pub fn approx_eq(&self, other: &Real, bits: i32) -> bool {
        self.sub(other).is_negligible(bits)
    }

    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        format!("{}", self.0).parse().unwrap_or(f64::NAN)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({})", self.to_f64())
    }
}

/// Complex number over [`Real`], enough for 2×2 interferometer algebra.
#[derive(Clone, Debug)]
pub struct ComplexReal {
    pub re: Real,
    pub im: Real,
}

impl ComplexReal {
    pub fn new(re: Real, im: Real) -> Self {
        ComplexReal { re, im }
    }

    pub fn real(re: Real) -> Self {
        ComplexReal { re, im: Real::zero() }
    }

    pub fn zero() -> Self {
        Self::real(Real::zero())
    }

    /// e^{2πi·turns}.
    pub fn unit(turns: &Rational) -> Self {
        ComplexReal::new(Real::cos_turns(turns), Real::sin_turns(turns))
    }

    pub fn add(&self, o: &Self) -> Self {
        ComplexReal::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        ComplexReal::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn mul(&self, o: &Self) -> Self {
        ComplexReal::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, k: &Real) -> Self {
        ComplexReal::new(self.re.mul(k), self.im.mul(k))
    }

    /// Multiplication by i.
    pub fn times_i(&self) -> Self {
        ComplexReal::new(self.im.neg(), self.re.clone())
    }

    pub fn norm_sqr(&self) -> Real {
        self.re.square().add(&self.im.square())
    }

    pub fn approx_eq(&self, o: &Self, bits: i32) -> bool {
        self.re.approx_eq(&o.re, bits) && self.im.approx_eq(&o.im, bits)
    }
}
