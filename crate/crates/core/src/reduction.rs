//! Integer-pair form of a bit string and the halving measurement dynamics.
//!
//! A string {a₁, …, a_L} is read as two bitwise complementary base-2
//! integers of width L: `plus` has a 1-digit wherever aₖ = +1, `minus`
//! wherever aₖ = −1, with a₁ the most significant digit. Each reduction step
//! divides both by two (drops the least significant digit). After L − 1
//! steps a single digit survives, and it is the outcome.

use std::fmt;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{RaqmError, Result};
use crate::exec::{derive_seed, map_chunks, Execution};
use crate::lattice::{BitString, LatticePoint};
use crate::qubit::{make_qubit, HiddenPermutation};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntegerPair {
    plus: BigUint,
    minus: BigUint,
    width: usize,
}

impl IntegerPair {
    pub fn plus(&self) -> &BigUint {
        &self.plus
    }

    pub fn minus(&self) -> &BigUint {
        &self.minus
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn mask(width: usize) -> BigUint {
        (BigUint::one() << width) - BigUint::one()
    }

    /// plus XOR minus covers every digit of the width exactly once.
    pub fn is_complementary(&self) -> bool {
        (&self.plus ^ &self.minus) == Self::mask(self.width)
            && (&self.plus & &self.minus).is_zero()
    }

    /// The signed integer plus − minus.
    pub fn value(&self) -> BigInt {
        BigInt::from(self.plus.clone()) - BigInt::from(self.minus.clone())
    }

    fn digits(n: &BigUint, width: usize) -> String {
        let s = n.to_str_radix(2);
        format!("{s:0>width$}")
    }

    pub fn plus_bits(&self) -> String {
        Self::digits(&self.plus, self.width)
    }

    pub fn minus_bits(&self) -> String {
        Self::digits(&self.minus, self.width)
    }

    pub fn to_bitstring(&self) -> BitString {
        BitString::from_raw(
            (0..self.width)
                .rev()
                .map(|k| if self.plus.bit(k as u64) { 1 } else { -1 })
                .collect(),
        )
    }
}

impl fmt::Display for IntegerPair {
    /// `1001.-0110.`; a single surviving digit prints as `1.` or `-1.`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.width == 1 {
            return if self.plus.is_one() {
                write!(f, "1.")
            } else {
                write!(f, "-1.")
            };
        }
        write!(f, "{}.-{}.", self.plus_bits(), self.minus_bits())
    }
}

pub fn to_integer_pair(s: &BitString) -> IntegerPair {
    let width = s.len();
    let mut plus = BigUint::zero();
    for (k, b) in s.bits().iter().enumerate() {
        if *b == 1 {
            plus.set_bit((width - 1 - k) as u64, true);
        }
    }
    let minus = &plus ^ IntegerPair::mask(width);
    IntegerPair { plus, minus, width }
}

/// One halving step.
pub fn reduce_step(p: &IntegerPair) -> Result<IntegerPair> {
    if p.width < 2 {
        return Err(RaqmError::AlreadyReduced);
    }
    Ok(IntegerPair {
        plus: &p.plus >> 1u32,
        minus: &p.minus >> 1u32,
        width: p.width - 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// Initial pair followed by the pair after each step.
    pub steps: Vec<IntegerPair>,
    pub outcome: i8,
    pub step_count: usize,
}

impl ReductionTrace {
    pub fn rendered(&self) -> Vec<String> {
        self.steps.iter().map(ToString::to_string).collect()
    }

    /// One JSON object per line: `{"step":k,"plus_bits":…,"minus_bits":…}`.
    pub fn write_json_lines<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Line<'a> {
            step: usize,
            plus_bits: &'a str,
            minus_bits: &'a str,
        }
        for (step, p) in self.steps.iter().enumerate() {
            let (plus, minus) = (p.plus_bits(), p.minus_bits());
            let line = Line {
                step,
                plus_bits: &plus,
                minus_bits: &minus,
            };
            serde_json::to_writer(&mut out, &line)?;
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Runs the halving dynamics to a single digit.
pub fn measure(s: &BitString) -> Result<ReductionTrace> {
    if s.is_empty() {
        return Err(RaqmError::Empty);
    }
    let mut steps = vec![to_integer_pair(s)];
    while steps.last().expect("non-empty").width > 1 {
        let next = reduce_step(steps.last().expect("non-empty"))?;
        steps.push(next);
    }
    let last = steps.last().expect("non-empty");
    let outcome = if last.plus.is_one() { 1 } else { -1 };
    Ok(ReductionTrace {
        step_count: steps.len() - 1,
        steps,
        outcome,
    })
}

/// Outcome of [`measure`] without building the trace: the most significant
/// digit survives truncating division, so this is the first bit.
pub fn measure_outcome(s: &BitString) -> Result<i8> {
    s.bits().first().copied().ok_or(RaqmError::Empty)
}

/// Largest v with 2^v dividing n; `None` for n = 0.
pub fn two_adic_valuation(n: &BigInt) -> Option<u64> {
    n.magnitude().trailing_zeros()
}

/// |a − b|₂ = 2^(−v₂(a − b)), and 0 when a = b.
pub fn two_adic_distance(a: &BigInt, b: &BigInt) -> Rational {
    match two_adic_valuation(&(a - b)) {
        None => Rational::zero(),
        Some(v) => Rational::from_bigints(BigInt::one(), BigInt::one() << v)
            .expect("non-zero denominator"),
    }
}

/// Measurement statistics over independent hidden permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BornSample {
    pub point: LatticePoint,
    pub samples: u64,
    pub plus_count: u64,
    pub seed: u64,
}

impl BornSample {
    pub fn frequency(&self) -> f64 {
        self.plus_count as f64 / self.samples as f64
    }

    /// Distance of the empirical frequency from m/L in binomial standard
    /// deviations.
    pub fn z_score(&self) -> f64 {
        let p = self.point.cos2_half().to_f64();
        let sd = (p * (1.0 - p) / self.samples as f64).sqrt();
        if sd == 0.0 {
            return if (self.frequency() - p).abs() == 0.0 { 0.0 } else { f64::INFINITY };
        }
        (self.frequency() - p) / sd
    }
}

/// Prepares `samples` copies of the state at `point`, each under its own
/// seeded ξ, and counts +1 outcomes.
pub fn born_sample(point: LatticePoint, samples: u64, seed: u64, exec: Execution) -> BornSample {
    let l = point.l();
    let counts = map_chunks(exec, samples as usize, |range| {
        range
            .filter(|i| {
                let xi = HiddenPermutation::from_seed(derive_seed(seed, 0, *i as u64), l);
                let q = make_qubit(point, xi).expect("ξ has length L");
                measure_outcome(&q.string).expect("L ≥ 1") == 1
            })
            .count() as u64
    });
    BornSample {
        point,
        samples,
        plus_count: counts.iter().sum(),
        seed,
    }
}
