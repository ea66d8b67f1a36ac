//! The discretised Riemann sphere at granularity L.
//!
//! A lattice point (m, n, L) has cos²(θ/2) = m/L and φ/2π = n/L and is
//! carried by an L-bit string over {+1, −1} whose fraction of +1s is m/L.
//! Complex structure is built from permutation/negation operators ([`Pno`])
//! on those strings: `i` on 2-bit strings, the quaternions I, J, K on 4-bit
//! strings, and the cyclic shift ζ for rotations about the polar axis.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{RaqmError, Result};
use crate::rational::Rational;

/// Ordered sequence of ±1 bits.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct BitString(Vec<i8>);

impl BitString {
    pub fn new(bits: Vec<i8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|b| **b != 1 && **b != -1) {
            return Err(RaqmError::Parse(format!("bit {b} is not ±1")));
        }
        Ok(BitString(bits))
    }

    /// Panics on entries other than ±1; for literals in tests and tables.
    pub fn from_slice(bits: &[i8]) -> Self {
        Self::new(bits.to_vec()).expect("bits must be ±1")
    }

    /// m leading +1s followed by l − m trailing −1s.
    pub fn block(m: usize, l: usize) -> Self {
        assert!(m <= l);
        let mut bits = vec![1i8; m];
        bits.resize(l, -1);
        BitString(bits)
    }

    pub fn constant(bit: i8, l: usize) -> Self {
        Self::from_slice(&vec![bit; l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|b| **b == 1).count()
    }

    pub fn negated(&self) -> Self {
        BitString(self.0.iter().map(|b| -b).collect())
    }

    /// Equivalence-class representative: all +1s first.
    pub fn sorted(&self) -> Self {
        BitString::block(self.count_ones(), self.len())
    }

    pub fn concat(&self, other: &BitString) -> Self {
        let mut bits = self.0.clone();
        bits.extend_from_slice(&other.0);
        BitString(bits)
    }

    pub(crate) fn from_raw(bits: Vec<i8>) -> Self {
        debug_assert!(bits.iter().all(|b| *b == 1 || *b == -1));
        BitString(bits)
    }

    fn expect_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(RaqmError::WrongLength {
                expected,
                actual: self.len(),
            });
        }
        Ok(())
    }

    /// Space-separated ±1 list, e.g. `1 -1 -1 1`.
    pub fn to_list_string(&self) -> String {
        self.0
            .iter()
            .map(|b| b.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl TryFrom<Vec<i8>> for BitString {
    type Error = RaqmError;
    fn try_from(bits: Vec<i8>) -> Result<Self> {
        BitString::new(bits)
    }
}

impl From<BitString> for Vec<i8> {
    fn from(s: BitString) -> Self {
        s.0
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BitString {
    type Err = RaqmError;

    /// Accepts `{1,-1,1}`, `1,-1,1` or `1 -1 1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
        let bits = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i8>()
                    .map_err(|_| RaqmError::Parse(format!("bad bit {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        BitString::new(bits)
    }
}

/// Fraction of +1 bits, exactly. Zero for the empty string.
pub fn ones_fraction(s: &BitString) -> Rational {
    if s.is_empty() {
        return Rational::zero();
    }
    Rational::new(s.count_ones() as i64, s.len() as i64)
}

/// A point of the L-discretised sphere: cos²(θ/2) = m/L, φ/2π = n/L.
///
/// At the poles (m ∈ {0, L}) every longitude names the same point, so n is
/// normalised to 0 there.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LatticePoint {
    m: usize,
    n: usize,
    l: usize,
}

impl LatticePoint {
    pub fn new(m: usize, n: usize, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(RaqmError::InvalidLatticePoint("L must be positive".into()));
        }
        if m > l {
            return Err(RaqmError::InvalidLatticePoint(format!("m = {m} exceeds L = {l}")));
        }
        if n >= l {
            return Err(RaqmError::InvalidLatticePoint(format!("n = {n} must be below L = {l}")));
        }
        let n = if m == 0 || m == l { 0 } else { n };
        Ok(LatticePoint { m, n, l })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn is_pole(&self) -> bool {
        self.m == 0 || self.m == self.l
    }

    /// cos²(θ/2) = m/L.
    pub fn cos2_half(&self) -> Rational {
        Rational::new(self.m as i64, self.l as i64)
    }

    /// cos θ = 2m/L − 1.
    pub fn cos_theta(&self) -> Rational {
        Rational::new(2 * self.m as i64 - self.l as i64, self.l as i64)
    }

    /// φ/2π = n/L.
    pub fn phi_turns(&self) -> Rational {
        Rational::new(self.n as i64, self.l as i64)
    }
}

/// Every distinct point of the L-sphere, poles counted once.
pub fn lattice_points(l: usize) -> impl Iterator<Item = LatticePoint> {
    (0..=l).rev().flat_map(move |m| {
        let longitudes = if m == 0 || m == l { 1 } else { l };
        (0..longitudes).map(move |n| LatticePoint { m, n, l })
    })
}

/// Permutation/negation operator: `out[k] = sign[k] · in[perm[k]]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Pno {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl Pno {
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        if perm.len() != signs.len() {
            return Err(RaqmError::InvalidPermutation(
                "permutation and sign mask differ in length".into(),
            ));
        }
        check_permutation(&perm)?;
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(RaqmError::InvalidPermutation("signs must be ±1".into()));
        }
        Ok(Pno { perm, signs })
    }

    pub fn identity(l: usize) -> Self {
        Pno {
            perm: (0..l).collect(),
            signs: vec![1; l],
        }
    }

    /// Global negation −1.
    pub fn minus_one(l: usize) -> Self {
        Pno {
            perm: (0..l).collect(),
            signs: vec![-1; l],
        }
    }

    /// `i{a₁,a₂} = {−a₂, a₁}`.
    pub fn i() -> Self {
        Pno {
            perm: vec![1, 0],
            signs: vec![-1, 1],
        }
    }

    pub fn quaternion(q: Quaternion) -> Self {
        let (perm, signs) = match q {
            // {a₃, a₄, −a₁, −a₂}
            Quaternion::I => (vec![2, 3, 0, 1], vec![1, 1, -1, -1]),
            // {a₂, −a₁, −a₄, a₃}
            Quaternion::J => (vec![1, 0, 3, 2], vec![1, -1, -1, 1]),
            // {−a₄, a₃, −a₂, a₁}
            Quaternion::K => (vec![3, 2, 1, 0], vec![-1, 1, -1, 1]),
        };
        Pno { perm, signs }
    }

    /// ζ^k: cyclic left shift by k positions.
    pub fn zeta(l: usize, k: i64) -> Self {
        let k = k.rem_euclid(l.max(1) as i64) as usize;
        Pno {
            perm: (0..l).map(|j| (j + k) % l).collect(),
            signs: vec![1; l],
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, s: &BitString) -> Result<BitString> {
        s.expect_len(self.len())?;
        Ok(BitString(
            self.perm
                .iter()
                .zip(&self.signs)
                .map(|(p, sg)| sg * s.0[*p])
                .collect(),
        ))
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Pno) -> Result<Pno> {
        if self.len() != inner.len() {
            return Err(RaqmError::WrongLength {
                expected: self.len(),
                actual: inner.len(),
            });
        }
        let (perm, signs) = self
            .perm
            .iter()
            .zip(&self.signs)
            .map(|(p, s)| (inner.perm[*p], s * inner.signs[*p]))
            .unzip();
        Ok(Pno { perm, signs })
    }

    pub fn inverse(&self) -> Pno {
        let mut perm = vec![0; self.len()];
        let mut signs = vec![1; self.len()];
        for (k, (p, s)) in self.perm.iter().zip(&self.signs).enumerate() {
            perm[*p] = k;
            signs[*p] = *s;
        }
        Pno { perm, signs }
    }

    pub fn pow(&self, k: u32) -> Pno {
        (0..k).fold(Pno::identity(self.len()), |acc, _| {
            self.compose(&acc).expect("same length")
        })
    }
}

pub(crate) fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(RaqmError::InvalidPermutation(format!(
                "{perm:?} is not a permutation of 0..{}",
                perm.len()
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quaternion {
    I,
    J,
    K,
}

impl FromStr for Quaternion {
    type Err = RaqmError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" => Ok(Quaternion::I),
            "J" | "j" => Ok(Quaternion::J),
            "K" | "k" => Ok(Quaternion::K),
            _ => Err(RaqmError::Parse(format!("unknown quaternion unit {s:?}"))),
        }
    }
}

/// `{a₁,a₂} ↦ {−a₂, a₁}`.
pub fn apply_i(pair: &BitString) -> Result<BitString> {
    Pno::i().apply(pair)
}

pub fn quaternion_apply(which: Quaternion, s: &BitString) -> Result<BitString> {
    Pno::quaternion(which).apply(s)
}

/// k-fold cyclic left shift; each step is a rotation by 2π/L about the pole.
pub fn zeta(s: &BitString, k: i64) -> BitString {
    if s.is_empty() {
        return s.clone();
    }
    let mut bits = s.0.clone();
    let k = k.rem_euclid(s.len() as i64) as usize;
    bits.rotate_left(k);
    BitString(bits)
}

/// ζⁿ applied to the block string with m leading +1s.
pub fn canonical_bitstring(p: &LatticePoint) -> BitString {
    zeta(&BitString::block(p.m, p.l), p.n as i64)
}

/// The 2L strings on the φ ∈ {0, π} great circle for L = 2^M.
///
/// L = 2 is the orbit of {1,1} under powers of i. For larger L the string is
/// split into two halves, each running over the L/2 circle: the second half
/// advances L/2 steps, the first retreats L/2 steps, and the pair repeats,
/// so the first half turns through 4π relative to the second.
pub fn build_spinorial_circle(l: usize) -> Result<Vec<BitString>> {
    if l < 2 || !l.is_power_of_two() {
        return Err(RaqmError::NotPowerOfTwo(l));
    }
    if l == 2 {
        let i = Pno::i();
        let start = BitString::constant(1, 2);
        return Ok((0..4)
            .map(|k| i.pow(k).apply(&start).expect("length 2"))
            .collect());
    }
    let sub = build_spinorial_circle(l / 2)?;
    let period = sub.len() as i64; // = l
    let half = (l / 2) as i64;
    let mut first: i64 = 0;
    let mut second: i64 = 0;
    let mut out = Vec::with_capacity(2 * l);
    let at = |k: i64| &sub[k.rem_euclid(period) as usize];
    for phase in 0..4 {
        for _ in 0..half {
            out.push(at(first).concat(at(second)));
            if phase % 2 == 0 {
                second += 1;
            } else {
                first -= 1;
            }
        }
    }
    Ok(out)
}

/// Block strings with m = L, L−1, …, 0 and their latitudes cos θ = 2m/L − 1.
pub fn interpolated_circle(l: usize) -> Vec<(BitString, Rational)> {
    (0..=l)
        .rev()
        .map(|m| {
            let p = LatticePoint { m, n: 0, l };
            (canonical_bitstring(&p), p.cos_theta())
        })
        .collect()
}

#[derive(Serialize)]
struct LatticeRow {
    m: usize,
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    cos_theta: String,
    bits: String,
}

/// Writes every lattice point at granularity L as CSV with header
/// `m,n,L,cos_theta,bits`.
pub fn write_lattice_csv<W: Write>(l: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in lattice_points(l) {
        w.serialize(LatticeRow {
            m: p.m,
            n: p.n,
            l: p.l,
            cos_theta: p.cos_theta().to_string(),
            bits: canonical_bitstring(&p).to_list_string(),
        })
        .map_err(|e| RaqmError::Config(format!("csv: {e}")))?;
    }
    w.flush()
        .map_err(|e| RaqmError::Config(format!("csv: {e}")))?;
    Ok(())
}
