//! Certified rationality decisions for cosines of rational angles.
//!
//! The central fact used throughout is the classification of rational
//! angles φ (φ/2π ∈ ℚ) with rational cosine: cos φ ∈ ℚ exactly when the
//! reduced denominator of φ/2π is one of 1, 2, 3, 4 or 6. Every decision is
//! returned as an [`ExactCosine`] carrying either the exact value or a
//! checkable irrationality certificate.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{RaqmError, Result};
use crate::numeric::Real;
use crate::rational::{exact_isqrt, is_perfect_square, Rational, RationalAngle};

/// Reduced turn denominators whose cosine is rational.
pub const NIVEN_DENOMINATORS: [u64; 5] = [1, 2, 3, 4, 6];

/// Reduced turn denominators whose squared cosine is rational.
pub const SQUARED_NIVEN_DENOMINATORS: [u64; 7] = [1, 2, 3, 4, 6, 8, 12];

/// Square factors are stripped from radicands by trial division up to this bound.
const SQUARE_FREE_TRIAL_LIMIT: u64 = 1 << 16;

/// A real number `a + b·√d` with rational `a`, `b` and a single radical.
///
/// Canonical form: when `b ≠ 0`, `d` is a positive integer that is not a
/// perfect square (square factors below 2^16 are pulled into `b`). Rational
/// values are stored with `b = 0`, `d = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Surd {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl Surd {
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if d.is_negative() {
            return Err(RaqmError::Domain(format!("negative radicand {d}")));
        }
        if b.is_zero() || d.is_zero() {
            return Ok(Self::rational(a));
        }
        // √(p/q) = √(pq)/q
        let q = d.denom().clone();
        let pq = (d.numer() * &q).magnitude().clone();
        let (outside, inside) = split_square_factor(pq);
        let b = b * Rational::from_bigints(BigInt::from(outside), q)?;
        if inside.is_one() {
            return Ok(Self::rational(a + b));
        }
        Ok(Surd {
            a,
            b,
            d: Rational::from_integer(BigInt::from(inside)),
        })
    }

    pub fn rational(a: Rational) -> Self {
        Surd {
            a,
            b: Rational::zero(),
            d: Rational::zero(),
        }
    }

    /// √r as a surd.
    pub fn sqrt(r: &Rational) -> Result<Self> {
        Self::new(Rational::zero(), Rational::one(), r.clone())
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn d(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    /// The irrationality certificate: `b ≠ 0` and `d` not a perfect square.
    pub fn certifies_irrational(&self) -> bool {
        !self.b.is_zero()
            && !self.d.is_zero()
            && matches!(is_perfect_square(&self.d), Ok(None))
    }

    pub fn neg(&self) -> Self {
        Surd {
            a: -&self.a,
            b: -&self.b,
            d: self.d.clone(),
        }
    }

    fn compatible(&self, other: &Surd) -> Result<Rational> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(Rational::zero()),
            (true, false) => Ok(other.d.clone()),
            (false, true) => Ok(self.d.clone()),
            (false, false) if self.d == other.d => Ok(self.d.clone()),
            _ => Err(RaqmError::UndecidedRepresentation(format!(
                "radicals √{} and √{} do not share a field",
                self.d, other.d
            ))),
        }
    }

    pub fn add(&self, other: &Surd) -> Result<Self> {
        let d = self.compatible(other)?;
        Surd::new(&self.a + &other.a, &self.b + &other.b, d)
    }

    /// Product within ℚ(√d); mixed radicals are rejected.
    pub fn mul(&self, other: &Surd) -> Result<Self> {
        let d = self.compatible(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * &d;
        let b = &self.a * &other.b + &self.b * &other.a;
        Surd::new(a, b, d)
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("a surd always squares within its own field")
    }

    pub fn to_real(&self) -> Real {
        let a = Real::from_rational(&self.a);
        if self.is_rational() {
            return a;
        }
        a.add(&Real::from_rational(&self.b).mul(&Real::from_rational(&self.d).sqrt()))
    }
}

/// Splits `n = outside² · inside` with `inside` free of square factors
/// below the trial limit and never itself a perfect square above one.
fn split_square_factor(mut n: BigUint) -> (BigUint, BigUint) {
    let mut outside = BigUint::one();
    if let Some(root) = exact_isqrt(&n) {
        return (root, BigUint::one());
    }
    let mut p: u64 = 2;
    while p <= SQUARE_FREE_TRIAL_LIMIT {
        let p2 = BigUint::from(p * p);
        if p2 > n {
            break;
        }
        while (&n % &p2).is_zero() {
            n /= &p2;
            outside *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(root) = exact_isqrt(&n) {
        outside *= root;
        n = BigUint::one();
    }
    (outside, n)
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            write!(f, "({})·√{}", self.b, self.d)
        } else {
            write!(f, "{} + ({})·√{}", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

/// `offset + √radicand · cos(angle)`, the shape of the spherical cosine rule
/// once the first product term is collected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosineRuleValue {
    pub offset: Rational,
    pub radicand: Rational,
    pub angle: RationalAngle,
}

impl CosineRuleValue {
    pub fn to_real(&self) -> Real {
        Real::from_rational(&self.offset).add(
            &Real::from_rational(&self.radicand)
                .sqrt()
                .mul(&Real::cos_turns(self.angle.turns())),
        )
    }
}

/// Exact classification of a cosine value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactCosine {
    Rational { value: Rational },
    /// Irrational, certified by a non-square radicand.
    IrrationalSurd { value: Surd },
    /// Irrational because cos(witness) is irrational by Niven's theorem.
    IrrationalByNiven {
        witness: RationalAngle,
        value: CosineRuleValue,
    },
}

impl ExactCosine {
    pub fn rational(value: Rational) -> Self {
        ExactCosine::Rational { value }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactCosine::Rational { .. })
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            ExactCosine::Rational { value } => Some(value),
            _ => None,
        }
    }

    /// Re-checks the attached certificate from scratch.
    pub fn verify_certificate(&self) -> bool {
        match self {
            ExactCosine::Rational { .. } => true,
            ExactCosine::IrrationalSurd { value } => value.certifies_irrational(),
            ExactCosine::IrrationalByNiven { witness, .. } => {
                !niven_cosine(witness).is_rational()
            }
        }
    }

    pub fn to_real(&self) -> Real {
        match self {
            ExactCosine::Rational { value } => Real::from_rational(value),
            ExactCosine::IrrationalSurd { value } => value.to_real(),
            ExactCosine::IrrationalByNiven { value, .. } => value.to_real(),
        }
    }

    /// One-line explanation of the verdict.
    pub fn describe(&self) -> String {
        match self {
            ExactCosine::Rational { value } => format!("{value} (rational)"),
            ExactCosine::IrrationalSurd { value } => {
                format!("{value} (irrational: {} is not a perfect square)", value.d())
            }
            ExactCosine::IrrationalByNiven { witness, .. } => format!(
                "irrational (cos of {} turn is irrational: reduced denominator {} is not in {{1,2,3,4,6}})",
                witness.turns(),
                witness.reduced_denominator()
            ),
        }
    }
}

fn small_denominator(angle: &RationalAngle) -> Option<u64> {
    angle.denominator_u64()
}

/// Exact cosine of a rational angle with a certificate.
///
/// Rational values occur only for reduced denominators 1, 2, 3, 4, 6.
/// Denominators 8 and 12 give a quadratic surd; everything else is
/// certified irrational by the angle itself.
pub fn niven_cosine(angle: &RationalAngle) -> ExactCosine {
    let q = small_denominator(angle);
    let n = angle.turns().numer().to_i64().unwrap_or(0);
    match q {
        Some(1) => ExactCosine::rational(Rational::one()),
        Some(2) => ExactCosine::rational(-Rational::one()),
        Some(3) => ExactCosine::rational(Rational::new(-1, 2)),
        Some(4) => ExactCosine::rational(Rational::zero()),
        Some(6) => {
            // 1/6 and 5/6 turn
            debug_assert!(n == 1 || n == 5);
            ExactCosine::rational(Rational::new(1, 2))
        }
        Some(8) | Some(12) => {
            let c2 = cos_squared(angle).expect("denominators 8 and 12 have rational cos²");
            let sign = match angle.cos_sign() {
                Ordering::Less => -Rational::one(),
                _ => Rational::one(),
            };
            let value = Surd::new(Rational::zero(), sign, c2)
                .expect("cos² is non-negative");
            ExactCosine::IrrationalSurd { value }
        }
        _ => ExactCosine::IrrationalByNiven {
            witness: angle.clone(),
            value: CosineRuleValue {
                offset: Rational::zero(),
                radicand: Rational::one(),
                angle: angle.clone(),
            },
        },
    }
}

/// cos²φ when rational, i.e. (1 + cos 2φ)/2 for denominators
/// 1, 2, 3, 4, 6, 8, 12.
pub fn cos_squared(angle: &RationalAngle) -> Option<Rational> {
    let doubled = angle.doubled();
    let c = niven_cosine_rational(&doubled)?;
    Some((Rational::one() + c) / Rational::from_integer(2))
}

fn niven_cosine_rational(angle: &RationalAngle) -> Option<Rational> {
    match small_denominator(angle)? {
        1 => Some(Rational::one()),
        2 => Some(-Rational::one()),
        3 => Some(Rational::new(-1, 2)),
        4 => Some(Rational::zero()),
        6 => Some(Rational::new(1, 2)),
        _ => None,
    }
}

fn check_cosine(name: &str, c: &Rational) -> Result<()> {
    if c.abs() > Rational::one() {
        return Err(RaqmError::Domain(format!("|{name}| = |{c}| exceeds 1")));
    }
    Ok(())
}

/// Exact classification of cos θ_AC from the spherical cosine rule
/// `cos θ_AC = cos θ_AB cos θ_BC + sin θ_AB sin θ_BC cos φ_C`.
pub fn spherical_third_side(
    cos_ab: &Rational,
    cos_bc: &Rational,
    phi_c: &RationalAngle,
) -> Result<ExactCosine> {
    check_cosine("cos θ_AB", cos_ab)?;
    check_cosine("cos θ_BC", cos_bc)?;
    let one = Rational::one();
    let offset = cos_ab * cos_bc;
    // (sin θ_AB sin θ_BC)²
    let radicand = (&one - cos_ab.square()) * (&one - cos_bc.square());
    if radicand.is_zero() {
        return Ok(ExactCosine::rational(offset));
    }

    let (cos_phi_sq, sign) = match niven_cosine(phi_c) {
        ExactCosine::Rational { value } => (value.square(), value.signum()),
        ExactCosine::IrrationalSurd { value } => {
            if !value.a().is_zero() {
                return Err(RaqmError::UndecidedRepresentation(format!(
                    "cos φ_C = {value} mixes a rational part with a radical"
                )));
            }
            (value.square().a().clone(), value.b().signum())
        }
        ExactCosine::IrrationalByNiven { .. } => {
            // A rational third side would force cos²φ_C = q²/r ∈ ℚ,
            // i.e. cos 2φ_C ∈ ℚ.
            return Ok(ExactCosine::IrrationalByNiven {
                witness: phi_c.doubled(),
                value: CosineRuleValue {
                    offset,
                    radicand,
                    angle: phi_c.clone(),
                },
            });
        }
    };
    if sign == 0 {
        return Ok(ExactCosine::rational(offset));
    }
    let sign = Rational::from_integer(sign);
    // Second term squared: r·cos²φ_C.
    let term_sq = &radicand * &cos_phi_sq;
    Ok(match is_perfect_square(&term_sq)? {
        Some(root) => ExactCosine::rational(offset + sign * root),
        None => ExactCosine::IrrationalSurd {
            value: Surd::new(offset, sign, term_sq)?,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItcVerdict {
    /// All three sides can have rational cosines simultaneously.
    pub possible: bool,
    pub degenerate: bool,
    pub third_side: ExactCosine,
    pub reason: String,
}

/// Can △ABC have rational cos θ_AB, cos θ_BC, cos θ_AC with the interior
/// angle φ_C a rational fraction of a turn?
pub fn itc_verdict(
    cos_ab: &Rational,
    cos_bc: &Rational,
    phi_c: &RationalAngle,
) -> Result<ItcVerdict> {
    let third_side = spherical_third_side(cos_ab, cos_bc, phi_c)?;
    let one = Rational::one();
    if cos_ab.abs() == one || cos_bc.abs() == one {
        return Ok(ItcVerdict {
            possible: true,
            degenerate: true,
            third_side,
            reason: "degenerate".into(),
        });
    }
    let possible = third_side.is_rational();
    let reason = match &third_side {
        ExactCosine::Rational { value } => {
            let q = phi_c.reduced_denominator();
            if is_niven_denominator(q) {
                format!("cos φ_C is rational (denominator {q}) and the product term is a perfect square; cos θ_AC = {value}")
            } else {
                format!("cos²φ_C is rational (denominator {q}) and r·cos²φ_C is a perfect square; cos θ_AC = {value}")
            }
        }
        ExactCosine::IrrationalSurd { value } => format!(
            "cos θ_AC = {value}; the radicand {} is not a perfect square",
            value.d()
        ),
        ExactCosine::IrrationalByNiven { witness, .. } => format!(
            "a rational cos θ_AC would force cos 2φ_C ∈ ℚ, but 2φ_C = {} turn has reduced denominator {} outside {{1,2,3,4,6}}",
            witness.turns(),
            witness.reduced_denominator()
        ),
    };
    Ok(ItcVerdict {
        possible,
        degenerate: false,
        third_side,
        reason,
    })
}

pub fn is_niven_denominator(q: &BigInt) -> bool {
    q.to_u64().is_some_and(|q| NIVEN_DENOMINATORS.contains(&q))
}

/// Whether `q` is among the denominators with rational cos².
pub fn is_squared_niven_denominator(q: &BigInt) -> bool {
    q.to_u64()
        .is_some_and(|q| SQUARED_NIVEN_DENOMINATORS.contains(&q))
}

/// Reduced fractions n/l with 0 ≤ n < l, gcd(n, l) = 1.
pub fn reduced_turns(l: u64) -> impl Iterator<Item = u64> {
    (0..l).filter(move |n| n.gcd(&l) == 1)
}
