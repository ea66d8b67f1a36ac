//! One- and two-qubit states as bit strings under a hidden permutation ξ.
//!
//! A state is an equivalence class of bit strings modulo permutations; a
//! specific system fixes one representative by its hidden permutation. The
//! same ξ acts on both strings of an entangled pair.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{RaqmError, Result};
use crate::lattice::{canonical_bitstring, check_permutation, zeta, BitString, LatticePoint};
use crate::rational::{Rational, RationalAngle};

/// ξ: a permutation of string positions. `apply` sends position k of the
/// output to position `perm[k]` of the input.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct HiddenPermutation {
    seed: Option<u64>,
    perm: Vec<usize>,
}

impl HiddenPermutation {
    /// Uniformly random permutation of `0..l`, fully determined by `seed`.
    pub fn from_seed(seed: u64, l: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..l).collect();
        perm.shuffle(&mut rng);
        HiddenPermutation {
            seed: Some(seed),
            perm,
        }
    }

    pub fn from_indices(perm: Vec<usize>) -> Result<Self> {
        check_permutation(&perm)?;
        Ok(HiddenPermutation { seed: None, perm })
    }

    pub fn identity(l: usize) -> Self {
        HiddenPermutation {
            seed: None,
            perm: (0..l).collect(),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn indices(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn apply(&self, s: &BitString) -> Result<BitString> {
        if s.len() != self.len() {
            return Err(RaqmError::WrongLength {
                expected: self.len(),
                actual: s.len(),
            });
        }
        let bits = s.bits();
        Ok(BitString::from_raw(self.perm.iter().map(|p| bits[*p]).collect()))
    }

    /// Position of the unpermuted string that ξ moves to the most
    /// significant digit, i.e. the bit read out by measurement.
    pub fn measured_position(&self) -> usize {
        self.perm[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QubitState {
    pub point: LatticePoint,
    pub xi: HiddenPermutation,
    pub string: BitString,
}

impl QubitState {
    /// All +1s first: the equivalence-class representative modulo ξ.
    pub fn class_representative(&self) -> BitString {
        self.string.sorted()
    }
}

pub fn make_qubit(point: LatticePoint, xi: HiddenPermutation) -> Result<QubitState> {
    let string = xi.apply(&canonical_bitstring(&point))?;
    Ok(QubitState { point, xi, string })
}

/// Real degrees of freedom of an N-qubit state, 2^(N+1) − 2.
pub fn dof(n: u32) -> u64 {
    assert!((1..63).contains(&n), "qubit count out of range");
    (1u64 << (n + 1)) - 2
}

/// Colatitude and longitude of one block, as cos²(θ/2) and φ/2π.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockParams {
    pub cos2_half: Rational,
    pub phase: RationalAngle,
}

impl BlockParams {
    pub fn new(cos2_half: Rational, phase: RationalAngle) -> Self {
        BlockParams { cos2_half, phase }
    }

    /// Colatitude θ with the given cos θ, at zero longitude.
    pub fn from_cos_theta(cos_theta: &Rational) -> Self {
        BlockParams {
            cos2_half: (Rational::one() + cos_theta) / Rational::from_integer(2),
            phase: RationalAngle::zero(),
        }
    }
}

/// (θ₁, φ₁) for qubit A; (θ₂, φ₂) and (θ₃, φ₃) for qubit B conditioned on
/// A's +1 and −1 bits respectively.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoQubitParams {
    pub a: BlockParams,
    pub b_given_plus: BlockParams,
    pub b_given_minus: BlockParams,
}

impl TwoQubitParams {
    /// Singlet seen with analysers at relative angle θ_AB: A on the equator,
    /// B's sub-blocks at colatitudes π − θ_AB and θ_AB.
    pub fn singlet(cos_theta_ab: &Rational) -> Self {
        TwoQubitParams {
            a: BlockParams::new(Rational::new(1, 2), RationalAngle::zero()),
            b_given_plus: BlockParams::from_cos_theta(&-cos_theta_ab),
            b_given_minus: BlockParams::from_cos_theta(cos_theta_ab),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoQubitState {
    pub l: usize,
    pub params: TwoQubitParams,
    pub xi: HiddenPermutation,
    /// Qubit A.
    pub top: BitString,
    /// Qubit B.
    pub bottom: BitString,
}

impl TwoQubitState {
    /// Bits read out by measurement on each string: the most significant
    /// position after ξ.
    pub fn outcomes(&self) -> (i8, i8) {
        (self.top.get(0), self.bottom.get(0))
    }

    /// Exact position average of top·bottom.
    pub fn mean_product(&self) -> Rational {
        let sum: i64 = self
            .top
            .bits()
            .iter()
            .zip(self.bottom.bits())
            .map(|(a, b)| (*a as i64) * (*b as i64))
            .sum();
        Rational::new(sum, self.l as i64)
    }

    /// Fraction of B's +1 bits among positions where A has `a_bit`.
    pub fn conditional_fraction(&self, a_bit: i8) -> Option<Rational> {
        let (hits, total) = self
            .top
            .bits()
            .iter()
            .zip(self.bottom.bits())
            .filter(|(a, _)| **a == a_bit)
            .fold((0i64, 0i64), |(h, t), (_, b)| (h + (*b == 1) as i64, t + 1));
        (total > 0).then(|| Rational::new(hits, total))
    }

    pub fn record(&self) -> StateRecord {
        StateRecord {
            l: self.l,
            params: self.params.clone(),
            xi_seed: self.xi.seed(),
            top: self.top.clone(),
            bottom: self.bottom.clone(),
        }
    }
}

/// JSON dump of a two-qubit state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRecord {
    #[serde(rename = "L")]
    pub l: usize,
    pub params: TwoQubitParams,
    pub xi_seed: Option<u64>,
    pub top: BitString,
    pub bottom: BitString,
}

/// `value · len` as an integer, or an unrealisable-parameter error naming
/// the fraction.
fn bits_for(what: &str, value: &Rational, len: usize) -> Result<usize> {
    if value.is_negative() || *value > Rational::one() {
        return Err(RaqmError::Unrealisable(format!("{what} = {value} is outside [0, 1]")));
    }
    (value * Rational::from_integer(len as i64))
        .to_usize()
        .ok_or_else(|| {
            RaqmError::Unrealisable(format!(
                "{what} = {value} times block length {len} is not an integer"
            ))
        })
}

fn shifted_block(what: &str, p: &BlockParams, len: usize) -> Result<BitString> {
    let ones = bits_for(&format!("cos²({what}/2)"), &p.cos2_half, len)?;
    let shift = bits_for(&format!("{what} phase"), p.phase.turns(), len)?;
    Ok(zeta(&BitString::block(ones, len), shift as i64))
}

/// Unpermuted (top, bottom) layout.
///
/// φ₁ rotates the top string; B's sub-blocks are then written onto A's +1
/// and −1 positions in ascending order, so the conditional fractions hold
/// for any φ₁.
fn two_qubit_layout(params: &TwoQubitParams, l: usize) -> Result<(BitString, BitString)> {
    let top = shifted_block("θ₁", &params.a, l)?;
    let m1 = top.count_ones();
    let plus = shifted_block("θ₂", &params.b_given_plus, m1)?;
    let minus = shifted_block("θ₃", &params.b_given_minus, l - m1)?;
    let (mut pi, mut mi) = (plus.bits().iter(), minus.bits().iter());
    let bottom = top
        .bits()
        .iter()
        .map(|a| *if *a == 1 { pi.next() } else { mi.next() }.expect("block sizes match"))
        .collect();
    Ok((top, BitString::from_raw(bottom)))
}

pub fn make_two_qubit(
    params: TwoQubitParams,
    l: usize,
    xi: HiddenPermutation,
) -> Result<TwoQubitState> {
    if l == 0 {
        return Err(RaqmError::InvalidLatticePoint("L must be positive".into()));
    }
    let (top, bottom) = two_qubit_layout(&params, l)?;
    Ok(TwoQubitState {
        l,
        top: xi.apply(&top)?,
        bottom: xi.apply(&bottom)?,
        params,
        xi,
    })
}

/// Singlet at analyser angle θ_AB given by its cosine. Requires L even and
/// sin²(θ_AB/2)·L/2 integral.
pub fn make_singlet(cos_theta_ab: &Rational, l: usize, xi: HiddenPermutation) -> Result<TwoQubitState> {
    if l % 2 != 0 {
        return Err(RaqmError::Unrealisable(format!("singlet needs even L, got {l}")));
    }
    if cos_theta_ab.abs() > Rational::one() {
        return Err(RaqmError::Domain(format!("cos θ_AB = {cos_theta_ab} exceeds 1 in magnitude")));
    }
    make_two_qubit(TwoQubitParams::singlet(cos_theta_ab), l, xi)
}

/// Presents the same pair with B as the block string: returns ξ′ and the
/// swapped parameters so that the ordered strings equal the input's
/// (bottom, top).
pub fn swap_perspective(s: &TwoQubitState) -> TwoQubitState {
    let l = s.l;
    let new_top = &s.bottom;
    let new_bottom = &s.top;
    let m1 = new_top.count_ones();
    let joint = |t: i8, b: i8| {
        new_top
            .bits()
            .iter()
            .zip(new_bottom.bits())
            .filter(|(x, y)| **x == t && **y == b)
            .count() as i64
    };
    let frac = |num: i64, den: usize| {
        if den == 0 {
            Rational::zero()
        } else {
            Rational::new(num, den as i64)
        }
    };
    let params = TwoQubitParams {
        a: BlockParams::new(Rational::new(m1 as i64, l as i64), RationalAngle::zero()),
        b_given_plus: BlockParams::new(frac(joint(1, 1), m1), RationalAngle::zero()),
        b_given_minus: BlockParams::new(frac(joint(-1, 1), l - m1), RationalAngle::zero()),
    };
    let (lay_top, lay_bottom) =
        two_qubit_layout(&params, l).expect("counts taken from the state are realisable");

    // Queue layout positions by joint outcome, then hand them out in order.
    let key = |t: i8, b: i8| ((t == 1) as usize) << 1 | (b == 1) as usize;
    let mut buckets: [Vec<usize>; 4] = Default::default();
    for k in (0..l).rev() {
        buckets[key(lay_top.get(k), lay_bottom.get(k))].push(k);
    }
    let perm: Vec<usize> = (0..l)
        .map(|i| {
            buckets[key(new_top.get(i), new_bottom.get(i))]
                .pop()
                .expect("joint outcome counts agree")
        })
        .collect();
    let xi = HiddenPermutation::from_indices(perm).expect("bucket matching is a bijection");
    let out = TwoQubitState {
        l,
        top: xi.apply(&lay_top).expect("length L"),
        bottom: xi.apply(&lay_bottom).expect("length L"),
        params,
        xi,
    };
    debug_assert!(out.top == *new_top && out.bottom == *new_bottom);
    out
}

/// Rebuilds B's string for new sub-block settings under the same ξ.
/// A's string is unchanged bit for bit.
pub fn counterfactual_setting_change(
    s: &TwoQubitState,
    b_given_plus: BlockParams,
    b_given_minus: BlockParams,
) -> Result<TwoQubitState> {
    let params = TwoQubitParams {
        a: s.params.a.clone(),
        b_given_plus,
        b_given_minus,
    };
    let out = make_two_qubit(params, s.l, s.xi.clone())?;
    assert_eq!(out.top, s.top, "A's string changed under a change of B's setting");
    Ok(out)
}

/// Bob turns his analyser so that the singlet is seen at a new θ_AB.
pub fn change_singlet_angle(s: &TwoQubitState, cos_theta_ab: &Rational) -> Result<TwoQubitState> {
    let p = TwoQubitParams::singlet(cos_theta_ab);
    counterfactual_setting_change(s, p.b_given_plus, p.b_given_minus)
}
