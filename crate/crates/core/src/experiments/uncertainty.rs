//! Spin uncertainty from the geometry of direction cosines.
//!
//! A direction p makes colatitudes θ, θ′, θ″ with three orthogonal poles.
//! A bit string along p measured about the first pole has mean cos θ and
//! standard deviation |sin θ|, and sin²θ′ sin²θ″ = cos²θ + cos²θ′ cos²θ″
//! gives the product bound |sin θ′||sin θ″| ≥ |cos θ|.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{RaqmError, Result};
use crate::exact::{spherical_third_side, ExactCosine};
use crate::exec::{derive_seed, map_chunks, Execution};
use crate::numeric::{Real, CHECK_BITS};
use crate::rational::{Rational, RationalAngle};

/// Cosines of the colatitudes of p relative to three orthogonal poles.
#[derive(Clone, Debug)]
pub enum DirectionCosines {
    Exact([Rational; 3]),
    Numeric([Real; 3]),
}

impl DirectionCosines {
    /// Numeric triple from a unit vector given in f64.
    pub fn from_f64(c: [f64; 3]) -> Self {
        DirectionCosines::Numeric(c.map(Real::from_f64))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UncertaintyRecord {
    /// σ_θ′ · σ_θ″ = |sin θ′| |sin θ″|.
    pub sigma_product: f64,
    /// |μ_θ| = |cos θ|.
    pub abs_mean: f64,
    pub holds: bool,
    pub equality: bool,
    /// ΔS′ ΔS″ and (ħ/2)|S̄| in units of ħ = 1.
    pub spin_lhs: f64,
    pub spin_rhs: f64,
    /// Exact comparison was possible.
    pub exact: bool,
}

fn inconsistent(sum: impl std::fmt::Display) -> RaqmError {
    RaqmError::InconsistentCosines(format!("squared direction cosines sum to {sum}, not 1"))
}

pub fn uncertainty_check(d: &DirectionCosines) -> Result<UncertaintyRecord> {
    match d {
        DirectionCosines::Exact([c, c1, c2]) => {
            let sum = c.square() + c1.square() + c2.square();
            if !sum.is_one() {
                return Err(inconsistent(sum));
            }
            let one = Rational::one();
            let lhs2 = (&one - c1.square()) * (&one - c2.square());
            let rhs2 = c.square();
            let lhs = Real::from_rational(&lhs2).sqrt().to_f64();
            let rhs = c.abs().to_f64();
            Ok(UncertaintyRecord {
                sigma_product: lhs,
                abs_mean: rhs,
                holds: lhs2 >= rhs2,
                equality: lhs2 == rhs2,
                spin_lhs: lhs / 4.0,
                spin_rhs: rhs / 4.0,
                exact: true,
            })
        }
        DirectionCosines::Numeric([c, c1, c2]) => {
            let sum = c.square().add(&c1.square()).add(&c2.square());
            if !sum.approx_eq(&Real::one(), CHECK_BITS) {
                return Err(inconsistent(sum.to_f64()));
            }
            let one = Real::one();
            let lhs = one.sub(&c1.square()).sqrt().mul(&one.sub(&c2.square()).sqrt());
            let rhs = c.abs();
            let gap = lhs.sub(&rhs);
            let equality = gap.is_negligible(CHECK_BITS);
            Ok(UncertaintyRecord {
                sigma_product: lhs.to_f64(),
                abs_mean: rhs.to_f64(),
                holds: equality || gap > Real::zero(),
                equality,
                spin_lhs: lhs.to_f64() / 4.0,
                spin_rhs: rhs.to_f64() / 4.0,
                exact: false,
            })
        }
    }
}

/// cos θ′ = sin θ cos φ for p at colatitude θ and azimuth φ about the first
/// pole, measured from the second. With cos θ and φ/2π rational this is the
/// third side of a triangle whose pole-to-pole side is a right angle, so
/// Niven's theorem generally makes it irrational.
pub fn uncertainty_obstruction(cos_theta: &Rational, phi: &RationalAngle) -> Result<ExactCosine> {
    spherical_third_side(cos_theta, &Rational::zero(), phi)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateRecord {
    pub samples: u64,
    pub seed: Option<u64>,
    pub mean_abs_cos: f64,
    pub mean_sigma2_prime: f64,
    pub mean_sigma2_double: f64,
    /// √(mean σ²_θ′) · √(mean σ²_θ″).
    pub bound: f64,
    /// bound ≥ 1/2, the Δx Δp ≥ ħ/2 form.
    pub holds: bool,
    pub mean_of_products: f64,
    pub mean_cos2: f64,
    /// mean(σ′²)·mean(σ″²) ≥ mean(σ′²σ″²) on this sample.
    pub product_of_means_dominates: bool,
    /// Samples with σ′σ″ = |μ| to within 1e-12.
    pub equality_cases: u64,
    /// A single sample on the equality boundary.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Default)]
struct Sums {
    n: u64,
    abs_cos: f64,
    s2p: f64,
    s2d: f64,
    prod: f64,
    cos2: f64,
    eq: u64,
}

impl Sums {
    fn push(&mut self, cos_theta: f64, phi_turns: f64) {
        let sin2 = (1.0 - cos_theta * cos_theta).max(0.0);
        let (s, c) = (phi_turns * std::f64::consts::TAU).sin_cos();
        let c1 = sin2.sqrt() * c;
        let c2 = sin2.sqrt() * s;
        let sp = 1.0 - c1 * c1;
        let sd = 1.0 - c2 * c2;
        self.n += 1;
        self.abs_cos += cos_theta.abs();
        self.s2p += sp;
        self.s2d += sd;
        self.prod += sp * sd;
        self.cos2 += cos_theta * cos_theta;
        if ((sp * sd).sqrt() - cos_theta.abs()).abs() < 1e-12 {
            self.eq += 1;
        }
    }

    fn merge(mut self, o: &Sums) -> Sums {
        self.n += o.n;
        self.abs_cos += o.abs_cos;
        self.s2p += o.s2p;
        self.s2d += o.s2d;
        self.prod += o.prod;
        self.cos2 += o.cos2;
        self.eq += o.eq;
        self
    }

    fn record(&self, seed: Option<u64>) -> AggregateRecord {
        let n = self.n as f64;
        let (mp, md) = (self.s2p / n, self.s2d / n);
        let bound = mp.sqrt() * md.sqrt();
        AggregateRecord {
            samples: self.n,
            seed,
            mean_abs_cos: self.abs_cos / n,
            mean_sigma2_prime: mp,
            mean_sigma2_double: md,
            bound,
            holds: bound >= 0.5,
            mean_of_products: self.prod / n,
            mean_cos2: self.cos2 / n,
            product_of_means_dominates: mp * md >= self.prod / n,
            equality_cases: self.eq,
            degenerate: self.n == 1 && self.eq == 1,
        }
    }
}

/// Directions uniform on the sphere (uniform in cos θ and in φ).
///
/// Each chunk of samples draws from its own generator seeded by the chunk
/// index and chunk sums are merged in order, so the record is identical for
/// either execution mode.
pub fn position_momentum_aggregate(samples: u64, seed: u64, exec: Execution) -> Result<AggregateRecord> {
    if samples == 0 {
        return Err(RaqmError::Config("need at least one sample".into()));
    }
    let chunks = map_chunks(exec, samples as usize, |range| {
        let chunk = (range.start / crate::exec::CHUNK) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1, chunk));
        let mut s = Sums::default();
        for _ in range {
            let ct: f64 = rng.gen_range(-1.0..=1.0);
            let ph: f64 = rng.gen();
            s.push(ct, ph);
        }
        s
    });
    let total = chunks.iter().fold(Sums::default(), |a, b| a.merge(b));
    Ok(total.record(Some(seed)))
}

/// The aggregate over explicit (cos θ, φ in turns) directions.
pub fn aggregate_from_directions(dirs: &[(f64, f64)]) -> Result<AggregateRecord> {
    if dirs.is_empty() {
        return Err(RaqmError::Config("need at least one direction".into()));
    }
    if dirs.iter().any(|(c, _)| c.abs() > 1.0) {
        return Err(RaqmError::Domain("|cos θ| must not exceed 1".into()));
    }
    let mut s = Sums::default();
    for (c, p) in dirs {
        s.push(*c, *p);
    }
    Ok(s.record(None))
}
