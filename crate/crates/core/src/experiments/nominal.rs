//! Nominal measurement settings and the exact lattice orientations inside
//! their neighbourhoods, plus the Stern-Gerlach swap test built on them.

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{RaqmError, Result};
use crate::exact::{itc_verdict, ItcVerdict};
use crate::lattice::LatticePoint;
use crate::rational::{Rational, RationalAngle};

/// A setting known to the experimenter only up to a neighbourhood of
/// `target_cos`; `snapped` is the exact lattice orientation used.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NominalSetting {
    pub target_cos: f64,
    pub neighborhood: Rational,
    pub snapped: LatticePoint,
}

impl NominalSetting {
    /// A setting whose nominal value is already an exact lattice cosine.
    pub fn exact(cos: &Rational) -> Result<Self> {
        if cos.abs() > Rational::one() {
            return Err(RaqmError::Domain(format!("|cos θ| = |{cos}| exceeds 1")));
        }
        // cos θ = 2m/L − 1  ⇔  m/L = (1 + cos θ)/2
        let frac = (Rational::one() + cos) * Rational::new(1, 2);
        let (m, l) = (frac.numer(), frac.denom());
        let to_usize = |x: &num_bigint::BigInt| {
            usize::try_from(x).map_err(|_| RaqmError::Domain(format!("{cos} needs too large a lattice")))
        };
        Ok(NominalSetting {
            target_cos: cos.to_f64(),
            neighborhood: Rational::zero(),
            snapped: LatticePoint::new(to_usize(m)?, 0, to_usize(l)?)?,
        })
    }

    pub fn exact_cos(&self) -> Rational {
        self.snapped.cos_theta()
    }

    /// |exact cos − target| as f64.
    pub fn snap_error(&self) -> f64 {
        (self.exact_cos().to_f64() - self.target_cos).abs()
    }
}

/// Nearest lattice cosine 2m/L − 1 to `target_cos`; fails if it lies
/// farther than `epsilon`.
pub fn snap_to_lattice(target_cos: f64, l: usize, epsilon: &Rational) -> Result<NominalSetting> {
    if !target_cos.is_finite() || target_cos.abs() > 1.0 {
        return Err(RaqmError::Domain(format!("target cos θ = {target_cos} is outside [−1, 1]")));
    }
    if l < 2 {
        return Err(RaqmError::InvalidLatticePoint(format!("L = {l} is below 2")));
    }
    // an f64 is a dyadic rational, so the nearest point is chosen exactly
    let target = Rational::from(BigRational::from_float(target_cos).expect("finite"));
    let below = (((target_cos + 1.0) * l as f64) / 2.0).floor().clamp(0.0, l as f64) as usize;
    let distance = |m: usize| (Rational::new(2 * m as i64 - l as i64, l as i64) - &target).abs();
    let m = (below.saturating_sub(1)..=(below + 1).min(l))
        .min_by(|a, b| distance(*a).cmp(&distance(*b)))
        .expect("non-empty range");
    let snapped = LatticePoint::new(m, 0, l)?;
    if distance(m) > *epsilon {
        return Err(RaqmError::SnapInfeasible {
            target: target_cos,
            l,
            epsilon: epsilon.to_f64(),
        });
    }
    Ok(NominalSetting {
        target_cos,
        neighborhood: epsilon.clone(),
        snapped,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SgVerdict {
    pub cos_ab: Rational,
    pub cos_bc: Rational,
    pub phi_b: RationalAngle,
    /// The counterfactually swapped order is simultaneously definable.
    pub swapped_definable: bool,
    pub verdict: ItcVerdict,
}

/// Can SG_B and SG_C be swapped with the system held fixed? Requires
/// cos θ_AC rational too, which is the spherical-triangle question with
/// interior angle φ_B.
pub fn sg_counterfactual(ab: &NominalSetting, bc: &NominalSetting, phi_b: &RationalAngle) -> Result<SgVerdict> {
    let (cos_ab, cos_bc) = (ab.exact_cos(), bc.exact_cos());
    let verdict = itc_verdict(&cos_ab, &cos_bc, phi_b)?;
    Ok(SgVerdict {
        cos_ab,
        cos_bc,
        phi_b: phi_b.clone(),
        swapped_definable: verdict.possible,
        verdict,
    })
}
