//! Two-path interferometry: which rationality conditions each stage of a
//! Mach-Zehnder run demands, and whether a phase can meet them.

use serde::Serialize;

use crate::exact::{cos_squared, niven_cosine, ExactCosine};
use crate::numeric::{ComplexReal, Real, CHECK_BITS};
use crate::rational::{Rational, RationalAngle};

/// A probability known exactly when the exact layer can decide it, always
/// with a high-precision numeric value.
#[derive(Clone, Debug, Serialize)]
pub struct Probability {
    pub exact: Option<Rational>,
    pub numeric: f64,
    /// The numeric value agrees with `exact` to 2^-150 (vacuous when
    /// `exact` is absent).
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MzReport {
    pub phi: RationalAngle,
    pub inside_definable: bool,
    pub inside_certificate: String,
    pub output_definable: bool,
    pub output_certificate: ExactCosine,
    /// Detector probabilities (sin²(φ/2), cos²(φ/2)).
    pub output_probabilities: [Probability; 2],
    /// Both stages demanded at once cannot be met.
    pub niven_conflict: bool,
}

fn hadamard(v: &[ComplexReal; 2]) -> [ComplexReal; 2] {
    let s = Real::from_i64(2).sqrt();
    let k = Real::one().div(&s);
    [
        v[0].add(&v[1]).scale(&k),
        v[0].sub(&v[1]).scale(&k),
    ]
}

/// Amplitudes after beamsplitter, phase shifter on the lower arm and
/// second beamsplitter, starting from the |−1⟩ path.
pub fn mz_amplitudes(phi: &RationalAngle) -> [ComplexReal; 2] {
    let start = [ComplexReal::zero(), ComplexReal::real(Real::one())];
    let inside = hadamard(&start);
    let shifted = [inside[0].clone(), inside[1].mul(&ComplexReal::unit(phi.turns()))];
    hadamard(&shifted)
}

fn probability(numeric: Real, exact: Option<Rational>) -> Probability {
    let consistent = exact
        .as_ref()
        .map_or(true, |e| numeric.approx_eq(&Real::from_rational(e), CHECK_BITS));
    Probability {
        exact,
        numeric: numeric.to_f64(),
        consistent,
    }
}

pub fn mz_simulate(phi: &RationalAngle) -> MzReport {
    let amps = mz_amplitudes(phi);
    let cos_phi = niven_cosine(phi);
    let half = Rational::new(1, 2);
    let exact = |sign: i64| {
        cos_phi
            .as_rational()
            .map(|c| (Rational::one() + Rational::from_integer(sign) * c) * &half)
    };
    let output_definable = cos_phi.is_rational();
    MzReport {
        phi: phi.clone(),
        inside_definable: true,
        inside_certificate: format!(
            "cos²(θ/2) = 1/2 at θ = π/2 and φ/2π = {} are both rational",
            phi.turns()
        ),
        output_definable,
        output_probabilities: [
            probability(amps[0].norm_sqr(), exact(-1)),
            probability(amps[1].norm_sqr(), exact(1)),
        ],
        output_certificate: cos_phi,
        niven_conflict: !output_definable,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DelayedChoiceReport {
    pub phi: RationalAngle,
    pub second_mirror_in: bool,
    pub demand: String,
    pub satisfied: bool,
    pub certificate: String,
}

/// With the second beamsplitter in place the output demands cos φ ∈ ℚ;
/// without it the paths demand φ/2π ∈ ℚ.
pub fn delayed_choice(phi: &RationalAngle, second_mirror_in: bool) -> DelayedChoiceReport {
    if second_mirror_in {
        let c = niven_cosine(phi);
        DelayedChoiceReport {
            phi: phi.clone(),
            second_mirror_in,
            demand: "cos φ ∈ ℚ".into(),
            satisfied: c.is_rational(),
            certificate: c.describe(),
        }
    } else {
        DelayedChoiceReport {
            phi: phi.clone(),
            second_mirror_in,
            demand: "φ/2π ∈ ℚ".into(),
            satisfied: true,
            certificate: format!("φ/2π = {}", phi.turns()),
        }
    }
}

/// e^{i(kx+kΔx)} − e^{i(kx−kΔx)} = 2i sin(kΔx) e^{ikx}.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteDifference {
    pub kx: Rational,
    pub k_dx: Rational,
    pub identity_holds: bool,
    /// sin²(kΔx) as an exact rational when it is one.
    pub sin2_exact: Option<Rational>,
    /// kx and kΔx are rational turns, so a rational sin² is a Niven
    /// exception; otherwise the amplitude is undefinable.
    pub clash: bool,
}

pub fn finite_difference_check(kx: &Rational, k_dx: &Rational) -> FiniteDifference {
    let lhs = ComplexReal::unit(&(kx + k_dx)).sub(&ComplexReal::unit(&(kx - k_dx)));
    let rhs = ComplexReal::unit(kx)
        .scale(&Real::sin_turns(k_dx).mul(&Real::from_i64(2)))
        .times_i();
    // sin²x = cos²(x − 1/4 turn)
    let shifted = RationalAngle::new(k_dx - Rational::new(1, 4));
    let sin2_exact = cos_squared(&shifted);
    FiniteDifference {
        kx: kx.clone(),
        k_dx: k_dx.clone(),
        identity_holds: lhs.approx_eq(&rhs, CHECK_BITS),
        clash: sin2_exact.is_none(),
        sin2_exact,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitySplitReport {
    pub phi_a: RationalAngle,
    pub phi_b: RationalAngle,
    /// e^{iφ_A} + e^{iφ_B} = 2 cos((φ_A−φ_B)/2) e^{i(φ_A+φ_B)/2}.
    pub sum_identity_holds: bool,
    /// e^{iφ_A} − e^{iφ_B} = 2i sin((φ_A−φ_B)/2) e^{i(φ_A+φ_B)/2}.
    pub difference_identity_holds: bool,
    pub sum_modulus: f64,
    pub difference_modulus: f64,
    /// cos²((φ_A−φ_B)/2) when rational.
    pub amplitude_cos2: Option<Rational>,
    pub phases_rational: bool,
    /// Rational amplitude together with rational phases: only on the
    /// Niven exception set.
    pub exception_hit: bool,
    pub clash: bool,
    pub finite_difference: FiniteDifference,
}

pub fn identity_split_check(phi_a: &RationalAngle, phi_b: &RationalAngle) -> IdentitySplitReport {
    let two = Real::from_i64(2);
    let (a, b) = (phi_a.turns(), phi_b.turns());
    let half = Rational::new(1, 2);
    let half_diff = (a - b) * &half;
    let half_sum = (a + b) * &half;
    let ea = ComplexReal::unit(a);
    let eb = ComplexReal::unit(b);
    let carrier = ComplexReal::unit(&half_sum);
    let sum = ea.add(&eb);
    let diff = ea.sub(&eb);
    let sum_rhs = carrier.scale(&Real::cos_turns(&half_diff).mul(&two));
    let diff_rhs = carrier
        .scale(&Real::sin_turns(&half_diff).mul(&two))
        .times_i();
    let amplitude_cos2 = cos_squared(&RationalAngle::new(half_diff.clone()));
    let exception_hit = amplitude_cos2.is_some();
    IdentitySplitReport {
        phi_a: phi_a.clone(),
        phi_b: phi_b.clone(),
        sum_identity_holds: sum.approx_eq(&sum_rhs, CHECK_BITS),
        difference_identity_holds: diff.approx_eq(&diff_rhs, CHECK_BITS),
        sum_modulus: sum.norm_sqr().sqrt().to_f64(),
        difference_modulus: diff.norm_sqr().sqrt().to_f64(),
        amplitude_cos2,
        phases_rational: true,
        exception_hit,
        clash: !exception_hit,
        finite_difference: finite_difference_check(&half_sum, &half_diff),
    }
}
