use proptest::prelude::*;

use num_bigint::BigInt;
use raqm::exact::{cos_squared, is_niven_denominator, is_squared_niven_denominator, niven_cosine, spherical_third_side};
use raqm::experiments::nominal::snap_to_lattice;
use raqm::lattice::{canonical_bitstring, ones_fraction, zeta, BitString, LatticePoint};
use raqm::numeric::{Real, CHECK_BITS};
use raqm::qubit::{make_qubit, make_singlet, swap_perspective, HiddenPermutation};
use raqm::rational::{Rational, RationalAngle};
use raqm::reduction::{measure, reduce_step, to_integer_pair, two_adic_distance};

fn cosine(max_den: i64) -> impl Strategy<Value = Rational> {
    (1..=max_den).prop_flat_map(|q| (-q..=q).prop_map(move |p| Rational::new(p, q)))
}

fn angle(max_den: i64) -> impl Strategy<Value = RationalAngle> {
    (1..=max_den).prop_flat_map(|q| (0..q).prop_map(move |n| RationalAngle::from_ratio(n, q)))
}

fn point(max_l: usize) -> impl Strategy<Value = LatticePoint> {
    (1..=max_l).prop_flat_map(|l| (0..=l, 0..l).prop_map(move |(m, n)| LatticePoint::new(m, n, l).unwrap()))
}

fn bits(max_len: usize) -> impl Strategy<Value = BitString> {
    prop::collection::vec(prop::bool::ANY, 1..=max_len)
        .prop_map(|v| BitString::new(v.into_iter().map(|b| if b { 1 } else { -1 }).collect()).unwrap())
}

/// cos θ_AB cos θ_BC + sin θ_AB sin θ_BC cos φ at 256 bits.
fn third_side_numeric(ab: &Rational, bc: &Rational, phi: &RationalAngle) -> Real {
    let (a, b) = (Real::from_rational(ab), Real::from_rational(bc));
    let one = Real::one();
    let sines = one.sub(&a.square()).sqrt().mul(&one.sub(&b.square()).sqrt());
    a.mul(&b).add(&sines.mul(&Real::cos_turns(phi.turns())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn third_side_matches_numeric(ab in cosine(24), bc in cosine(24), phi in angle(24)) {
        let c = spherical_third_side(&ab, &bc, &phi).unwrap();
        prop_assert!(c.verify_certificate());
        let numeric = third_side_numeric(&ab, &bc, &phi);
        prop_assert!(c.to_real().approx_eq(&numeric, CHECK_BITS), "{}", c.describe());
        if let Some(v) = c.as_rational() {
            prop_assert!(Real::from_rational(v).approx_eq(&numeric, CHECK_BITS));
        }
    }
}

proptest! {
    #[test]
    fn niven_classification(phi in angle(400)) {
        let q = BigInt::from(phi.denominator_u64().unwrap());
        let c = niven_cosine(&phi);
        prop_assert_eq!(c.is_rational(), is_niven_denominator(&q));
        prop_assert_eq!(cos_squared(&phi).is_some(), is_squared_niven_denominator(&q));
        prop_assert!(c.to_real().approx_eq(&Real::cos_turns(phi.turns()), CHECK_BITS));
        prop_assert!(c.verify_certificate());
    }

    #[test]
    fn rational_text_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = Rational::new(p, q);
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x.clone());
        let json = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), x);
    }

    #[test]
    fn ones_fraction_is_invariant_under_xi(p in point(64), seed in any::<u64>()) {
        let q = make_qubit(p, HiddenPermutation::from_seed(seed, p.l())).unwrap();
        prop_assert_eq!(ones_fraction(&q.string), p.cos2_half());
        prop_assert_eq!(ones_fraction(&canonical_bitstring(&p)), p.cos2_half());
    }

    #[test]
    fn states_agree_modulo_xi(p in point(64), s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = make_qubit(p, HiddenPermutation::from_seed(s1, p.l())).unwrap();
        let b = make_qubit(p, HiddenPermutation::from_seed(s2, p.l())).unwrap();
        prop_assert_eq!(a.string.sorted(), b.string.sorted());
    }

    #[test]
    fn zeta_preserves_counts(s in bits(40), k in -100i64..100) {
        prop_assert_eq!(ones_fraction(&zeta(&s, k)), ones_fraction(&s));
        prop_assert_eq!(ones_fraction(&s.negated()), Rational::one() - ones_fraction(&s));
    }

    #[test]
    fn measurement_reads_the_first_bit(s in bits(200)) {
        let t = measure(&s).unwrap();
        prop_assert_eq!(t.outcome, s.get(0));
        prop_assert_eq!(t.step_count, s.len() - 1);
        prop_assert!(t.steps.iter().all(|p| p.is_complementary()));
        prop_assert_eq!(to_integer_pair(&s).to_bitstring(), s);
    }

    #[test]
    fn reduction_drops_the_last_digit(s in bits(64)) {
        prop_assume!(s.len() >= 2);
        let next = reduce_step(&to_integer_pair(&s)).unwrap();
        let shorter = next.to_bitstring();
        prop_assert_eq!(shorter.bits(), &s.bits()[..s.len() - 1]);
    }

    #[test]
    fn two_adic_is_an_ultrametric(a in any::<i64>(), b in any::<i64>(), c in any::<i64>()) {
        let (a, b, c) = (BigInt::from(a), BigInt::from(b), BigInt::from(c));
        let (ab, bc, ac) = (two_adic_distance(&a, &b), two_adic_distance(&b, &c), two_adic_distance(&a, &c));
        prop_assert_eq!(ab.clone(), two_adic_distance(&b, &a));
        prop_assert!(ac <= ab.max(bc));
    }

    #[test]
    fn singlet_swap_is_an_involution(half in 1usize..=32, j in 0usize..=64, seed in any::<u64>()) {
        let j = j.min(half) as i64;
        let l = 2 * half;
        let cos = Rational::new(2 * j, half as i64) - Rational::one();
        let s = make_singlet(&cos, l, HiddenPermutation::from_seed(seed, l)).unwrap();
        let w = swap_perspective(&s);
        prop_assert_eq!(&w.top, &s.bottom);
        prop_assert_eq!(&w.bottom, &s.top);
        let back = swap_perspective(&w);
        prop_assert_eq!(&back.top, &s.top);
        prop_assert_eq!(&back.bottom, &s.bottom);
        prop_assert_eq!(s.mean_product(), -cos);
    }

    #[test]
    fn snapping_lands_within_one_step(t in -1.0f64..=1.0, l in 2usize..2000) {
        let s = snap_to_lattice(t, l, &Rational::new(1, l as i64)).unwrap();
        prop_assert!(s.snap_error() <= 1.0 / l as f64 + 1e-12);
    }
}
