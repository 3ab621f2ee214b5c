use fmstab::chern::{
    apply_fmt, fmt_compose, mukai_pairing, poincare_fmt, ChernVector, FmtDescriptor,
};
use fmstab::exactnum::{int, ExactComplex, ExactScalar, Rational};
use fmstab::flow::{moebius_action, real_factor_parameters, solve_polarization};
use fmstab::sl2cf::{cf_convergents, cf_evaluate, factorize, signed_isometry, SL2};
use fmstab::stability::{
    bg_check, bogomolov_check, charge_transfer_identity, im_charge_identity, semihomog_chern,
    tilt_slope_nu, transfer_reduction, BgMode, ParamQuadruple, SlopeValue, StabilityParams,
    Verdict,
};
use fmstab::symrep::{rep_matrix_sl2, RepMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=30, 1i64..=12).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn sl2() -> impl Strategy<Value = SL2> {
    prop::collection::vec(0u8..3, 0..=12).prop_map(|steps| {
        let t = SL2::from_i64(1, 1, 0, 1).unwrap();
        let t_inv = SL2::from_i64(1, -1, 0, 1).unwrap();
        steps.into_iter().fold(SL2::identity(), |acc, s| match s {
            0 => &acc * &t,
            1 => &acc * &t_inv,
            _ => &acc * &SL2::poincare(),
        })
    })
}

fn sl2_with_negative_y() -> impl Strategy<Value = SL2> {
    sl2()
        .prop_filter("y != 0", |m| !m.y.is_zero())
        .prop_map(|m| if m.y.is_positive() { m.negate() } else { m })
}

fn quadruple() -> impl Strategy<Value = ParamQuadruple> {
    (positive_rational(), sl2_with_negative_y())
        .prop_map(|(l, m)| ParamQuadruple::new(l, &m).unwrap())
}

fn vector(g: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), g + 1)
}

fn upper_half_plane() -> impl Strategy<Value = ExactComplex> {
    (rational(), positive_rational())
        .prop_map(|(b, m)| ExactComplex::new(b.into(), ExactScalar::sqrt3_multiple(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rep_is_integral_unimodular(m in sl2(), k in 1usize..=6) {
        let rho = rep_matrix_sl2(k, &m).unwrap();
        prop_assert!(rho.is_integral());
        prop_assert_eq!(rho.det(), ExactScalar::one());
    }

    #[test]
    fn rep_of_minus_identity(k in 1usize..=6) {
        let sign = if k % 2 == 0 { int(1) } else { int(-1) };
        prop_assert_eq!(rep_matrix_sl2(k, &SL2::minus_identity()).unwrap(), RepMatrix::identity(k).scale(&sign.into()));
        prop_assert_eq!(rep_matrix_sl2(k, &SL2::identity()).unwrap(), RepMatrix::identity(k));
    }

    #[test]
    fn rep_is_multiplicative(a in sl2(), b in sl2(), k in 1usize..=4) {
        let lhs = rep_matrix_sl2(k, &(&a * &b)).unwrap();
        prop_assert_eq!(lhs, &rep_matrix_sl2(k, &a).unwrap() * &rep_matrix_sl2(k, &b).unwrap());
    }

    #[test]
    fn transforms_compose(f1 in sl2(), f2 in sl2(), a in vector(3)) {
        let v = ChernVector::untwisted(a).unwrap();
        let (f1, f2) = (FmtDescriptor::transform(f1), FmtDescriptor::transform(f2));
        let twice = apply_fmt(&apply_fmt(&v, &f1).unwrap(), &f2).unwrap();
        prop_assert_eq!(twice, apply_fmt(&v, &fmt_compose(&f2, &f1)).unwrap());
    }

    #[test]
    fn transforms_are_isometries(f in sl2(), (a, b) in (1usize..=3).prop_flat_map(|g| (vector(g), vector(g)))) {
        let v = ChernVector::untwisted(a).unwrap();
        let w = ChernVector::untwisted(b).unwrap();
        let f = FmtDescriptor::transform(f);
        let before = mukai_pairing(&v, &w).unwrap();
        prop_assert_eq!(mukai_pairing(&apply_fmt(&v, &f).unwrap(), &apply_fmt(&w, &f).unwrap()).unwrap(), before);
    }

    #[test]
    fn poincare_twice_is_sign(a in vector(3)) {
        let v = ChernVector::untwisted(a).unwrap();
        let twice = apply_fmt(&apply_fmt(&v, &poincare_fmt()).unwrap(), &poincare_fmt()).unwrap();
        prop_assert_eq!(twice, v.negate());
    }

    #[test]
    fn factorize_round_trips(m in sl2()) {
        prop_assert_eq!(signed_isometry(&factorize(&m)), m);
    }

    #[test]
    fn evaluation_matches_convergents(m in prop::collection::vec(-6i64..=6, 1..=8)) {
        let word: Vec<BigInt> = m.into_iter().map(BigInt::from).collect();
        let c = cf_convergents(&word);
        let n = c.n();
        for k in 1..=n {
            let expected = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            prop_assert_eq!(c.determinant(k), expected);
        }
        if let Ok(value) = cf_evaluate(&word) {
            prop_assert!(!c.t[n].is_zero());
            prop_assert_eq!(value, Rational::new(c.s[n].clone(), c.t[n].clone()));
        }
    }

    #[test]
    fn charge_closed_forms(q in quadruple(), a in vector(3), b in vector(3)) {
        let source = ChernVector::new(3, q.source_twist(), a).unwrap();
        prop_assert!(im_charge_identity(&source, &q).unwrap().holds());
        prop_assert!(charge_transfer_identity(&source, &q).unwrap().holds());
        if q.source_twist() != q.target_twist() {
            let target = ChernVector::new(3, q.target_twist(), b).unwrap();
            prop_assert!(im_charge_identity(&target, &q).unwrap().holds());
        }
    }

    #[test]
    fn transfer_reduction_is_biconditional(a1 in rational(), a3 in rational(), lambda in positive_rational(), y in positive_rational()) {
        let (transferred, concluded) = transfer_reduction(&a1, &a3, &lambda, &-y);
        prop_assert_eq!(transferred, concluded);
    }

    #[test]
    fn semihomogeneous_classes(p in rational(), q in positive_rational()) {
        let params = StabilityParams::new(p.clone(), q.clone()).unwrap();
        let (plus, minus) = semihomog_chern(&p, &q).unwrap();
        for v in [&plus, &minus] {
            prop_assert_eq!(bogomolov_check(v).unwrap(), Verdict::HoldsEquality);
            prop_assert_eq!(tilt_slope_nu(v, &params).unwrap(), SlopeValue::Finite(ExactScalar::zero()));
        }
        prop_assert!(bg_check(&plus, &params, BgMode::Strong).unwrap().holds());
    }

    #[test]
    fn moebius_cocycle(f1 in sl2(), f2 in sl2(), u in upper_half_plane(), g in 1usize..=3) {
        let (f1, f2) = (FmtDescriptor::transform(f1), FmtDescriptor::transform(f2));
        let first = moebius_action(&f1, &u, g).unwrap();
        let second = moebius_action(&f2, &first.v, g).unwrap();
        let both = moebius_action(&fmt_compose(&f2, &f1), &u, g).unwrap();
        prop_assert_eq!(both.v, second.v);
        prop_assert_eq!(both.factor, &first.factor * &second.factor);
    }

    #[test]
    fn real_factor_lands_on_target_parameters(m in sl2_with_negative_y(), lambda in positive_rational()) {
        let f = FmtDescriptor::transform(m.clone());
        let point = real_factor_parameters(&f, &lambda, 3, 1).unwrap();
        let q = ParamQuadruple::new(lambda.clone(), &m).unwrap();
        prop_assert_eq!(point.v, ExactComplex::new(q.b_prime.clone().into(), ExactScalar::sqrt3_multiple(q.m_prime_coeff.clone())));
        prop_assert_eq!(point.u, ExactComplex::new(q.b.clone().into(), ExactScalar::sqrt3_multiple(q.m_coeff.clone())));
        prop_assert!(real_factor_parameters(&f, &lambda, 3, 2).unwrap().factor.is_real());
    }

    #[test]
    fn solver_output(alpha in positive_rational(), beta in rational()) {
        let s = solve_polarization(&alpha, &beta).unwrap();
        let q = &s.quadruple;
        let y = Rational::from_integer(q.y.clone());
        prop_assert!(q.y.is_negative());
        prop_assert!(q.x.gcd(&q.y).is_one());
        prop_assert!(q.matrix().det().is_one());
        prop_assert_eq!(&q.b - q.source_twist(), &q.lambda / int(2));
        prop_assert_eq!(&q.b_prime - q.target_twist(), -(int(2) * &q.lambda * &y * &y).recip());
        prop_assert_eq!(int(3) * &q.m_coeff * &q.m_prime_coeff, int(3) / (int(4) * &y * &y));
        prop_assert_eq!(signed_isometry(&s.word), q.matrix());
    }

    #[test]
    fn records_round_trip_through_json(q in quadruple(), a in vector(3), m in sl2()) {
        let v = ChernVector::new(3, q.source_twist(), a).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<ChernVector>(&text).unwrap(), v);
        let text = serde_json::to_string(&q).unwrap();
        prop_assert_eq!(serde_json::from_str::<ParamQuadruple>(&text).unwrap(), q);
        let word = factorize(&m);
        let text = serde_json::to_string(&word).unwrap();
        prop_assert_eq!(serde_json::from_str::<fmstab::GeneratorWord>(&text).unwrap(), word);
        let text = serde_json::to_string(&m).unwrap();
        prop_assert_eq!(serde_json::from_str::<SL2>(&text).unwrap(), m);
    }
}
