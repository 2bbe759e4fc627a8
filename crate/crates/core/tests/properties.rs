use num_rational::BigRational;
use proptest::prelude::*;
use twisted_core::expr::parse_pp;
use twisted_core::prop_verify::DEFAULT_SEED;
use twisted_core::{
    q_binomial, reduce_mod_ideal_power, specialize, taylor_expand, taylor_reconstruct,
    verify_localization_base_change, verify_quotient_base_change, xi_twisted_power,
    AlgebraCarrier, AlgebraElement, PPElement, QScalar, TaylorExpansion, TwistSpec,
};

fn rat(p: i64) -> BigRational {
    BigRational::from_integer(p.into())
}

fn twists() -> Vec<TwistSpec> {
    vec![
        TwistSpec::quantum(),
        TwistSpec::with_parameters(Some(rat(1)), rat(1)).unwrap(),
        TwistSpec::with_parameters(Some(rat(2)), rat(0)).unwrap(),
        TwistSpec::new(QScalar::q(), QScalar::from_int(-2)).unwrap(),
    ]
}

fn scalar() -> impl Strategy<Value = QScalar> {
    (prop::collection::vec(-5i64..=5, 0..4), -2i64..=2, 1i64..=3).prop_map(|(c, shift, den)| {
        QScalar::from_int_coeffs(&c)
            .mul_q_pow(shift)
            .scale(&BigRational::new(1.into(), den.into()))
    })
}

fn element(max_deg: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, 0..3), 0..=max_deg + 1).prop_map(|cs| {
        AlgebraElement::from_coeffs(cs.iter().map(|c| QScalar::from_int_coeffs(c)).collect())
    })
}

fn pp(carrier: AlgebraCarrier, xt_deg: usize) -> impl Strategy<Value = PPElement> {
    prop::collection::vec(element(3), 0..=xt_deg + 1)
        .prop_map(move |cs| PPElement::from_coeffs(&carrier, &cs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn specialization_is_a_ring_map(a in scalar(), b in scalar(), q0 in prop_oneof![-3i64..=-1, 1i64..=3]) {
        let q0 = rat(q0);
        let s = |x: &QScalar| specialize(x, &q0).unwrap();
        prop_assert_eq!(s(&(&a + &b)), &s(&a) + &s(&b));
        prop_assert_eq!(s(&(&a * &b)), &s(&a) * &s(&b));
    }

    #[test]
    fn sigma_is_a_ring_homomorphism(f in element(3), g in element(3), t in 0usize..4) {
        let carrier = AlgebraCarrier::plain(twists()[t].clone());
        let (f, g) = (f.in_mode(carrier.mode()), g.in_mode(carrier.mode()));
        let s = |x: &AlgebraElement| carrier.sigma_apply(x);
        prop_assert_eq!(s(&(&f + &g)), &s(&f) + &s(&g));
        prop_assert_eq!(s(&(&f * &g)), &s(&f) * &s(&g));
        let c = AlgebraElement::constant(QScalar::from_int(7));
        prop_assert_eq!(s(&c), c);
    }

    #[test]
    fn twisted_power_composition(f in element(2), t in 0usize..4, m in 0usize..=4, n in 0usize..=4) {
        let carrier = AlgebraCarrier::plain(twists()[t].clone());
        let lhs = carrier.twisted_power(&f, m + n);
        let rhs = carrier.mul(
            &carrier.twisted_power(&f, m),
            &carrier.sigma_pow(&carrier.twisted_power(&f, n), m),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisted_power_multiplicative(f in element(2), g in element(2), t in 0usize..4, n in 0usize..=5) {
        let carrier = AlgebraCarrier::plain(twists()[t].clone());
        let lhs = carrier.twisted_power(&carrier.mul(&f, &g), n);
        let rhs = carrier.mul(&carrier.twisted_power(&f, n), &carrier.twisted_power(&g, n));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn quotient_map_commutes_with_sigma(f in element(6), m in 1i64..=4, t in prop_oneof![Just(0usize), Just(2)]) {
        let plain = AlgebraCarrier::plain(twists()[t].clone());
        let b = plain.make_quotient(&AlgebraElement::x_pow(m)).unwrap();
        let lhs = b.reduce(&plain.sigma_apply(&f)).unwrap();
        let rhs = b.sigma_apply(&b.reduce(&f).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn localization_map_commutes_with_sigma(f in element(4), low in -3i64..=0) {
        let plain = AlgebraCarrier::plain(TwistSpec::quantum());
        let loc = plain.make_localization(&[AlgebraElement::x()]).unwrap();
        prop_assert_eq!(loc.reduce(&plain.sigma_apply(&f)).unwrap(), loc.sigma_apply(&f));
        let laurent = f.mul_x_pow(low);
        let back = loc.sigma_apply(&laurent).mul_x_pow(-low);
        let expected = loc.sigma_apply(&f).scale(&QScalar::q_pow(low));
        prop_assert_eq!(back, expected);
        prop_assert!(AlgebraElement::x().inverse().is_some());
    }

    #[test]
    fn taylor_basis_property(
        (e, n) in (0usize..4, 0usize..=4).prop_flat_map(|(t, n)| {
            (pp(AlgebraCarrier::plain(twists()[t].clone()), 2 * n), Just(n))
        })
    ) {
        let t = taylor_expand(&e, n);
        let reduced = reduce_mod_ideal_power(&e, n);
        prop_assert!(reduced.degree().map_or(true, |d| d <= n));
        prop_assert_eq!(taylor_reconstruct(&t), reduced);
        prop_assert_eq!(taylor_expand(&taylor_reconstruct(&t), n), t);
    }

    #[test]
    fn expand_of_reconstruct_is_identity(cs in prop::collection::vec(element(3), 1..=5), t in 0usize..4) {
        let carrier = AlgebraCarrier::plain(twists()[t].clone());
        let n = cs.len() - 1;
        let expansion = TaylorExpansion::new(&carrier, n, &cs).unwrap();
        prop_assert_eq!(taylor_expand(&taylor_reconstruct(&expansion), n), expansion);
    }

    #[test]
    fn print_parse_round_trip(e in pp(AlgebraCarrier::plain(TwistSpec::quantum()), 3)) {
        let carrier = e.carrier().clone();
        let printed = e.to_string();
        let back = parse_pp(&printed, &carrier).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn print_parse_round_trip_specialized(e in pp(AlgebraCarrier::plain(twists()[1].clone()), 3)) {
        let carrier = e.carrier().clone();
        let printed = e.to_string();
        prop_assert_eq!(parse_pp(&printed, &carrier).unwrap().to_string(), printed);
    }
}

#[test]
fn ideal_chain_and_membership() {
    for twist in twists() {
        let carrier = AlgebraCarrier::plain(twist);
        let nodes = carrier.sigma_orbit_of_x(11);
        let xt = PPElement::xtilde(&carrier);
        for n in 0..=10 {
            let factor = &xt - &PPElement::from_algebra(&carrier, &nodes[n]).unwrap();
            assert_eq!(
                xi_twisted_power(&carrier, n + 1),
                &xi_twisted_power(&carrier, n) * &factor
            );
        }
        for n in 0..=4 {
            for m in n + 1..=n + 3 {
                assert!(reduce_mod_ideal_power(&xi_twisted_power(&carrier, m), n).is_zero());
            }
        }
    }
}

#[test]
fn gauss_binomial_small() {
    let carrier = AlgebraCarrier::plain(TwistSpec::quantum());
    let xt = PPElement::xtilde(&carrier);
    for big_n in 0..=8 {
        let t = taylor_expand(&xt.pow(big_n), big_n);
        for (k, c) in t.coeffs().iter().enumerate() {
            let expected = AlgebraElement::monomial(q_binomial(big_n as u32, k as i64), (big_n - k) as i64);
            assert_eq!(*c, expected);
        }
    }
}

#[test]
fn unit_product_is_q_power_times_x_power() {
    let carrier = AlgebraCarrier::plain(TwistSpec::quantum());
    for n in 0..=10i64 {
        let expected = AlgebraElement::monomial(QScalar::q_pow(n * (n + 1) / 2), n + 1);
        assert_eq!(carrier.twisted_power(&AlgebraElement::x(), n as usize + 1), expected);
    }
}

#[test]
fn quotient_surjectivity_small() {
    for m in 1..=4 {
        for n in 0..=4 {
            let report =
                verify_quotient_base_change(&TwistSpec::quantum(), &AlgebraElement::x_pow(m), n)
                    .unwrap();
            assert_eq!(report.check("surjective"), Some(true), "m={m} n={n}");
        }
    }
}

#[test]
fn quotient_tower_composes() {
    // A -> A/(x^3) -> A/(x^2) agrees with A -> A/(x^2).
    let plain = AlgebraCarrier::plain(TwistSpec::quantum());
    let b3 = plain.make_quotient(&AlgebraElement::x_pow(3)).unwrap();
    let b2 = plain.make_quotient(&AlgebraElement::x_pow(2)).unwrap();
    for n in 0..=3 {
        assert!(verify_quotient_base_change(plain.twist(), &AlgebraElement::x_pow(3), n).unwrap().is_success());
        assert!(verify_quotient_base_change(plain.twist(), &AlgebraElement::x_pow(2), n).unwrap().is_success());
        for k in 0..=2 * n {
            for j in 0..=4 {
                let e = PPElement::monomial(&plain, &AlgebraElement::x_pow(j), k).unwrap();
                let direct = reduce_mod_ideal_power(&e.base_change(&b2).unwrap(), n);
                let staged = reduce_mod_ideal_power(
                    &reduce_mod_ideal_power(&e.base_change(&b3).unwrap(), n)
                        .base_change(&b2)
                        .unwrap(),
                    n,
                );
                assert_eq!(direct, staged);
            }
        }
    }
}

#[test]
fn checks_survive_specialization() {
    for q0 in [1, 2] {
        let twist = TwistSpec::with_parameters(Some(rat(q0)), rat(0)).unwrap();
        for n in 0..=3 {
            let report = verify_quotient_base_change(&twist, &AlgebraElement::x_pow(3), n).unwrap();
            assert!(report.is_success(), "q0={q0} n={n}: {:?}", report.checks);
            let report = verify_localization_base_change(&twist, n, 10, DEFAULT_SEED).unwrap();
            assert!(report.is_success(), "q0={q0} n={n}: {:?}", report.checks);
        }
    }
}
