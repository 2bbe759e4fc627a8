use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use twisted_core::expr::parse_pp;
use twisted_core::prop_verify::{sample_algebra_element, sample_pp_element};
use twisted_core::{
    invert_xtilde, q_factorial, reduce_mod_ideal_power, specialize, taylor_expand,
    taylor_reconstruct, verify_localization_base_change, verify_product_identity,
    verify_quotient_base_change, xi_twisted_power, AlgebraCarrier, AlgebraElement, Error,
    PPElement, QBinomTable, QScalar, TwistSpec,
};

/// Named outcomes, sorted by name.
#[derive(Clone, Debug, Serialize)]
pub struct BatteryResult {
    pub max: usize,
    pub checks: BTreeMap<String, bool>,
}

impl BatteryResult {
    pub fn failures(&self) -> usize {
        self.checks.values().filter(|ok| !**ok).count()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            max: usize,
            checks: &'a BTreeMap<String, bool>,
            failures: usize,
        }
        serde_json::to_string(&Out {
            max: self.max,
            checks: &self.checks,
            failures: self.failures(),
        })
        .expect("plain data serializes")
    }
}

fn rat(p: i64) -> BigRational {
    BigRational::from_integer(p.into())
}

fn settings() -> Vec<(&'static str, TwistSpec)> {
    vec![
        ("q-generic", TwistSpec::quantum()),
        ("shift", TwistSpec::with_parameters(Some(rat(1)), rat(1)).expect("q = 1")),
        ("q-2", TwistSpec::with_parameters(Some(rat(2)), rat(0)).expect("q = 2")),
    ]
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn qbinom_checks(max: usize) -> Vec<(String, bool)> {
    let n_max = max as u32;
    let table = QBinomTable::new(n_max);
    let facts: Vec<QScalar> = (0..=n_max).map(q_factorial).collect();
    let mut recurrence = true;
    let mut product = true;
    let mut symmetry = true;
    let mut classical = true;
    for n in 0..=n_max {
        for k in 0..=n {
            let c = table.get(n, k as i64);
            if n >= 1 && k >= 1 {
                let rhs = table.get(n - 1, k as i64 - 1) + table.get(n - 1, k as i64).mul_q_pow(k as i64);
                recurrence &= c == rhs;
            }
            product &= &(&c * &facts[k as usize]) * &facts[(n - k) as usize] == facts[n as usize];
            symmetry &= c == table.get(n, (n - k) as i64);
            let at_one = specialize(&c, &rat(1)).expect("q0 = 1").as_rational();
            classical &= at_one == Some(BigRational::from_integer(binomial(n, k)));
        }
    }
    vec![
        ("qbinom.recurrence".into(), recurrence),
        ("qbinom.product-formula".into(), product),
        ("qbinom.symmetry".into(), symmetry),
        ("qbinom.classical-limit".into(), classical),
    ]
}

fn twisted_power_checks(label: &str, twist: &TwistSpec, max: usize, seed: u64) -> Vec<(String, bool)> {
    let carrier = AlgebraCarrier::plain(twist.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bound = max.min(6);
    let mut composition = true;
    let mut multiplicative = true;
    let mut homomorphism = true;
    for _ in 0..8 {
        let f = sample_algebra_element(&mut rng, &carrier, 0..=2);
        let g = sample_algebra_element(&mut rng, &carrier, 0..=2);
        let powers: Vec<AlgebraElement> = (0..=2 * bound).map(|k| carrier.twisted_power(&f, k)).collect();
        for m in 0..=bound {
            for n in 0..=bound {
                let rhs = carrier.mul(&powers[m], &carrier.sigma_pow(&powers[n], m));
                composition &= powers[m + n] == rhs;
            }
        }
        let fg = carrier.mul(&f, &g);
        for n in 0..=bound.min(4) {
            multiplicative &= carrier.twisted_power(&fg, n)
                == carrier.mul(&carrier.twisted_power(&f, n), &carrier.twisted_power(&g, n));
        }
        homomorphism &= carrier.sigma_apply(&(&f + &g)) == &carrier.sigma_apply(&f) + &carrier.sigma_apply(&g);
        homomorphism &= carrier.sigma_apply(&fg) == carrier.mul(&carrier.sigma_apply(&f), &carrier.sigma_apply(&g));
    }
    let product_identity = (0..=max.min(10)).all(|n| verify_product_identity(&carrier, n));
    vec![
        (format!("twisted-power.composition.{label}"), composition),
        (format!("twisted-power.multiplicative.{label}"), multiplicative),
        (format!("sigma.homomorphism.{label}"), homomorphism),
        (format!("product-identity.{label}"), product_identity),
    ]
}

fn taylor_checks(label: &str, twist: &TwistSpec, max: usize, seed: u64) -> Vec<(String, bool)> {
    let carrier = AlgebraCarrier::plain(twist.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a71);
    let mut round_trip = true;
    let mut chain = true;
    for _ in 0..20 {
        let n = rng.gen_range(0..=max.min(6));
        let e = sample_pp_element(&mut rng, &carrier, 0..=3, 2 * n).expect("polynomial sample");
        let t = taylor_expand(&e, n);
        round_trip &= taylor_reconstruct(&t) == reduce_mod_ideal_power(&e, n);
        round_trip &= taylor_expand(&taylor_reconstruct(&t), n) == t;
    }
    let nodes = carrier.sigma_orbit_of_x(max.min(10) + 1);
    let xt = PPElement::xtilde(&carrier);
    for (n, node) in nodes.iter().enumerate() {
        let factor = &xt - &PPElement::from_algebra(&carrier, node).expect("reduced node");
        chain &= xi_twisted_power(&carrier, n + 1) == &xi_twisted_power(&carrier, n) * &factor;
        chain &= reduce_mod_ideal_power(&xi_twisted_power(&carrier, n + 2), n).is_zero();
    }
    vec![
        (format!("taylor.round-trip.{label}"), round_trip),
        (format!("ideal.chain.{label}"), chain),
    ]
}

fn gauss_binomial_check(max: usize) -> (String, bool) {
    let carrier = AlgebraCarrier::plain(TwistSpec::quantum());
    let table = QBinomTable::new(max as u32);
    let xt = PPElement::xtilde(&carrier);
    let mut power = PPElement::one(&carrier);
    let mut ok = true;
    for big_n in 0..=max {
        let t = taylor_expand(&power, big_n);
        for (k, c) in t.coeffs().iter().enumerate() {
            let expected = AlgebraElement::monomial(table.get(big_n as u32, k as i64), (big_n - k) as i64);
            ok &= *c == expected;
        }
        power = &power * &xt;
    }
    ("gauss-binomial".into(), ok)
}

fn inversion_checks(max: usize) -> Vec<(String, bool)> {
    let mut out = Vec::new();
    for (label, twist) in [("q-generic", TwistSpec::quantum()), ("q-2", settings()[2].1.clone())] {
        let loc = AlgebraCarrier::plain(twist).make_localization(&[AlgebraElement::x()]).expect("h = 0");
        let xt = PPElement::xtilde(&loc);
        let mut inverse = true;
        let mut unit_product = true;
        for n in 0..=max.min(10) {
            inverse &= invert_xtilde(&loc, n)
                .map(|w| reduce_mod_ideal_power(&(&xt * &w.inverse), n).is_one())
                .unwrap_or(false);
            let expected_q = loc.twist().q().pow((n * (n + 1) / 2) as i64).expect("q is a unit");
            unit_product &= loc.twisted_power(&AlgebraElement::x(), n + 1)
                == AlgebraElement::monomial(expected_q, n as i64 + 1);
        }
        out.push((format!("xt-inverse.{label}"), inverse));
        out.push((format!("unit-product.{label}"), unit_product));
    }
    out
}

fn base_change_checks(max: usize, seed: u64) -> Vec<(String, bool)> {
    let quantum = TwistSpec::quantum();
    let mut quotient = true;
    for m in 1..=4 {
        for n in 0..=max.min(4) {
            quotient &= verify_quotient_base_change(&quantum, &AlgebraElement::x_pow(m), n)
                .map(|r| r.is_success())
                .unwrap_or(false);
        }
    }
    let x_minus_one = &AlgebraElement::x() - &AlgebraElement::one();
    let rejects = matches!(
        AlgebraCarrier::plain(quantum.clone()).make_quotient(&x_minus_one),
        Err(Error::NotSigmaStable(_))
    );
    let mut out = vec![
        ("quotient.base-change".to_owned(), quotient),
        ("quotient.rejects-unstable".to_owned(), rejects),
    ];
    for (label, twist) in [("q-generic", quantum), ("q-2", settings()[2].1.clone())] {
        let ok = (0..=max.min(4)).all(|n| {
            verify_localization_base_change(&twist, n, 10, seed)
                .map(|r| r.is_success())
                .unwrap_or(false)
        });
        out.push((format!("localization.base-change.{label}"), ok));
    }
    let shifted = TwistSpec::new(QScalar::q(), QScalar::one()).expect("q is nonzero");
    let rejects = matches!(
        AlgebraCarrier::plain(shifted).make_localization(&[AlgebraElement::x()]),
        Err(Error::SigmaNotUnit(_))
    );
    out.push(("localization.rejects-shift".into(), rejects));
    out
}

fn round_trip_check(seed: u64) -> (String, bool) {
    let mut ok = true;
    for (_, twist) in settings() {
        let carrier = AlgebraCarrier::plain(twist);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        for _ in 0..20 {
            let e = sample_pp_element(&mut rng, &carrier, 0..=3, 3).expect("polynomial sample");
            let printed = e.to_string();
            ok &= parse_pp(&printed, &carrier).is_ok_and(|back| back.to_string() == printed);
        }
    }
    ("expr.round-trip".into(), ok)
}

/// Runs every invariant check with sizes capped by `max`.
pub fn run_battery(max: usize, seed: u64) -> BatteryResult {
    type Job = Box<dyn Fn() -> Vec<(String, bool)> + Send + Sync>;
    let mut jobs: Vec<Job> = vec![
        Box::new(move || qbinom_checks(max)),
        Box::new(move || vec![gauss_binomial_check(max)]),
        Box::new(move || inversion_checks(max)),
        Box::new(move || base_change_checks(max, seed)),
        Box::new(move || vec![round_trip_check(seed)]),
    ];
    for (label, twist) in settings() {
        let t = twist.clone();
        jobs.push(Box::new(move || twisted_power_checks(label, &t, max, seed)));
        jobs.push(Box::new(move || taylor_checks(label, &twist, max, seed)));
    }
    let checks = jobs.par_iter().flat_map_iter(|job| job()).collect();
    BatteryResult { max, checks }
}
