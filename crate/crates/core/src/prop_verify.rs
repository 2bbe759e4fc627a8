//! Executable base change for truncated principal parts.
//!
//! For a twisted quotient `B = A/(g)` the induced map `P_{A,(n)} -> P_{B,(n)}`
//! is checked to be a sigma-compatible surjection with the expected kernel.
//! For the twisted localization `B = R[x, 1/x]` the check is that
//! `B (x)_A P_{A,(n)}` already is `P_{B,(n)}`: the `xi` basis survives and
//! `xt` has an explicit inverse, so every denominator from the monoid
//! generated by `x` and `xt` can be cleared inside it.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::principal_parts::{
    reduce_mod_ideal_power, taylor_expand, taylor_reconstruct, verify_product_identity,
    xi_twisted_power, PPElement,
};
use crate::qcoeff::QScalar;
use crate::twisted_ring::{AlgebraCarrier, AlgebraElement, CarrierKind, TwistSpec};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseChangeCase {
    Quotient,
    Localization,
}

/// Outcome of one base-change verification run.
#[derive(Clone, Debug)]
pub struct BaseChangeReport {
    pub case: BaseChangeCase,
    pub order: usize,
    pub checks: BTreeMap<String, bool>,
    pub witness: Option<PPElement>,
    pub seed: u64,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    case: BaseChangeCase,
    order: usize,
    checks: &'a BTreeMap<String, bool>,
    witness: Option<String>,
    seed: u64,
}

impl BaseChangeReport {
    fn new(case: BaseChangeCase, order: usize, seed: u64) -> Self {
        BaseChangeReport {
            case,
            order,
            checks: BTreeMap::new(),
            witness: None,
            seed,
        }
    }

    fn record(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_owned(), ok);
    }

    pub fn is_success(&self) -> bool {
        !self.checks.is_empty() && self.checks.values().all(|&ok| ok)
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.get(name).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ReportJson {
            case: self.case,
            order: self.order,
            checks: &self.checks,
            witness: self.witness.as_ref().map(ToString::to_string),
            seed: self.seed,
        })
        .expect("plain data serializes")
    }
}

/// The multiplicative monoid `S'` of `P_A` generated by each `s` in `S` and
/// its copy `s~` on the `xt` side.
#[derive(Clone, Debug)]
pub struct MonoidSPrime {
    generators: Vec<PPElement>,
}

impl MonoidSPrime {
    /// Builds `S'` from the generators of a localization carrier.
    pub fn for_localization(carrier: &AlgebraCarrier) -> Result<Self> {
        let CarrierKind::Localization { generators } = carrier.kind() else {
            return Err(Error::Precondition {
                operation: "MonoidSPrime::for_localization",
                requirement: "a localization carrier",
            });
        };
        let mut out = Vec::with_capacity(2 * generators.len());
        for s in generators {
            out.push(PPElement::from_algebra(carrier, s)?);
        }
        for s in generators {
            // s~ = s(xt): the same polynomial with x replaced by xt
            let (k, c) = s.as_monomial().expect("localization generators are monomials");
            let coeff = AlgebraElement::constant(c.clone());
            out.push(PPElement::monomial(carrier, &coeff, k as usize)?);
        }
        Ok(MonoidSPrime { generators: out })
    }

    pub fn generators(&self) -> &[PPElement] {
        &self.generators
    }

    /// `prod_i generators[i]^exponents[i]`; missing exponents count as zero.
    pub fn element(&self, exponents: &[usize]) -> PPElement {
        let carrier = self.generators[0].carrier();
        self.generators
            .iter()
            .zip(exponents)
            .fold(PPElement::one(carrier), |acc, (g, &e)| &acc * &g.pow(e))
    }
}

/// An explicit inverse of `xt` in `B (x)_A P_{A,(n)}`.
///
/// `xi^(n+1) = xt * g(xt) + (-1)^(n+1) * P` with `P = prod_{i<=n} sigma^i(x)`,
/// so `cofactor = (-1)^n g` satisfies `cofactor * xt = P` modulo `I^(n+1)`
/// and `inverse = cofactor * P^-1`.
#[derive(Clone, Debug)]
pub struct XtildeInverse {
    pub order: usize,
    pub cofactor: PPElement,
    pub unit_product: AlgebraElement,
    pub inverse: PPElement,
}

impl XtildeInverse {
    /// `(cofactor) * (P)^-1`, with the cofactor's `xt` powers ascending.
    pub fn witness_string(&self) -> String {
        format!(
            "({}) * ({})^-1",
            self.cofactor.to_string_ascending(),
            self.unit_product
        )
    }
}

/// Inverse of `xt` modulo `I^(n+1)` in a carrier where `x` is a unit.
pub fn invert_xtilde(carrier: &AlgebraCarrier, n: usize) -> Result<XtildeInverse> {
    if !carrier.inverts_x() {
        return Err(Error::Precondition {
            operation: "invert_xtilde",
            requirement: "a localization inverting x",
        });
    }
    let xi = xi_twisted_power(carrier, n + 1);
    let unit_product = carrier.twisted_power(&AlgebraElement::x(), n + 1);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let constant_term = xi.coeff(0);
    if constant_term != unit_product.scale(&QScalar::from_int(-sign)) {
        return Err(Error::NotAUnit(unit_product.to_string()));
    }
    let g = PPElement::from_coeffs(carrier, &xi.coeffs()[1..])?;
    let cofactor = g.scale(&AlgebraElement::constant(QScalar::from_int(sign)));
    let product_inverse = unit_product
        .inverse()
        .ok_or_else(|| Error::NotAUnit(unit_product.to_string()))?;
    let product_inverse = carrier
        .reduce(&product_inverse)
        .map_err(|_| Error::NotAUnit(unit_product.to_string()))?;
    let inverse = reduce_mod_ideal_power(&cofactor.scale(&product_inverse), n);
    let check = reduce_mod_ideal_power(&(&PPElement::xtilde(carrier) * &inverse), n);
    if !check.is_one() {
        return Err(Error::NotAUnit(format!("xt at order {n}")));
    }
    Ok(XtildeInverse {
        order: n,
        cofactor,
        unit_product,
        inverse,
    })
}

/// `x^j * xt^k` for `j` in `x_exps` and `k <= xt_max`.
fn monomial_span(
    carrier: &AlgebraCarrier,
    x_exps: RangeInclusive<i64>,
    xt_max: usize,
) -> Result<Vec<PPElement>> {
    let mut out = Vec::new();
    for k in 0..=xt_max {
        for j in x_exps.clone() {
            let coeff = AlgebraElement::x_pow(j).in_mode(carrier.mode());
            out.push(PPElement::monomial(carrier, &coeff, k)?);
        }
    }
    Ok(out)
}

fn is_unit_vector(coeffs: &[AlgebraElement], k: usize) -> bool {
    coeffs
        .iter()
        .enumerate()
        .all(|(i, c)| if i == k { c.is_one() } else { c.is_zero() })
}

/// Checks shared by both cases: the `xi` basis and the `sigma^i(I)` map to
/// their counterparts, the carrier map commutes with sigma, and `P_{B,(n)}`
/// is free on the `xi` basis.
fn record_common_checks(
    report: &mut BaseChangeReport,
    source: &AlgebraCarrier,
    target: &AlgebraCarrier,
    span: &[PPElement],
    n: usize,
) -> Result<()> {
    let mut basis_ok = true;
    for k in 0..=n + 1 {
        basis_ok &= xi_twisted_power(source, k).base_change(target)? == xi_twisted_power(target, k);
    }
    report.record("basis-maps-to-basis", basis_ok);

    let xi_source = xi_twisted_power(source, 1);
    let xi_target = xi_twisted_power(target, 1);
    let mut ideal_ok = verify_product_identity(target, n);
    for i in 0..=n {
        ideal_ok &= xi_source.sigma_pow(i).base_change(target)? == xi_target.sigma_pow(i);
    }
    report.record("ideal-image", ideal_ok);

    let mut sigma_ok = true;
    for e in span {
        sigma_ok &= e.sigma().base_change(target)? == e.base_change(target)?.sigma();
    }
    report.record("commutes-with-sigma", sigma_ok);

    let free_ok = (0..=n).all(|k| {
        let t = taylor_expand(&xi_twisted_power(target, k), n);
        is_unit_vector(t.coeffs(), k)
    });
    report.record("free-rank", free_ok);
    Ok(())
}

/// Base change along the twisted quotient `A -> A/(g)`.
pub fn verify_quotient_base_change(
    twist: &TwistSpec,
    g: &AlgebraElement,
    n: usize,
) -> Result<BaseChangeReport> {
    let source = AlgebraCarrier::plain(twist.clone());
    let target = source.make_quotient(g)?;
    let modulus = target.modulus().expect("quotient carrier").clone();
    let deg_g = modulus.degree().expect("nonconstant modulus");
    let mut report = BaseChangeReport::new(BaseChangeCase::Quotient, n, DEFAULT_SEED);

    let x_max = (2 * n as i64).max(deg_g);
    let span = monomial_span(&source, 0..=x_max, 2 * n)?;
    record_common_checks(&mut report, &source, &target, &span, n)?;

    // The map on truncations is well defined: reducing before or after
    // the carrier map agrees.
    let mut well_defined = true;
    for e in &span {
        let before = reduce_mod_ideal_power(e, n).base_change(&target)?;
        let after = reduce_mod_ideal_power(&e.base_change(&target)?, n);
        well_defined &= before == after;
    }
    report.record("well-defined", well_defined);

    // Every reduced element of P_{B,(n)} is the image of its canonical lift,
    // on both the monomial basis and the xi basis over R.
    let mut surjective = true;
    for k in 0..=n {
        let xi_b = xi_twisted_power(&target, k);
        let xi_a = xi_twisted_power(&source, k);
        for j in 0..deg_g {
            let xj = AlgebraElement::x_pow(j).in_mode(target.mode());
            let element = PPElement::monomial(&target, &xj, k)?;
            let lift = PPElement::monomial(&source, &xj, k)?;
            surjective &= reduce_mod_ideal_power(&lift.base_change(&target)?, n) == element;

            let element = reduce_mod_ideal_power(&xi_b.scale(&xj), n);
            let lift = xi_a.scale(&xj);
            surjective &= reduce_mod_ideal_power(&lift.base_change(&target)?, n) == element;
        }
    }
    report.record("surjective", surjective);

    // Kernel: e maps to zero in P_{B,(n)} exactly when e = xi^(n+1) Q + g T,
    // with Q and T recovered by division and the identity checked exactly.
    let xi_next = xi_twisted_power(&source, n + 1);
    let g_pp = PPElement::from_algebra(&source, &modulus)?;
    let mut kernel_ok = true;
    let mut candidates = span.clone();
    candidates.extend(span.iter().map(|e| &g_pp * e));
    candidates.extend(span.iter().take(2 * n + 2).map(|e| &xi_next * e));
    for e in &candidates {
        let (quot, rem) = e.div_rem_monic(&xi_next);
        let maps_to_zero = rem.base_change(&target)?.is_zero();
        let mut t_coeffs = Vec::with_capacity(rem.coeffs().len());
        let mut divisible = true;
        for c in rem.coeffs() {
            let (t, r) = c.div_rem_monic(&modulus);
            divisible &= r.is_zero();
            t_coeffs.push(t);
        }
        if maps_to_zero != divisible {
            kernel_ok = false;
            continue;
        }
        if divisible {
            let t = PPElement::from_coeffs(&source, &t_coeffs)?;
            kernel_ok &= &(&xi_next * &quot) + &(&g_pp * &t) == *e;
        } else {
            kernel_ok &= &(&xi_next * &quot) + &rem == *e;
        }
    }
    report.record("kernel", kernel_ok);
    Ok(report)
}

/// A random element of `B` with exponents in `x_exps` and small integer
/// coefficients; each exponent is present with probability 1/2.
pub fn sample_algebra_element<R: Rng>(
    rng: &mut R,
    carrier: &AlgebraCarrier,
    x_exps: RangeInclusive<i64>,
) -> AlgebraElement {
    let mut terms = Vec::new();
    for j in x_exps {
        if rng.gen_bool(0.5) {
            terms.push((j, QScalar::from_int(rng.gen_range(-3..=3))));
        }
    }
    AlgebraElement::from_terms(terms).in_mode(carrier.mode())
}

/// A random element of `P_B` with `xt`-degree at most `xt_max`.
pub fn sample_pp_element<R: Rng>(
    rng: &mut R,
    carrier: &AlgebraCarrier,
    x_exps: RangeInclusive<i64>,
    xt_max: usize,
) -> Result<PPElement> {
    let coeffs: Vec<AlgebraElement> = (0..=xt_max)
        .map(|_| sample_algebra_element(rng, carrier, x_exps.clone()))
        .collect();
    PPElement::from_coeffs(carrier, &coeffs)
}

/// Base change along the twisted localization `A -> R[x, 1/x]`.
///
/// `sample_count` random elements with `xt`-degree at most `2n` and
/// `x`-exponents in `[-n, 2n]` drive the randomized checks.
pub fn verify_localization_base_change(
    twist: &TwistSpec,
    n: usize,
    sample_count: usize,
    seed: u64,
) -> Result<BaseChangeReport> {
    let source = AlgebraCarrier::plain(twist.clone());
    let target = source.make_localization(&[AlgebraElement::x()])?;
    let mut report = BaseChangeReport::new(BaseChangeCase::Localization, n, seed);

    let span = monomial_span(&source, 0..=2 * n as i64, 2 * n)?;
    record_common_checks(&mut report, &source, &target, &span, n)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nn = n as i64;
    let samples = (0..sample_count)
        .map(|_| sample_pp_element(&mut rng, &target, -nn..=2 * nn, 2 * n))
        .collect::<Result<Vec<_>>>()?;

    // I_B^(k) is generated by the image of xi^(k): multiples of xi^(k) have
    // vanishing Taylor coefficients below k.
    let mut generated = true;
    for k in 0..=n + 1 {
        let xi_k = xi_twisted_power(&target, k);
        for s in &samples {
            let t = taylor_expand(&(&xi_k * s), n);
            generated &= t.coeffs().iter().take(k).all(AlgebraElement::is_zero);
        }
    }
    report.record("ideal-generated", generated);

    let witness = match invert_xtilde(&target, n) {
        Ok(w) => w,
        Err(_) => {
            report.record("unit-witness", false);
            return Ok(report);
        }
    };
    let xt = PPElement::xtilde(&target);
    let u = &witness.inverse;
    report.record(
        "unit-witness",
        reduce_mod_ideal_power(&(&xt * u), n).is_one()
            && reduce_mod_ideal_power(&(u * &xt), n).is_one(),
    );

    // Multiplication by xt is a bijection on reduced forms.
    let mut bijective = true;
    for s in &samples {
        let r = reduce_mod_ideal_power(s, n);
        let there = reduce_mod_ideal_power(&(&xt * &r), n);
        let back = reduce_mod_ideal_power(&(u * &there), n);
        let pre = reduce_mod_ideal_power(&(u * &r), n);
        let onto = reduce_mod_ideal_power(&(&xt * &pre), n);
        bijective &= back == r && onto == r;
        bijective &= r.degree().map_or(true, |d| d <= n);
        let t = taylor_expand(&r, n);
        bijective &= taylor_reconstruct(&t) == r;
    }
    report.record("bijective", bijective);

    // Every S'-denominator x^a xt^b clears inside B (x)_A P_{A,(n)}.
    let monoid = MonoidSPrime::for_localization(&target)?;
    let mut cleared = true;
    for s in &samples {
        let a = rng.gen_range(0..=n + 1);
        let b = rng.gen_range(0..=n + 1);
        let denominator = monoid.element(&[a, b]);
        let x_inv = AlgebraElement::x_pow(-(a as i64)).in_mode(target.mode());
        let fraction = reduce_mod_ideal_power(&(&s.scale(&x_inv) * &u.pow(b)), n);
        let restored = reduce_mod_ideal_power(&(&denominator * &fraction), n);
        cleared &= restored == reduce_mod_ideal_power(s, n);
    }
    report.record("s-prime-denominators", cleared);

    report.witness = Some(witness.inverse);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn rat(p: i64) -> BigRational {
        BigRational::from_integer(p.into())
    }

    fn localization(twist: TwistSpec) -> AlgebraCarrier {
        AlgebraCarrier::plain(twist)
            .make_localization(&[AlgebraElement::x()])
            .unwrap()
    }

    #[test]
    fn inverse_at_order_zero_is_x_inverse() {
        let loc = localization(TwistSpec::quantum());
        let w = invert_xtilde(&loc, 0).unwrap();
        assert!(w.cofactor.is_one());
        assert_eq!(w.unit_product, AlgebraElement::x());
        assert_eq!(
            w.inverse,
            PPElement::from_algebra(&loc, &AlgebraElement::x_pow(-1)).unwrap()
        );
    }

    #[test]
    fn inverse_at_order_one() {
        let loc = localization(TwistSpec::quantum());
        let w = invert_xtilde(&loc, 1).unwrap();
        assert_eq!(w.witness_string(), "((1+q)*x - xt) * (q*x^2)^-1");
        // xt ((1+q)x - xt) = q x^2 modulo (xt - x)(xt - qx)
        let xt = PPElement::xtilde(&loc);
        let lhs = reduce_mod_ideal_power(&(&xt * &w.cofactor), 1);
        let qx2 = AlgebraElement::monomial(QScalar::q(), 2);
        assert_eq!(lhs, PPElement::from_algebra(&loc, &qx2).unwrap());
    }

    #[test]
    fn inverse_requires_localization() {
        let plain = AlgebraCarrier::plain(TwistSpec::quantum());
        assert!(matches!(
            invert_xtilde(&plain, 1),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn quotient_examples() {
        let q = TwistSpec::quantum();
        let report = verify_quotient_base_change(&q, &AlgebraElement::x_pow(3), 2).unwrap();
        assert!(report.is_success(), "{:?}", report.checks);
        let report = verify_quotient_base_change(&q, &AlgebraElement::x(), 3).unwrap();
        assert!(report.is_success(), "{:?}", report.checks);
        let x_minus_one = &AlgebraElement::x() - &AlgebraElement::one();
        assert!(matches!(
            verify_quotient_base_change(&q, &x_minus_one, 1),
            Err(Error::NotSigmaStable(_))
        ));
    }

    #[test]
    fn quotient_rank_over_b() {
        let q = TwistSpec::quantum();
        let b = AlgebraCarrier::plain(q).make_quotient(&AlgebraElement::x_pow(3)).unwrap();
        let xt = PPElement::xtilde(&b);
        for k in 0..6 {
            let t = taylor_expand(&xt.pow(k), 2);
            assert_eq!(t.coeffs().len(), 3);
        }
    }

    #[test]
    fn localization_examples() {
        let report = verify_localization_base_change(&TwistSpec::quantum(), 0, 5, DEFAULT_SEED).unwrap();
        assert!(report.is_success(), "{:?}", report.checks);
        let report = verify_localization_base_change(&TwistSpec::quantum(), 1, 5, DEFAULT_SEED).unwrap();
        assert!(report.is_success(), "{:?}", report.checks);
        let loc = localization(TwistSpec::quantum());
        assert_eq!(report.witness, Some(invert_xtilde(&loc, 1).unwrap().inverse));
    }

    #[test]
    fn localization_rejects_shift() {
        let twist = TwistSpec::new(QScalar::q(), QScalar::from_int(1)).unwrap();
        assert!(matches!(
            verify_localization_base_change(&twist, 1, 3, DEFAULT_SEED),
            Err(Error::SigmaNotUnit(_))
        ));
    }

    #[test]
    fn report_json_shape() {
        let twist = TwistSpec::with_parameters(Some(rat(2)), rat(0)).unwrap();
        let report = verify_quotient_base_change(&twist, &AlgebraElement::x_pow(2), 1).unwrap();
        let json = report.to_json();
        assert!(json.starts_with(r#"{"case":"quotient","order":1,"checks":{"basis-maps-to-basis":true,"#));
        assert!(json.ends_with(r#""witness":null,"seed":42}"#));
    }

    #[test]
    fn monoid_generators() {
        let loc = localization(TwistSpec::quantum());
        let monoid = MonoidSPrime::for_localization(&loc).unwrap();
        assert_eq!(monoid.generators().len(), 2);
        let e = monoid.element(&[2, 1]);
        let expected = PPElement::monomial(&loc, &AlgebraElement::x_pow(2), 1).unwrap();
        assert_eq!(e, expected);
    }
}
