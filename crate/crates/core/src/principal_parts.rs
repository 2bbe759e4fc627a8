//! Principal parts `P_A = A[xt]` of a twisted carrier, the twisted powers of
//! the diagonal ideal `I = (xt - x)`, and Taylor expansion in the truncations
//! `P_{A,(n)} = P_A / I^(n+1)`.
//!
//! The twist extends to `P_A` by fixing `xt` and acting on coefficients, so
//! `sigma^i(xt - x) = xt - sigma^i(x)` and `I^(k)` is principal with monic
//! generator `xi^(k) = (xt - x)(xt - sigma(x)) ... (xt - sigma^(k-1)(x))`.
//! The `xi^(k)`, `k <= n`, form a basis of `P_{A,(n)}` over `A`; Taylor
//! coefficients on that basis are computed by Newton-style successive
//! division at the nodes `x, sigma(x), sigma^2(x), ...`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::render::{power_of, render_terms};
use crate::twisted_ring::{AlgebraCarrier, AlgebraElement};

/// Polynomial in `xt` with coefficients reduced in a carrier.
#[derive(Clone, Debug)]
pub struct PPElement {
    coeffs: Vec<AlgebraElement>,
    carrier: AlgebraCarrier,
}

impl PPElement {
    pub fn zero(carrier: &AlgebraCarrier) -> Self {
        PPElement {
            coeffs: Vec::new(),
            carrier: carrier.clone(),
        }
    }

    pub fn one(carrier: &AlgebraCarrier) -> Self {
        Self::constant(carrier, AlgebraElement::one())
    }

    pub fn xtilde(carrier: &AlgebraCarrier) -> Self {
        Self::from_reduced(carrier, vec![AlgebraElement::zero(), AlgebraElement::one()])
    }

    /// `a` viewed in `P_A` through the left structure `x -> x`. Reduces `a`.
    pub fn from_algebra(carrier: &AlgebraCarrier, a: &AlgebraElement) -> Result<Self> {
        Ok(Self::constant(carrier, carrier.reduce(a)?))
    }

    /// Coefficient `k` is the coefficient of `xt^k`. Reduces each coefficient.
    pub fn from_coeffs(carrier: &AlgebraCarrier, coeffs: &[AlgebraElement]) -> Result<Self> {
        let reduced = coeffs
            .iter()
            .map(|c| carrier.reduce(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_reduced(carrier, reduced))
    }

    /// `a * xt^k`. Reduces `a`.
    pub fn monomial(carrier: &AlgebraCarrier, a: &AlgebraElement, k: usize) -> Result<Self> {
        let mut coeffs = vec![AlgebraElement::zero(); k];
        coeffs.push(carrier.reduce(a)?);
        Ok(Self::from_reduced(carrier, coeffs))
    }

    fn constant(carrier: &AlgebraCarrier, a: AlgebraElement) -> Self {
        Self::from_reduced(carrier, vec![a])
    }

    pub(crate) fn from_reduced(carrier: &AlgebraCarrier, mut coeffs: Vec<AlgebraElement>) -> Self {
        while coeffs.last().is_some_and(AlgebraElement::is_zero) {
            coeffs.pop();
        }
        PPElement {
            coeffs,
            carrier: carrier.clone(),
        }
    }

    pub fn carrier(&self) -> &AlgebraCarrier {
        &self.carrier
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> AlgebraElement {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree in `xt`; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, a: &AlgebraElement) -> PPElement {
        let coeffs = self.coeffs.iter().map(|c| self.carrier.mul(c, a)).collect();
        Self::from_reduced(&self.carrier, coeffs)
    }

    pub fn pow(&self, e: usize) -> PPElement {
        (0..e).fold(Self::one(&self.carrier), |acc, _| &acc * self)
    }

    /// Applies sigma to the coefficients; `xt` is fixed.
    pub fn sigma(&self) -> PPElement {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| self.carrier.sigma_apply(c))
            .collect();
        Self::from_reduced(&self.carrier, coeffs)
    }

    pub fn sigma_pow(&self, m: usize) -> PPElement {
        (0..m).fold(self.clone(), |acc, _| acc.sigma())
    }

    /// Substitutes `xt := node`.
    pub fn eval_at(&self, node: &AlgebraElement) -> AlgebraElement {
        self.coeffs
            .iter()
            .rev()
            .fold(AlgebraElement::zero(), |acc, c| &self.carrier.mul(&acc, node) + c)
    }

    /// Synthetic division by `xt - node`: `self = (xt - node) * quotient + remainder`.
    pub fn div_linear(&self, node: &AlgebraElement) -> (PPElement, AlgebraElement) {
        let Some(deg) = self.degree() else {
            return (self.clone(), AlgebraElement::zero());
        };
        let mut quotient = vec![AlgebraElement::zero(); deg];
        let mut carry = AlgebraElement::zero();
        for k in (0..=deg).rev() {
            carry = &self.coeffs[k] + &self.carrier.mul(&carry, node);
            if k > 0 {
                quotient[k - 1] = carry.clone();
            }
        }
        (Self::from_reduced(&self.carrier, quotient), carry)
    }

    /// Division by a monic divisor in `xt`.
    pub fn div_rem_monic(&self, divisor: &PPElement) -> (PPElement, PPElement) {
        let dd = divisor.degree().expect("nonzero divisor");
        debug_assert!(divisor.coeffs[dd].is_one(), "divisor must be monic");
        let Some(ds) = self.degree().filter(|&d| d >= dd) else {
            return (Self::zero(&self.carrier), self.clone());
        };
        let mut rem = self.coeffs.clone();
        let mut quot = vec![AlgebraElement::zero(); ds - dd + 1];
        for d in (dd..=ds).rev() {
            let c = std::mem::take(&mut rem[d]);
            if c.is_zero() {
                continue;
            }
            for (k, dk) in divisor.coeffs[..dd].iter().enumerate() {
                if dk.is_zero() {
                    continue;
                }
                let idx = d - dd + k;
                rem[idx] = &rem[idx] - &self.carrier.mul(&c, dk);
            }
            quot[d - dd] = c;
        }
        rem.truncate(dd);
        (
            Self::from_reduced(&self.carrier, quot),
            Self::from_reduced(&self.carrier, rem),
        )
    }

    /// Image under the carrier map to `target` (a quotient or localization of
    /// this carrier), reducing every coefficient there.
    pub fn base_change(&self, target: &AlgebraCarrier) -> Result<PPElement> {
        Self::from_coeffs(target, &self.coeffs)
    }

    /// Text form with `xt` powers ascending.
    pub fn to_string_ascending(&self) -> String {
        self.render(false)
    }

    fn render(&self, descending: bool) -> String {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            for (j, s) in c.terms().rev() {
                terms.push((k, j, s));
            }
        }
        if descending {
            terms.sort_by(|a, b| (b.0, b.1).cmp(&(a.0, a.1)));
        } else {
            terms.sort_by(|a, b| (a.0, b.1).cmp(&(b.0, a.1)));
        }
        render_terms(terms.into_iter().map(|(k, j, s)| {
            let monomial = [power_of("x", j), power_of("xt", k as i64)]
                .into_iter()
                .filter(|p| !p.is_empty())
                .collect::<Vec<_>>()
                .join("*");
            (s, monomial)
        }))
    }
}

impl fmt::Display for PPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

impl PartialEq for PPElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for PPElement {}

fn zip_coeffs(
    a: &PPElement,
    b: &PPElement,
    op: impl Fn(&AlgebraElement, &AlgebraElement) -> AlgebraElement,
) -> PPElement {
    let len = a.coeffs.len().max(b.coeffs.len());
    let zero = AlgebraElement::zero();
    let coeffs = (0..len)
        .map(|k| op(a.coeffs.get(k).unwrap_or(&zero), b.coeffs.get(k).unwrap_or(&zero)))
        .collect();
    PPElement::from_reduced(&a.carrier, coeffs)
}

impl Add for &PPElement {
    type Output = PPElement;
    fn add(self, rhs: &PPElement) -> PPElement {
        zip_coeffs(self, rhs, |a, b| a + b)
    }
}

impl Sub for &PPElement {
    type Output = PPElement;
    fn sub(self, rhs: &PPElement) -> PPElement {
        zip_coeffs(self, rhs, |a, b| a - b)
    }
}

impl Neg for &PPElement {
    type Output = PPElement;
    fn neg(self) -> PPElement {
        PPElement::from_reduced(&self.carrier, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PPElement {
    type Output = PPElement;
    fn mul(self, rhs: &PPElement) -> PPElement {
        if self.is_zero() || rhs.is_zero() {
            return PPElement::zero(&self.carrier);
        }
        let mut out = vec![AlgebraElement::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        let coeffs = out.into_iter().map(|c| self.carrier.reduce_known(c)).collect();
        PPElement::from_reduced(&self.carrier, coeffs)
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for PPElement {
            type Output = PPElement;
            fn $method(self, rhs: PPElement) -> PPElement {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// `xi^(k) = prod_{i<k} (xt - sigma^i(x))`.
pub fn xi_twisted_power(carrier: &AlgebraCarrier, k: usize) -> PPElement {
    let xt = PPElement::xtilde(carrier);
    carrier
        .sigma_orbit_of_x(k)
        .into_iter()
        .fold(PPElement::one(carrier), |acc, node| {
            &acc * &(&xt - &PPElement::constant(carrier, node))
        })
}

/// The ideal `I^(n) = prod_{i<n} sigma^i(I)` with its monic generator.
#[derive(Clone, Debug)]
pub struct IdealTwistedPower {
    order: usize,
    generator: PPElement,
}

impl IdealTwistedPower {
    pub fn new(carrier: &AlgebraCarrier, order: usize) -> Self {
        IdealTwistedPower {
            order,
            generator: xi_twisted_power(carrier, order),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generator(&self) -> &PPElement {
        &self.generator
    }

    pub fn contains(&self, e: &PPElement) -> bool {
        self.reduce(e).is_zero()
    }

    pub fn reduce(&self, e: &PPElement) -> PPElement {
        e.div_rem_monic(&self.generator).1
    }
}

/// Canonical form of `e` in `P_{A,(n)}`: the remainder mod `xi^(n+1)`.
pub fn reduce_mod_ideal_power(e: &PPElement, n: usize) -> PPElement {
    IdealTwistedPower::new(e.carrier(), n + 1).reduce(e)
}

/// Coordinates of a class in `P_{A,(n)}` on the basis `xi^(0), ..., xi^(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaylorExpansion {
    order: usize,
    coeffs: Vec<AlgebraElement>,
    carrier: AlgebraCarrier,
}

#[derive(Serialize)]
struct TaylorJson<'a> {
    order: usize,
    coeffs: &'a [String],
}

impl TaylorExpansion {
    /// `coeffs` must have exactly `order + 1` entries.
    pub fn new(carrier: &AlgebraCarrier, order: usize, coeffs: &[AlgebraElement]) -> Result<Self> {
        if coeffs.len() != order + 1 {
            return Err(Error::Precondition {
                operation: "TaylorExpansion::new",
                requirement: "exactly order + 1 coefficients",
            });
        }
        let coeffs = coeffs
            .iter()
            .map(|c| carrier.reduce(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(TaylorExpansion {
            order,
            coeffs,
            carrier: carrier.clone(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn carrier(&self) -> &AlgebraCarrier {
        &self.carrier
    }

    pub fn to_json(&self) -> String {
        let coeffs: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        serde_json::to_string(&TaylorJson {
            order: self.order,
            coeffs: &coeffs,
        })
        .expect("plain data serializes")
    }
}

/// Newton-style expansion: `c_k` is the value at the node `sigma^k(x)` of the
/// running quotient, which is then divided by `xt - sigma^k(x)`.
pub fn taylor_expand(e: &PPElement, n: usize) -> TaylorExpansion {
    let carrier = e.carrier();
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut rest = e.clone();
    for node in carrier.sigma_orbit_of_x(n + 1) {
        let (quotient, value) = rest.div_linear(&node);
        coeffs.push(value);
        rest = quotient;
    }
    TaylorExpansion {
        order: n,
        coeffs,
        carrier: carrier.clone(),
    }
}

/// `sum_k c_k xi^(k)`, reduced at the expansion's order.
pub fn taylor_reconstruct(t: &TaylorExpansion) -> PPElement {
    let carrier = &t.carrier;
    let xt = PPElement::xtilde(carrier);
    let mut basis = PPElement::one(carrier);
    let mut acc = PPElement::zero(carrier);
    for (k, (c, node)) in t
        .coeffs
        .iter()
        .zip(carrier.sigma_orbit_of_x(t.order + 1))
        .enumerate()
    {
        acc = &acc + &basis.scale(c);
        if k < t.order {
            basis = &basis * &(&xt - &PPElement::constant(carrier, node));
        }
    }
    reduce_mod_ideal_power(&acc, t.order)
}

/// Checks `prod_{i<=n} (xt - sigma^i(x)) == prod_{i<=n} sigma^i(xt - x)` by
/// expanding both sides.
pub fn verify_product_identity(carrier: &AlgebraCarrier, n: usize) -> bool {
    let xi = &PPElement::xtilde(carrier) - &PPElement::constant(carrier, carrier.sigma_orbit_of_x(1).remove(0));
    let mut rhs = PPElement::one(carrier);
    let mut factor = xi;
    for _ in 0..=n {
        rhs = &rhs * &factor;
        factor = factor.sigma();
    }
    xi_twisted_power(carrier, n + 1) == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcoeff::QScalar;
    use crate::twisted_ring::TwistSpec;
    use num_rational::BigRational;

    fn quantum() -> AlgebraCarrier {
        AlgebraCarrier::plain(TwistSpec::quantum())
    }

    fn shift() -> AlgebraCarrier {
        let one = BigRational::from_integer(1.into());
        AlgebraCarrier::plain(TwistSpec::with_parameters(Some(one.clone()), one).unwrap())
    }

    fn scalar_x(c: QScalar, k: i64) -> AlgebraElement {
        AlgebraElement::monomial(c, k)
    }

    fn int_poly(coeffs: &[i64]) -> AlgebraElement {
        AlgebraElement::from_coeffs(coeffs.iter().map(|&c| QScalar::from_int(c)).collect())
    }

    fn pp(carrier: &AlgebraCarrier, coeffs: Vec<AlgebraElement>) -> PPElement {
        PPElement::from_coeffs(carrier, &coeffs).unwrap()
    }

    #[test]
    fn xi_examples() {
        let c = quantum();
        assert!(xi_twisted_power(&c, 0).is_one());
        // (xt - x)(xt - qx) = xt^2 - (1+q) x xt + q x^2
        let expected = pp(
            &c,
            vec![
                scalar_x(QScalar::q(), 2),
                scalar_x(-QScalar::from_int_coeffs(&[1, 1]), 1),
                AlgebraElement::one(),
            ],
        );
        let xi2 = xi_twisted_power(&c, 2);
        assert_eq!(xi2, expected);
        assert_eq!(xi2.to_string(), "xt^2 - (1+q)*x*xt + q*x^2");

        // (xt - x)(xt - x - 1) = xt^2 - (2x+1) xt + x(x+1)
        let s = shift();
        let expected = pp(&s, vec![int_poly(&[0, 1, 1]), int_poly(&[-1, -2]), AlgebraElement::one()]);
        assert_eq!(xi_twisted_power(&s, 2), expected);
    }

    #[test]
    fn reduction_examples() {
        let c = quantum();
        for n in 0..4 {
            assert!(reduce_mod_ideal_power(&xi_twisted_power(&c, n + 1), n).is_zero());
        }
        let xt = PPElement::xtilde(&c);
        assert_eq!(
            reduce_mod_ideal_power(&xt, 0),
            PPElement::from_algebra(&c, &AlgebraElement::x()).unwrap()
        );
        // xt^2 mod (xt - x)(xt - qx) = (1+q) x xt - q x^2
        let expected = pp(
            &c,
            vec![
                scalar_x(-QScalar::q(), 2),
                scalar_x(QScalar::from_int_coeffs(&[1, 1]), 1),
            ],
        );
        assert_eq!(reduce_mod_ideal_power(&xt.pow(2), 1), expected);
    }

    #[test]
    fn taylor_examples() {
        let c = quantum();
        let xt = PPElement::xtilde(&c);
        let t = taylor_expand(&xt, 3);
        assert_eq!(t.coeffs(), &[AlgebraElement::x(), AlgebraElement::one(), AlgebraElement::zero(), AlgebraElement::zero()]);

        let t = taylor_expand(&xt.pow(2), 2);
        assert_eq!(
            t.coeffs(),
            &[
                AlgebraElement::x_pow(2),
                scalar_x(QScalar::from_int_coeffs(&[1, 1]), 1),
                AlgebraElement::one()
            ]
        );
        assert_eq!(taylor_reconstruct(&t), xt.pow(2));

        let constant = PPElement::from_algebra(&c, &int_poly(&[5])).unwrap();
        let t = taylor_expand(&constant, 2);
        assert_eq!(t.coeffs(), &[int_poly(&[5]), AlgebraElement::zero(), AlgebraElement::zero()]);
        assert_eq!(taylor_reconstruct(&t), constant);
    }

    #[test]
    fn reconstruct_examples() {
        let c = quantum();
        let t = TaylorExpansion::new(&c, 1, &[AlgebraElement::x(), AlgebraElement::one()]).unwrap();
        assert_eq!(taylor_reconstruct(&t), PPElement::xtilde(&c));
        let t = TaylorExpansion::new(&c, 0, &[int_poly(&[3])]).unwrap();
        assert_eq!(taylor_reconstruct(&t), PPElement::from_algebra(&c, &int_poly(&[3])).unwrap());
        assert!(TaylorExpansion::new(&c, 2, &[AlgebraElement::one()]).is_err());
    }

    #[test]
    fn product_identity_examples() {
        assert!(verify_product_identity(&quantum(), 0));
        assert!(verify_product_identity(&quantum(), 2));
        assert!(verify_product_identity(&shift(), 3));
    }

    #[test]
    fn div_linear_recovers_value() {
        let c = shift();
        let e = pp(&c, vec![int_poly(&[1, 2]), int_poly(&[0, 0, 1]), int_poly(&[3])]);
        let node = int_poly(&[1, 1]);
        let (quot, rem) = e.div_linear(&node);
        assert_eq!(rem, e.eval_at(&node));
        let rebuilt = &(&(&PPElement::xtilde(&c) - &PPElement::from_algebra(&c, &node).unwrap()) * &quot)
            + &PPElement::from_algebra(&c, &rem).unwrap();
        assert_eq!(rebuilt, e);
    }

    #[test]
    fn taylor_json_schema() {
        let c = quantum();
        let t = taylor_expand(&PPElement::xtilde(&c).pow(2), 2);
        assert_eq!(t.to_json(), r#"{"order":2,"coeffs":["x^2","(1+q)*x","1"]}"#);
    }

    #[test]
    fn ascending_rendering() {
        let c = quantum();
        let f = pp(
            &c,
            vec![scalar_x(QScalar::from_int_coeffs(&[1, 1]), 1), -AlgebraElement::one()],
        );
        assert_eq!(f.to_string_ascending(), "(1+q)*x - xt");
        assert_eq!(f.to_string(), "-xt + (1+q)*x");
    }
}
