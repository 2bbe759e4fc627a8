//! The twisted algebra `A = R[x]` over `R = Q[q, 1/q]`, with the endomorphism
//! `sigma(x) = q x + h`, and the carriers it can be replaced by: a twisted
//! quotient `A/(g)` or a twisted localization `S^-1 A`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::qcoeff::{QMode, QScalar};
use crate::render::{power_of, render_terms};

/// Laurent polynomial in `x` with [`QScalar`] coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<i64, QScalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(QScalar::one())
    }

    pub fn constant(c: QScalar) -> Self {
        Self::monomial(c, 0)
    }

    pub fn x() -> Self {
        Self::monomial(QScalar::one(), 1)
    }

    pub fn x_pow(k: i64) -> Self {
        Self::monomial(QScalar::one(), k)
    }

    pub fn monomial(c: QScalar, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        AlgebraElement { terms }
    }

    /// Sums `(exponent, coefficient)` pairs; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, QScalar)>>(terms: I) -> Self {
        let mut out = AlgebraElement::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    /// Polynomial with `coeffs[i]` the coefficient of `x^i`.
    pub fn from_coeffs(coeffs: Vec<QScalar>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(i, c)| (i as i64, c)))
    }

    fn add_term(&mut self, k: i64, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(slot) => {
                let sum = &*slot + c;
                if sum.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(QScalar::is_one)
    }

    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn low_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn is_polynomial(&self) -> bool {
        self.low_degree().map_or(true, |d| d >= 0)
    }

    pub fn coeff(&self, k: i64) -> QScalar {
        self.terms.get(&k).cloned().unwrap_or_else(QScalar::zero)
    }

    pub fn leading_coeff(&self) -> Option<&QScalar> {
        self.terms.values().next_back()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &QScalar)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `c x^k` with a single term.
    pub fn as_monomial(&self) -> Option<(i64, &QScalar)> {
        match self.terms.len() {
            1 => self.terms().next(),
            _ => None,
        }
    }

    /// Units of the Laurent ring are `c x^k` with `c` a scalar unit.
    pub fn inverse(&self) -> Option<AlgebraElement> {
        let (k, c) = self.as_monomial()?;
        Some(Self::monomial(c.inverse()?, -k))
    }

    pub fn scale(&self, c: &QScalar) -> AlgebraElement {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v * c)))
    }

    pub fn mul_x_pow(&self, e: i64) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(k, v)| (k + e, v.clone())).collect(),
        }
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, e: i64) -> Option<AlgebraElement> {
        let (mut base, mut e) = if e < 0 {
            (self.inverse()?, e.unsigned_abs())
        } else {
            (self.clone(), e as u64)
        };
        let mut acc = AlgebraElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }

    pub fn in_mode(&self, mode: &QMode) -> AlgebraElement {
        Self::from_terms(self.terms.iter().map(|(k, v)| (*k, v.in_mode(mode))))
    }

    /// Substitutes `x := image`. Negative exponents need `image` to be a unit.
    pub fn compose(&self, image: &AlgebraElement) -> Option<AlgebraElement> {
        let low = self.low_degree().unwrap_or(0);
        let mut acc = AlgebraElement::zero();
        // f = x^low * P(x): Horner on P, then multiply by image^low.
        for k in (low.min(0)..=self.degree().unwrap_or(0)).rev() {
            acc = &acc * image;
            if let Some(c) = self.terms.get(&k) {
                acc.add_term(0, c);
            }
        }
        if low < 0 {
            let inv = image.inverse()?.pow(-low)?;
            acc = &acc * &inv;
        }
        Some(acc)
    }

    /// Remainder of division by a monic polynomial.
    pub fn rem_monic(&self, g: &AlgebraElement) -> AlgebraElement {
        self.div_rem_monic(g).1
    }

    /// Division with remainder by a monic polynomial; both must be polynomials.
    pub fn div_rem_monic(&self, g: &AlgebraElement) -> (AlgebraElement, AlgebraElement) {
        debug_assert!(self.is_polynomial() && g.is_polynomial());
        debug_assert!(g.leading_coeff().is_some_and(QScalar::is_one));
        let dg = g.degree().expect("nonzero modulus");
        let Some(df) = self.degree().filter(|&d| d >= dg) else {
            return (AlgebraElement::zero(), self.clone());
        };
        let mut r: Vec<QScalar> = (0..=df).map(|k| self.coeff(k)).collect();
        let mut quot = AlgebraElement::zero();
        let lower: Vec<(i64, &QScalar)> = g.terms().filter(|(k, _)| *k < dg).collect();
        for d in (dg..=df).rev() {
            let c = std::mem::replace(&mut r[d as usize], QScalar::zero());
            if c.is_zero() {
                continue;
            }
            for (k, gk) in &lower {
                let idx = (d - dg + k) as usize;
                r[idx] = &r[idx] - &(&c * *gk);
            }
            quot.add_term(d - dg, &c);
        }
        r.truncate(dg as usize);
        (quot, Self::from_coeffs(r))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().rev().map(|(k, c)| (c, power_of("x", *k)));
        f.write_str(&render_terms(terms))
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, &-c);
        }
        out
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: AlgebraElement) -> AlgebraElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&AlgebraElement> for AlgebraElement {
            type Output = AlgebraElement;
            fn $method(self, rhs: &AlgebraElement) -> AlgebraElement {
                (&self).$method(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

/// The twist `sigma(x) = q x + h`, fixing scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistSpec {
    q: QScalar,
    h: QScalar,
    mode: QMode,
}

impl TwistSpec {
    pub fn new(q: QScalar, h: QScalar) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroTwist);
        }
        let mode = match (q.mode(), h.mode()) {
            (m @ QMode::Specialized(_), _) | (_, m @ QMode::Specialized(_)) => m.clone(),
            _ => QMode::Generic,
        };
        Ok(TwistSpec {
            q: q.in_mode(&mode),
            h: h.in_mode(&mode),
            mode,
        })
    }

    /// `sigma(x) = q x` with `q` the indeterminate.
    pub fn quantum() -> Self {
        Self::new(QScalar::q(), QScalar::zero()).expect("q is nonzero")
    }

    /// `q` is `q0` when given, the indeterminate otherwise; `h` is rational.
    pub fn with_parameters(q0: Option<BigRational>, h: BigRational) -> Result<Self> {
        let mode = match q0 {
            Some(q0) => QMode::specialized(q0)?,
            None => QMode::Generic,
        };
        Self::new(QScalar::q_in(&mode), QScalar::constant_in(h, &mode))
    }

    pub fn q(&self) -> &QScalar {
        &self.q
    }

    pub fn h(&self) -> &QScalar {
        &self.h
    }

    pub fn mode(&self) -> &QMode {
        &self.mode
    }

    /// `sigma(x)` as an element of `A`.
    pub fn image_of_x(&self) -> AlgebraElement {
        &AlgebraElement::monomial(self.q.clone(), 1) + &AlgebraElement::constant(self.h.clone())
    }

    /// Applies sigma to an element of `R[x, 1/x]`; `None` when a negative
    /// power of `x` would need `sigma(x)` to be a unit and it is not.
    pub fn apply(&self, f: &AlgebraElement) -> Option<AlgebraElement> {
        if self.h.is_zero() {
            let mut out = AlgebraElement::zero();
            for (k, c) in f.terms() {
                out.add_term(k, &(c * &self.q.pow(k)?));
            }
            return Some(out);
        }
        f.compose(&self.image_of_x())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CarrierKind {
    Plain,
    /// `A/(g)` with `g` monic and sigma-stable.
    Quotient { modulus: AlgebraElement },
    /// `S^-1 A` for monomial generators `S`.
    Localization { generators: Vec<AlgebraElement> },
}

#[derive(Debug, PartialEq, Eq)]
struct CarrierInner {
    kind: CarrierKind,
    twist: TwistSpec,
    inverts_x: bool,
}

/// A twisted algebra in which elements live and are reduced: `A` itself,
/// a twisted quotient, or a twisted localization. Cheap to clone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraCarrier {
    inner: Arc<CarrierInner>,
}

impl AlgebraCarrier {
    pub fn plain(twist: TwistSpec) -> Self {
        Self::from_parts(CarrierKind::Plain, twist, false)
    }

    fn from_parts(kind: CarrierKind, twist: TwistSpec, inverts_x: bool) -> Self {
        AlgebraCarrier {
            inner: Arc::new(CarrierInner {
                kind,
                twist,
                inverts_x,
            }),
        }
    }

    pub fn kind(&self) -> &CarrierKind {
        &self.inner.kind
    }

    pub fn twist(&self) -> &TwistSpec {
        &self.inner.twist
    }

    pub fn mode(&self) -> &QMode {
        self.inner.twist.mode()
    }

    pub fn is_plain(&self) -> bool {
        matches!(self.inner.kind, CarrierKind::Plain)
    }

    /// True when `x` is a unit in this carrier.
    pub fn inverts_x(&self) -> bool {
        self.inner.inverts_x
    }

    pub fn modulus(&self) -> Option<&AlgebraElement> {
        match &self.inner.kind {
            CarrierKind::Quotient { modulus } => Some(modulus),
            _ => None,
        }
    }

    /// Two carriers are equivalent when they present the same ring with the
    /// same twist, e.g. localizations at `{x}` and `{x^2}`.
    pub fn is_equivalent(&self, other: &AlgebraCarrier) -> bool {
        if self.twist() != other.twist() {
            return false;
        }
        match (self.kind(), other.kind()) {
            (CarrierKind::Localization { .. }, CarrierKind::Localization { .. })
            | (CarrierKind::Plain, CarrierKind::Localization { .. })
            | (CarrierKind::Localization { .. }, CarrierKind::Plain) => {
                self.inverts_x() == other.inverts_x()
            }
            (a, b) => a == b,
        }
    }

    /// Twisted quotient `A/(g)`. The base must be plain and `g` monic of
    /// degree at least one with `g | sigma(g)`.
    pub fn make_quotient(&self, g: &AlgebraElement) -> Result<AlgebraCarrier> {
        if !self.is_plain() {
            return Err(Error::Precondition {
                operation: "make_quotient",
                requirement: "a plain base carrier",
            });
        }
        let g = g.in_mode(self.mode());
        let monic = g.leading_coeff().is_some_and(QScalar::is_one);
        if !g.is_polynomial() || !monic || g.degree().unwrap_or(0) < 1 {
            return Err(Error::NotMonic(g.to_string()));
        }
        let image = self.twist().apply(&g).expect("polynomials always have an image");
        if !image.rem_monic(&g).is_zero() {
            return Err(Error::NotSigmaStable(g.to_string()));
        }
        Ok(Self::from_parts(
            CarrierKind::Quotient { modulus: g },
            self.twist().clone(),
            false,
        ))
    }

    /// Twisted localization `S^-1 A` for monomial `S`; each `sigma(s)` must
    /// become a unit.
    pub fn make_localization(&self, generators: &[AlgebraElement]) -> Result<AlgebraCarrier> {
        if !self.is_plain() {
            return Err(Error::Precondition {
                operation: "make_localization",
                requirement: "a plain base carrier",
            });
        }
        let generators: Vec<AlgebraElement> =
            generators.iter().map(|s| s.in_mode(self.mode())).collect();
        let mut inverts_x = false;
        for s in &generators {
            if s.is_zero() {
                return Err(Error::Precondition {
                    operation: "make_localization",
                    requirement: "nonzero generators",
                });
            }
            match s.as_monomial() {
                Some((k, c)) if k >= 0 && c.is_unit() => inverts_x |= k > 0,
                _ => return Err(Error::UnsupportedDenominator(s.to_string())),
            }
        }
        for s in &generators {
            let image = self.twist().apply(s).expect("polynomials always have an image");
            let unit = match image.as_monomial() {
                Some((k, c)) => c.is_unit() && (k == 0 || inverts_x),
                None => false,
            };
            if !unit {
                return Err(Error::SigmaNotUnit(s.to_string()));
            }
        }
        Ok(Self::from_parts(
            CarrierKind::Localization { generators },
            self.twist().clone(),
            inverts_x,
        ))
    }

    /// Canonical representative of `f` in this carrier.
    pub fn reduce(&self, f: &AlgebraElement) -> Result<AlgebraElement> {
        let f = match self.mode() {
            QMode::Generic => f.clone(),
            mode => f.in_mode(mode),
        };
        if !f.is_polynomial() && !self.inverts_x() {
            return Err(Error::NotInCarrier(f.to_string()));
        }
        Ok(match &self.inner.kind {
            CarrierKind::Quotient { modulus } => f.rem_monic(modulus),
            CarrierKind::Plain | CarrierKind::Localization { .. } => f,
        })
    }

    /// Product of two reduced elements, reduced.
    pub fn mul(&self, a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
        self.reduce_known(a * b)
    }

    /// Reduction of a value that is known to belong to the carrier.
    pub(crate) fn reduce_known(&self, f: AlgebraElement) -> AlgebraElement {
        match &self.inner.kind {
            CarrierKind::Quotient { modulus } => f.rem_monic(modulus),
            _ => f,
        }
    }

    /// `sigma(f)` for a reduced `f`, reduced.
    pub fn sigma_apply(&self, f: &AlgebraElement) -> AlgebraElement {
        let image = self
            .twist()
            .apply(f)
            .expect("sigma(x) is a unit wherever x is inverted");
        self.reduce_known(image)
    }

    /// `sigma^m(f)`.
    pub fn sigma_pow(&self, f: &AlgebraElement, m: usize) -> AlgebraElement {
        (0..m).fold(f.clone(), |acc, _| self.sigma_apply(&acc))
    }

    /// `sigma^i(x)` for `i = 0..count`, reduced.
    pub fn sigma_orbit_of_x(&self, count: usize) -> Vec<AlgebraElement> {
        let x = self.reduce_known(AlgebraElement::x().in_mode(self.mode()));
        let mut out = Vec::with_capacity(count);
        let mut cur = x;
        for _ in 0..count {
            let next = self.sigma_apply(&cur);
            out.push(cur);
            cur = next;
        }
        out
    }

    /// Twisted power `f^(n) = f sigma(f) ... sigma^(n-1)(f)`, with `f^(0) = 1`.
    pub fn twisted_power(&self, f: &AlgebraElement, n: usize) -> AlgebraElement {
        let mut acc = self.reduce_known(AlgebraElement::one().in_mode(self.mode()));
        let mut factor = f.clone();
        for i in 0..n {
            acc = self.mul(&acc, &factor);
            if i + 1 < n {
                factor = self.sigma_apply(&factor);
            }
        }
        acc
    }
}

impl fmt::Display for AlgebraCarrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.kind {
            CarrierKind::Plain => write!(f, "A"),
            CarrierKind::Quotient { modulus } => write!(f, "A/({modulus})"),
            CarrierKind::Localization { generators } => {
                let gens: Vec<String> = generators.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}^-1 A", gens.join(", "))
            }
        }
    }
}
