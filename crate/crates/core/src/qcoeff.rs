//! Exact scalars in the deformation parameter `q` and the q-combinatorial
//! quantities built from them.
//!
//! A [`QScalar`] is a Laurent polynomial in `q` with rational coefficients.
//! Allowing negative powers makes `q` itself a unit, which the twist on
//! localizations needs. Values coming out of [`q_integer`], [`q_factorial`]
//! and [`q_binomial`] are ordinary polynomials.
//!
//! A scalar may instead be *specialized*: `q` has been replaced by a fixed
//! nonzero rational `q0` and the value is a single rational. Mixing a generic
//! scalar with a specialized one evaluates the generic side at `q0` first.

use std::borrow::Cow;
use std::cmp::{max, min};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QMode {
    Generic,
    Specialized(Arc<BigRational>),
}

impl QMode {
    pub fn specialized(q0: BigRational) -> Result<Self> {
        if q0.is_zero() {
            return Err(Error::ZeroSpecialization);
        }
        Ok(QMode::Specialized(Arc::new(q0)))
    }

    pub fn is_generic(&self) -> bool {
        matches!(self, QMode::Generic)
    }

    pub fn specialized_value(&self) -> Option<&BigRational> {
        match self {
            QMode::Generic => None,
            QMode::Specialized(q0) => Some(q0),
        }
    }
}

/// Element of `Q[q, 1/q]`, or of `Q` once `q` is specialized.
///
/// Stored as `q^shift * (num[0] + num[1] q + ...) / den` with `den > 0`,
/// `num` free of zeros at both ends, and no common factor between `den`
/// and the content of `num`. Zero is the empty `num`.
#[derive(Clone, Debug)]
pub struct QScalar {
    num: Vec<BigInt>,
    den: BigInt,
    shift: i64,
    mode: QMode,
}

impl QScalar {
    pub fn zero() -> Self {
        Self::zero_in(&QMode::Generic)
    }

    pub fn zero_in(mode: &QMode) -> Self {
        QScalar {
            num: Vec::new(),
            den: BigInt::one(),
            shift: 0,
            mode: mode.clone(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::normalized(vec![r.numer().clone()], r.denom().clone(), 0, QMode::Generic)
    }

    /// The generic indeterminate `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(e: i64) -> Self {
        QScalar {
            num: vec![BigInt::one()],
            den: BigInt::one(),
            shift: e,
            mode: QMode::Generic,
        }
    }

    /// `q` as seen in `mode`: the indeterminate, or the rational `q0`.
    pub fn q_in(mode: &QMode) -> Self {
        match mode {
            QMode::Generic => Self::q(),
            QMode::Specialized(q0) => Self::constant_in((**q0).clone(), mode),
        }
    }

    pub fn constant_in(r: BigRational, mode: &QMode) -> Self {
        let mut s = Self::from_rational(r);
        s.mode = mode.clone();
        s
    }

    /// Polynomial with `coeffs[i]` the coefficient of `q^i`.
    pub fn from_coeffs(coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::normalized(num, den, 0, QMode::Generic)
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::normalized(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::one(),
            0,
            QMode::Generic,
        )
    }

    fn normalized(mut num: Vec<BigInt>, mut den: BigInt, mut shift: i64, mode: QMode) -> Self {
        while num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        let lead = num.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            num.drain(..lead);
            shift += lead as i64;
        }
        if num.is_empty() {
            return Self::zero_in(&mode);
        }
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        if !den.is_one() {
            let mut g = den.clone();
            for c in &num {
                g = g.gcd(c);
                if g.is_one() {
                    break;
                }
            }
            if !g.is_one() {
                den /= &g;
                for c in &mut num {
                    *c /= &g;
                }
            }
        }
        QScalar {
            num,
            den,
            shift,
            mode,
        }
    }

    pub fn mode(&self) -> &QMode {
        &self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.len() == 1 && self.num[0].is_one() && self.den.is_one()
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.num.iter().filter(|c| !c.is_zero()).count()
    }

    /// Lowest exponent of `q` carrying a nonzero coefficient.
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.shift)
    }

    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.shift + self.num.len() as i64 - 1)
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        let idx = exp - self.shift;
        if idx < 0 || idx >= self.num.len() as i64 {
            return BigRational::zero();
        }
        BigRational::new(self.num[idx as usize].clone(), self.den.clone())
    }

    /// `(exponent, coefficient)` pairs for the nonzero terms, lowest first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.shift + i as i64, BigRational::new(c.clone(), self.den.clone())))
    }

    /// The rational value, if this is a constant.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.num.len() {
            0 => Some(BigRational::zero()),
            1 if self.shift == 0 => Some(BigRational::new(self.num[0].clone(), self.den.clone())),
            _ => None,
        }
    }

    /// Evaluates at `q = q0`.
    pub fn eval(&self, q0: &BigRational) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        if let QMode::Specialized(_) = self.mode {
            return self.as_rational().expect("specialized scalars are constants");
        }
        let mut acc = BigRational::zero();
        for c in self.num.iter().rev() {
            acc = acc * q0 + BigRational::from_integer(c.clone());
        }
        let shift = i32::try_from(self.shift).expect("q exponent out of range");
        acc * q0.pow(shift) / BigRational::from_integer(self.den.clone())
    }

    /// Moves this scalar into `mode`, evaluating at `q0` when leaving the
    /// generic mode. A specialized value is a plain rational and is carried
    /// over unchanged.
    pub fn in_mode(&self, mode: &QMode) -> QScalar {
        if &self.mode == mode {
            return self.clone();
        }
        match mode {
            QMode::Generic => {
                let mut out = self.clone();
                out.mode = QMode::Generic;
                out
            }
            QMode::Specialized(q0) => Self::constant_in(self.eval(q0), mode),
        }
    }

    pub fn inverse(&self) -> Option<QScalar> {
        if self.num.len() != 1 {
            return None;
        }
        Some(Self::normalized(
            vec![self.den.clone()],
            self.num[0].clone(),
            -self.shift,
            self.mode.clone(),
        ))
    }

    pub fn is_unit(&self) -> bool {
        self.num.len() == 1
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow(&self, e: i64) -> Option<QScalar> {
        let (mut base, mut e) = if e < 0 {
            (self.inverse()?, e.unsigned_abs())
        } else {
            (self.clone(), e as u64)
        };
        let mut acc = QScalar::one().in_mode(&self.mode);
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

    /// Multiplies by `q^e` (or `q0^e` when specialized).
    pub fn mul_q_pow(&self, e: i64) -> QScalar {
        match &self.mode {
            QMode::Generic => {
                let mut out = self.clone();
                if !out.is_zero() {
                    out.shift += e;
                }
                out
            }
            mode @ QMode::Specialized(_) => {
                let qe = QScalar::q_in(mode).pow(e).expect("q0 is nonzero");
                self * &qe
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> QScalar {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::normalized(num, &self.den * r.denom(), self.shift, self.mode.clone())
    }

    /// True when the lowest-order coefficient is negative.
    pub fn lowest_coeff_negative(&self) -> bool {
        self.num.first().is_some_and(Signed::is_negative)
    }

    /// Rendering without spaces, for embedding inside larger expressions.
    pub fn to_compact_string(&self) -> String {
        self.render("+", "-")
    }

    fn render(&self, plus: &str, minus: &str) -> String {
        if self.is_zero() {
            return "0".to_owned();
        }
        let mut out = String::new();
        for (i, (exp, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(minus),
                (_, false) => out.push_str(plus),
            }
            out.push_str(&render_q_term(&c.abs(), exp));
        }
        out
    }
}

/// `|c| q^exp` without sign; `c` must be positive.
pub(crate) fn render_q_term(c: &BigRational, exp: i64) -> String {
    if exp == 0 {
        return c.to_string();
    }
    let q = if exp == 1 {
        "q".to_owned()
    } else {
        format!("q^{exp}")
    };
    if c.is_one() {
        q
    } else {
        format!("{c}*{q}")
    }
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(" + ", " - "))
    }
}

/// Brings two scalars into a common mode.
fn unify<'a>(a: &'a QScalar, b: &'a QScalar) -> (Cow<'a, QScalar>, Cow<'a, QScalar>, QMode) {
    match (&a.mode, &b.mode) {
        (x, y) if x == y => (Cow::Borrowed(a), Cow::Borrowed(b), x.clone()),
        (QMode::Generic, m @ QMode::Specialized(_)) => {
            (Cow::Owned(a.in_mode(m)), Cow::Borrowed(b), m.clone())
        }
        (m @ QMode::Specialized(_), QMode::Generic) => {
            (Cow::Borrowed(a), Cow::Owned(b.in_mode(m)), m.clone())
        }
        (x, y) => panic!("cannot combine scalars specialized at different q: {x:?} vs {y:?}"),
    }
}

fn add_impl(a: &QScalar, b: &QScalar) -> QScalar {
    let (a, b, mode) = unify(a, b);
    if a.is_zero() {
        return b.into_owned();
    }
    if b.is_zero() {
        return a.into_owned();
    }
    let shift = min(a.shift, b.shift);
    let top = max(a.shift + a.num.len() as i64, b.shift + b.num.len() as i64);
    let mut num = vec![BigInt::zero(); (top - shift) as usize];
    let den = if a.den == b.den {
        for (i, c) in a.num.iter().enumerate() {
            num[(a.shift - shift) as usize + i] += c;
        }
        for (i, c) in b.num.iter().enumerate() {
            num[(b.shift - shift) as usize + i] += c;
        }
        a.den.clone()
    } else {
        for (i, c) in a.num.iter().enumerate() {
            num[(a.shift - shift) as usize + i] += c * &b.den;
        }
        for (i, c) in b.num.iter().enumerate() {
            num[(b.shift - shift) as usize + i] += c * &a.den;
        }
        &a.den * &b.den
    };
    QScalar::normalized(num, den, shift, mode)
}

fn mul_impl(a: &QScalar, b: &QScalar) -> QScalar {
    let (a, b, mode) = unify(a, b);
    if a.is_zero() || b.is_zero() {
        return QScalar::zero_in(&mode);
    }
    let mut num = vec![BigInt::zero(); a.num.len() + b.num.len() - 1];
    for (i, x) in a.num.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.num.iter().enumerate() {
            num[i + j] += x * y;
        }
    }
    QScalar::normalized(num, &a.den * &b.den, a.shift + b.shift, mode)
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
            shift: self.shift,
            mode: self.mode.clone(),
        }
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&QScalar> for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                $body(self, rhs)
            }
        }
        impl $trait<QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                $body(&self, &rhs)
            }
        }
        impl $trait<&QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                $body(&self, rhs)
            }
        }
        impl $trait<QScalar> for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Sub, sub, |a: &QScalar, b: &QScalar| add_impl(a, &-b));

impl PartialEq for QScalar {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, _) = unify(self, other);
        a.shift == b.shift && a.den == b.den && a.num == b.num
    }
}

impl Eq for QScalar {}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

impl From<BigRational> for QScalar {
    fn from(r: BigRational) -> Self {
        QScalar::from_rational(r)
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_integer(n: u32) -> QScalar {
    QScalar::from_int_coeffs(&vec![1; n as usize])
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`.
pub fn q_factorial(n: u32) -> QScalar {
    (1..=n).fold(QScalar::one(), |acc, i| acc * q_integer(i))
}

/// Quantum binomial coefficient via the q-Pascal recurrence
/// `C(n,k) = C(n-1,k-1) + q^k C(n-1,k)` with `C(n,0) = 1` and
/// `C(n,k) = 0` outside `0 <= k <= n`.
pub fn q_binomial(n: u32, k: i64) -> QScalar {
    if k < 0 || k > n as i64 {
        return QScalar::zero();
    }
    let k = k as usize;
    // Row n restricted to columns 0..=k.
    let mut row = vec![QScalar::zero(); k + 1];
    row[0] = QScalar::one();
    for _ in 1..=n {
        for j in (1..=k).rev() {
            let shifted = row[j].mul_q_pow(j as i64);
            row[j] = &row[j - 1] + &shifted;
        }
    }
    row.swap_remove(k)
}

/// Evaluates `s` at `q = q0`, producing a specialized scalar.
pub fn specialize(s: &QScalar, q0: &BigRational) -> Result<QScalar> {
    let mode = QMode::specialized(q0.clone())?;
    Ok(s.in_mode(&mode))
}

/// Triangle of quantum binomial coefficients `C(n,k)_q` for `n <= n_max`.
#[derive(Clone, Debug)]
pub struct QBinomTable {
    n_max: u32,
    rows: Vec<Vec<QScalar>>,
}

impl QBinomTable {
    pub fn new(n_max: u32) -> Self {
        let mut rows: Vec<Vec<QScalar>> = Vec::with_capacity(n_max as usize + 1);
        rows.push(vec![QScalar::one()]);
        for n in 1..=n_max as usize {
            let prev = &rows[n - 1];
            let row = (0..=n)
                .map(|k| {
                    if k == 0 || k == n {
                        return QScalar::one();
                    }
                    &prev[k - 1] + &prev[k].mul_q_pow(k as i64)
                })
                .collect();
            rows.push(row);
        }
        QBinomTable { n_max, rows }
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    /// `C(n,k)_q`, zero for `k` outside `0..=n`.
    ///
    /// Panics if `n > n_max`.
    pub fn get(&self, n: u32, k: i64) -> QScalar {
        assert!(n <= self.n_max, "row {n} beyond table size {}", self.n_max);
        if k < 0 || k > n as i64 {
            return QScalar::zero();
        }
        self.rows[n as usize][k as usize].clone()
    }

    pub fn row(&self, n: u32) -> &[QScalar] {
        &self.rows[n as usize]
    }
}
