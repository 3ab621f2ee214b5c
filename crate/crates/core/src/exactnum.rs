//! Exact arithmetic over `Q`, `Q(√3)` and `Q(√3) + i·Q(√3)`.
//!
//! Every scalar that appears in the threefold setting (twists, polarization
//! coefficients, imaginary parts of central charges, slopes) lives in one of
//! these fields, so comparisons and identities are decided without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (positive denominator, reduced).
pub type Rational = BigRational;

/// Builds `p/q` from machine integers. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"` or `"p/q"`. Decimal and exponent notation are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not an exact rational: {text:?}"));
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) || !valid(den) || den.starts_with(['-', '+']) {
        return Err(bad());
    }
    let n = BigInt::from_str(num).map_err(|_| bad())?;
    let d = BigInt::from_str(den).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(n, d))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

fn sign_of(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Serde adapter writing a [`Rational`] as its canonical string.
pub mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(v.iter().map(format_rational))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// Serde adapter for matrix entries: a rational string when the `√3` part
/// vanishes, the `{"r", "s"}` object otherwise.
pub mod scalar_compact {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Text(String),
        Full(ExactScalar),
    }

    pub fn serialize<S: Serializer>(x: &ExactScalar, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x.as_rational() {
            Some(q) => s.serialize_str(&format_rational(q)),
            None => x.serialize(s),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<ExactScalar, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Text(t) => parse_rational(&t)
                .map(ExactScalar::from)
                .map_err(serde::de::Error::custom),
            Repr::Full(x) => Ok(x),
        }
    }
}

/// An element `r + s·√3` of the real quadratic field `Q(√3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactScalar {
    #[serde(with = "rational_str")]
    pub r: Rational,
    #[serde(with = "rational_str")]
    pub s: Rational,
}

impl ExactScalar {
    pub fn new(r: Rational, s: Rational) -> Self {
        Self { r, s }
    }

    pub fn from_rational(r: Rational) -> Self {
        Self {
            r,
            s: Rational::zero(),
        }
    }

    /// `c·√3`.
    pub fn sqrt3_multiple(c: Rational) -> Self {
        Self {
            r: Rational::zero(),
            s: c,
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// Returns the rational value if the `√3` part vanishes.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.s.is_zero().then_some(&self.r)
    }

    /// Galois conjugate `r − s·√3`.
    pub fn conj(&self) -> Self {
        Self {
            r: self.r.clone(),
            s: -&self.s,
        }
    }

    /// Field norm `r² − 3s²`; zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.r * &self.r - int(3) * &self.s * &self.s
    }

    /// Exact sign of the real number `r + s√3`.
    pub fn signum(&self) -> i8 {
        let (sr, ss) = (sign_of(&self.r), sign_of(&self.s));
        if ss == 0 {
            return sr;
        }
        if sr == 0 || sr == ss {
            return ss;
        }
        // opposite signs: the larger of r² and 3s² wins
        match (&self.r * &self.r).cmp(&(int(3) * &self.s * &self.s)) {
            Ordering::Greater => sr,
            Ordering::Less => ss,
            Ordering::Equal => 0,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            r: &self.r * c,
            s: &self.s * c,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self {
            r: &self.r / &n,
            s: -&self.s / &n,
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Double-precision approximation, for display and float cross-checks only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.r.to_f64().unwrap_or(f64::NAN) + self.s.to_f64().unwrap_or(f64::NAN) * 3f64.sqrt()
    }
}

impl From<Rational> for ExactScalar {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.r.is_zero(), self.s.is_zero()) {
            (_, true) => write!(f, "{}", self.r),
            (true, false) => write!(f, "({})√3", self.s),
            (false, false) => write!(f, "{} + ({})√3", self.r, self.s),
        }
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident) => {
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
        impl $trait<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                self.$method(&rhs)
            }
        }
    };
}

macro_rules! forward_assign {
    ($ty:ident, $trait:ident, $method:ident, $op:ident) => {
        impl $trait<&$ty> for $ty {
            fn $method(&mut self, rhs: &$ty) {
                *self = (&*self).$op(rhs);
            }
        }
        impl $trait<$ty> for $ty {
            fn $method(&mut self, rhs: $ty) {
                *self = (&*self).$op(&rhs);
            }
        }
    };
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            r: &self.r + &rhs.r,
            s: &self.s + &rhs.s,
        }
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            r: &self.r - &rhs.r,
            s: &self.s - &rhs.s,
        }
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            r: &self.r * &rhs.r + int(3) * &self.s * &rhs.s,
            s: &self.r * &rhs.s + &self.s * &rhs.r,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            r: -&self.r,
            s: -&self.s,
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

forward_binop!(ExactScalar, Add, add);
forward_binop!(ExactScalar, Sub, sub);
forward_binop!(ExactScalar, Mul, mul);
forward_assign!(ExactScalar, AddAssign, add_assign, add);
forward_assign!(ExactScalar, SubAssign, sub_assign, sub);
forward_assign!(ExactScalar, MulAssign, mul_assign, mul);

/// An element `re + i·im` of `Q(√3) + i·Q(√3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExactComplex {
    pub re: ExactScalar,
    pub im: ExactScalar,
}

impl ExactComplex {
    pub fn new(re: ExactScalar, im: ExactScalar) -> Self {
        Self { re, im }
    }

    pub fn from_real(re: ExactScalar) -> Self {
        Self {
            re,
            im: ExactScalar::zero(),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_real(q.into())
    }

    pub fn zero() -> Self {
        Self::from_real(ExactScalar::zero())
    }

    pub fn one() -> Self {
        Self::from_real(ExactScalar::one())
    }

    pub fn i() -> Self {
        Self {
            re: ExactScalar::zero(),
            im: ExactScalar::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// `|z|² = re² + im²`, an element of `Q(√3)`.
    pub fn norm_sqr(&self) -> ExactScalar {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self {
            re: &self.re * c,
            im: &self.im * c,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // |z|² is a sum of squares of reals, hence nonzero here
        let n = self.norm_sqr().inv()?;
        Ok(self.conj().scale(&n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<ExactScalar> for ExactComplex {
    fn from(re: ExactScalar) -> Self {
        Self::from_real(re)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + i[{}]", self.re, self.im)
    }
}

impl Add<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

forward_binop!(ExactComplex, Add, add);
forward_binop!(ExactComplex, Sub, sub);
forward_binop!(ExactComplex, Mul, mul);
forward_assign!(ExactComplex, AddAssign, add_assign, add);
forward_assign!(ExactComplex, SubAssign, sub_assign, sub);
forward_assign!(ExactComplex, MulAssign, mul_assign, mul);

/// The four field operations, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(a: &ExactScalar, b: &ExactScalar, op: ArithOp) -> Result<ExactScalar> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

pub fn complex_arith(a: &ExactComplex, b: &ExactComplex, op: ArithOp) -> Result<ExactComplex> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}
