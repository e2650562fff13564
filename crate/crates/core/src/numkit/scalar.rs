//! Scalar fields used throughout the crate.
//!
//! Every kernel is written once against [`Field`] and instantiated either
//! with exact rationals (identity checks) or with `f64` (Monte Carlo and
//! large-degree evaluation). [`Scalar`] carries the flavor at runtime for
//! callers such as the CLI that only learn it from configuration.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
pub type Rational = BigRational;

/// Exact or floating arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Exact,
    Float,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Exact => f.write_str("exact"),
            Flavor::Float => f.write_str("float"),
        }
    }
}

impl FromStr for Flavor {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Flavor::Exact),
            "float" => Ok(Flavor::Float),
            other => Err(invalid("flavor", format!("unknown flavor `{other}`"))),
        }
    }
}

/// The arithmetic every kernel needs.
pub trait Field:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    /// Exact binary value of `v` for rationals.
    fn from_f64(v: f64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;
    fn flavor(&self) -> Flavor;
    fn abs(&self) -> Self;
    fn to_scalar(&self) -> Scalar;

    fn from_u64(v: u64) -> Self {
        Self::from_i64(v as i64)
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn flavor(&self) -> Flavor {
        Flavor::Float
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(v: f64) -> Self {
        Rational::from_float(v).expect("finite float")
    }
    fn from_bigint(v: &BigInt) -> Self {
        Rational::from_integer(v.clone())
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn flavor(&self) -> Flavor {
        Flavor::Exact
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
}

/// Correctly scaled conversion that survives numerators and denominators
/// far outside the `f64` range.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db - 60;
    let scaled = if shift >= 0 {
        q.numer() / (q.denom() << shift as usize)
    } else {
        (q.numer() << (-shift) as usize) / q.denom()
    };
    let half = (shift / 2) as i32;
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(half) * 2f64.powi(shift as i32 - half)
}

/// Parses `p/q`, an integer or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p
            .trim()
            .parse()
            .map_err(|_| invalid("rational", format!("bad numerator in `{s}`")))?;
        let q: BigInt = q
            .trim()
            .parse()
            .map_err(|_| invalid("rational", format!("bad denominator in `{s}`")))?;
        if q.is_zero() {
            return Err(invalid("rational", format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Ok(i) = s.parse::<BigInt>() {
        return Ok(Rational::from_integer(i));
    }
    // decimal literal: exact base-10 value
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (
            &s[..i],
            s[i + 1..]
                .parse::<i32>()
                .map_err(|_| invalid("rational", format!("bad exponent in `{s}`")))?,
        ),
        None => (s, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int_part}{frac_part}");
    if digits.is_empty() || digits == "-" || digits == "+" {
        return Err(invalid("rational", format!("cannot parse `{s}`")));
    }
    let n: BigInt = digits
        .parse()
        .map_err(|_| invalid("rational", format!("cannot parse `{s}`")))?;
    let e = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if e >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, e as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-e) as usize))
    })
}

/// Formats a rational as `p/q`, or `p` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Exact rational or `f64`, tagged at runtime. Mixed arithmetic promotes to
/// floating.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn to_flavor(&self, flavor: Flavor) -> Scalar {
        match (self, flavor) {
            (Scalar::Exact(q), Flavor::Float) => Scalar::Float(rational_to_f64(q)),
            (Scalar::Float(v), Flavor::Exact) => Scalar::Exact(Rational::from_f64(*v)),
            _ => self.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    /// Parses `p/q` or decimal text in the requested flavor.
    pub fn parse(s: &str, flavor: Flavor) -> Result<Scalar> {
        let q = parse_rational(s)?;
        Ok(Scalar::Exact(q).to_flavor(flavor))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => f.write_str(&format_rational(q)),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

/// Exact values serialize as `"p/q"` strings, floats as JSON numbers.
impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => s.serialize_str(&format_rational(q)),
            Scalar::Float(v) => s.serialize_f64(*v),
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Float(a) => Scalar::Float(-a),
        }
    }
}

impl Field for Scalar {
    fn zero() -> Self {
        Scalar::Exact(<Rational as Zero>::zero())
    }
    fn one() -> Self {
        Scalar::Exact(<Rational as One>::one())
    }
    fn from_i64(v: i64) -> Self {
        Scalar::Exact(<Rational as Field>::from_i64(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(<Rational as Field>::from_ratio(num, den))
    }
    fn from_f64(v: f64) -> Self {
        Scalar::Float(v)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Scalar::Exact(Rational::from_integer(v.clone()))
    }
    fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => rational_to_f64(q),
            Scalar::Float(v) => *v,
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(q) => Zero::is_zero(q),
            Scalar::Float(v) => *v == 0.0,
        }
    }
    fn flavor(&self) -> Flavor {
        match self {
            Scalar::Exact(_) => Flavor::Exact,
            Scalar::Float(_) => Flavor::Float,
        }
    }
    fn abs(&self) -> Self {
        match self {
            Scalar::Exact(q) => Scalar::Exact(Signed::abs(q)),
            Scalar::Float(v) => Scalar::Float(f64::abs(*v)),
        }
    }
    fn to_scalar(&self) -> Scalar {
        self.clone()
    }
}

/// Shorthand for an exact `p/q`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}
