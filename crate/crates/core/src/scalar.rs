//! Dual arithmetic: every numeric routine is generic over [`Weight`], which is
//! implemented by `f64` (float mode) and [`Rational`] (exact mode).

use std::fmt::{self, Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Relative tolerance under which two float slopes (or weight ratios) are
/// considered equal.
pub const FLOAT_MERGE_REL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// Scalar type a [`crate::Pmf`] or potential can be built over.
pub trait Weight:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const MODE: Mode;

    fn from_int(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn to_scalar(&self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Self;

    /// `self >= other`, allowing a float slack of `rel * |scale|`.
    /// Exact mode compares exactly.
    fn ge_rel(&self, other: &Self, scale: &Self, rel: f64) -> bool;

    /// Equality used when merging slopes: exact, or within [`FLOAT_MERGE_REL`].
    fn merges_with(&self, other: &Self) -> bool;

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Weight for f64 {
    const MODE: Mode = Mode::Float;

    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Float(*self)
    }
    fn from_scalar(s: &Scalar) -> Self {
        s.to_f64()
    }
    fn ge_rel(&self, other: &Self, scale: &Self, rel: f64) -> bool {
        self - other >= -rel * scale.abs()
    }
    fn merges_with(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_MERGE_REL * 1f64.max(self.abs()).max(other.abs())
    }
    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }
}

impl Weight for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
    fn from_scalar(s: &Scalar) -> Self {
        match s {
            Scalar::Exact(r) => r.clone(),
            Scalar::Float(v) => Rational::from_float(*v).unwrap_or_else(Rational::zero),
        }
    }
    fn ge_rel(&self, other: &Self, _scale: &Self, _rel: f64) -> bool {
        self >= other
    }
    fn merges_with(&self, other: &Self) -> bool {
        self == other
    }
}

/// A value tagged with its arithmetic mode; used in reports and file formats.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Exact(Rational::from_int(v))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => Weight::to_f64(r),
            Scalar::Float(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(v) => *v < 0.0,
        }
    }

    /// Exact values pass iff `>= 0`; floats iff `>= -tol`.
    pub fn passes(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(r) => !r.is_negative(),
            Scalar::Float(v) => *v >= -tol,
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Self {
        Scalar::Float(v)
    }
}

impl From<Rational> for Scalar {
    fn from(v: Rational) -> Self {
        Scalar::Exact(v)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl From<usize> for Scalar {
    fn from(v: usize) -> Self {
        Scalar::int(v as i64)
    }
}

impl Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(v) => {
                if v.is_infinite() {
                    f.write_str(if *v > 0.0 { "inf" } else { "-inf" })
                } else {
                    write!(f, "{v:e}")
                }
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => ser.serialize_str(&r.to_string()),
            Scalar::Float(v) if v.is_finite() => ser.serialize_f64(*v),
            Scalar::Float(_) => ser.serialize_str(&self.to_string()),
        }
    }
}

/// Parses `"num/den"`, an integer, or a decimal (optionally with exponent)
/// into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let numer =
        BigInt::from_str_radix(if all.is_empty() { "0" } else { &all }, 10).map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = Rational::from_integer(numer);
    if scale >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -value } else { value })
}

/// Parses a command-line or config number. Integers and `num/den` are exact;
/// anything with a decimal point or exponent is a float. `inf` is accepted.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    let s = text.trim();
    match s {
        "inf" | "+inf" | "infinity" | "∞" => return Ok(Scalar::Float(f64::INFINITY)),
        _ => {}
    }
    if s.contains('/') || s.parse::<i64>().is_ok() || BigInt::from_str(s).is_ok() {
        return parse_rational(s).map(Scalar::Exact);
    }
    s.parse::<f64>()
        .map(Scalar::Float)
        .map_err(|_| Error::Parse(format!("not a number: {text:?}")))
}
