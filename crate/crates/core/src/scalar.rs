//! Scalar backends shared by every computation in the crate.
//!
//! Two backends exist: exact arbitrary-precision rationals ([`Rational`]) and
//! binary `f64`. All generic code is written against the [`Scalar`] trait so a
//! single routine serves both; a computation never mixes backends.

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Distance below which a float parameter is snapped to the nearest integer
/// when deciding whether a series terminates.
pub const FLOAT_INTEGER_SNAP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float64,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::Float64 => f.write_str("float64"),
        }
    }
}

/// Field operations plus the handful of extra hooks the series code needs.
pub trait Scalar:
    Clone + fmt::Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    /// Converts an exact rational into this backend (lossy for `f64`).
    fn from_rational(r: &Rational) -> Self;

    /// `Some(n)` when the value is (within snapping tolerance for floats) the
    /// nonpositive integer `-n`.
    fn nonpositive_integer(&self) -> Option<u64>;

    /// `Some(n)` when the value is a (snapped) integer.
    fn as_integer(&self) -> Option<i64>;

    fn to_f64(&self) -> f64;

    /// Square root when it exists in this backend: always for nonnegative
    /// floats, only for perfect squares in the exact backend.
    fn sqrt_checked(&self) -> Option<Self>;

    fn abs_value(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Integer power; negative exponents take the reciprocal.
    fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn nonpositive_integer(&self) -> Option<u64> {
        if self.is_integer() && !self.is_positive() {
            (-self.to_integer()).to_u64()
        } else {
            None
        }
    }

    fn as_integer(&self) -> Option<i64> {
        if self.is_integer() {
            self.to_integer().to_i64()
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = exact_sqrt(self.numer())?;
        let d = exact_sqrt(self.denom())?;
        Some(Rational::new(n, d))
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float64;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }

    fn nonpositive_integer(&self) -> Option<u64> {
        let r = self.round();
        if r <= 0.0 && (self - r).abs() <= FLOAT_INTEGER_SNAP {
            Some((-r) as u64)
        } else {
            None
        }
    }

    fn as_integer(&self) -> Option<i64> {
        let r = self.round();
        if (self - r).abs() <= FLOAT_INTEGER_SNAP && r.abs() < 9.0e15 {
            Some(r as i64)
        } else {
            None
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sqrt_checked(&self) -> Option<Self> {
        if *self < 0.0 {
            None
        } else {
            Some(self.sqrt())
        }
    }

    fn powi(&self, e: i64) -> Self {
        match i32::try_from(e) {
            Ok(e) => f64::powi(*self, e),
            Err(_) => self.powf(e as f64),
        }
    }
}

/// Exact integer square root, `None` unless `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Like [`exact_sqrt`] for unsigned integers.
pub fn exact_sqrt_u(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Correctly scaled conversion that survives numerators and denominators far
/// beyond the `f64` range.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // scale to ~64 significant bits in both parts
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let n = (r.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powi((shift_n - shift_d) as i32)
}

pub fn rational_from_biguints(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from_biguint(Sign::Plus, num), BigInt::from_biguint(Sign::Plus, den))
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient `n! / (x! y! (n-x-y)!)`.
pub fn trinomial_coefficient(n: u64, x: u64, y: u64) -> BigUint {
    if x + y > n {
        return BigUint::zero();
    }
    binomial(n, x) * binomial(n - x, y)
}

/// Parses `"p/q"`, an integer, or a finite decimal (`"0.25"`, `"1e-3"`) into
/// an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Number(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
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
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let mut r = if scale >= 0 {
        Rational::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Ok(r)
}

/// True when the string is written in exact form (`p/q` or a bare integer).
pub fn is_exact_literal(s: &str) -> bool {
    let s = s.trim();
    s.contains('/') || (!s.contains(['.', 'e', 'E']) && BigInt::from_str(s).is_ok())
}

/// Converts a finite float to the exact rational it denotes.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    BigRational::from_f64(x)
}
