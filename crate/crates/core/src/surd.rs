//! Exact numbers of the form `c * sqrt(r)` with `c` rational and `r` a
//! square-free nonnegative integer.
//!
//! A rational radicand `p/q` is folded into the coefficient first
//! (`sqrt(p/q) = sqrt(p q) / q`), then the largest square factor is pulled out
//! of the integer radicand. Zero is always stored as `0 * sqrt(0)`.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::scalar::{exact_sqrt_u, rational_to_f64, Rational};

#[derive(Clone, Debug)]
pub struct Surd {
    coeff: Rational,
    radicand: BigUint,
}

/// Primes used for square-factor extraction. Every radicand built by this
/// crate is a ratio of factorials and small integers, so its prime factors
/// are small; a perfect-square test on the cofactor covers the rest.
fn small_primes() -> &'static [u32] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = 4000usize;
        let mut sieve = vec![true; limit + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= limit {
            if sieve[i] {
                let mut j = i * i;
                while j <= limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (2..=limit).filter(|&k| sieve[k]).map(|k| k as u32).collect()
    })
}

/// Splits `n = s^2 * r` with `r` square-free (for all prime factors below the
/// sieve limit). Returns `(s, r)`.
fn square_split(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::zero());
    }
    let mut rest = n.clone();
    let mut s = BigUint::one();
    let mut r = BigUint::one();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        let mut e = 0u32;
        loop {
            let (q, m) = rest.div_rem(&pb);
            if !m.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            s *= pb.pow(e / 2);
            if e % 2 == 1 {
                r *= &pb;
            }
        }
    }
    if let Some(root) = exact_sqrt_u(&rest) {
        s *= root;
    } else {
        r *= rest;
    }
    (s, r)
}

fn to_bigint(n: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n)
}

impl Surd {
    pub fn zero() -> Self {
        Surd { coeff: Rational::zero(), radicand: BigUint::zero() }
    }

    pub fn one() -> Self {
        Surd::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            Surd::zero()
        } else {
            Surd { coeff: r, radicand: BigUint::one() }
        }
    }

    /// `sqrt(r)` for `r >= 0`; `None` for negative input.
    pub fn sqrt_of(r: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Surd::zero());
        }
        let num = r.numer().magnitude();
        let den = r.denom().magnitude();
        let (s, rad) = square_split(&(num * den));
        Some(Surd {
            coeff: Rational::new(to_bigint(s), to_bigint(den.clone())),
            radicand: rad,
        })
    }

    /// `c * sqrt(r)` in canonical form.
    pub fn new(coeff: Rational, radicand: &Rational) -> Option<Self> {
        Some(Surd::sqrt_of(radicand)?.scale(&coeff))
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        if self.coeff.is_zero() {
            0
        } else if self.coeff.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() || self.is_zero() {
            return Surd::zero();
        }
        Surd { coeff: &self.coeff * k, radicand: self.radicand.clone() }
    }

    /// The exact square `c^2 r`.
    pub fn square(&self) -> Rational {
        &self.coeff * &self.coeff * Rational::from_integer(to_bigint(self.radicand.clone()))
    }

    /// Sum of two surds when it is again a single surd, i.e. when the
    /// radicands agree (or one side is zero).
    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.radicand != other.radicand {
            return None;
        }
        let c = &self.coeff + &other.coeff;
        if c.is_zero() {
            Some(Surd::zero())
        } else {
            Some(Surd { coeff: c, radicand: self.radicand.clone() })
        }
    }

    /// Exact rational value when the radicand is 1 (or the value is 0).
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.radicand.is_one() {
            Some(self.coeff.clone())
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let c = rational_to_f64(&self.coeff);
        match self.radicand.to_f64() {
            Some(r) if r.is_finite() => c * r.sqrt(),
            _ => {
                let rr = Rational::from_integer(to_bigint(self.radicand.clone()));
                c * rational_to_f64(&rr).sqrt()
            }
        }
    }
}

impl PartialEq for Surd {
    fn eq(&self, other: &Self) -> bool {
        if self.signum() != other.signum() {
            return false;
        }
        self.square() == other.square()
    }
}

impl Eq for Surd {}

impl Mul for &Surd {
    type Output = Surd;

    fn mul(self, rhs: &Surd) -> Surd {
        if self.is_zero() || rhs.is_zero() {
            return Surd::zero();
        }
        let g = self.radicand.gcd(&rhs.radicand);
        let radicand = (&self.radicand / &g) * (&rhs.radicand / &g);
        let coeff = &self.coeff * &rhs.coeff * Rational::from_integer(to_bigint(g));
        Surd { coeff, radicand }
    }
}

impl Mul for Surd {
    type Output = Surd;

    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl Neg for Surd {
    type Output = Surd;

    fn neg(self) -> Surd {
        Surd { coeff: -self.coeff, radicand: self.radicand }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else if self.radicand.is_one() {
            write!(f, "{}", self.coeff)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}

impl Serialize for Surd {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Surd", 2)?;
        st.serialize_field("coefficient", &self.coeff.to_string())?;
        st.serialize_field("radicand", &self.radicand.to_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn canonical_forms() {
        let s = Surd::sqrt_of(&q(1, 24)).unwrap();
        // sqrt(1/24) = sqrt(24)/24 = 2 sqrt(6)/24
        assert_eq!(s.coefficient(), &q(1, 12));
        assert_eq!(s.radicand(), &BigUint::from(6u32));
        assert_eq!(Surd::sqrt_of(&q(9, 4)).unwrap().to_rational(), Some(q(3, 2)));
        assert!(Surd::sqrt_of(&q(-1, 2)).is_none());
        let z = Surd::sqrt_of(&q(0, 1)).unwrap();
        assert!(z.is_zero());
        assert!(z.radicand().is_zero());
    }

    #[test]
    fn products_and_sums() {
        let a = Surd::sqrt_of(&q(6, 1)).unwrap();
        let b = Surd::sqrt_of(&q(10, 1)).unwrap();
        let p = &a * &b; // sqrt(60) = 2 sqrt(15)
        assert_eq!(p.coefficient(), &q(2, 1));
        assert_eq!(p.radicand(), &BigUint::from(15u32));
        assert_eq!(p.square(), q(60, 1));
        assert!(a.checked_add(&b).is_none());
        let twice = a.checked_add(&a).unwrap();
        assert_eq!(twice.square(), q(24, 1));
        assert!(a.checked_add(&-a.clone()).unwrap().is_zero());
        assert!((p.to_f64() - 60f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn equality_ignores_representation() {
        let a = Surd::new(q(1, 2), &q(8, 1)).unwrap();
        assert_eq!(a, Surd::sqrt_of(&q(2, 1)).unwrap());
        assert_ne!(a, -Surd::sqrt_of(&q(2, 1)).unwrap());
    }
}
