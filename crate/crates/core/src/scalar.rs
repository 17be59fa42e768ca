//! Exact scalar fields.
//!
//! Everything above this module is written against [`Field`], which is
//! implemented by arbitrary-precision rationals and by the univariate
//! rational-function field Q(z) in [`crate::ratfunc`]. The second instance is
//! only used to resolve removable singularities by taking limits in z.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An exact commutative field.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: &Rational) -> Self;

    /// Multiplicative inverse, or `None` for zero.
    fn checked_inv(&self) -> Option<Self>;

    /// Exact textual form used in reports.
    fn render(&self) -> String;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.checked_inv().map(|inv| self.clone() * inv)
    }

    /// Integer power; negative exponents need an invertible base.
    fn powi(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.checked_inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }
}

impl Field for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn render(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// Divides, naming `what` in the error when the denominator vanishes.
pub fn div<F: Field>(num: &F, den: &F, what: &str) -> Result<F> {
    num.checked_div(den).ok_or_else(|| Error::ZeroDenominator(what.to_string()))
}

pub fn pow<F: Field>(base: &F, exp: i64, what: &str) -> Result<F> {
    base.powi(exp).ok_or_else(|| Error::ZeroDenominator(what.to_string()))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"` with an optional sign.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let trimmed = s.trim();
    let bad = || Error::InvalidRational(s.to_string());
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).map_err(|_| bad())?;
    let den = BigInt::from_str(den.strip_prefix('+').unwrap_or(den)).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `(a; q)_k = prod_{m=0}^{k-1} (1 - a q^m)`.
pub fn q_pochhammer<F: Field>(a: &F, q: &F, k: usize) -> F {
    let mut acc = F::one();
    let mut term = a.clone();
    for m in 0..k {
        acc = acc * (F::one() - term.clone());
        if m + 1 < k {
            term = term * q.clone();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pochhammer_examples() {
        let h = rat(1, 2);
        assert_eq!(q_pochhammer(&rat(7, 3), &rat(5, 2), 0), Rational::one());
        assert_eq!(q_pochhammer(&h, &h, 2), rat(3, 8));
        let one = Rational::one();
        assert!(q_pochhammer(&one, &one, 3).is_zero());
    }

    #[test]
    fn pochhammer_at_q_zero_keeps_first_factor() {
        let a = rat(2, 5);
        assert_eq!(q_pochhammer(&a, &Rational::zero(), 4), rat(3, 5));
    }

    #[test]
    fn parse_literals() {
        assert_eq!(parse_rational("3/5").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("+7").unwrap(), rat(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(rat(4, 6).render(), "2/3");
        assert_eq!(rat(3, 1).render(), "3/1");
    }

    #[test]
    fn negative_powers() {
        assert_eq!(rat(2, 3).powi(-2).unwrap(), rat(9, 4));
        assert!(Rational::zero().powi(-1).is_none());
        assert_eq!(Rational::zero().powi(0).unwrap(), Rational::one());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c));
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * a.checked_inv().unwrap(), Rational::one());
            }
        }

        #[test]
        fn pochhammer_step(a in small_rat(), q in small_rat(), k in 0usize..6) {
            let step = Rational::one() - a.clone() * q.powi(k as i64).unwrap();
            prop_assert_eq!(q_pochhammer(&a, &q, k + 1), q_pochhammer(&a, &q, k) * step);
        }
    }
}
