use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact arbitrary-precision rational number.
///
/// Invariants: denominator > 0 and gcd(|num|, den) = 1 (the inner
/// `BigRational` keeps itself reduced). Arithmetic never rounds.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num, den))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rational(self.0.recip())
    }

    /// x^k for non-negative k.
    pub fn pow(&self, k: u32) -> Self {
        Rational(self.0.pow(k as i32))
    }

    /// The value as a small non-negative integer, if it is one.
    pub fn to_integer_u32(&self) -> Option<u32> {
        use num::ToPrimitive;
        if !self.0.denom().is_one() || self.is_negative() {
            return None;
        }
        self.0.numer().to_u32()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub(crate) fn inner(&self) -> &BigRational {
        &self.0
    }

    pub(crate) fn from_inner(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    /// Canonical form `num/den`, with `/1` omitted for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(String);

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `num/den`, integers, and exact decimal/scientific literals
    /// (`0.25`, `1e-9`, `-2.5e3`). Decimal digits are integer arithmetic,
    /// so the parse is always exact.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ParseRationalError(s.to_string());
        if let Some((n, d)) = t.split_once('/') {
            let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            return Ok(Rational(BigRational::new(num, den)));
        }
        let (mantissa, exp10) = match t.split_once(['e', 'E']) {
            Some((m, e)) => (m, i64::from_str(e).map_err(|_| bad())?),
            None => (t, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, f)) => (i, f),
            None => (mantissa, ""),
        };
        if frac_part.is_empty() && exp10 == 0 {
            let num = BigInt::from_str(int_part).map_err(|_| bad())?;
            return Ok(Rational(BigRational::from_integer(num)));
        }
        if !frac_part.chars().all(|c| c.is_ascii_digit()) || frac_part.contains('-') {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let shift = exp10 - frac_part.len() as i64;
        let ten = BigInt::from(10);
        let value = if shift >= 0 {
            BigRational::from_integer(num * ten.pow(shift as u32))
        } else {
            BigRational::new(num, ten.pow((-shift) as u32))
        };
        Ok(Rational(value))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

/// Shorthand used all over the tests and constructors.
#[cfg(test)]
pub(crate) fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(1, -2), rat(-1, 2));
        assert_eq!(rat(-6, -9), rat(2, 3));
        assert_eq!(rat(0, 7), Rational::zero());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for r in [
            rat(101020, 100000000000),
            rat(-3, 4),
            rat(5, 1),
            Rational::zero(),
        ] {
            let s = r.to_string();
            assert_eq!(s.parse::<Rational>().unwrap(), r);
        }
        assert_eq!("7".parse::<Rational>().unwrap(), rat(7, 1));
        assert_eq!("-7/2".parse::<Rational>().unwrap(), rat(-7, 2));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn decimal_literals_parse_exactly() {
        assert_eq!("0.25".parse::<Rational>().unwrap(), rat(1, 4));
        assert_eq!("-0.1".parse::<Rational>().unwrap(), rat(-1, 10));
        assert_eq!("1e-9".parse::<Rational>().unwrap(), rat(1, 1_000_000_000));
        assert_eq!("2.5e3".parse::<Rational>().unwrap(), rat(2500, 1));
        assert_eq!("3.".parse::<Rational>().unwrap(), rat(3, 1));
        assert!("1.2.3".parse::<Rational>().is_err());
        assert!("0.-1".parse::<Rational>().is_err());
    }

    #[test]
    fn integers_omit_denominator() {
        assert_eq!(rat(5, 1).to_string(), "5");
        assert_eq!(rat(1, 2).to_string(), "1/2");
    }

    #[test]
    fn exact_round_trips() {
        let a = rat(22, 7);
        let b = rat(-355, 113);
        assert_eq!((a.clone() + b.clone()) - b.clone(), a);
        assert_eq!((a.clone() * b.clone()) / b, a);
    }

    #[test]
    fn pow_and_recip() {
        assert_eq!(rat(2, 3).pow(3), rat(8, 27));
        assert_eq!(rat(2, 3).pow(0), Rational::one());
        assert_eq!(rat(2, 3).recip(), rat(3, 2));
    }
}
