//! Float-to-rational conversion and the one sanctioned rational-to-float
//! escape hatch. This is the only part of `exact` that touches binary64;
//! the certificate re-verification path must never import it.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};

pub use super::RationalizeMode;
use super::{ExactError, Rational};

/// Convert a finite float to a rational.
///
/// `Cfrac` returns the best rational approximation with denominator at most
/// `max_denominator` (so the error is below `1/max_denominator`); `Dyadic`
/// returns the exact binary value of `v` and ignores the cap.
pub fn rationalize(
    v: f64,
    max_denominator: u64,
    mode: RationalizeMode,
) -> Result<Rational, ExactError> {
    if !v.is_finite() {
        return Err(ExactError::NotFinite);
    }
    let exact = BigRational::from_float(v).ok_or(ExactError::NotFinite)?;
    match mode {
        RationalizeMode::Dyadic => Ok(Rational::from_inner(exact)),
        RationalizeMode::Cfrac => {
            assert!(max_denominator >= 1, "max_denominator must be positive");
            Ok(Rational::from_inner(limit_denominator(
                &exact,
                &BigInt::from(max_denominator),
            )))
        }
    }
}

/// Best rational approximation to `x` with denominator <= `max_den`,
/// via continued-fraction convergents and the closing semiconvergent.
fn limit_denominator(x: &BigRational, max_den: &BigInt) -> BigRational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::from(1));
    let (mut p1, mut q1) = (BigInt::from(1), BigInt::zero());
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let a = n.clone() / d.clone(); // floor division is exact here since d > 0
        let q2 = &q0 + &a * &q1;
        if &q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            return BigRational::new(p1, q1);
        }
    }
    let k = (max_den - &q0) / &q1;
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&conv - x).abs() <= (&semi - x).abs() {
        conv
    } else {
        semi
    }
}

/// Lossy conversion for plotting and simulation only.
pub fn to_f64(r: &Rational) -> f64 {
    r.inner().to_f64().unwrap_or_else(|| {
        // Out-of-range rationals saturate; fine for display purposes.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
