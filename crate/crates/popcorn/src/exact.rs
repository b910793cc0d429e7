//! Exact arithmetic primitives: rational parsing, dyadic scales, big-integer
//! roots and power comparisons.
//!
//! Everything that feeds an inequality elsewhere in the crate goes through
//! these helpers, so no counting or measure path ever touches floating point.

use std::cmp::Ordering;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Ceiling on exponents fed to [`pow2`]; keeps runaway configurations from
/// allocating multi-megabit integers.
pub const MAX_POW2_BITS: u64 = 1 << 22;

/// Parses "a/b", plain integers and decimal literals into an exact rational.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n.trim().parse().map_err(|_| bad())?;
        let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in '{s}'")));
        }
        Ok(BigRational::new(numer, denom))
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_abs: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_digits: BigInt = frac.parse().map_err(|_| bad())?;
        let denom = BigInt::from(10u32).pow(frac.len() as u32);
        let mut numer = int_abs * &denom + frac_digits;
        if neg {
            numer = -numer;
        }
        Ok(BigRational::new(numer, denom))
    } else {
        let numer: BigInt = s.parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(numer))
    }
}

pub fn ratio_u(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ratio_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// 2^{-level} as an exact rational.
pub fn dyadic(level: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(pow2(level as u64)))
}

pub fn pow2(bits: u64) -> BigUint {
    assert!(bits <= MAX_POW2_BITS, "2^{bits} exceeds the exponent budget");
    BigUint::one() << bits as usize
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `r^e` for a nonnegative integer exponent, without trait gymnastics.
pub fn ratio_pow(r: &BigRational, e: u32) -> BigRational {
    BigRational::new(r.numer().pow(e), r.denom().pow(e))
}

pub fn floor_u64(r: &BigRational) -> Result<u64> {
    let f = r.floor().to_integer();
    f.to_u64()
        .ok_or_else(|| Error::Domain(format!("floor {f} outside u64 range")))
}

pub fn ceil_u64(r: &BigRational) -> Result<u64> {
    let c = r.ceil().to_integer();
    c.to_u64()
        .ok_or_else(|| Error::Domain(format!("ceiling {c} outside u64 range")))
}

/// Largest integer n with n^root <= x.
pub fn nth_root_floor(x: &BigUint, root: u32) -> BigUint {
    x.nth_root(root)
}

/// floor(2^(j*e)) for a nonnegative rational exponent e, computed exactly as
/// an integer root of a power of two.
pub fn floor_pow2_rational(j: u32, e: &BigRational) -> Result<BigUint> {
    let je = e * BigRational::from_integer(BigInt::from(j));
    if je.is_negative() {
        return Err(Error::Domain(format!("negative dyadic exponent {je}")));
    }
    let bits = je
        .numer()
        .to_u64()
        .filter(|&b| b <= MAX_POW2_BITS)
        .ok_or_else(|| Error::Resource(format!("exponent numerator {} too large", je.numer())))?;
    let root = je
        .denom()
        .to_u32()
        .ok_or_else(|| Error::Resource(format!("exponent denominator {} too large", je.denom())))?;
    Ok(nth_root_floor(&pow2(bits), root))
}

/// Ordering of q^(-a/b) against a rational threshold. The comparison
/// d^b <=> n^b * q^a is carried out on big integers.
pub fn cmp_recip_pow(q: u64, a: u32, b: u32, rhs: &BigRational) -> Ordering {
    if !rhs.is_positive() {
        return Ordering::Greater;
    }
    let n = rhs.numer().magnitude();
    let d = rhs.denom().magnitude();
    d.pow(b).cmp(&(n.pow(b) * BigUint::from(q).pow(a)))
}
