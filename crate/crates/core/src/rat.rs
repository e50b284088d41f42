//! Parsing and formatting of exact rationals.
//!
//! Accepted input forms: integers (`-4`), fractions (`1/2`), and plain
//! decimals (`0.25`). Output is always the reduced fraction, printed as
//! `p/q`, or just `p` when the denominator is 1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::BadRational(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let i: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let unsigned = i.magnitude().clone() * scale.magnitude() + f.magnitude();
        let mut r = BigRational::new(BigInt::from(unsigned), scale);
        if neg {
            r = -r;
        }
        return Ok(r);
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Closest decimal rendering with the given number of fractional digits,
/// used for informational report fields only.
pub fn decimal_approx(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from_integer(scale.clone())).round();
    let v = scaled.to_integer();
    let neg = v.sign() == num_bigint::Sign::Minus;
    let mag = v.magnitude().to_string();
    let mag = if mag.len() <= digits as usize {
        format!("{}{}", "0".repeat(digits as usize + 1 - mag.len()), mag)
    } else {
        mag
    };
    let (int, frac) = mag.split_at(mag.len() - digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int, frac)
}
