//! Arbitrary-precision rational scalars and the exact helpers built on them.
//!
//! `Rational` is `num_rational::BigRational`, which already keeps the
//! canonical form we rely on everywhere: gcd(|numerator|, denominator) = 1
//! and denominator > 0. Parsing here is deliberately stricter than
//! `FromStr`: serialized rationals must be canonical ("2/4", "3/1", "+2" and
//! leading zeros are rejected), so that documents round-trip byte for byte.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` reduced to canonical form. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: "p/q" with q >= 2, or a plain integer.
pub fn format_canonical(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_canonical_int(s: &str) -> Result<BigInt, String> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() {
        return Err("empty integer".into());
    }
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("invalid integer `{s}`"));
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return Err(format!("non-canonical integer `{s}` (leading zero)"));
    }
    if s.starts_with('-') && digits == "0" {
        return Err("non-canonical integer `-0`".into());
    }
    s.parse::<BigInt>().map_err(|e| e.to_string())
}

/// Strict parser for the canonical form produced by [`format_canonical`].
///
/// Rejects non-reduced fractions, denominators 0 and 1, signs on the
/// denominator, and leading zeros, with a message naming the offence.
pub fn parse_canonical(s: &str) -> Result<Rational, String> {
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_canonical_int(s)?)),
        Some((num, den)) => {
            let n = parse_canonical_int(num)?;
            if den.starts_with('-') || den.starts_with('+') {
                return Err(format!("non-canonical rational `{s}` (signed denominator)"));
            }
            let d = parse_canonical_int(den)?;
            if d.is_zero() {
                return Err(format!("invalid rational `{s}` (zero denominator)"));
            }
            if d.is_one() {
                return Err(format!("non-canonical rational `{s}` (denominator 1)"));
            }
            if n.gcd(&d) != BigInt::one() {
                return Err(format!("non-canonical rational `{s}` (not reduced)"));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Exact square root, when both numerator and denominator are perfect squares.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &sn * &sn == *num && &sd * &sd == *den {
        Some(Rational::new(BigInt::from(sn), BigInt::from(sd)))
    } else {
        None
    }
}

/// n! as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigUint::one();
    for k in 2..=u64::from(n) {
        acc *= k;
    }
    BigInt::from(acc)
}

/// Binomial coefficient C(n, k) as a big integer (0 when k > n).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    BigInt::from(acc)
}

/// Decimal rendering with `digits` fractional digits (round half away from
/// zero). Presentation only; the library never computes with decimals.
pub fn format_decimal(r: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = r.numer() * &scale;
    let den = r.denom();
    let (q, rem) = scaled.div_rem(den);
    let mut q = q;
    if &rem.abs() * 2 >= *den {
        if r.is_negative() {
            q -= 1;
        } else {
            q += 1;
        }
    }
    let neg = q.is_negative();
    let digits_str = q.abs().to_string();
    let digits = digits as usize;
    let padded = if digits_str.len() <= digits {
        format!("{}{}", "0".repeat(digits - digits_str.len() + 1), digits_str)
    } else {
        digits_str
    };
    let split = padded.len() - digits;
    let (int_part, frac_part) = padded.split_at(split);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}
