//! Rational scalars and their text forms.
//!
//! Scalars are `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator. This module adds the strict text format used
//! by the mask files and reports, the decimal renderer used at export
//! boundaries, and a handful of small constructors.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn rat_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => checked_div(a, b)?,
    })
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// `n/d` as a rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for any integer exponent.
pub fn pow2(e: i64) -> Rational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn inv_factorial(n: usize) -> Rational {
    Rational::new(BigInt::one(), factorial(n))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Integer power with a signed exponent; `0^0 = 1`.
pub fn powi(base: &Rational, e: i64) -> Result<Rational> {
    if e < 0 && base.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut acc = Rational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    Ok(if e < 0 { acc.recip() } else { acc })
}

/// Parses `p/q` or `p` with an optional leading `-` and no whitespace.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let invalid = || Error::InvalidRational(text.to_string());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(invalid());
    }
    let mut n: BigInt = num.parse().map_err(|_| invalid())?;
    if negative {
        n = -n;
    }
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| invalid())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(invalid());
    }
    Ok(Rational::new(n, d))
}

/// Canonical text: `p/q` in lowest terms, or `p` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders `r` as a plain decimal with at most `digits` significant digits,
/// rounding half away from zero. Trailing zeros are dropped; no exponent form.
pub fn to_decimal(r: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let a = r.abs();
    let ten = BigInt::from(10);

    // Decimal exponent e with 10^e <= a < 10^(e+1).
    let mut e: i64 = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            Rational::from_integer(p)
        } else {
            Rational::new(BigInt::one(), p)
        }
    };
    while pow10(e) > a {
        e -= 1;
    }
    while pow10(e + 1) <= a {
        e += 1;
    }

    // Integer holding the significant digits, rounded half away from zero.
    let shift = digits as i64 - 1 - e;
    let scaled = &a * pow10(shift);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = q;
    if rem * BigInt::from(2) >= *scaled.denom() {
        mantissa += BigInt::one();
    }

    let mut text = mantissa.to_string();
    let mut point = text.len() as i64 - shift;
    if point <= 0 {
        text = "0".repeat((1 - point) as usize) + &text;
        point = 1;
    }
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let (int_part, frac_part) = if point as usize >= text.len() {
        let zeros = point as usize - text.len();
        (text.clone() + &"0".repeat(zeros), String::new())
    } else {
        let (i, f) = text.split_at(point as usize);
        (i.to_string(), f.trim_end_matches('0').to_string())
    };
    let _ = write!(out, "{int_part}");
    if !frac_part.is_empty() {
        let _ = write!(out, ".{frac_part}");
    }
    out
}
