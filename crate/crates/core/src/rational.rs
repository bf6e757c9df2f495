//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `base^exp` for an integer exponent of either sign.
pub fn qpow(base: &Q, exp: i64) -> Q {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), (-exp) as usize)
    }
}

pub fn pow2(exp: i64) -> Q {
    qpow(&qi(2), exp)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

/// Nearest rational with denominator `2^bits`.
pub fn from_f64_dyadic(x: f64, bits: u32) -> Q {
    let scale = (2f64).powi(bits as i32);
    let n = (x * scale).round();
    Q::new(BigInt::from(n as i128), BigInt::from(1u128 << bits))
}

pub fn ceil_div(a: &Q, b: &Q) -> BigInt {
    (a / b).ceil().to_integer()
}

pub fn floor(a: &Q) -> BigInt {
    a.floor().to_integer()
}

/// Parse `7`, `-3/4`, `0.125`, `1e-3` or `2^-5`.
pub fn parse_q(text: &str) -> Result<Q> {
    let s = text.trim();
    let err = || Error::Parse(format!("not a rational number: `{text}`"));
    if s.is_empty() {
        return Err(err());
    }
    if let Some((b, e)) = s.split_once('^') {
        let base = parse_q(b)?;
        let exp: i64 = e.trim().parse().map_err(|_| err())?;
        if base.is_zero() && exp < 0 {
            return Err(err());
        }
        return Ok(qpow(&base, exp));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_q(n)?;
        let den = parse_q(d)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(num / den);
    }
    let (mantissa, exp10) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| err())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{int_part}{frac_part}");
    let n: BigInt = all.parse().map_err(|_| err())?;
    let mut v = Q::new(n, num_traits::pow(BigInt::from(10), frac_part.len()));
    v *= qpow(&qi(10), exp10);
    Ok(if neg { -v } else { v })
}

/// Parse a rational or `inf`; `None` stands for infinity.
pub fn parse_q_or_inf(text: &str) -> Result<Option<Q>> {
    match text.trim() {
        "inf" | "infinity" | "∞" => Ok(None),
        s => parse_q(s).map(Some),
    }
}

pub fn qmin(a: &Q, b: &Q) -> Q {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn qmax(a: &Q, b: &Q) -> Q {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn is_integer(x: &Q) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}
