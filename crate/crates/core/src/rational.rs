//! Exact rational helpers.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

pub fn half() -> Rational {
    Rational::new(1, 2)
}

/// Parses `"7"`, `"-3/4"`, `"1.25"` or `"2.5e-1"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{whole}{frac}");
    let mut num: i64 = if all.is_empty() { 0 } else { all.parse().map_err(|_| bad())? };
    let mut scale = exp - frac.len() as i32;
    let mut den: i64 = 1;
    while scale > 0 {
        num = num.checked_mul(10).ok_or_else(bad)?;
        scale -= 1;
    }
    while scale < 0 {
        den = den.checked_mul(10).ok_or_else(bad)?;
        scale += 1;
    }
    if neg {
        num = -num;
    }
    Ok(Rational::new(num, den))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// True when the value has a finite decimal expansion.
pub fn is_terminating(r: &Rational) -> bool {
    let mut d = *r.denom();
    for p in [2, 5] {
        while d % p == 0 {
            d /= p;
        }
    }
    d == 1
}

/// Exact decimal text for terminating values; `None` otherwise.
pub fn to_decimal(r: &Rational) -> Option<String> {
    if !is_terminating(r) {
        return None;
    }
    if r.is_integer() {
        return Some(r.numer().to_string());
    }
    let mut den = *r.denom();
    let mut num = r.numer().abs();
    let mut places = 0u32;
    while den != 1 {
        // multiply by 10 and cancel one factor of 2 or 5 at a time
        let g = den.gcd(&10);
        num *= 10 / g;
        den /= g;
        places += 1;
    }
    let digits = format!("{:0>width$}", num, width = places as usize + 1);
    let (w, f) = digits.split_at(digits.len() - places as usize);
    let sign = if r.is_negative() { "-" } else { "" };
    Some(format!("{sign}{w}.{}", f.trim_end_matches('0')))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer()
}

pub fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer()
}

/// Reads a JSON number or string as an exact rational.
pub fn from_json(v: &serde_json::Value) -> Result<Rational> {
    match v {
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected a number, found {other}"))),
    }
}

/// Integers and short terminating decimals become JSON numbers, everything
/// else a `"p/q"` string, so that [`from_json`] restores the value exactly.
pub fn to_json(r: &Rational) -> serde_json::Value {
    if r.is_integer() {
        return serde_json::Value::from(r.to_integer());
    }
    if let Some(dec) = to_decimal(r) {
        let f: f64 = dec.parse().unwrap_or(f64::NAN);
        if let Some(n) = serde_json::Number::from_f64(f) {
            if parse_rational(&n.to_string()).ok() == Some(*r) {
                return serde_json::Value::Number(n);
            }
        }
    }
    serde_json::Value::String(format_rational(r))
}
