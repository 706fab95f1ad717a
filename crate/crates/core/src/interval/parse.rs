use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Interval, IntervalError};

/// Parses a finite decimal literal (`-12.5e-3`) or a ratio of two such
/// literals (`1/3`) into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, IntervalError> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num)?;
        let den = parse_decimal(den)?;
        if den.is_zero() {
            return Err(IntervalError::Literal(text.to_string()));
        }
        Ok(num / den)
    } else {
        parse_decimal(text)
    }
}

fn parse_decimal(text: &str) -> Result<BigRational, IntervalError> {
    let bad = || IntervalError::Literal(text.to_string());
    let text = text.trim();
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = body[pos + 1..].parse().map_err(|_| bad())?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exponent - frac_part.len() as i64;
    if scale.unsigned_abs() > 4000 {
        return Err(bad());
    }
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= pow;
    } else {
        value /= pow;
    }
    Ok(if negative { -value } else { value })
}

fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite double")
}

/// Narrowest interval with double endpoints that contains the rational `q`.
pub fn enclose_rational(q: &BigRational) -> Result<Interval, IntervalError> {
    let approx = q.to_f64().unwrap_or(f64::NAN);
    if !approx.is_finite() {
        return Err(IntervalError::Literal(q.to_string()));
    }
    // Walk to the largest double f with f <= q.
    let mut f = approx;
    while exact(f) > *q {
        f = f.next_down();
    }
    while f.next_up().is_finite() && exact(f.next_up()) <= *q {
        f = f.next_up();
    }
    if exact(f) == *q {
        Ok(Interval::point(f))
    } else {
        let hi = f.next_up();
        if !hi.is_finite() {
            return Err(IntervalError::Literal(q.to_string()));
        }
        Ok(Interval::new(f, hi))
    }
}

/// For `lower`, whether `x <= q`; otherwise whether `q <= x`.
pub(crate) fn le_rational(x: f64, q: &BigRational, lower: bool) -> bool {
    if x.is_infinite() {
        return (x < 0.0) == lower;
    }
    if lower {
        exact(x) <= *q
    } else {
        *q <= exact(x)
    }
}

pub(crate) fn from_literal(text: &str) -> Result<Interval, IntervalError> {
    let q = parse_rational(text)?;
    enclose_rational(&q)
}
