//! Exact rationals, the infinite-capacity sentinel, and float tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational used for every domain quantity (storage, downloads, costs).
pub type Rational = BigRational;

/// Absolute tolerance for every floating-point comparison in the crate.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number `{input}`: {reason}")]
pub struct ParseNumberError {
    pub input: String,
    pub reason: &'static str,
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses `"7"`, `"-3/4"`, `"0.125"` or `"1e-3"` into an exact rational.
///
/// Decimal and exponent forms are converted digit by digit, so `"0.1"` is
/// exactly one tenth rather than the nearest binary float.
pub fn parse_rational(input: &str) -> Result<Rational, ParseNumberError> {
    let err = |reason| ParseNumberError {
        input: input.to_string(),
        reason,
    };
    let s = input.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let numer = BigInt::from_str(n.trim()).map_err(|_| err("bad numerator"))?;
        let denom = BigInt::from_str(d.trim()).map_err(|_| err("bad denominator"))?;
        if denom.is_zero() {
            return Err(err("zero denominator"));
        }
        return Ok(Rational::new(numer, denom));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp = s[pos + 1..].parse::<i32>().map_err(|_| err("bad exponent"))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err("no digits"));
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err("not a number"));
    }
    let all_digits = format!("{whole}{frac}");
    let mut numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits })
        .map_err(|_| err("not a number"))?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Lossy conversion for reporting and for feeding the float LP solver.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Both parts overflow f64; fall back to a scaled division.
        let n = value.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = value.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact binary value of a finite float.
pub fn from_f64(value: f64) -> Rational {
    Rational::from_float(value).expect("finite float")
}

/// Renders integers plainly and everything else as `p/q`.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOLERANCE
}

/// Edge capacity: a nonnegative rational or the absorbing infinite sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

impl Capacity {
    pub fn zero() -> Self {
        Capacity::Finite(Rational::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Capacity::Infinite)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Capacity::Finite(v) => Some(v),
            Capacity::Infinite => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Capacity::Finite(v) if v.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Capacity::Finite(v) => v.is_positive(),
            Capacity::Infinite => true,
        }
    }

    /// `self - amount`, where subtracting from infinity stays infinite.
    pub fn minus(&self, amount: &Rational) -> Capacity {
        match self {
            Capacity::Finite(v) => Capacity::Finite(v - amount),
            Capacity::Infinite => Capacity::Infinite,
        }
    }

    pub fn min_of(self, other: Capacity) -> Capacity {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<Rational> for Capacity {
    fn from(value: Rational) -> Self {
        Capacity::Finite(value)
    }
}

impl PartialOrd for Capacity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Capacity {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Capacity::Infinite, Capacity::Infinite) => Ordering::Equal,
            (Capacity::Infinite, _) => Ordering::Greater,
            (_, Capacity::Infinite) => Ordering::Less,
            (Capacity::Finite(a), Capacity::Finite(b)) => a.cmp(b),
        }
    }
}

impl std::ops::Add for Capacity {
    type Output = Capacity;

    fn add(self, rhs: Capacity) -> Capacity {
        match (self, rhs) {
            (Capacity::Finite(a), Capacity::Finite(b)) => Capacity::Finite(a + b),
            _ => Capacity::Infinite,
        }
    }
}

impl std::iter::Sum for Capacity {
    fn sum<I: Iterator<Item = Capacity>>(iter: I) -> Capacity {
        iter.fold(Capacity::zero(), |acc, c| acc + c)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(v) => f.write_str(&format_rational(v)),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!(parse_rational("43/12").unwrap(), ratio(43, 12));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rational("2.5E2").unwrap(), int(250));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "e5", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn infinity_is_absorbing_and_largest() {
        let inf = Capacity::Infinite;
        let two = Capacity::Finite(int(2));
        assert!(inf > two);
        assert_eq!(inf.clone() + two.clone(), Capacity::Infinite);
        assert_eq!(inf.minus(&int(5)), Capacity::Infinite);
        assert_eq!(two.clone().min_of(inf), two);
        assert_eq!(Capacity::Finite(int(3)).to_string(), "3");
        assert_eq!(Capacity::Infinite.to_string(), "inf");
    }

    #[test]
    fn formats_rationals() {
        assert_eq!(format_rational(&ratio(86, 24)), "43/12");
        assert_eq!(format_rational(&int(-4)), "-4");
    }
}
