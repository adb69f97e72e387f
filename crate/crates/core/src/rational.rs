//! Exact rationals and the extended nonnegative reals used for divergent sums.

use std::fmt;
use std::ops::{Add, Mul};

use dashu::base::{Sign as Direction, Signed};
use dashu::integer::IBig;
use dashu::rational::RBig;

use crate::error::{Error, Result};

pub type Rational = RBig;

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::from_parts_signed(IBig::from(p), IBig::from(q))
}

/// `base^exp` for a nonnegative exponent.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    base.pow(exp)
}

/// Strict sign tests; dashu counts zero as positive.
pub trait StrictSign {
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
}

impl StrictSign for Rational {
    fn is_positive(&self) -> bool {
        !self.is_zero() && Signed::sign(self) == Direction::Positive
    }

    fn is_negative(&self) -> bool {
        Signed::sign(self) == Direction::Negative
    }
}

/// Summation over iterators of rationals.
pub trait RationalSum: Iterator + Sized {
    fn total(self) -> Rational
    where
        Rational: Add<Self::Item, Output = Rational>,
    {
        self.fold(Rational::ZERO, |acc, x| acc + x)
    }
}

impl<I: Iterator> RationalSum for I {}

/// Parses `"p/q"` or `"p"` into lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: IBig = p.trim().parse().map_err(|_| bad())?;
            let q: IBig = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::from_parts_signed(p, q))
        }
        None => {
            let p: IBig = s.parse().map_err(|_| bad())?;
            Ok(Rational::from(p))
        }
    }
}

/// Canonical lowest-terms form: `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Lossy conversion for reporting and sampling.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().value()
}

/// A nonnegative rational or `+inf`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtValue {
    Finite(Rational),
    Infinite,
}

impl ExtValue {
    pub fn zero() -> Self {
        ExtValue::Finite(Rational::ZERO)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtValue::Infinite)
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtValue::Finite(r) => Some(r),
            ExtValue::Infinite => None,
        }
    }

    /// Multiplication by a nonnegative rational, with `0 * inf = 0`.
    pub fn scale(&self, c: &Rational) -> ExtValue {
        match self {
            ExtValue::Finite(r) => ExtValue::Finite(r * c),
            ExtValue::Infinite if c.is_zero() => ExtValue::zero(),
            ExtValue::Infinite => ExtValue::Infinite,
        }
    }

    /// `self >= c` for a finite rational bound.
    pub fn ge_rational(&self, c: &Rational) -> bool {
        match self {
            ExtValue::Finite(r) => r >= c,
            ExtValue::Infinite => true,
        }
    }

    pub fn le_rational(&self, c: &Rational) -> bool {
        match self {
            ExtValue::Finite(r) => r <= c,
            ExtValue::Infinite => false,
        }
    }
}

impl From<Rational> for ExtValue {
    fn from(r: Rational) -> Self {
        debug_assert!(!StrictSign::is_negative(&r));
        ExtValue::Finite(r)
    }
}

impl Add for ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: ExtValue) -> ExtValue {
        match (self, rhs) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => ExtValue::Finite(a + b),
            _ => ExtValue::Infinite,
        }
    }
}

impl Add<&Rational> for ExtValue {
    type Output = ExtValue;

    fn add(self, rhs: &Rational) -> ExtValue {
        match self {
            ExtValue::Finite(a) => ExtValue::Finite(a + rhs),
            ExtValue::Infinite => ExtValue::Infinite,
        }
    }
}

impl Mul<&Rational> for ExtValue {
    type Output = ExtValue;

    fn mul(self, rhs: &Rational) -> ExtValue {
        self.scale(rhs)
    }
}

impl PartialOrd for ExtValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        Some(match (self, other) {
            (ExtValue::Finite(a), ExtValue::Finite(b)) => a.cmp(b),
            (ExtValue::Finite(_), ExtValue::Infinite) => Less,
            (ExtValue::Infinite, ExtValue::Finite(_)) => Greater,
            (ExtValue::Infinite, ExtValue::Infinite) => Equal,
        })
    }
}

impl fmt::Display for ExtValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValue::Finite(r) => write!(f, "{r}"),
            ExtValue::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_are_canonical() {
        assert_eq!(format_rational(&parse_rational("6/8").unwrap()), "3/4");
        assert_eq!(format_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(format_rational(&parse_rational(" 7 ").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn infinity_absorbs_but_zero_annihilates() {
        assert!((ExtValue::Infinite + ExtValue::zero()).is_infinite());
        assert_eq!(ExtValue::Infinite.scale(&Rational::ZERO), ExtValue::zero());
        assert!(ExtValue::Infinite.scale(&ratio(1, 3)).is_infinite());
        assert_eq!(ExtValue::Infinite.to_string(), "inf");
        assert!(ExtValue::Finite(int(5)) < ExtValue::Infinite);
    }
}
