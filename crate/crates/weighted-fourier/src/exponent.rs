//! Exact exponents.
//!
//! Exponents are rationals (or `+inf`), stored through their reciprocal so that
//! conjugates and the `1/r = 1/q - 1/p` style identities stay exact.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn qf(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ExponentError {
    #[error("cannot parse exponent `{0}`")]
    Parse(String),
    #[error("exponent must be positive, got `{0}`")]
    NonPositive(String),
}

/// Parses `3`, `-2`, `4/3`, `0.25` exactly into a rational.
pub fn parse_rational(s: &str) -> Result<Q, ExponentError> {
    let s = s.trim();
    let err = || ExponentError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(n / d);
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    if body.is_empty() {
        return Err(err());
    }
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || (int_part.is_empty() && frac_part.is_empty())
        || frac_part.len() > 15
    {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: i64 = digits.parse().map_err(|_| err())?;
    let d = 10i64.checked_pow(frac_part.len() as u32).ok_or_else(err)?;
    let v = Q::new(n, d);
    Ok(if neg { -v } else { v })
}

/// A Lebesgue exponent in `(0, inf]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Exponent {
    inv: Q,
}

impl Exponent {
    pub const INFINITY: Exponent = Exponent {
        inv: Ratio::new_raw(0, 1),
    };

    pub fn new(value: Q) -> Result<Self, ExponentError> {
        if value <= Q::zero() {
            return Err(ExponentError::NonPositive(value.to_string()));
        }
        Ok(Exponent { inv: value.recip() })
    }

    pub fn from_int(n: i64) -> Self {
        Exponent::new(qi(n)).expect("positive integer exponent")
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Exponent::new(q(n, d)).expect("positive exponent")
    }

    /// Builds the exponent whose reciprocal is `inv >= 0`.
    pub fn from_inv(inv: Q) -> Self {
        assert!(inv >= Q::zero(), "reciprocal exponent must be non-negative");
        Exponent { inv }
    }

    pub fn inv(&self) -> Q {
        self.inv
    }

    pub fn is_infinite(&self) -> bool {
        self.inv.is_zero()
    }

    pub fn value(&self) -> Option<Q> {
        if self.is_infinite() {
            None
        } else {
            Some(self.inv.recip())
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self.value() {
            Some(v) => qf(v),
            None => f64::INFINITY,
        }
    }

    /// Hölder conjugate `1/p + 1/p' = 1`; requires `p >= 1`.
    pub fn conj(&self) -> Option<Exponent> {
        if self.inv > Q::one() {
            None
        } else {
            Some(Exponent::from_inv(Q::one() - self.inv))
        }
    }

    /// The exponent with `1/p# = |1/2 - 1/p|`.
    pub fn sharp(&self) -> Exponent {
        Exponent::from_inv((q(1, 2) - self.inv).abs())
    }

    pub fn cmp_value(&self, other: &Exponent) -> std::cmp::Ordering {
        other.inv.cmp(&self.inv)
    }

    pub fn lt(&self, other: &Exponent) -> bool {
        self.inv > other.inv
    }

    pub fn le(&self, other: &Exponent) -> bool {
        self.inv >= other.inv
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Exponent({self})")
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Some(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            None => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = ExponentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinity" | "+inf" | "∞") {
            return Ok(Exponent::INFINITY);
        }
        Exponent::new(parse_rational(&t)?)
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_exactly() {
        assert_eq!(parse_rational("4/3").unwrap(), q(4, 3));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_rational("1/0.5").unwrap(), qi(2));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn conjugates() {
        let p: Exponent = "4/3".parse().unwrap();
        assert_eq!(p.conj().unwrap(), Exponent::from_int(4));
        assert!(Exponent::from_int(1).conj().unwrap().is_infinite());
        assert_eq!(Exponent::INFINITY.conj().unwrap(), Exponent::from_int(1));
        assert!(Exponent::from_ratio(1, 2).conj().is_none());
    }

    #[test]
    fn sharp_exponent() {
        assert!(Exponent::from_int(2).sharp().is_infinite());
        assert_eq!(Exponent::from_int(4).sharp(), Exponent::from_int(4));
        assert_eq!(Exponent::from_int(1).sharp(), Exponent::from_int(2));
        assert_eq!(Exponent::INFINITY.sharp(), Exponent::from_int(2));
    }

    #[test]
    fn display_roundtrip() {
        for s in ["2", "4/3", "inf", "1/2"] {
            let e: Exponent = s.parse().unwrap();
            assert_eq!(e.to_string(), s);
        }
    }

    #[test]
    fn rejects_non_positive() {
        assert!("0".parse::<Exponent>().is_err());
        assert!("-2".parse::<Exponent>().is_err());
    }
}
