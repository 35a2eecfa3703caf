//! Extended reals with a finiteness certificate.
//!
//! A value is either a finite number, a certified divergence (with the reason
//! it diverges), or indeterminate. Reports never carry a bare `inf`.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ExtReal {
    Finite { value: f64 },
    Infinite { reason: String },
    Indeterminate { reason: String },
}

impl ExtReal {
    pub fn finite(value: f64) -> Self {
        debug_assert!(value.is_finite(), "finite() called with {value}");
        ExtReal::Finite { value }
    }

    pub fn infinite(reason: impl Into<String>) -> Self {
        ExtReal::Infinite {
            reason: reason.into(),
        }
    }

    pub fn indeterminate(reason: impl Into<String>) -> Self {
        ExtReal::Indeterminate {
            reason: reason.into(),
        }
    }

    pub fn zero() -> Self {
        ExtReal::finite(0.0)
    }

    /// Wraps a raw float; non-finite inputs become `Infinite` with `reason`.
    pub fn from_f64(v: f64, reason: &str) -> Self {
        if v.is_finite() {
            ExtReal::finite(v)
        } else if v.is_nan() {
            ExtReal::indeterminate(format!("NaN: {reason}"))
        } else {
            ExtReal::infinite(reason)
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinite { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            ExtReal::Finite { value } => Some(*value),
            _ => None,
        }
    }

    /// Finite value, `f64::INFINITY` for a certified divergence, NaN otherwise.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite { value } => *value,
            ExtReal::Infinite { .. } => f64::INFINITY,
            ExtReal::Indeterminate { .. } => f64::NAN,
        }
    }

    pub fn add(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Indeterminate { .. }, _) => self.clone(),
            (_, ExtReal::Indeterminate { .. }) => other.clone(),
            (ExtReal::Infinite { .. }, _) => self.clone(),
            (_, ExtReal::Infinite { .. }) => other.clone(),
            (ExtReal::Finite { value: a }, ExtReal::Finite { value: b }) => {
                ExtReal::from_f64(a + b, "overflow in sum")
            }
        }
    }

    /// Product with the measure-theoretic convention 0 * inf = 0.
    pub fn mul(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite { value }, _) | (_, ExtReal::Finite { value }) if *value == 0.0 => {
                ExtReal::zero()
            }
            (ExtReal::Indeterminate { .. }, _) => self.clone(),
            (_, ExtReal::Indeterminate { .. }) => other.clone(),
            (ExtReal::Infinite { .. }, _) => self.clone(),
            (_, ExtReal::Infinite { .. }) => other.clone(),
            (ExtReal::Finite { value: a }, ExtReal::Finite { value: b }) => {
                ExtReal::from_f64(a * b, "overflow in product")
            }
        }
    }

    pub fn scale(&self, c: f64) -> ExtReal {
        self.mul(&ExtReal::finite(c))
    }

    /// `self^e` for `self >= 0`; inf^e is 0 for e < 0.
    pub fn powf(&self, e: f64) -> ExtReal {
        match self {
            ExtReal::Finite { value } => {
                if e == 0.0 {
                    ExtReal::finite(1.0)
                } else if *value == 0.0 && e < 0.0 {
                    ExtReal::infinite("negative power of zero")
                } else {
                    ExtReal::from_f64(value.powf(e), "overflow in power")
                }
            }
            ExtReal::Infinite { .. } => {
                if e > 0.0 {
                    self.clone()
                } else if e == 0.0 {
                    ExtReal::finite(1.0)
                } else {
                    ExtReal::zero()
                }
            }
            ExtReal::Indeterminate { .. } => self.clone(),
        }
    }

    pub fn max(&self, other: &ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Indeterminate { .. }, _) => self.clone(),
            (_, ExtReal::Indeterminate { .. }) => other.clone(),
            (ExtReal::Infinite { .. }, _) => self.clone(),
            (_, ExtReal::Infinite { .. }) => other.clone(),
            (ExtReal::Finite { value: a }, ExtReal::Finite { value: b }) => {
                ExtReal::finite(a.max(*b))
            }
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite { value } => write!(f, "{value}"),
            ExtReal::Infinite { reason } => write!(f, "+inf ({reason})"),
            ExtReal::Indeterminate { reason } => write!(f, "indeterminate ({reason})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_times_infinity_is_zero() {
        let z = ExtReal::zero();
        let inf = ExtReal::infinite("test");
        assert_eq!(z.mul(&inf), ExtReal::zero());
        assert_eq!(inf.mul(&z), ExtReal::zero());
    }

    #[test]
    fn sums_propagate_divergence() {
        let s = ExtReal::finite(1.0).add(&ExtReal::infinite("tail"));
        assert!(s.is_infinite());
        let s = ExtReal::indeterminate("x").add(&ExtReal::infinite("tail"));
        assert!(matches!(s, ExtReal::Indeterminate { .. }));
    }

    #[test]
    fn powers() {
        assert_eq!(ExtReal::infinite("a").powf(-2.0), ExtReal::zero());
        assert_eq!(ExtReal::finite(4.0).powf(0.5), ExtReal::finite(2.0));
        assert!(ExtReal::zero().powf(-1.0).is_infinite());
    }

    #[test]
    fn from_f64_never_hides_divergence() {
        assert!(ExtReal::from_f64(f64::INFINITY, "x").is_infinite());
        assert!(!ExtReal::from_f64(f64::NAN, "x").is_finite());
    }
}
