//! Endpoint asymptotics `f(t) ~ c t^a L(t)^b`, with `L = log(1/t)` near 0 and
//! `L = log t` near infinity. Exponents are exact so convergence decisions are.

use crate::exponent::{qf, Q};
use num_traits::{One, Zero};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Zero,
    Inf,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Asym {
    /// Identically zero near the endpoint.
    Zero,
    Pow { c: f64, a: Q, b: Q },
    /// Identically `+inf` near the endpoint.
    Infinite,
}

impl std::fmt::Display for Asym {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Asym::Zero => write!(f, "0"),
            Asym::Infinite => write!(f, "∞"),
            Asym::Pow { c, a, b } => {
                write!(f, "{c}")?;
                if !a.is_zero() {
                    write!(f, "·t^({a})")?;
                }
                if !b.is_zero() {
                    write!(f, "·L^({b})")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("asymptotics not representable: {0}")]
pub struct AsymError(pub String);

impl Asym {
    pub fn pow(c: f64, a: Q, b: Q) -> Asym {
        if c == 0.0 {
            Asym::Zero
        } else if c.is_infinite() {
            Asym::Infinite
        } else {
            Asym::Pow { c, a, b }
        }
    }

    pub fn constant(c: f64) -> Asym {
        Asym::pow(c, Q::zero(), Q::zero())
    }

    /// Growth key at `end`: larger means larger near that endpoint.
    fn key(a: Q, b: Q, end: End) -> (Q, Q) {
        match end {
            End::Inf => (a, b),
            End::Zero => (-a, b),
        }
    }

    pub fn scale(&self, k: f64) -> Asym {
        match self {
            Asym::Pow { c, a, b } => Asym::pow(c * k, *a, *b),
            Asym::Zero => Asym::Zero,
            Asym::Infinite => {
                if k == 0.0 {
                    Asym::Zero
                } else {
                    Asym::Infinite
                }
            }
        }
    }

    /// Product; `0 * inf = 0`.
    pub fn mul(&self, other: &Asym) -> Asym {
        match (self, other) {
            (Asym::Zero, _) | (_, Asym::Zero) => Asym::Zero,
            (Asym::Infinite, _) | (_, Asym::Infinite) => Asym::Infinite,
            (Asym::Pow { c: c1, a: a1, b: b1 }, Asym::Pow { c: c2, a: a2, b: b2 }) => {
                Asym::pow(c1 * c2, a1 + a2, b1 + b2)
            }
        }
    }

    pub fn powq(&self, e: Q) -> Asym {
        if e.is_zero() {
            return Asym::constant(1.0);
        }
        match self {
            Asym::Zero => {
                if e > Q::zero() {
                    Asym::Zero
                } else {
                    Asym::Infinite
                }
            }
            Asym::Infinite => {
                if e > Q::zero() {
                    Asym::Infinite
                } else {
                    Asym::Zero
                }
            }
            Asym::Pow { c, a, b } => Asym::pow(c.powf(qf(e)), a * e, b * e),
        }
    }

    pub fn add(&self, other: &Asym, end: End) -> Asym {
        match (self, other) {
            (Asym::Zero, x) | (x, Asym::Zero) => x.clone(),
            (Asym::Infinite, _) | (_, Asym::Infinite) => Asym::Infinite,
            (Asym::Pow { c: c1, a: a1, b: b1 }, Asym::Pow { c: c2, a: a2, b: b2 }) => {
                match Self::key(*a1, *b1, end).cmp(&Self::key(*a2, *b2, end)) {
                    Ordering::Greater => self.clone(),
                    Ordering::Less => other.clone(),
                    Ordering::Equal => Asym::pow(c1 + c2, *a1, *b1),
                }
            }
        }
    }

    /// Asymptotics of `t -> f(k t)`, `k > 0`.
    pub fn dilate(&self, k: f64) -> Asym {
        match self {
            Asym::Pow { c, a, b } => Asym::pow(c * k.powf(qf(*a)), *a, *b),
            other => other.clone(),
        }
    }

    /// Asymptotics of `t -> f(t^k)`, `k > 0`.
    pub fn compose_power(&self, k: Q) -> Asym {
        match self {
            Asym::Pow { c, a, b } => Asym::pow(c * qf(k).powf(qf(*b)), a * k, *b),
            other => other.clone(),
        }
    }

    /// Asymptotics of `t -> f(1/t)` at the opposite endpoint.
    pub fn reflect(&self) -> Asym {
        match self {
            Asym::Pow { c, a, b } => Asym::pow(*c, -a, *b),
            other => other.clone(),
        }
    }

    pub fn integrable(&self, end: End) -> bool {
        match self {
            Asym::Zero => true,
            Asym::Infinite => false,
            Asym::Pow { a, b, .. } => {
                let m1 = -Q::one();
                match end {
                    End::Zero => *a > m1 || (*a == m1 && *b < m1),
                    End::Inf => *a < m1 || (*a == m1 && *b < m1),
                }
            }
        }
    }

    /// True when the function is unbounded near `end`.
    pub fn unbounded(&self, end: End) -> bool {
        match self {
            Asym::Zero => false,
            Asym::Infinite => true,
            Asym::Pow { a, b, .. } => Self::key(*a, *b, end) > (Q::zero(), Q::zero()),
        }
    }

    /// Limit value at `end` when bounded there.
    pub fn limit(&self, end: End) -> Option<f64> {
        match self {
            Asym::Zero => Some(0.0),
            Asym::Infinite => None,
            Asym::Pow { c, a, b } => match Self::key(*a, *b, end).cmp(&(Q::zero(), Q::zero())) {
                Ordering::Less => Some(0.0),
                Ordering::Equal => Some(*c),
                Ordering::Greater => None,
            },
        }
    }

    /// Exponents `(a, b)` if this is a power law.
    pub fn exponents(&self) -> Option<(Q, Q)> {
        match self {
            Asym::Pow { a, b, .. } => Some((*a, *b)),
            _ => None,
        }
    }

    /// Asymptotics of `F(t) = ∫_0^t f` at `end`. `total` is `∫_0^∞ f` when finite.
    pub fn head_integral(&self, end: End, total: Option<f64>) -> Result<Asym, AsymError> {
        let m1 = -Q::one();
        match end {
            End::Zero => match self {
                Asym::Zero => Ok(Asym::Zero),
                Asym::Infinite => Err(AsymError("not integrable at 0".into())),
                Asym::Pow { c, a, b } => {
                    if *a > m1 {
                        Ok(Asym::pow(c / qf(a + 1), a + 1, *b))
                    } else if *a == m1 && *b < m1 {
                        Ok(Asym::pow(c / qf(-(b + 1)), Q::zero(), b + 1))
                    } else {
                        Err(AsymError("not integrable at 0".into()))
                    }
                }
            },
            End::Inf => {
                if self.integrable(End::Inf) {
                    return Ok(Asym::constant(total.unwrap_or(0.0)));
                }
                match self {
                    Asym::Infinite => Ok(Asym::Infinite),
                    Asym::Pow { c, a, b } => {
                        if *a > m1 {
                            Ok(Asym::pow(c / qf(a + 1), a + 1, *b))
                        } else if *b > m1 {
                            Ok(Asym::pow(c / qf(b + 1), Q::zero(), b + 1))
                        } else {
                            Err(AsymError("log-log growth".into()))
                        }
                    }
                    Asym::Zero => unreachable!(),
                }
            }
        }
    }

    /// Asymptotics of `G(t) = ∫_t^∞ f` at `end`. `total` as in `head_integral`.
    pub fn tail_integral(&self, end: End, total: Option<f64>) -> Result<Asym, AsymError> {
        let m1 = -Q::one();
        match end {
            End::Inf => match self {
                Asym::Zero => Ok(Asym::Zero),
                Asym::Infinite => Err(AsymError("not integrable at infinity".into())),
                Asym::Pow { c, a, b } => {
                    if *a < m1 {
                        Ok(Asym::pow(c / qf(-(a + 1)), a + 1, *b))
                    } else if *a == m1 && *b < m1 {
                        Ok(Asym::pow(c / qf(-(b + 1)), Q::zero(), b + 1))
                    } else {
                        Err(AsymError("not integrable at infinity".into()))
                    }
                }
            },
            End::Zero => {
                if self.integrable(End::Zero) {
                    return Ok(Asym::constant(total.unwrap_or(0.0)));
                }
                match self {
                    Asym::Infinite => Ok(Asym::Infinite),
                    Asym::Pow { c, a, b } => {
                        if *a < m1 {
                            Ok(Asym::pow(c / qf(-(a + 1)), a + 1, *b))
                        } else if *b > m1 {
                            Ok(Asym::pow(c / qf(b + 1), Q::zero(), b + 1))
                        } else {
                            Err(AsymError("log-log growth".into()))
                        }
                    }
                    Asym::Zero => unreachable!(),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qi};

    #[test]
    fn display() {
        assert_eq!(Asym::pow(2.0, q(-1, 3), qi(0)).to_string(), "2·t^(-1/3)");
        assert_eq!(Asym::pow(1.0, qi(0), qi(1)).to_string(), "1·L^(1)");
        assert_eq!(Asym::Zero.to_string(), "0");
    }

    #[test]
    fn integrability_thresholds() {
        let p = |a: Q, b: Q| Asym::pow(1.0, a, b);
        assert!(p(q(-1, 2), qi(0)).integrable(End::Zero));
        assert!(!p(qi(-1), qi(0)).integrable(End::Zero));
        assert!(p(qi(-1), qi(-2)).integrable(End::Zero));
        assert!(!p(qi(-1), qi(-1)).integrable(End::Inf));
        assert!(p(q(-3, 2), qi(5)).integrable(End::Inf));
    }

    #[test]
    fn dominance_depends_on_end() {
        let small_a = Asym::pow(1.0, qi(1), qi(0));
        let large_a = Asym::pow(2.0, qi(2), qi(0));
        assert_eq!(small_a.add(&large_a, End::Inf), large_a);
        assert_eq!(small_a.add(&large_a, End::Zero), small_a);
        let same = Asym::pow(3.0, qi(1), qi(0));
        assert_eq!(small_a.add(&same, End::Zero), Asym::pow(4.0, qi(1), qi(0)));
    }

    #[test]
    fn head_integral_of_power() {
        let f = Asym::pow(1.0, q(-1, 2), qi(0));
        assert_eq!(
            f.head_integral(End::Zero, None).unwrap(),
            Asym::pow(2.0, q(1, 2), qi(0))
        );
        assert!(Asym::pow(1.0, qi(-1), qi(0)).head_integral(End::Zero, None).is_err());
    }

    #[test]
    fn reflect_swaps_sign() {
        assert_eq!(
            Asym::pow(1.0, q(1, 3), qi(2)).reflect(),
            Asym::pow(1.0, q(-1, 3), qi(2))
        );
    }
}
