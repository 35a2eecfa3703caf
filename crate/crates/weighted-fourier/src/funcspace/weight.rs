//! Radial weights and their one-variable profiles.
//!
//! Every weight carries a non-increasing base profile `h0` and a scale `c`:
//! a non-increasing weight is `c h0(|x|)`, a non-decreasing one is
//! `c / h0(|x|)`. So `pow(a)` is `|x|^{-a}` on the `u` side and `|x|^{a}` on
//! the `v` side, and `ind(R)` on the `v` side means `1/v = 1_{|x|<R}`.

use super::io::read_step_csv;
use super::piece::Piece;
use super::step::{Grid, StepFunction};
use super::FuncError;
use crate::exponent::{parse_rational, qf, Q};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    RadialNonIncreasing,
    RadialNonDecreasing,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::RadialNonIncreasing => Direction::RadialNonDecreasing,
            Direction::RadialNonDecreasing => Direction::RadialNonIncreasing,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Power(Q),
    PowerLog(Q, Q),
    Indicator(f64),
    /// `h0` in the radial variable, plus the file it came from if any.
    Table(StepFunction, Option<PathBuf>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub family: Family,
    pub d: u32,
    pub direction: Direction,
    pub scale: f64,
}

fn fmt_q(x: Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale != 1.0 {
            write!(f, "{}*", self.scale)?;
        }
        match &self.family {
            Family::Power(a) => write!(f, "pow({})", fmt_q(*a))?,
            Family::PowerLog(a, b) => write!(f, "powlog({},{})", fmt_q(*a), fmt_q(*b))?,
            Family::Indicator(r) => write!(f, "ind({r})")?,
            Family::Table(_, Some(p)) => write!(f, "table({})", p.display())?,
            Family::Table(_, None) => write!(f, "table(<inline>)")?,
        }
        if self.d != 1 {
            write!(f, "@d={}", self.d)?;
        }
        Ok(())
    }
}

impl WeightSpec {
    pub fn new(family: Family, d: u32, direction: Direction) -> Result<WeightSpec, FuncError> {
        if d == 0 {
            return Err(FuncError::Parse("dimension must be positive".into()));
        }
        if let Family::Indicator(r) = family {
            if !(r > 0.0) || !r.is_finite() {
                return Err(FuncError::InvalidValue(format!("indicator radius {r} must be > 0")));
            }
        }
        Ok(WeightSpec {
            family,
            d,
            direction,
            scale: 1.0,
        })
    }

    pub fn power(a: Q, d: u32, direction: Direction) -> WeightSpec {
        WeightSpec::new(Family::Power(a), d, direction).expect("valid power weight")
    }

    /// The constant weight 1.
    pub fn one(direction: Direction) -> WeightSpec {
        WeightSpec::power(Q::zero(), 1, direction)
    }

    /// A table weight whose radial profile takes `values` (actual weight values).
    pub fn table(profile: StepFunction, d: u32, direction: Direction) -> Result<WeightSpec, FuncError> {
        let h0 = match direction {
            Direction::RadialNonIncreasing => {
                if !profile.is_nonincreasing() {
                    return Err(FuncError::NonMonotone(
                        "table weight must be non-increasing".into(),
                    ));
                }
                profile
            }
            Direction::RadialNonDecreasing => {
                if !profile.is_nondecreasing() {
                    return Err(FuncError::NonMonotone(
                        "table weight must be non-decreasing".into(),
                    ));
                }
                profile.pow_compose(-Q::one()).map_err(|_| {
                    FuncError::InvalidValue("weight vanishes on a set of positive measure".into())
                })?
            }
        };
        WeightSpec::new(Family::Table(h0, None), d, direction)
    }

    pub fn with_dim(mut self, d: u32) -> WeightSpec {
        self.d = d;
        self
    }

    pub fn scaled(&self, c: f64) -> WeightSpec {
        assert!(c > 0.0 && c.is_finite(), "weight scale must be positive");
        WeightSpec {
            scale: self.scale * c,
            ..self.clone()
        }
    }

    /// `1/w` (direction flips).
    pub fn reciprocal(&self) -> WeightSpec {
        WeightSpec {
            direction: self.direction.flip(),
            scale: 1.0 / self.scale,
            ..self.clone()
        }
    }

    /// Parses `[c*]family[@d=n]`, family one of `pow(a)`, `powlog(a,b)`,
    /// `ind(R)`, `table(path)`.
    pub fn parse(dsl: &str, direction: Direction) -> Result<WeightSpec, FuncError> {
        let s: String = dsl.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, d) = match s.split_once('@') {
            Some((b, suffix)) => {
                let n = suffix
                    .strip_prefix("d=")
                    .and_then(|n| n.parse::<u32>().ok())
                    .filter(|n| *n >= 1)
                    .ok_or_else(|| FuncError::Parse(format!("bad dimension suffix `@{suffix}`")))?;
                (b.to_string(), n)
            }
            None => (s.clone(), 1),
        };
        let (scale, body) = match body.split_once('*') {
            Some((c, rest)) if !c.contains('(') => {
                let c: f64 = c
                    .parse()
                    .map_err(|_| FuncError::Parse(format!("bad scale `{c}`")))?;
                if !(c > 0.0) || !c.is_finite() {
                    return Err(FuncError::Parse(format!("scale must be positive, got {c}")));
                }
                (c, rest.to_string())
            }
            _ => (1.0, body),
        };
        let open = body
            .find('(')
            .ok_or_else(|| FuncError::Parse(format!("expected family(args) in `{dsl}`")))?;
        if !body.ends_with(')') {
            return Err(FuncError::Parse(format!("missing `)` in `{dsl}`")));
        }
        let name = &body[..open];
        let args = &body[open + 1..body.len() - 1];
        let rat = |x: &str| parse_rational(x).map_err(|e| FuncError::Parse(e.to_string()));
        let w = match name {
            "pow" => WeightSpec::new(Family::Power(rat(args)?), d, direction)?,
            "powlog" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| FuncError::Parse("powlog takes two exponents".into()))?;
                WeightSpec::new(Family::PowerLog(rat(a)?, rat(b)?), d, direction)?
            }
            "ind" => {
                let r = qf(rat(args)?);
                WeightSpec::new(Family::Indicator(r), d, direction)?
            }
            "table" => {
                let path = PathBuf::from(args);
                let f = read_step_csv(&path)?;
                let mut w = WeightSpec::table(f, d, direction)?;
                if let Family::Table(h, _) = w.family {
                    w.family = Family::Table(h, Some(path));
                }
                w
            }
            other => return Err(FuncError::Parse(format!("unknown weight family `{other}`"))),
        };
        Ok(if scale != 1.0 { w.scaled(scale) } else { w })
    }

    /// Base profile in the radial variable.
    pub fn base(&self) -> StepFunction {
        match &self.family {
            Family::Power(a) => StepFunction::power(1.0, *a),
            Family::PowerLog(a, b) => StepFunction::from_parts(
                Grid::new(vec![0.0]).unwrap(),
                vec![],
                None,
                Some(Piece::power_log(1.0, *a, *b, Q::one())),
            )
            .unwrap(),
            Family::Indicator(r) => StepFunction::indicator(*r, 1.0),
            Family::Table(h, _) => h.clone(),
        }
    }

    /// True when the stated direction contradicts the family, e.g. `pow(a)`
    /// with `a < 0`; such a weight has an identically infinite rearrangement.
    pub fn wrong_way(&self) -> bool {
        match &self.family {
            Family::Power(a) => *a < Q::zero(),
            Family::PowerLog(..) => !self.base().is_nonincreasing(),
            _ => false,
        }
    }

    /// The weight's value at radius `r`.
    pub fn value_at(&self, r: f64) -> f64 {
        let h = self.base().eval(r);
        match self.direction {
            Direction::RadialNonIncreasing => self.scale * h,
            Direction::RadialNonDecreasing => self.scale / h,
        }
    }

    /// `h*` on `(0, ∞)` with `h = w` for non-increasing and `h = 1/w` for
    /// non-decreasing weights, i.e. `u*` or `(1/v)* = 1/v_*`.
    pub fn decreasing_profile(&self) -> Result<StepFunction, FuncError> {
        if self.wrong_way() {
            return Err(FuncError::NonMonotone(format!(
                "{self} runs against its direction; its rearrangement is identically infinite"
            )));
        }
        let c = match self.direction {
            Direction::RadialNonIncreasing => self.scale,
            Direction::RadialNonDecreasing => 1.0 / self.scale,
        };
        let h = match &self.family {
            Family::Indicator(r) => StepFunction::indicator(r.powi(self.d as i32), 1.0),
            _ => self.base().radial_to_measure(self.d)?,
        };
        Ok(h.scale(c))
    }

    /// Exact power exponent of `h*` when the weight is a pure power
    /// `c t^{-a}` (returns `(c, a)`).
    pub fn pure_power(&self) -> Option<(f64, Q)> {
        match self.family {
            Family::Power(a) if !self.wrong_way() => {
                let c = match self.direction {
                    Direction::RadialNonIncreasing => self.scale,
                    Direction::RadialNonDecreasing => 1.0 / self.scale,
                };
                Some((c, a / Q::from_integer(self.d as i64)))
            }
            _ => None,
        }
    }
}

impl Serialize for WeightSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
