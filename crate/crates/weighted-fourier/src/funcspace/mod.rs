//! Grids, step functions with analytic ends, weights, and the curve engine.

pub mod asym;
pub mod curve;
pub mod io;
pub mod piece;
pub mod step;
pub mod weight;

pub use asym::{Asym, End};
pub use curve::{model_head, model_tail, Curve, CurveError};
pub use piece::Piece;
pub use step::{sup_over, Form, Grid, StepFunction, TailSpec};
pub use weight::{Direction, Family, WeightSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuncError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("negative power of a function that vanishes on a set of positive measure")]
    NegativePowerOfZero,
    #[error("not monotone: {0}")]
    NonMonotone(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
