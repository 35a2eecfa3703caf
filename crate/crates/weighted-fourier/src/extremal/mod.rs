//! Discretized Fourier experiments: lower bounds for the best constant and
//! the necessary-condition diagnostics.

pub mod conditions;
pub mod estimate;
pub mod signal;

pub use conditions::{
    block_l2_condition, block_sum, cube_pair_condition, symmetric_block_condition, unit_ball_volume,
    SymmetricBlocks,
};
pub use estimate::{
    annulus_radii, bracket_constant, lower_bound_annuli, lower_bound_translates, phase_witness, ratio,
    regime_upper, Budget, ConstantBracket, Discretized, Resolution, Witness,
};
pub use signal::{dft, SampledSignal};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExtremalError {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("zero denominator: ‖f v‖_p = 0")]
    ZeroDenominator,
    #[error("{0}")]
    Other(String),
}
