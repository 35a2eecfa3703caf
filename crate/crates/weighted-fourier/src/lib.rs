//! Weighted Fourier inequalities `‖u f̂‖_q ≤ C ‖f v‖_p`: rearrangement
//! criteria, Hardy-type constants, optimal-space norms and numerical
//! lower bounds for the best constant.

pub mod calderon;
pub mod criteria;
pub mod exponent;
pub mod extended;
pub mod extremal;
pub mod funcspace;
pub mod hardy;
pub mod norms;
pub mod quad;
pub mod rearrange;

pub use exponent::{Exponent, Q};
pub use extended::ExtReal;
