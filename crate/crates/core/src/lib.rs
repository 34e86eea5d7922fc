//! Best approximation of bounded operators from the closed unit ball of the
//! compact operators, on model classes with closed-form norms.
//!
//! On ℓ₂ and ℓ₁ the distance from `T` to the ball is
//! `max(‖T‖ − 1, ‖T‖_e)` and a best approximant always exists. This crate
//! builds one explicitly for diagonal, weighted-shift, dense-block and
//! ℓ₁ column models, and ships independent oracles that check the claim.

pub mod error;
pub mod extreme;
pub mod hilbert;
pub mod instances;
pub mod l1;
pub mod model;
pub mod oracles;
pub mod schema;
pub mod svd;

pub use error::{Error, Result};
pub use extreme::{NormedSpacePoint, Space, UniquenessReport};
pub use model::{
    BallApproxResult, Branch, Certificate, DenseBlock, HilbertOperator, L1Operator, Operator,
    TailRule, WeightSequence,
};
