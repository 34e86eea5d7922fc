//! Operator model classes with closed-form norms and essential norms.

mod hilbert;
mod l1;
mod result;
mod tail;

pub use hilbert::{DenseBlock, HilbertOperator, WeightSequence};
pub(crate) use l1::mass;
pub use l1::L1Operator;
pub use result::{BallApproxResult, Branch, Certificate};
pub use tail::TailRule;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Any supported model instance.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    L2(HilbertOperator),
    L1(L1Operator),
}

impl Operator {
    pub fn op_norm(&self) -> f64 {
        match self {
            Operator::L2(t) => t.op_norm(),
            Operator::L1(t) => t.op_norm(),
        }
    }

    pub fn ess_norm(&self) -> f64 {
        match self {
            Operator::L2(t) => t.ess_norm(),
            Operator::L1(t) => t.ess_norm(),
        }
    }

    pub fn is_compact(&self) -> bool {
        match self {
            Operator::L2(t) => t.is_compact(),
            Operator::L1(t) => t.is_compact(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        match self {
            Operator::L2(t) => Operator::L2(t.scaled(c)),
            Operator::L1(t) => Operator::L1(t.scaled(c)),
        }
    }

    pub fn finite_section(&self, n: usize) -> Result<DMatrix<f64>> {
        match self {
            Operator::L2(t) => t.finite_section(n),
            Operator::L1(t) => t.finite_section(n),
        }
    }

    /// Operator norm of a finite section, in the norm of the underlying
    /// space (spectral for ℓ₂, max column sum for ℓ₁).
    pub fn section_norm(&self, n: usize) -> Result<f64> {
        let section = self.finite_section(n)?;
        match self {
            Operator::L2(_) => crate::svd::spectral_norm(&section),
            Operator::L1(_) => Ok(section
                .column_iter()
                .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
                .fold(0.0, f64::max)),
        }
    }

    pub fn residual_norm(&self, approximant: &Operator) -> Result<f64> {
        match (self, approximant) {
            (Operator::L2(t), Operator::L2(k)) => t.residual_norm(k),
            (Operator::L1(t), Operator::L1(k)) => t.residual_norm(k),
            _ => Err(Error::ShapeMismatch {
                left: self.space_name(),
                right: approximant.space_name(),
            }),
        }
    }

    pub fn space_name(&self) -> &'static str {
        match self {
            Operator::L2(_) => "l2",
            Operator::L1(_) => "l1",
        }
    }

    /// `max(‖T‖ − 1, ‖T‖_e, 0)`.
    pub fn dist_ball(&self) -> f64 {
        match self {
            Operator::L2(t) => crate::hilbert::dist_ball_h(t),
            Operator::L1(t) => crate::l1::dist_ball_l1(t),
        }
    }

    pub fn best_ball_approx(&self) -> Result<BallApproxResult<Operator>> {
        Ok(match self {
            Operator::L2(t) => crate::hilbert::best_ball_approx_h(t)?.map(Operator::L2),
            Operator::L1(t) => crate::l1::best_ball_approx_l1(t)?.map(Operator::L1),
        })
    }
}

impl From<HilbertOperator> for Operator {
    fn from(t: HilbertOperator) -> Self {
        Operator::L2(t)
    }
}

impl From<L1Operator> for Operator {
    fn from(t: L1Operator) -> Self {
        Operator::L1(t)
    }
}
