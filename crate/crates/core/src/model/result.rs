use serde::Serialize;

/// Which construction produced an approximant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Compact input: `T / max(‖T‖, 1)`.
    CompactInput,
    /// `‖T‖ > 1` and the norm is not attained: the zero operator.
    NonAttaining,
    /// Successive maximizers run out; the head is scaled by `1/‖T‖`.
    FiniteHead,
    /// Infinitely many maximizers: scaled head, thresholded remainder.
    InfiniteSeries,
    /// `‖T‖ ≤ 1`: soft-threshold at the essential norm.
    SmallNorm,
    /// ℓ₁ column truncation.
    L1Truncation,
    /// Soft-threshold at the ball distance.
    SoftThreshold,
}

/// Inputs and residuals behind a distance claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub op_norm: f64,
    pub ess_norm: f64,
    /// `max(op_norm − 1, ess_norm, 0)`.
    pub formula: f64,
    /// Closed-form norm of `T − K`.
    pub residual_norm: f64,
    /// Per explicit position (ℓ₂ sequences), per singular value (dense
    /// blocks) or per column (ℓ₁).
    pub entry_residuals: Vec<f64>,
    /// Supremum of the residual over the tail.
    pub tail_residual: f64,
    /// Positions scaled by `1/‖T‖` in the head/series constructions.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scaled_positions: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallApproxResult<M> {
    /// `‖T − approximant‖`, computed from the residual.
    pub distance: f64,
    pub approximant: M,
    pub branch: Branch,
    pub certificate: Certificate,
}

impl<M> BallApproxResult<M> {
    pub fn map<N>(self, f: impl FnOnce(M) -> N) -> BallApproxResult<N> {
        BallApproxResult {
            distance: self.distance,
            approximant: f(self.approximant),
            branch: self.branch,
            certificate: self.certificate,
        }
    }
}
