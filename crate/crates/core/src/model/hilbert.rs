use nalgebra::DMatrix;

use super::tail::TailRule;
use crate::error::{check_finite, Error, Result};
use crate::svd::{self, MAX_DIM};

/// Finitely many explicit values followed by a [`TailRule`].
///
/// Serves as the diagonal of a diagonal operator, the weights of a
/// weighted shift, and the weights of the single-entry tail columns of an
/// ℓ₁ model. Positions are 0-based: position `p < explicit.len()` holds an
/// explicit value, later positions hold tail entry `p − len + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSequence {
    explicit: Vec<f64>,
    tail: TailRule,
}

impl WeightSequence {
    pub fn new(explicit: Vec<f64>, tail: TailRule) -> Result<Self> {
        for (i, &v) in explicit.iter().enumerate() {
            check_finite(&format!("explicit[{i}]"), v)?;
        }
        tail.validate("tail")?;
        Ok(WeightSequence { explicit, tail })
    }

    pub fn zero() -> Self {
        WeightSequence {
            explicit: Vec::new(),
            tail: TailRule::ZERO,
        }
    }

    pub fn explicit(&self) -> &[f64] {
        &self.explicit
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn entry(&self, p: usize) -> f64 {
        match self.explicit.get(p) {
            Some(&v) => v,
            None => self.tail.entry(p - self.explicit.len() + 1),
        }
    }

    fn explicit_sup(&self) -> f64 {
        self.explicit.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn op_norm(&self) -> f64 {
        self.explicit_sup().max(self.tail.sup_abs())
    }

    pub fn ess_norm(&self) -> f64 {
        self.tail.sup_abs()
    }

    pub fn attains_norm(&self) -> bool {
        let norm = self.op_norm();
        self.explicit.iter().any(|v| v.abs() == norm)
            || (self.tail.attains_sup() && self.tail.sup_abs() == norm)
    }

    pub fn is_compact(&self) -> bool {
        self.tail.is_zero()
    }

    pub fn scaled(&self, c: f64) -> Self {
        WeightSequence {
            explicit: self.explicit.iter().map(|v| c * v).collect(),
            tail: self.tail.scaled(c),
        }
    }

    /// `sup_p |self_p − other_p|` for a compact `other`.
    pub fn residual_norm(&self, other: &WeightSequence) -> Result<f64> {
        if !other.is_compact() {
            return Err(Error::NonCompactApproximant);
        }
        let span = self.explicit.len().max(other.explicit.len());
        let head = (0..span).fold(0.0_f64, |m, p| {
            m.max((self.entry(p) - other.entry(p)).abs())
        });
        Ok(head.max(self.tail.sup_abs()))
    }

    /// Entrywise residual magnitudes over the common explicit span.
    pub fn residuals(&self, other: &WeightSequence) -> Vec<f64> {
        let span = self.explicit.len().max(other.explicit.len());
        (0..span)
            .map(|p| (self.entry(p) - other.entry(p)).abs())
            .collect()
    }
}

/// A dense real block `M`, embedded in B(ℓ₂) as `M ⊕ 0`.
#[derive(Debug, Clone)]
pub struct DenseBlock {
    matrix: DMatrix<f64>,
    norm: f64,
}

// The cached norm is derived data and may differ in the last bits
// depending on how the block was built.
impl PartialEq for DenseBlock {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

impl DenseBlock {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                field: "matrix".into(),
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() > MAX_DIM {
            return Err(Error::TooLarge {
                field: "matrix".into(),
                dim: matrix.nrows(),
                max: MAX_DIM,
            });
        }
        for i in 0..matrix.nrows() {
            for j in 0..matrix.ncols() {
                check_finite(&format!("matrix[{i}][{j}]"), matrix[(i, j)])?;
            }
        }
        let norm = svd::spectral_norm(&matrix)?;
        Ok(DenseBlock { matrix, norm })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedRow {
                    field: "matrix".into(),
                    row: i,
                    len: row.len(),
                    expected: n,
                });
            }
        }
        DenseBlock::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn op_norm(&self) -> f64 {
        self.norm
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        DenseBlock {
            matrix: &self.matrix * c,
            norm: c.abs() * self.norm,
        }
    }

    /// `M` zero-padded to `n × n`.
    pub fn padded(&self, n: usize) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(n, n);
        let d = self.dim().min(n);
        out.view_mut((0, 0), (d, d))
            .copy_from(&self.matrix.view((0, 0), (d, d)));
        out
    }
}

/// Operator model on ℓ₂ with closed-form norms.
#[derive(Debug, Clone, PartialEq)]
pub enum HilbertOperator {
    /// `T e_n = t_n e_n`.
    Diagonal(WeightSequence),
    /// `T e_n = w_n e_{n+1}`.
    WeightedShift(WeightSequence),
    /// `M ⊕ 0`.
    FiniteMatrix(DenseBlock),
}

impl HilbertOperator {
    pub fn diagonal(entries: Vec<f64>, tail: TailRule) -> Result<Self> {
        Ok(HilbertOperator::Diagonal(WeightSequence::new(
            entries, tail,
        )?))
    }

    pub fn weighted_shift(weights: Vec<f64>, tail: TailRule) -> Result<Self> {
        Ok(HilbertOperator::WeightedShift(WeightSequence::new(
            weights, tail,
        )?))
    }

    pub fn finite_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        Ok(HilbertOperator::FiniteMatrix(DenseBlock::from_rows(rows)?))
    }

    pub fn shape_name(&self) -> &'static str {
        match self {
            HilbertOperator::Diagonal(_) => "diagonal",
            HilbertOperator::WeightedShift(_) => "weighted_shift",
            HilbertOperator::FiniteMatrix(_) => "matrix",
        }
    }

    /// The weight sequence of a diagonal or shift model.
    pub fn weights(&self) -> Option<&WeightSequence> {
        match self {
            HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => Some(s),
            HilbertOperator::FiniteMatrix(_) => None,
        }
    }

    /// Same shape, new weights. `FiniteMatrix` is returned unchanged.
    pub(crate) fn with_weights(&self, seq: WeightSequence) -> Self {
        match self {
            HilbertOperator::Diagonal(_) => HilbertOperator::Diagonal(seq),
            HilbertOperator::WeightedShift(_) => HilbertOperator::WeightedShift(seq),
            HilbertOperator::FiniteMatrix(b) => HilbertOperator::FiniteMatrix(b.clone()),
        }
    }

    pub fn op_norm(&self) -> f64 {
        match self {
            HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => s.op_norm(),
            HilbertOperator::FiniteMatrix(b) => b.op_norm(),
        }
    }

    /// Distance to the compact operators: the tail limit in modulus.
    pub fn ess_norm(&self) -> f64 {
        match self {
            HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => s.ess_norm(),
            HilbertOperator::FiniteMatrix(_) => 0.0,
        }
    }

    pub fn attains_norm(&self) -> bool {
        match self {
            HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => s.attains_norm(),
            HilbertOperator::FiniteMatrix(_) => true,
        }
    }

    pub fn is_compact(&self) -> bool {
        match self {
            HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => s.is_compact(),
            HilbertOperator::FiniteMatrix(_) => true,
        }
    }

    /// Number of leading basis vectors on which the model is not
    /// described by its tail.
    pub fn explicit_len(&self) -> usize {
        match self {
            HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => s.explicit().len(),
            HilbertOperator::FiniteMatrix(b) => b.dim(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        match self {
            HilbertOperator::Diagonal(s) => HilbertOperator::Diagonal(s.scaled(c)),
            HilbertOperator::WeightedShift(s) => HilbertOperator::WeightedShift(s.scaled(c)),
            HilbertOperator::FiniteMatrix(b) => HilbertOperator::FiniteMatrix(b.scaled(c)),
        }
    }

    /// Compression to the span of the first `n` basis vectors.
    pub fn finite_section(&self, n: usize) -> Result<DMatrix<f64>> {
        if n < self.explicit_len() || n == 0 {
            return Err(Error::SectionTooSmall {
                requested: n,
                needed: self.explicit_len().max(1),
            });
        }
        Ok(match self {
            HilbertOperator::Diagonal(s) => {
                DMatrix::from_fn(n, n, |i, j| if i == j { s.entry(i) } else { 0.0 })
            }
            HilbertOperator::WeightedShift(s) => {
                DMatrix::from_fn(n, n, |i, j| if i == j + 1 { s.entry(j) } else { 0.0 })
            }
            HilbertOperator::FiniteMatrix(b) => b.padded(n),
        })
    }

    /// `‖self − approximant‖` for a compact approximant of the same shape.
    pub fn residual_norm(&self, approximant: &HilbertOperator) -> Result<f64> {
        use HilbertOperator::*;
        match (self, approximant) {
            (Diagonal(t), Diagonal(k)) | (WeightedShift(t), WeightedShift(k)) => t.residual_norm(k),
            (FiniteMatrix(t), FiniteMatrix(k)) => {
                let n = t.dim().max(k.dim());
                svd::spectral_norm(&(t.padded(n) - k.padded(n)))
            }
            _ => Err(Error::ShapeMismatch {
                left: self.shape_name(),
                right: approximant.shape_name(),
            }),
        }
    }
}
