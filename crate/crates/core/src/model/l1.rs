use nalgebra::DMatrix;

use super::hilbert::WeightSequence;
use super::tail::TailRule;
use crate::error::{check_finite, Error, Result};

/// Operator on ℓ₁ given by its matrix `[t_ij]`.
///
/// Columns `0..J` are explicit dense vectors starting at row 0. Column
/// `j ≥ J` has a single entry `w_{j−J}` at row `j + 1`, where the weights
/// `w` are a [`WeightSequence`] with a constant tail.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Operator {
    columns: Vec<Vec<f64>>,
    shift_tail: WeightSequence,
}

pub(crate) fn mass(column: &[f64]) -> f64 {
    column.iter().map(|v| v.abs()).sum()
}

impl L1Operator {
    pub fn new(columns: Vec<Vec<f64>>, tail_weights: Vec<f64>, tail: TailRule) -> Result<Self> {
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                check_finite(&format!("columns[{j}][{i}]"), v)?;
            }
        }
        for (i, &v) in tail_weights.iter().enumerate() {
            check_finite(&format!("tail_weights[{i}]"), v)?;
        }
        if !tail.is_const() {
            return Err(Error::ConstTailRequired {
                field: "tail.kind".into(),
            });
        }
        tail.validate("tail")?;
        Ok(L1Operator {
            columns,
            shift_tail: WeightSequence::new(tail_weights, tail)?,
        })
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn tail_weights(&self) -> &[f64] {
        self.shift_tail.explicit()
    }

    pub fn tail(&self) -> TailRule {
        self.shift_tail.tail()
    }

    /// Explicit columns plus explicitly listed tail weights.
    pub fn explicit_len(&self) -> usize {
        self.columns.len() + self.shift_tail.explicit().len()
    }

    /// Column `j` as a dense vector from row 0.
    pub fn column(&self, j: usize) -> Vec<f64> {
        match self.columns.get(j) {
            Some(col) => col.clone(),
            None => {
                let mut col = vec![0.0; j + 2];
                col[j + 1] = self.shift_tail.entry(j - self.columns.len());
                col
            }
        }
    }

    pub fn column_mass(&self, j: usize) -> f64 {
        match self.columns.get(j) {
            Some(col) => mass(col),
            None => self.shift_tail.entry(j - self.columns.len()).abs(),
        }
    }

    /// Maximum column ℓ₁-mass.
    pub fn op_norm(&self) -> f64 {
        self.columns
            .iter()
            .map(|c| mass(c))
            .fold(self.shift_tail.op_norm(), f64::max)
    }

    /// `lim_n sup_j Σ_{i≥n} |t_ij|`, which for this model is the tail limit.
    pub fn ess_norm(&self) -> f64 {
        self.shift_tail.ess_norm()
    }

    pub fn is_compact(&self) -> bool {
        self.shift_tail.is_compact()
    }

    pub fn scaled(&self, c: f64) -> Self {
        L1Operator {
            columns: self
                .columns
                .iter()
                .map(|col| col.iter().map(|v| c * v).collect())
                .collect(),
            shift_tail: self.shift_tail.scaled(c),
        }
    }

    pub fn finite_section(&self, n: usize) -> Result<DMatrix<f64>> {
        if n < self.columns.len() || n == 0 {
            return Err(Error::SectionTooSmall {
                requested: n,
                needed: self.columns.len().max(1),
            });
        }
        let mut out = DMatrix::zeros(n, n);
        for j in 0..n {
            for (i, v) in self.column(j).into_iter().enumerate().take(n) {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    /// Residual column masses `Σ_i |t_ij − k_ij|` over the explicit span of
    /// both operators.
    pub fn residual_masses(&self, approximant: &L1Operator) -> Vec<f64> {
        let span = self.explicit_len().max(approximant.explicit_len());
        (0..span)
            .map(|j| {
                let t = self.column(j);
                let k = approximant.column(j);
                let len = t.len().max(k.len());
                (0..len)
                    .map(|i| (t.get(i).unwrap_or(&0.0) - k.get(i).unwrap_or(&0.0)).abs())
                    .sum()
            })
            .collect()
    }

    /// `‖self − approximant‖` for a compact approximant.
    pub fn residual_norm(&self, approximant: &L1Operator) -> Result<f64> {
        if !approximant.is_compact() {
            return Err(Error::NonCompactApproximant);
        }
        Ok(self
            .residual_masses(approximant)
            .into_iter()
            .fold(self.ess_norm(), f64::max))
    }
}
