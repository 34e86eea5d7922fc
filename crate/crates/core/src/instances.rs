//! Seeded random model instances for property checks and certification runs.
//!
//! The mixtures are tilted toward the interesting cases: explicit entries
//! tied with the tail limit, contractive operators, compact operators, and
//! geometric tails that dominate every explicit entry.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::model::{DenseBlock, HilbertOperator, L1Operator, TailRule, WeightSequence};

/// Longest explicit part generated.
pub const MAX_EXPLICIT: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HilbertShape {
    Diagonal,
    WeightedShift,
    FiniteMatrix,
}

impl HilbertShape {
    pub const ALL: [HilbertShape; 3] = [
        HilbertShape::Diagonal,
        HilbertShape::WeightedShift,
        HilbertShape::FiniteMatrix,
    ];
}

fn signed(rng: &mut impl Rng, magnitude: f64) -> f64 {
    if rng.random::<bool>() {
        magnitude
    } else {
        -magnitude
    }
}

pub fn random_tail(rng: &mut impl Rng, allow_geometric: bool) -> TailRule {
    let roll: f64 = rng.random();
    if roll < 0.2 {
        return TailRule::ZERO;
    }
    let magnitude = rng.random_range(0.05..2.5);
    let limit = signed(rng, magnitude);
    if allow_geometric && roll < 0.6 {
        TailRule::GeometricApproach {
            limit,
            ratio: rng.random_range(0.1..0.9),
        }
    } else {
        TailRule::Const { limit }
    }
}

fn random_entries(rng: &mut impl Rng, len: usize, limit: f64) -> Vec<f64> {
    (0..len)
        .map(|_| {
            let roll: f64 = rng.random();
            if roll < 0.15 && limit != 0.0 {
                signed(rng, limit.abs())
            } else if roll < 0.25 {
                0.0
            } else {
                rng.random_range(-3.5..3.5)
            }
        })
        .collect()
}

pub fn random_sequence(rng: &mut impl Rng) -> WeightSequence {
    let tail = random_tail(rng, true);
    let len = rng.random_range(0..=MAX_EXPLICIT);
    let mut explicit = random_entries(rng, len, tail.limit());
    let roll: f64 = rng.random();
    if roll < 0.15 && tail.limit() != 0.0 {
        // Every explicit entry strictly below the tail limit.
        let cap = tail.limit().abs();
        for e in &mut explicit {
            *e = rng.random_range(-cap..cap) * 0.999;
        }
    }
    let seq = WeightSequence::new(explicit, tail).expect("generated values are finite");
    if roll > 0.75 {
        // Contractive instance.
        let norm = seq.op_norm();
        if norm > 0.0 {
            return seq.scaled(rng.random_range(0.1..=1.0) / norm);
        }
    }
    seq
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let scale = if rng.random::<f64>() < 0.3 {
        0.2
    } else {
        rng.random_range(0.3..2.0)
    };
    DMatrix::from_fn(n, n, |_, _| {
        let g: f64 = StandardNormal.sample(rng);
        scale * g
    })
}

/// Random orthogonal `n × n` matrix (Q factor of a Gaussian matrix).
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
    g.qr().q()
}

/// `U·diag(sv)·Vᵀ` for random orthogonal `U`, `V`.
pub fn matrix_with_singular_values(rng: &mut impl Rng, sv: &[f64]) -> DMatrix<f64> {
    let n = sv.len();
    let u = random_orthogonal(rng, n);
    let v = random_orthogonal(rng, n);
    let s = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(sv));
    u * s * v.transpose()
}

pub fn random_hilbert(rng: &mut impl Rng, shape: HilbertShape) -> HilbertOperator {
    match shape {
        HilbertShape::Diagonal => HilbertOperator::Diagonal(random_sequence(rng)),
        HilbertShape::WeightedShift => HilbertOperator::WeightedShift(random_sequence(rng)),
        HilbertShape::FiniteMatrix => {
            let n = rng.random_range(1..=MAX_EXPLICIT);
            let m = random_matrix(rng, n);
            HilbertOperator::FiniteMatrix(DenseBlock::new(m).expect("small Gaussian matrix"))
        }
    }
}

/// Diagonal operator with nonnegative entries and tail limit.
pub fn random_positive_diagonal(rng: &mut impl Rng) -> HilbertOperator {
    let seq = random_sequence(rng);
    let tail = seq.tail();
    let tail = match tail {
        TailRule::Const { limit } => TailRule::Const { limit: limit.abs() },
        TailRule::GeometricApproach { limit, ratio } => TailRule::GeometricApproach {
            limit: limit.abs(),
            ratio,
        },
    };
    let explicit = seq.explicit().iter().map(|e| e.abs()).collect();
    HilbertOperator::Diagonal(WeightSequence::new(explicit, tail).expect("finite"))
}

pub fn random_l1(rng: &mut impl Rng) -> L1Operator {
    let tail = random_tail(rng, false);
    let ncols = rng.random_range(0..=6);
    let columns = (0..ncols)
        .map(|_| {
            let len = rng.random_range(1..=8);
            random_entries(rng, len, 0.0)
                .into_iter()
                .map(|v| v * rng.random_range(0.05..0.8))
                .collect()
        })
        .collect();
    let nweights = rng.random_range(0..=4);
    let weights = random_entries(rng, nweights, tail.limit());
    let t = L1Operator::new(columns, weights, tail).expect("finite");
    if rng.random::<f64>() < 0.25 && t.op_norm() > 0.0 {
        return t.scaled(rng.random_range(0.1..=1.0) / t.op_norm());
    }
    t
}
