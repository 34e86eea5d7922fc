//! Best approximation from the closed unit ball of the compact operators on
//! ℓ₂, for the diagonal, weighted-shift and dense-block models.
//!
//! For every `T` the distance to the ball is `max(‖T‖ − 1, ‖T‖_e)`. The
//! approximant is built by cases:
//!
//! * compact `T`: `T / max(‖T‖, 1)`;
//! * `‖T‖ > 1`, norm not attained: `0` (then `‖T‖ = ‖T‖_e`);
//! * `‖T‖ > 1`, norm attained: pick successive norm-attaining basis vectors
//!   of the restrictions to the orthogonal complement. If that stops after
//!   finitely many steps the picked entries are scaled by `1/‖T‖` and
//!   everything else is zero. If it never stops the first `K` picked
//!   entries are scaled by `1/‖T‖` and later picked entries `e` become
//!   `sign(e)(|e| − Δ)`, with `K` the shortest head after which every
//!   picked entry satisfies `|e| − Δ ≤ 1`;
//! * `‖T‖ ≤ 1`: soft-threshold every entry at `Δ = ‖T‖_e`.
//!
//! For diagonal and shift models the picked basis vectors are the
//! positions in nonincreasing order of entry magnitude, explicit positions
//! before tail positions on ties, lower index first.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{
    BallApproxResult, Branch, Certificate, HilbertOperator, TailRule, WeightSequence,
};
use crate::svd;

/// Tolerance for the isometry identity check.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// `max(‖T‖ − 1, ‖T‖_e, 0)`.
pub fn dist_ball_h(t: &HilbertOperator) -> f64 {
    (t.op_norm() - 1.0).max(t.ess_norm()).max(0.0)
}

fn soft(e: f64, d: f64) -> f64 {
    let m = e.abs() - d;
    if m > 0.0 {
        e.signum() * m
    } else {
        0.0
    }
}

fn compact_seq(explicit: Vec<f64>) -> WeightSequence {
    WeightSequence::new(explicit, TailRule::ZERO).expect("finite entries")
}

fn sequence_approx(seq: &WeightSequence) -> (WeightSequence, Branch, Vec<usize>) {
    let norm = seq.op_norm();
    let delta = seq.ess_norm();
    let explicit = seq.explicit();

    if seq.is_compact() {
        let scale = 1.0 / norm.max(1.0);
        let k = explicit.iter().map(|e| e * scale).collect();
        return (compact_seq(k), Branch::CompactInput, Vec::new());
    }

    if norm <= 1.0 {
        let k = explicit.iter().map(|&e| soft(e, delta)).collect();
        return (compact_seq(k), Branch::SmallNorm, Vec::new());
    }

    if !seq.attains_norm() {
        return (WeightSequence::zero(), Branch::NonAttaining, Vec::new());
    }

    // Explicit positions picked before the tail, in pick order.
    let mut picked: Vec<usize> = (0..explicit.len())
        .filter(|&p| explicit[p].abs() >= delta)
        .collect();
    picked.sort_by(|&p, &q| {
        explicit[q]
            .abs()
            .partial_cmp(&explicit[p].abs())
            .unwrap_or(Ordering::Equal)
            .then(p.cmp(&q))
    });

    if !seq.tail().attains_sup() {
        // Once the explicit entries at or above Δ are used up, the
        // remaining supremum Δ is not attained and the picking stops.
        let mut k = vec![0.0; explicit.len()];
        for &p in &picked {
            k[p] = explicit[p] / norm;
        }
        return (compact_seq(k), Branch::FiniteHead, picked);
    }

    // Constant tail: the picks continue through every tail position.
    let over = picked
        .iter()
        .take_while(|&&p| explicit[p].abs() - delta > 1.0)
        .count();
    let head = over.max(1);

    let mut k = vec![0.0; explicit.len()];
    let mut scaled = Vec::with_capacity(head);
    for (rank, &p) in picked.iter().enumerate() {
        k[p] = if rank < head {
            scaled.push(p);
            explicit[p] / norm
        } else {
            soft(explicit[p], delta)
        };
    }
    if scaled.len() < head {
        // No explicit entry reaches Δ: the first pick is tail position 0.
        let p = explicit.len();
        k.push(seq.entry(p) / norm);
        scaled.push(p);
    }
    (compact_seq(k), Branch::InfiniteSeries, scaled)
}

fn certify(
    t: &HilbertOperator,
    k: HilbertOperator,
    branch: Branch,
    scaled_positions: Vec<usize>,
) -> Result<BallApproxResult<HilbertOperator>> {
    let (residual_norm, entry_residuals, tail_residual) = match (t, &k) {
        (HilbertOperator::FiniteMatrix(tm), HilbertOperator::FiniteMatrix(km)) => {
            let n = tm.dim().max(km.dim());
            let sv = svd::jacobi_svd(&(tm.padded(n) - km.padded(n)))?.singular_values;
            (sv.first().copied().unwrap_or(0.0), sv, 0.0)
        }
        _ => {
            let (ts, ks) = t.weights().zip(k.weights()).ok_or(Error::ShapeMismatch {
                left: t.shape_name(),
                right: k.shape_name(),
            })?;
            (ts.residual_norm(ks)?, ts.residuals(ks), ts.ess_norm())
        }
    };
    Ok(BallApproxResult {
        distance: residual_norm,
        approximant: k,
        branch,
        certificate: Certificate {
            op_norm: t.op_norm(),
            ess_norm: t.ess_norm(),
            formula: dist_ball_h(t),
            residual_norm,
            entry_residuals,
            tail_residual,
            scaled_positions,
        },
    })
}

/// Best approximant to `t` from the unit ball of the compact operators.
pub fn best_ball_approx_h(t: &HilbertOperator) -> Result<BallApproxResult<HilbertOperator>> {
    match t {
        HilbertOperator::FiniteMatrix(block) => {
            let k = HilbertOperator::FiniteMatrix(block.scaled(1.0 / block.op_norm().max(1.0)));
            certify(t, k, Branch::CompactInput, Vec::new())
        }
        HilbertOperator::Diagonal(seq) | HilbertOperator::WeightedShift(seq) => {
            let (k, branch, scaled) = sequence_approx(seq);
            certify(t, t.with_weights(k), branch, scaled)
        }
    }
}

/// Soft-thresholds entries (or singular values) at `d = dist_ball_h(t)`.
///
/// Always optimal, usually different from [`best_ball_approx_h`].
pub fn soft_threshold_approx(t: &HilbertOperator) -> Result<BallApproxResult<HilbertOperator>> {
    let d = dist_ball_h(t);
    let k = match t {
        HilbertOperator::FiniteMatrix(block) => {
            let m = svd::jacobi_svd(block.matrix())?.reconstruct_with(|s| (s - d).max(0.0));
            HilbertOperator::FiniteMatrix(crate::model::DenseBlock::new(m)?)
        }
        HilbertOperator::Diagonal(seq) | HilbertOperator::WeightedShift(seq) => t.with_weights(
            compact_seq(seq.explicit().iter().map(|&e| soft(e, d)).collect()),
        ),
    };
    certify(t, k, Branch::SoftThreshold, Vec::new())
}

/// Checks `d(aV, B_K) = d(aV, K) = |a|` for an isometric weighted shift `V`.
pub fn isometry_distance_check(a: f64, t: &HilbertOperator) -> Result<bool> {
    let seq = match t {
        HilbertOperator::WeightedShift(seq) => seq,
        other => {
            return Err(Error::NotIsometry {
                reason: format!("expected a weighted shift, got {}", other.shape_name()),
            })
        }
    };
    if let Some(w) = seq.explicit().iter().find(|w| w.abs() != 1.0) {
        return Err(Error::NotIsometry {
            reason: format!("weight {w} has modulus other than 1"),
        });
    }
    match seq.tail() {
        TailRule::Const { limit } if limit.abs() == 1.0 => {}
        tail => {
            return Err(Error::NotIsometry {
                reason: format!("tail {tail:?} is not a constant of modulus 1"),
            })
        }
    }
    if !a.is_finite() {
        return Err(Error::NonFinite {
            field: "a".into(),
            value: a,
        });
    }

    let scaled = t.scaled(a);
    let to_ball = dist_ball_h(&scaled);
    let to_compacts = scaled.ess_norm();
    let constructed = best_ball_approx_h(&scaled)?.distance;
    Ok((to_ball - to_compacts).abs() <= ISOMETRY_TOL
        && (to_compacts - a.abs()).abs() <= ISOMETRY_TOL
        && (constructed - to_ball).abs() <= ISOMETRY_TOL)
}

/// Best approximant that is itself a positive diagonal operator.
pub fn positive_ball_approx(t: &HilbertOperator) -> Result<BallApproxResult<HilbertOperator>> {
    let seq = match t {
        HilbertOperator::Diagonal(seq) => seq,
        other => {
            return Err(Error::Invalid {
                field: "model".into(),
                reason: format!(
                    "positive approximation needs a diagonal model, got {}",
                    other.shape_name()
                ),
            })
        }
    };
    for (i, &e) in seq.explicit().iter().enumerate() {
        if e < 0.0 {
            return Err(Error::NegativeEntry {
                field: format!("explicit[{i}]"),
                value: e,
            });
        }
    }
    let limit = seq.tail().limit();
    if limit < 0.0 {
        let field = if seq.tail().is_const() {
            "tail.value"
        } else {
            "tail.limit"
        };
        return Err(Error::NegativeEntry {
            field: field.into(),
            value: limit,
        });
    }
    let result = best_ball_approx_h(t)?;
    debug_assert!(result
        .approximant
        .weights()
        .is_some_and(|k| k.explicit().iter().all(|&e| e >= 0.0)));
    Ok(result)
}
