//! Best approximation from the unit ball of K(ℓ₁) by column truncation.
//!
//! Operators on ℓ₁ have norm equal to the largest column mass, so a
//! competitor `K` with `‖K‖ ≤ 1` can be chosen column by column. Each
//! column of `T` with mass above `d = max(‖T‖ − 1, R)` keeps its leading
//! rows and loses exactly mass `d` from the bottom; lighter columns are
//! dropped. The residual then has every column mass at most `d`.

use crate::error::Result;
use crate::model::{mass, BallApproxResult, Branch, Certificate, L1Operator, TailRule};

/// `max(‖T‖ − 1, R, 0)`.
pub fn dist_ball_l1(t: &L1Operator) -> f64 {
    (t.op_norm() - 1.0).max(t.ess_norm()).max(0.0)
}

/// Removes mass `d` from the bottom of `c`.
///
/// With `n` the last row whose suffix mass `Σ_{i≥n} |c_i|` exceeds `d` and
/// `a = (d − Σ_{i>n} |c_i|) / |c_n|`, the result keeps rows above `n`,
/// scales row `n` by `1 − a` and zeroes the rest. Columns of mass at most
/// `d` map to zero.
pub fn truncate_column(c: &[f64], d: f64) -> Vec<f64> {
    debug_assert!(d >= 0.0);
    let mut k = vec![0.0; c.len()];
    if mass(c) <= d {
        return k;
    }
    // `below` is Σ_{i>n} |c_i| while scanning n upward from the bottom.
    let mut below = 0.0;
    let mut cut = None;
    for n in (0..c.len()).rev() {
        if below + c[n].abs() > d {
            cut = Some(n);
            break;
        }
        below += c[n].abs();
    }
    let Some(n) = cut else {
        return k;
    };
    let a = ((d - below) / c[n].abs()).clamp(0.0, 1.0);
    k[..n].copy_from_slice(&c[..n]);
    k[n] = (1.0 - a) * c[n];
    k
}

fn truncate_weight(w: f64, d: f64) -> f64 {
    truncate_column(&[w], d)[0]
}

/// Column-truncation best approximant at `d = dist_ball_l1(t)`.
pub fn best_ball_approx_l1(t: &L1Operator) -> Result<BallApproxResult<L1Operator>> {
    let d = dist_ball_l1(t);
    let columns = t.columns().iter().map(|c| truncate_column(c, d)).collect();
    let tail_weights = t
        .tail_weights()
        .iter()
        .map(|&w| truncate_weight(w, d))
        .collect();
    // Truncated tail weights settle at (|limit| − d)₊, which vanishes
    // because d ≥ R = |limit|.
    let settled = truncate_weight(t.tail().limit(), d);
    assert!(
        settled == 0.0,
        "tail limit {} survives truncation at {d}",
        t.tail().limit()
    );
    let k = L1Operator::new(columns, tail_weights, TailRule::ZERO)?;

    let entry_residuals = t.residual_masses(&k);
    let residual_norm = t.residual_norm(&k)?;
    Ok(BallApproxResult {
        distance: residual_norm,
        approximant: k,
        branch: Branch::L1Truncation,
        certificate: Certificate {
            op_norm: t.op_norm(),
            ess_norm: t.ess_norm(),
            formula: d,
            residual_norm,
            entry_residuals,
            tail_residual: t.ess_norm(),
            scaled_positions: Vec::new(),
        },
    })
}

/// `max_{j<n} (mass_j − 1)₊`: a lower bound on the ball distance.
///
/// With `‖K‖ ≤ 1` the columns decouple and the best column `k_j` for
/// `t_j` leaves residual mass `(mass(t_j) − 1)₊`.
pub fn finite_column_oracle(t: &L1Operator, n: usize) -> f64 {
    (0..n)
        .map(|j| (t.column_mass(j) - 1.0).max(0.0))
        .fold(0.0, f64::max)
}
