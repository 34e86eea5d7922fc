//! Independent certification of distance claims.
//!
//! Competitors are drawn from the same model class as the input so every
//! residual norm is computed in closed form (or by SVD for dense blocks).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{best_ball_approx_h, soft_threshold_approx};
use crate::model::{DenseBlock, HilbertOperator, L1Operator, Operator, TailRule, WeightSequence};
use crate::svd::{self, MAX_DIM};

/// Slack for comparisons between closed-form quantities.
pub const CLOSED_FORM_TOL: f64 = 1e-10;

/// Slack for algebraic identities.
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CompetitorReport {
    pub claimed: f64,
    pub trials: usize,
    /// Smallest residual norm over all competitors.
    pub best_found: f64,
    pub best_label: String,
    pub best_competitor: Operator,
    /// No competitor beat `claimed` by more than the tolerance.
    pub never_beaten: bool,
    /// Some competitor came within the tolerance of `claimed`.
    pub attained: bool,
    pub pass: bool,
}

struct Search<'a> {
    target: &'a Operator,
    best: Option<(f64, String, Operator)>,
}

impl<'a> Search<'a> {
    fn offer(&mut self, label: &str, k: Operator) -> Result<()> {
        let r = self.target.residual_norm(&k)?;
        if self.best.as_ref().is_none_or(|(b, _, _)| r < *b) {
            self.best = Some((r, label.to_string(), k));
        }
        Ok(())
    }
}

fn into_ball_seq(explicit: Vec<f64>) -> WeightSequence {
    let sup = explicit.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let scale = 1.0 / sup.max(1.0);
    WeightSequence::new(
        explicit.into_iter().map(|v| v * scale).collect(),
        TailRule::ZERO,
    )
    .expect("finite")
}

fn into_ball_matrix(m: DMatrix<f64>) -> Result<DenseBlock> {
    let norm = svd::spectral_norm(&m)?;
    DenseBlock::new(m / norm.max(1.0))
}

fn into_ball_column(c: Vec<f64>) -> Vec<f64> {
    let mass: f64 = c.iter().map(|v| v.abs()).sum();
    let scale = 1.0 / mass.max(1.0);
    c.into_iter().map(|v| v * scale).collect()
}

fn perturbation(rng: &mut impl Rng) -> f64 {
    10f64.powf(rng.random_range(-8.0..0.0))
}

fn deterministic_hilbert(t: &HilbertOperator, search: &mut Search) -> Result<()> {
    search.offer("construction", best_ball_approx_h(t)?.approximant.into())?;
    search.offer(
        "soft_threshold",
        soft_threshold_approx(t)?.approximant.into(),
    )?;
    match t {
        HilbertOperator::FiniteMatrix(b) => {
            let clipped = svd::jacobi_svd(b.matrix())?.reconstruct_with(|s| s.min(1.0));
            search.offer(
                "svd_clip",
                HilbertOperator::FiniteMatrix(DenseBlock::new(clipped)?).into(),
            )?;
            let entry_clip = b.matrix().map(|v| v.clamp(-1.0, 1.0));
            search.offer(
                "entry_clip",
                HilbertOperator::FiniteMatrix(into_ball_matrix(entry_clip)?).into(),
            )?;
            search.offer(
                "zero",
                HilbertOperator::FiniteMatrix(DenseBlock::new(DMatrix::zeros(b.dim(), b.dim()))?)
                    .into(),
            )?;
        }
        HilbertOperator::Diagonal(s) | HilbertOperator::WeightedShift(s) => {
            let clipped = s.explicit().iter().map(|v| v.clamp(-1.0, 1.0)).collect();
            search.offer("clip", t.with_weights(into_ball_seq(clipped)).into())?;
            search.offer(
                "normalized_head",
                t.with_weights(into_ball_seq(s.explicit().to_vec())).into(),
            )?;
            search.offer("zero", t.with_weights(WeightSequence::zero()).into())?;
        }
    }
    Ok(())
}

fn random_hilbert_competitor(
    t: &HilbertOperator,
    anchor: &HilbertOperator,
    rng: &mut impl Rng,
    local: bool,
) -> Result<HilbertOperator> {
    Ok(match (t, anchor) {
        (HilbertOperator::FiniteMatrix(b), HilbertOperator::FiniteMatrix(a)) => {
            let n = b.dim();
            let m = if local {
                let eps = perturbation(rng);
                a.padded(n) + DMatrix::from_fn(n, n, |_, _| eps * rng.random_range(-1.0..=1.0))
            } else {
                DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..=1.0))
            };
            HilbertOperator::FiniteMatrix(into_ball_matrix(m)?)
        }
        _ => {
            let (s, a) = t
                .weights()
                .zip(anchor.weights())
                .ok_or(Error::ShapeMismatch {
                    left: t.shape_name(),
                    right: anchor.shape_name(),
                })?;
            let len = s.explicit().len().max(a.explicit().len()) + rng.random_range(0..=2);
            let explicit = if local {
                let eps = perturbation(rng);
                (0..len)
                    .map(|p| a.entry(p) + eps * rng.random_range(-1.0..=1.0))
                    .collect()
            } else {
                (0..len).map(|_| rng.random_range(-1.5..=1.5)).collect()
            };
            t.with_weights(into_ball_seq(explicit))
        }
    })
}

fn deterministic_l1(t: &L1Operator, search: &mut Search) -> Result<()> {
    search.offer(
        "construction",
        crate::l1::best_ball_approx_l1(t)?.approximant.into(),
    )?;
    let normalized = L1Operator::new(
        t.columns().iter().cloned().map(into_ball_column).collect(),
        t.tail_weights()
            .iter()
            .map(|w| w.clamp(-1.0, 1.0))
            .collect(),
        TailRule::ZERO,
    )?;
    search.offer("normalized_columns", normalized.into())?;
    search.offer(
        "zero",
        L1Operator::new(vec![], vec![], TailRule::ZERO)?.into(),
    )?;
    Ok(())
}

fn random_l1_competitor(
    t: &L1Operator,
    anchor: &L1Operator,
    rng: &mut impl Rng,
    local: bool,
) -> Result<L1Operator> {
    let eps = perturbation(rng);
    let columns = (0..t.columns().len())
        .map(|j| {
            let base = anchor.column(j);
            let len = t.columns()[j].len().max(base.len()) + rng.random_range(0..=1);
            let col = (0..len)
                .map(|i| {
                    if local {
                        base.get(i).copied().unwrap_or(0.0) + eps * rng.random_range(-1.0..=1.0)
                    } else {
                        rng.random_range(-1.0..=1.0)
                    }
                })
                .collect();
            into_ball_column(col)
        })
        .collect();
    let nweights = t.tail_weights().len() + rng.random_range(0..=3);
    let weights = (0..nweights)
        .map(|k| {
            let w = if local {
                anchor.tail_weights().get(k).copied().unwrap_or(0.0)
                    + eps * rng.random_range(-1.0..=1.0)
            } else {
                rng.random_range(-1.0..=1.0) * 0.7f64.powi(k as i32)
            };
            w.clamp(-1.0, 1.0)
        })
        .collect();
    L1Operator::new(columns, weights, TailRule::ZERO)
}

/// Searches compact in-ball competitors for one beating `claimed`.
///
/// Half of the random trials are uniform over the model class, half are
/// small perturbations of the best deterministic candidate.
pub fn competitor_search(
    t: &Operator,
    claimed: f64,
    trials: usize,
    seed: u64,
) -> Result<CompetitorReport> {
    competitor_search_with_tol(t, claimed, trials, seed, CLOSED_FORM_TOL)
}

/// [`competitor_search`] with an explicit comparison slack.
pub fn competitor_search_with_tol(
    t: &Operator,
    claimed: f64,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<CompetitorReport> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::Invalid {
            field: "tol".into(),
            reason: format!("tolerance {tol} must be finite and nonnegative"),
        });
    }
    let mut search = Search {
        target: t,
        best: None,
    };
    match t {
        Operator::L2(h) => deterministic_hilbert(h, &mut search)?,
        Operator::L1(l) => deterministic_l1(l, &mut search)?,
    }
    let anchor = search
        .best
        .as_ref()
        .expect("deterministic candidates")
        .2
        .clone();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..trials {
        let local = i % 2 == 1;
        let k: Operator = match (t, &anchor) {
            (Operator::L2(h), Operator::L2(a)) => {
                random_hilbert_competitor(h, a, &mut rng, local)?.into()
            }
            (Operator::L1(l), Operator::L1(a)) => {
                random_l1_competitor(l, a, &mut rng, local)?.into()
            }
            _ => unreachable!("anchor shares the model class"),
        };
        search.offer(if local { "local" } else { "random" }, k)?;
    }

    let (best_found, best_label, best_competitor) = search.best.expect("nonempty");
    let never_beaten = best_found >= claimed - tol;
    let attained = best_found <= claimed + tol;
    Ok(CompetitorReport {
        claimed,
        trials,
        best_found,
        best_label,
        best_competitor,
        never_beaten,
        attained,
        pass: never_beaten && attained,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClipOracle {
    /// `U·min(Σ, 1)·Vᵀ`.
    pub approximant: DMatrix<f64>,
    /// `max(σ₁ − 1, 0)`.
    pub distance: f64,
    /// `‖M − approximant‖` recomputed by SVD.
    pub residual_norm: f64,
    /// Distance agrees with the ball-approximation construction.
    pub agrees: bool,
}

/// Clips the singular values of `m` at 1.
pub fn svd_clip_oracle(m: &DMatrix<f64>) -> Result<ClipOracle> {
    if m.nrows() > MAX_DIM || m.ncols() > MAX_DIM {
        return Err(Error::TooLarge {
            field: "matrix".into(),
            dim: m.nrows().max(m.ncols()),
            max: MAX_DIM,
        });
    }
    let decomposition = svd::jacobi_svd(m)?;
    let approximant = decomposition.reconstruct_with(|s| s.min(1.0));
    let distance = (decomposition.largest() - 1.0).max(0.0);
    let residual_norm = svd::spectral_norm(&(m - &approximant))?;
    let construction =
        best_ball_approx_h(&HilbertOperator::FiniteMatrix(DenseBlock::new(m.clone())?))?;
    Ok(ClipOracle {
        approximant,
        distance,
        residual_norm,
        agrees: (construction.distance - distance).abs() <= CLOSED_FORM_TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionBounds {
    /// `max(‖T_N‖ − 1, 0)` for the `N × N` section.
    pub lower: f64,
    /// The distance formula value.
    pub upper: f64,
    pub consistent: bool,
}

/// Finite sections only see the `‖T‖ − 1` part of the distance formula:
/// every finite matrix is compact.
pub fn finite_section_bounds(t: &Operator, n: usize) -> Result<SectionBounds> {
    let lower = (t.section_norm(n)? - 1.0).max(0.0);
    let upper = t.dist_ball();
    Ok(SectionBounds {
        lower,
        upper,
        consistent: lower <= upper + IDENTITY_TOL,
    })
}
