//! Metric projection of `αe` onto the unit ball when `e` is an extreme
//! point, in the finite-dimensional spaces ℓ₁ⁿ, ℓ₂ⁿ and ℓ∞ⁿ.
//!
//! The nearest point of the ball to `αe` (`|α| > 1`) is the radial
//! projection `αe/|α|`, at distance `|α| − 1`, and it is the only nearest
//! point. Uniqueness can fail for non-extreme unit vectors: in ℓ∞² every
//! `(1, t)` with `|t| ≤ 1` is nearest to `(2, 0)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

/// Slack on unit-norm and ball-membership comparisons.
pub const UNIT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    L1,
    L2,
    Linf,
}

impl Space {
    pub fn norm(self, x: &[f64]) -> f64 {
        match self {
            Space::L1 => x.iter().map(|v| v.abs()).sum(),
            Space::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Space::Linf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    pub fn distance(self, x: &[f64], y: &[f64]) -> f64 {
        let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.norm(&diff)
    }
}

impl std::str::FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(Space::L1),
            "l2" => Ok(Space::L2),
            "linf" => Ok(Space::Linf),
            other => Err(Error::Invalid {
                field: "space".into(),
                reason: format!("unknown space {other:?}, expected l1, l2 or linf"),
            }),
        }
    }
}

/// A vector of ℓ₁ⁿ, ℓ₂ⁿ or ℓ∞ⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormedSpacePoint {
    pub space: Space,
    pub coords: Vec<f64>,
}

impl NormedSpacePoint {
    pub fn new(space: Space, coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Invalid {
                field: "point".into(),
                reason: "dimension must be positive".into(),
            });
        }
        for (i, &v) in coords.iter().enumerate() {
            check_finite(&format!("point[{i}]"), v)?;
        }
        Ok(NormedSpacePoint { space, coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.space.norm(&self.coords)
    }
}

/// Whether `p` is an extreme point of the closed unit ball of its space.
pub fn is_extreme(p: &NormedSpacePoint) -> Result<bool> {
    let norm = p.norm();
    if norm > 1.0 + UNIT_TOL {
        return Err(Error::OutsideBall { norm });
    }
    let unit = |v: f64| (v.abs() - 1.0).abs() <= UNIT_TOL;
    Ok(match p.space {
        Space::Linf => p.coords.iter().all(|&v| unit(v)),
        Space::L1 => {
            let nonzero: Vec<f64> = p.coords.iter().copied().filter(|&v| v != 0.0).collect();
            nonzero.len() == 1 && unit(nonzero[0])
        }
        Space::L2 => (norm - 1.0).abs() <= UNIT_TOL,
    })
}

/// Nearest point of the unit ball to `αe` and its distance.
pub fn project_scalar_multiple(
    alpha: f64,
    e: &NormedSpacePoint,
) -> Result<(NormedSpacePoint, f64)> {
    check_finite("alpha", alpha)?;
    if alpha.abs() <= 1.0 {
        return Err(Error::AlphaTooSmall { alpha });
    }
    if !is_extreme(e)? {
        return Err(Error::NotExtreme);
    }
    Ok((radial(alpha, e), alpha.abs() - 1.0))
}

fn radial(alpha: f64, e: &NormedSpacePoint) -> NormedSpacePoint {
    let s = alpha.signum();
    NormedSpacePoint {
        space: e.space,
        coords: e.coords.iter().map(|v| s * v + 0.0).collect(),
    }
}

/// Outcome of [`verify_unique_projection`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessReport {
    pub samples: usize,
    /// `|α| − 1`.
    pub distance: f64,
    /// Smallest `‖αe − f‖` over the samples.
    pub min_found: f64,
    /// No sample is closer than `|α| − 1` (up to [`UNIT_TOL`]).
    pub no_closer_point: bool,
    /// Samples within `tol` of the minimal distance.
    pub near_minimizers: usize,
    /// Largest distance from a near-minimizer to the radial projection.
    pub radius: f64,
    /// Allowed radius for the given tolerance.
    pub radius_bound: f64,
    /// Largest distance between the worst offender and another
    /// near-minimizer.
    pub spread: f64,
    pub worst_offender: Option<Vec<f64>>,
    pub pass: bool,
}

/// Largest distance from `αe/|α|` to a point of the ball whose distance to
/// `αe` is within `tol` of `|α| − 1`, when `e` is extreme.
///
/// In ℓ₁ and ℓ∞ the excess distance grows linearly with the displacement,
/// so the bound is `tol`. In ℓ₂ the near-minimal set is a lens whose rim
/// lies at distance `sqrt((2(|α|−1)tol + tol²)/|α|) < sqrt(2tol + tol²)`.
pub fn radius_bound(space: Space, tol: f64) -> f64 {
    match space {
        Space::L1 | Space::Linf => tol,
        Space::L2 => (2.0 * tol + tol * tol).sqrt(),
    }
}

/// Samples the unit ball of `e.space` and checks that `αe/|α|` is the
/// unique nearest point to `αe`.
///
/// `e` must be a unit vector but need not be extreme; for non-extreme `e`
/// the report is expected to fail the radius check.
pub fn verify_unique_projection(
    alpha: f64,
    e: &NormedSpacePoint,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<UniquenessReport> {
    check_finite("alpha", alpha)?;
    check_finite("tol", tol)?;
    if alpha.abs() <= 1.0 {
        return Err(Error::AlphaTooSmall { alpha });
    }
    let norm = e.norm();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit { norm });
    }
    if samples == 0 || tol < 0.0 {
        return Err(Error::Invalid {
            field: "samples".into(),
            reason: "need at least one sample and a nonnegative tolerance".into(),
        });
    }

    let space = e.space;
    let target: Vec<f64> = e.coords.iter().map(|v| alpha * v).collect();
    let projection = radial(alpha, e).coords;
    let distance = alpha.abs() - 1.0;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_found = f64::INFINITY;
    let mut near = Vec::new();
    for i in 0..samples {
        let f = match i % 4 {
            0 => sample_interior(space, e.dim(), &mut rng),
            1 | 2 => sample_boundary(space, e.dim(), &mut rng),
            _ => sample_near(space, &projection, &mut rng),
        };
        let d = space.distance(&target, &f);
        min_found = min_found.min(d);
        if d <= distance + tol {
            near.push(f);
        }
    }

    let mut radius = 0.0;
    let mut worst: Option<&Vec<f64>> = None;
    for f in &near {
        let r = space.distance(f, &projection);
        if r > radius {
            radius = r;
            worst = Some(f);
        }
    }
    let spread = worst.map_or(0.0, |w| {
        near.iter()
            .map(|f| space.distance(f, w))
            .fold(0.0, f64::max)
    });

    let bound = radius_bound(space, tol);
    let no_closer_point = min_found >= distance - UNIT_TOL;
    Ok(UniquenessReport {
        samples,
        distance,
        min_found,
        no_closer_point,
        near_minimizers: near.len(),
        radius,
        radius_bound: bound,
        spread,
        worst_offender: worst.cloned(),
        pass: no_closer_point && radius <= bound + UNIT_TOL,
    })
}

fn random_sign(rng: &mut impl Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// Point of the unit ℓ₁ sphere supported on a random subset of `k`
/// coordinates.
fn l1_sphere(dim: usize, k: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    let mut idx: Vec<usize> = (0..dim).collect();
    for i in 0..k {
        let j = rng.random_range(i..dim);
        idx.swap(i, j);
    }
    let weights: Vec<f64> = (0..k).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = weights.iter().sum();
    for (&i, w) in idx.iter().take(k).zip(weights) {
        x[i] = random_sign(rng) * w / total;
    }
    x
}

fn sample_interior(space: Space, dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    match space {
        Space::Linf => (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect(),
        Space::L2 => loop {
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
            if Space::L2.norm(&x) <= 1.0 {
                break x;
            }
        },
        Space::L1 => {
            let r: f64 = rng.random::<f64>().powf(1.0 / dim as f64);
            l1_sphere(dim, dim, rng)
                .into_iter()
                .map(|v| r * v)
                .collect()
        }
    }
}

fn sample_boundary(space: Space, dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    match space {
        Space::Linf => {
            // Pin a random nonempty set of coordinates to ±1: faces of every
            // dimension, down to the vertices.
            let pinned = rng.random_range(1..=dim);
            let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect();
            let mut idx: Vec<usize> = (0..dim).collect();
            for i in 0..pinned {
                let j = rng.random_range(i..dim);
                idx.swap(i, j);
                x[idx[i]] = random_sign(rng);
            }
            x
        }
        Space::L2 => {
            let g: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
            let n = Space::L2.norm(&g);
            g.into_iter().map(|v| v / n).collect()
        }
        Space::L1 => {
            let k = rng.random_range(1..=dim);
            l1_sphere(dim, k, rng)
        }
    }
}

/// Small perturbation of `center`, pulled back into the ball.
fn sample_near(space: Space, center: &[f64], rng: &mut impl Rng) -> Vec<f64> {
    let scale = 10f64.powf(rng.random_range(-6.0..0.0));
    let x: Vec<f64> = center
        .iter()
        .map(|c| c + scale * rng.random_range(-1.0..=1.0))
        .collect();
    let n = space.norm(&x);
    if n > 1.0 {
        x.into_iter().map(|v| v / n).collect()
    } else {
        x
    }
}
