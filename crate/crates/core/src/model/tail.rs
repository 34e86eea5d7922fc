use crate::error::{check_finite, Error, Result};

/// Behaviour of an infinite run of diagonal entries, shift weights or
/// single-entry ℓ₁ columns.
///
/// Entry `k` (1-based) of a geometric tail is `limit·(1 − ratioᵏ)`: the
/// magnitudes increase strictly toward `|limit|` without reaching it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailRule {
    Const { limit: f64 },
    GeometricApproach { limit: f64, ratio: f64 },
}

impl TailRule {
    pub const ZERO: TailRule = TailRule::Const { limit: 0.0 };

    pub fn constant(limit: f64) -> Result<Self> {
        let tail = TailRule::Const { limit };
        tail.validate("tail")?;
        Ok(tail)
    }

    pub fn geometric(limit: f64, ratio: f64) -> Result<Self> {
        let tail = TailRule::GeometricApproach { limit, ratio };
        tail.validate("tail")?;
        Ok(tail)
    }

    pub(crate) fn validate(&self, field: &str) -> Result<()> {
        match *self {
            TailRule::Const { limit } => check_finite(&format!("{field}.value"), limit),
            TailRule::GeometricApproach { limit, ratio } => {
                check_finite(&format!("{field}.limit"), limit)?;
                check_finite(&format!("{field}.ratio"), ratio)?;
                if !(ratio > 0.0 && ratio < 1.0) {
                    return Err(Error::InvalidRatio {
                        field: format!("{field}.ratio"),
                        ratio,
                    });
                }
                if limit == 0.0 {
                    return Err(Error::ZeroGeometricLimit {
                        field: format!("{field}.limit"),
                    });
                }
                Ok(())
            }
        }
    }

    pub fn limit(&self) -> f64 {
        match *self {
            TailRule::Const { limit } | TailRule::GeometricApproach { limit, .. } => limit,
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, TailRule::Const { .. })
    }

    /// True for the `Const(0)` tail of a compact operator.
    pub fn is_zero(&self) -> bool {
        matches!(*self, TailRule::Const { limit } if limit == 0.0)
    }

    /// Tail entry `k ≥ 1`.
    pub fn entry(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        match *self {
            TailRule::Const { limit } => limit,
            TailRule::GeometricApproach { limit, ratio } => {
                let k = k.min(i32::MAX as usize) as i32;
                limit * (1.0 - ratio.powi(k))
            }
        }
    }

    /// Supremum of the entry magnitudes, which is also their limit.
    pub fn sup_abs(&self) -> f64 {
        self.limit().abs()
    }

    /// Whether some tail entry has magnitude equal to [`Self::sup_abs`].
    pub fn attains_sup(&self) -> bool {
        self.is_const()
    }

    pub fn scaled(&self, c: f64) -> Self {
        match *self {
            TailRule::Const { limit } => TailRule::Const { limit: c * limit },
            TailRule::GeometricApproach { .. } if c == 0.0 => TailRule::ZERO,
            TailRule::GeometricApproach { limit, ratio } => TailRule::GeometricApproach {
                limit: c * limit,
                ratio,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_entries_increase_toward_limit() {
        let tail = TailRule::geometric(-2.0, 0.5).unwrap();
        let mut prev = 0.0;
        for k in 1..60 {
            let e = tail.entry(k).abs();
            assert!(e >= prev);
            assert!(e < 2.0 || k > 50);
            prev = e;
        }
        assert_eq!(tail.entry(1), -1.0);
        assert_eq!(tail.entry(2), -1.5);
        assert!(!tail.attains_sup());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            TailRule::geometric(2.0, 1.5),
            Err(Error::InvalidRatio { .. })
        ));
        assert!(TailRule::geometric(2.0, 0.0).is_err());
        assert!(TailRule::geometric(0.0, 0.5).is_err());
        assert!(TailRule::constant(f64::NAN).is_err());
        assert!(TailRule::constant(f64::INFINITY).is_err());
        assert!(TailRule::constant(-1.0).is_ok());
    }

    #[test]
    fn scaling_by_zero_collapses_to_zero_tail() {
        let tail = TailRule::geometric(2.0, 0.5).unwrap();
        assert!(tail.scaled(0.0).is_zero());
        assert_eq!(tail.scaled(-3.0).limit(), -6.0);
    }
}
