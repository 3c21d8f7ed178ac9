use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Detection radius used throughout the evaluation, in pixels.
pub const DEFAULT_ALPHA: f64 = 6.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// A prediction closer than `alpha` pixels to a ground-truth point can be
    /// a true positive; the comparison is strict.
    pub alpha: f64,
    /// Run the whole pipeline once per class label and macro-average.
    pub per_class: bool,
    /// AssAcc / CorresAcc when there is no true positive at all.
    pub zero_tp_policy: f64,
    /// Drop every prediction id and assign ids by temporal matching.
    pub reassign_ids: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            alpha: DEFAULT_ALPHA,
            per_class: false,
            zero_tp_policy: 0.0,
            reassign_ids: false,
        }
    }
}

impl EvalConfig {
    pub fn with_alpha(alpha: f64) -> Self {
        EvalConfig {
            alpha,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::Config(format!(
                "alpha must be a positive number (got {})",
                self.alpha
            )));
        }
        if !(0.0..=1.0).contains(&self.zero_tp_policy) {
            return Err(Error::Config(format!(
                "zero_tp_policy must lie in [0, 1] (got {})",
                self.zero_tp_policy
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_radius_is_six_pixels() {
        let c = EvalConfig::default();
        assert_eq!(c.alpha, 6.0);
        assert_eq!(c.zero_tp_policy, 0.0);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_non_positive_alpha() {
        for alpha in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(EvalConfig::with_alpha(alpha).validate().is_err(), "{alpha}");
        }
    }
}
