//! Confidence-guided ensemble: the least confident pixels of a primary
//! prediction are replaced by a baseline prediction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{ensure_dims, fraction_count, ConfidenceMap, DisparityMap, Rounding};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Fraction of valid pixels handed to the baseline, in `[0, 1]`.
    pub replace_fraction: f64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self { replace_fraction: 0.15 }
    }
}

impl EnsembleConfig {
    pub fn new(replace_fraction: f64) -> Result<Self> {
        let cfg = Self { replace_fraction };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if (0.0..=1.0).contains(&self.replace_fraction) {
            Ok(())
        } else {
            Err(Error::domain(format!("replace fraction {} outside [0, 1]", self.replace_fraction)))
        }
    }
}

/// Row-major indices of the `floor(q * n_valid)` least confident valid pixels of
/// `primary`, ties broken by ascending index.
pub fn replaced_pixels<T: Scalar>(
    primary: &DisparityMap<T>,
    conf: &ConfidenceMap<T>,
    cfg: &EnsembleConfig,
) -> Result<Vec<usize>> {
    cfg.validate()?;
    ensure_dims(primary.dims(), conf.dims())?;
    let mut order: Vec<usize> = (0..primary.len()).filter(|&i| primary.is_valid(i)).collect();
    let n_replace = fraction_count(cfg.replace_fraction, order.len(), Rounding::Floor).min(order.len());
    order.sort_by(|&i, &j| conf.value(i).partial_cmp(&conf.value(j)).expect("confidence is finite"));
    order.truncate(n_replace);
    Ok(order)
}

/// Replaces the least confident fraction of `primary` with `baseline`.
/// The output keeps the primary's validity mask.
pub fn conf_guided_ensemble<T: Scalar>(
    primary: &DisparityMap<T>,
    conf: &ConfidenceMap<T>,
    baseline: &DisparityMap<T>,
    cfg: &EnsembleConfig,
) -> Result<DisparityMap<T>> {
    ensure_dims(primary.dims(), baseline.dims())?;
    if let Some(i) = (0..primary.len()).find(|&i| primary.is_valid(i) && !baseline.is_valid(i)) {
        return Err(Error::invalid(format!("baseline invalid at pixel {i} where primary is valid")));
    }
    let mut values = primary.values().to_vec();
    for i in replaced_pixels(primary, conf, cfg)? {
        values[i] = baseline.value(i);
    }
    DisparityMap::new(primary.width(), primary.height(), values, primary.valid().to_vec())
}
