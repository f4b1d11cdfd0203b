//! Dense per-pixel grids: disparity with a validity mask, and confidence.
//!
//! Both grids are stored row-major; pixel `(x, y)` lives at index `y * width + x`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense disparity field with a validity mask (ground truth or prediction).
///
/// Invalid pixels carry the value 0 and are ignored by every statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct DisparityMap<T> {
    width: usize,
    height: usize,
    values: Vec<T>,
    valid: Vec<bool>,
}

impl<T: Scalar> DisparityMap<T> {
    /// Builds a map from row-major values and mask. Invalid values are zeroed;
    /// a non-finite value on a valid pixel is rejected.
    pub fn new(width: usize, height: usize, mut values: Vec<T>, valid: Vec<bool>) -> Result<Self> {
        let n = width * height;
        if values.len() != n || valid.len() != n {
            return Err(Error::invalid(format!(
                "{width}x{height} map needs {n} values and mask entries, got {} and {}",
                values.len(),
                valid.len()
            )));
        }
        for (v, &ok) in values.iter_mut().zip(&valid) {
            if !ok {
                *v = T::zero();
            } else if !v.is_finite() {
                return Err(Error::invalid("non-finite disparity on a valid pixel"));
            }
        }
        Ok(Self { width, height, values, valid })
    }

    /// Fully valid map.
    pub fn from_values(width: usize, height: usize, values: Vec<T>) -> Result<Self> {
        let valid = vec![true; values.len()];
        Self::new(width, height, values, valid)
    }

    /// Fully valid map filled by `f(x, y)`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self::from_values(width, height, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of pixels (valid or not).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn valid(&self) -> &[bool] {
        &self.valid
    }

    pub fn value(&self, idx: usize) -> T {
        self.values[idx]
    }

    pub fn is_valid(&self, idx: usize) -> bool {
        self.valid[idx]
    }

    /// Value at `(x, y)`, `None` when the pixel is invalid.
    pub fn get(&self, x: usize, y: usize) -> Option<T> {
        let i = y * self.width + x;
        self.valid[i].then(|| self.values[i])
    }

    pub fn n_valid(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Marks pixel `idx` invalid.
    pub fn invalidate(&mut self, idx: usize) {
        self.valid[idx] = false;
        self.values[idx] = T::zero();
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn ensure_same_dims(&self, other: (usize, usize)) -> Result<()> {
        ensure_dims(self.dims(), other)
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> DisparityMap<U> {
        DisparityMap {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|v| U::lit(v.to_f64_lossy())).collect(),
            valid: self.valid.clone(),
        }
    }
}

/// Dense per-pixel confidence, every value in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceMap<T> {
    width: usize,
    height: usize,
    values: Vec<T>,
}

impl<T: Scalar> ConfidenceMap<T> {
    pub fn new(width: usize, height: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != width * height {
            return Err(Error::invalid(format!(
                "{width}x{height} confidence map needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|c| !(**c >= T::zero() && **c <= T::one())) {
            return Err(Error::domain(format!("confidence {bad} outside [0, 1]")));
        }
        Ok(Self { width, height, values })
    }

    pub fn constant(width: usize, height: usize, c: T) -> Result<Self> {
        Self::new(width, height, vec![c; width * height])
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Self::new(width, height, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> T {
        self.values[idx]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn cast<U: Scalar>(&self) -> ConfidenceMap<U> {
        ConfidenceMap {
            width: self.width,
            height: self.height,
            values: self.values.iter().map(|v| U::lit(v.to_f64_lossy())).collect(),
        }
    }
}

pub(crate) fn ensure_dims(left: (usize, usize), right: (usize, usize)) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left_w: left.0, left_h: left.1, right_w: right.0, right_h: right.1 });
    }
    Ok(())
}

/// Rounding rule for turning a fraction of `n` pixels into a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Rounding {
    Floor,
    Ceil,
}

/// `frac * n` rounded per `mode`. Products within 1e-9 (relative) of an integer
/// snap to it first so that e.g. `0.15 * 20` counts as exactly 3.
pub(crate) fn fraction_count(frac: f64, n: usize, mode: Rounding) -> usize {
    let x = frac * n as f64;
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        return nearest as usize;
    }
    match mode {
        Rounding::Floor => x.floor() as usize,
        Rounding::Ceil => x.ceil() as usize,
    }
}
