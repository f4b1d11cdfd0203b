//! Confidence-weighted ("focused") L1 loss, its analytic gradients and the
//! closed-form minimizer over the confidence.
//!
//! A pixel with residual `r = pred - gt` and confidence `c` is modelled as a
//! Laplacian with scale `b = a - k*c`; its negative log-likelihood, up to a
//! constant, is
//!
//! ```text
//! |r| / (a - k c)  +  ln(a - k c)  -  gamma * ln(c)
//! ```
//!
//! The first term is the focused L1 term, the last two form the confidence
//! regularizer. All logarithms are natural and the additive constant is 0.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{ensure_dims, ConfidenceMap, DisparityMap};
use crate::scalar::Scalar;

/// Parameters of the focused loss.
///
/// Invariants: `k > 0`, `a >= k + 1` (so the scale never drops below 1),
/// `gamma >= 0`, `0 < c_min < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FocusedLossParams<T> {
    /// Slope of the confidence-to-scale map.
    pub k: T,
    /// Scale at zero confidence.
    pub a: T,
    /// Exponent of the confidence prior `P(c) ∝ c^gamma`.
    pub gamma: T,
    /// Lower clamp on confidence; keeps `-gamma * ln(c)` finite.
    pub c_min: T,
}

impl<T: Scalar> Default for FocusedLossParams<T> {
    fn default() -> Self {
        Self { k: T::lit(4.0), a: T::lit(5.0), gamma: T::one(), c_min: T::lit(DEFAULT_C_MIN) }
    }
}

pub const DEFAULT_C_MIN: f64 = 1e-6;

impl<T: Scalar> FocusedLossParams<T> {
    /// Validated constructor with the default `c_min`.
    pub fn new(k: T, a: T, gamma: T) -> Result<Self> {
        let p = Self { k, a, gamma, c_min: T::lit(DEFAULT_C_MIN) };
        p.validate()?;
        Ok(p)
    }

    pub fn with_gamma(self, gamma: T) -> Self {
        Self { gamma, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let Self { k, a, gamma, c_min } = *self;
        if !(k.is_finite() && a.is_finite() && gamma.is_finite() && c_min.is_finite()) {
            return Err(Error::domain("loss parameters must be finite"));
        }
        if k <= T::zero() {
            return Err(Error::domain(format!("k must be positive, got {k}")));
        }
        if a < k + T::one() {
            return Err(Error::domain(format!("a must be at least k + 1, got a = {a}, k = {k}")));
        }
        if gamma < T::zero() {
            return Err(Error::domain(format!("gamma must be non-negative, got {gamma}")));
        }
        if !(c_min > T::zero() && c_min < T::one()) {
            return Err(Error::domain(format!("c_min must lie in (0, 1), got {c_min}")));
        }
        Ok(())
    }

    /// Laplacian scale `a - k c` for confidence `c`.
    #[inline]
    pub fn scale(&self, c: T) -> T {
        self.a - self.k * c
    }

    /// Clamps a raw confidence into `[c_min, 1]`.
    #[inline]
    pub fn clamp_confidence(&self, c: T) -> T {
        c.max(self.c_min).min(T::one())
    }

    fn check_confidence(&self, c: T) -> Result<()> {
        if c >= self.c_min && c <= T::one() {
            Ok(())
        } else {
            Err(Error::domain(format!("confidence {c} outside [{}, 1]", self.c_min)))
        }
    }
}

/// The two parts of the per-pixel loss and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PixelLossTerms<T> {
    pub focused_term: T,
    pub regularization_term: T,
    pub total: T,
}

/// Partial derivatives of the per-pixel total.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossGradient<T> {
    pub d_prediction: T,
    pub d_confidence: T,
}

#[inline]
pub(crate) fn terms_unchecked<T: Scalar>(residual: T, c: T, p: &FocusedLossParams<T>) -> PixelLossTerms<T> {
    let b = p.scale(c);
    let focused_term = residual.abs() / b;
    let regularization_term = if p.gamma == T::zero() { b.ln() } else { b.ln() - p.gamma * c.ln() };
    PixelLossTerms { focused_term, regularization_term, total: focused_term + regularization_term }
}

#[inline]
pub(crate) fn gradient_unchecked<T: Scalar>(residual: T, c: T, p: &FocusedLossParams<T>) -> LossGradient<T> {
    let b = p.scale(c);
    let d_prediction = if residual > T::zero() {
        b.recip()
    } else if residual < T::zero() {
        -b.recip()
    } else {
        T::zero()
    };
    let d_confidence = residual.abs() * p.k / (b * b) - p.k / b - p.gamma / c;
    LossGradient { d_prediction, d_confidence }
}

/// Per-pixel focused loss for residual `pred - gt` at confidence `c`.
pub fn focused_loss_pixel<T: Scalar>(residual: T, c: T, params: &FocusedLossParams<T>) -> Result<PixelLossTerms<T>> {
    params.validate()?;
    params.check_confidence(c)?;
    Ok(terms_unchecked(residual, c, params))
}

/// Plain L1 loss `|r|`.
#[inline]
pub fn plain_l1_pixel<T: Scalar>(residual: T) -> T {
    residual.abs()
}

/// Result of [`focused_loss_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct LossMap<T> {
    /// Mean of the per-pixel totals over jointly valid pixels.
    pub mean_total: T,
    /// Row-major per-pixel terms; zero on invalid pixels.
    pub per_pixel: Vec<PixelLossTerms<T>>,
    pub n_valid: usize,
}

/// Focused loss over a whole map, averaged over pixels valid in both `pred` and `gt`.
pub fn focused_loss_map<T: Scalar>(
    pred: &DisparityMap<T>,
    gt: &DisparityMap<T>,
    conf: &ConfidenceMap<T>,
    params: &FocusedLossParams<T>,
) -> Result<LossMap<T>> {
    params.validate()?;
    ensure_dims(pred.dims(), gt.dims())?;
    ensure_dims(pred.dims(), conf.dims())?;
    let mut per_pixel = vec![PixelLossTerms::default(); pred.len()];
    let mut sum = T::zero();
    let mut n_valid = 0usize;
    for (i, slot) in per_pixel.iter_mut().enumerate() {
        if !(pred.is_valid(i) && gt.is_valid(i)) {
            continue;
        }
        let c = conf.value(i);
        params.check_confidence(c)?;
        let t = terms_unchecked(pred.value(i) - gt.value(i), c, params);
        sum = sum + t.total;
        n_valid += 1;
        *slot = t;
    }
    if n_valid == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(LossMap { mean_total: sum / T::count(n_valid), per_pixel, n_valid })
}

/// Analytic gradient of the per-pixel total w.r.t. the prediction and the confidence.
///
/// At `residual == 0` the L1 subgradient 0 is used for `d_prediction`.
pub fn gradient_pixel<T: Scalar>(residual: T, c: T, params: &FocusedLossParams<T>) -> Result<LossGradient<T>> {
    params.validate()?;
    params.check_confidence(c)?;
    Ok(gradient_unchecked(residual, c, params))
}

/// Real roots of the stationarity condition `d total / dc = 0`, which after
/// clearing denominators is
/// `k²(1-γ) c² + k(r - a + 2γa) c - γa² = 0`.
fn stationary_points<T: Scalar>(r: T, p: &FocusedLossParams<T>) -> Vec<T> {
    let (k, a, g) = (p.k, p.a, p.gamma);
    let qa = k * k * (T::one() - g);
    let qb = k * (r - a + T::lit(2.0) * g * a);
    let qc = -g * a * a;
    let mut roots = Vec::with_capacity(2);
    if qa == T::zero() {
        if qb != T::zero() {
            roots.push(-qc / qb);
        }
        return roots;
    }
    let disc = qb * qb - T::lit(4.0) * qa * qc;
    if disc < T::zero() {
        return roots;
    }
    let sign_b = if qb < T::zero() { -T::one() } else { T::one() };
    let q = -(qb + sign_b * disc.sqrt()) / T::lit(2.0);
    roots.push(q / qa);
    if q != T::zero() {
        roots.push(qc / q);
    }
    roots.retain(|x| x.is_finite());
    roots
}

/// Confidence in `[c_min, 1]` minimizing the per-pixel total for a residual of
/// magnitude `|residual|`. Ties go to the larger confidence.
pub fn optimal_confidence<T: Scalar>(residual: T, params: &FocusedLossParams<T>) -> Result<T> {
    params.validate()?;
    let r = residual.abs();
    if !r.is_finite() {
        return Err(Error::domain("residual must be finite"));
    }
    let mut candidates: Vec<T> =
        stationary_points(r, params).into_iter().filter(|&c| c >= params.c_min && c <= T::one()).collect();
    candidates.push(params.c_min);
    candidates.push(T::one());
    candidates.sort_by(|x, y| y.partial_cmp(x).expect("finite candidates"));

    let mut best = candidates[0];
    let mut best_loss = terms_unchecked(r, best, params).total;
    for &c in &candidates[1..] {
        let l = terms_unchecked(r, c, params).total;
        if l < best_loss {
            best = c;
            best_loss = l;
        }
    }
    Ok(best)
}

/// Samples the per-pixel total on `n_points` evenly spaced confidences over `[c_min, 1]`.
pub fn loss_scan<T: Scalar>(residual: T, params: &FocusedLossParams<T>, n_points: usize) -> Result<Vec<(T, T)>> {
    params.validate()?;
    if n_points < 2 {
        return Err(Error::invalid(format!("loss scan needs at least 2 points, got {n_points}")));
    }
    let span = T::one() - params.c_min;
    let last = T::count(n_points - 1);
    Ok((0..n_points)
        .map(|i| {
            let c = if i + 1 == n_points { T::one() } else { params.c_min + span * T::count(i) / last };
            (c, terms_unchecked(residual, c, params).total)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn params(gamma: f64) -> FocusedLossParams<f64> {
        FocusedLossParams::new(4.0, 5.0, gamma).unwrap()
    }

    #[test]
    fn zero_residual_full_confidence_is_zero() {
        let t = focused_loss_pixel(0.0, 1.0, &params(0.0)).unwrap();
        assert_eq!(t.total, 0.0);
        assert_eq!(t.focused_term, 0.0);
        assert_eq!(t.regularization_term, 0.0);
    }

    #[test]
    fn full_confidence_reduces_to_l1() {
        let t = focused_loss_pixel(10.0, 1.0, &params(1.0)).unwrap();
        assert_eq!(t.total, 10.0);
        for r in [-3.5, 0.0, 0.25, 17.0] {
            let t = focused_loss_pixel(r, 1.0, &params(0.0)).unwrap();
            assert_eq!(t.total, plain_l1_pixel(r));
        }
    }

    #[test]
    fn pixel_loss_at_point_42() {
        let t = focused_loss_pixel(10.0, 0.42, &params(1.0)).unwrap();
        assert_abs_diff_eq!(t.focused_term, 3.012048, epsilon = 1e-6);
        assert_abs_diff_eq!(t.regularization_term, 1.199965 + 0.867501, epsilon = 1e-6);
        // 3.0120 + 1.1999 + 0.8675 from rounded terms; unrounded sum 5.0795135
        assert_abs_diff_eq!(t.total, 5.0794, epsilon = 2e-4);
        assert_abs_diff_eq!(t.total, 5.079513543, epsilon = 1e-9);
        assert_eq!(t.total, t.focused_term + t.regularization_term);
    }

    #[test]
    fn plain_l1_examples() {
        assert_eq!(plain_l1_pixel(0.0), 0.0);
        assert_eq!(plain_l1_pixel(-3.5), 3.5);
        assert_eq!(plain_l1_pixel(10.0f32), 10.0);
    }

    #[test]
    fn rejects_out_of_range_confidence_and_bad_params() {
        let p = params(1.0);
        assert!(matches!(focused_loss_pixel(1.0, 0.0, &p), Err(Error::Domain(_))));
        assert!(matches!(focused_loss_pixel(1.0, 1.0001, &p), Err(Error::Domain(_))));
        assert!(FocusedLossParams::new(4.0, 4.5, 1.0).is_err());
        assert!(FocusedLossParams::new(0.0, 5.0, 1.0).is_err());
        assert!(FocusedLossParams::new(4.0, 5.0, -0.1).is_err());
        let bad = FocusedLossParams { c_min: 0.0, ..p };
        assert!(optimal_confidence(1.0, &bad).is_err());
    }

    #[test]
    fn gradient_examples() {
        let g = gradient_pixel(10.0, 5.0 / 12.0, &params(1.0)).unwrap();
        assert_abs_diff_eq!(g.d_confidence, 0.0, epsilon = 1e-12);
        let g = gradient_pixel(0.1, 1.0, &params(0.0)).unwrap();
        assert_abs_diff_eq!(g.d_confidence, -3.6, epsilon = 1e-12);
        assert_eq!(g.d_prediction, 1.0);
        let g = gradient_pixel(0.0, 0.5, &params(0.0)).unwrap();
        assert_eq!(g.d_prediction, 0.0);
        let g = gradient_pixel(-2.0, 0.5, &params(0.0)).unwrap();
        assert_eq!(g.d_prediction, -1.0 / 3.0);
    }

    #[test]
    fn optimal_confidence_examples() {
        let c_min = DEFAULT_C_MIN;
        assert_eq!(optimal_confidence(10.0, &params(0.0)).unwrap(), c_min);
        assert_eq!(optimal_confidence(0.1, &params(0.0)).unwrap(), 1.0);
        assert_abs_diff_eq!(optimal_confidence(10.0, &params(1.0)).unwrap(), 5.0 / 12.0, epsilon = 1e-12);
        // positive root of 8c² + 40c - 12.5 = 0
        let root = (-40.0 + (1600.0f64 + 400.0).sqrt()) / 16.0;
        assert_abs_diff_eq!(optimal_confidence(10.0, &params(0.5)).unwrap(), root, epsilon = 1e-12);
        assert_abs_diff_eq!(root, 0.2951, epsilon = 1e-4);
        // -16c² + 100c - 50 = 0, smaller root
        let root2 = (100.0 - (10000.0f64 - 3200.0).sqrt()) / 32.0;
        assert_abs_diff_eq!(optimal_confidence(10.0, &params(2.0)).unwrap(), root2, epsilon = 1e-12);
        assert_abs_diff_eq!(root2, 0.5480, epsilon = 1e-4);
    }

    #[test]
    fn gamma_zero_closed_form() {
        let p = params(0.0);
        for r in [0.0, 0.5, 1.0, 2.0, 3.3, 4.9, 5.0, 7.0] {
            let expected = ((5.0 - r) / 4.0f64).clamp(DEFAULT_C_MIN, 1.0);
            assert_abs_diff_eq!(optimal_confidence(r, &p).unwrap(), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn optimal_confidence_works_in_f32() {
        let p = FocusedLossParams::<f32>::new(4.0, 5.0, 1.0).unwrap();
        assert!((optimal_confidence(10.0f32, &p).unwrap() - 5.0 / 12.0).abs() < 1e-6);
    }

    #[test]
    fn scan_shapes() {
        let s = loss_scan(10.0, &params(0.0), 200).unwrap();
        assert!(s.windows(2).all(|w| w[1].1 > w[0].1));
        assert_eq!(s[0].0, DEFAULT_C_MIN);
        assert_eq!(s.last().unwrap().0, 1.0);
        let s = loss_scan(0.1, &params(0.0), 200).unwrap();
        assert!(s.windows(2).all(|w| w[1].1 < w[0].1));
        let s = loss_scan(10.0, &params(1.0), 1001).unwrap();
        let (c_best, _) = s.iter().copied().min_by(|x, y| x.1.partial_cmp(&y.1).unwrap()).unwrap();
        let step = (1.0 - DEFAULT_C_MIN) / 1000.0;
        assert!((c_best - 5.0 / 12.0).abs() <= step / 2.0 + 1e-12);
        assert!(loss_scan(1.0, &params(0.0), 1).is_err());
    }

    #[test]
    fn loss_map_mean_and_mask() {
        let p = params(1.0);
        let pred = DisparityMap::from_values(2, 1, vec![10.0, 0.1]).unwrap();
        let gt = DisparityMap::from_values(2, 1, vec![0.0, 0.0]).unwrap();
        let conf = ConfidenceMap::new(2, 1, vec![0.42, 1.0]).unwrap();
        let m = focused_loss_map(&pred, &gt, &conf, &p).unwrap();
        let a = focused_loss_pixel(10.0, 0.42, &p).unwrap().total;
        let b = focused_loss_pixel(0.1, 1.0, &p).unwrap().total;
        assert_abs_diff_eq!(m.mean_total, (a + b) / 2.0, epsilon = 1e-15);
        assert_eq!(m.n_valid, 2);

        let gt_invalid = DisparityMap::new(2, 1, vec![0.0, 0.0], vec![false, false]).unwrap();
        assert!(matches!(focused_loss_map(&pred, &gt_invalid, &conf, &p), Err(Error::EmptyMask)));

        let conf_small = ConfidenceMap::new(1, 1, vec![1.0]).unwrap();
        assert!(matches!(focused_loss_map(&pred, &gt, &conf_small, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn loss_map_perfect_prediction() {
        let p = params(0.0);
        let pred = DisparityMap::from_fn(4, 3, |x, y| (x * y) as f64).unwrap();
        let conf = ConfidenceMap::constant(4, 3, 1.0).unwrap();
        let m = focused_loss_map(&pred, &pred, &conf, &p).unwrap();
        assert_eq!(m.mean_total, 0.0);
    }
}
