//! Disparity and confidence evaluation: end-point error, t-pixel error rates,
//! sparsification curves, their area, and the optimal area for a given
//! full-density error rate.
//!
//! Conventions shared by every routine:
//! - only pixels valid in both the prediction and the ground truth count;
//! - a pixel is wrong at threshold `t` when `|pred - gt| > t` (strict);
//! - confidence ranking is descending with ties broken by ascending row-major index;
//! - the top `d` fraction of `n` pixels is `ceil(d * n)` pixels.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{ensure_dims, fraction_count, ConfidenceMap, DisparityMap, Rounding};
use crate::scalar::Scalar;

/// Error rate of the most confident pixels as a function of density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparsificationCurve<T> {
    /// `(density, error_rate)` with strictly increasing densities ending at 1.
    pub points: Vec<(T, T)>,
    /// Correctness threshold in pixels.
    pub theta: T,
}

impl<T: Scalar> SparsificationCurve<T> {
    /// Error rate at full density.
    pub fn full_density_error(&self) -> T {
        self.points.last().map(|p| p.1).unwrap_or_else(T::zero)
    }
}

/// Full evaluation of one disparity map (or a dataset, after [`aggregate`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EvalReport<T> {
    pub epe: T,
    /// `(threshold, fraction of pixels with error > threshold)`.
    #[serde(with = "threshold_map")]
    pub error_rates: Vec<(T, T)>,
    /// Correctness threshold used for the sparsification curve.
    pub theta: T,
    /// Full-density error rate at `theta`.
    pub epsilon: T,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auc: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub auc_opt: Option<T>,
    /// `auc_opt / auc`; larger is better, 0 when `auc` is 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<T>,
    pub n_valid: usize,
}

impl<T: Scalar> EvalReport<T> {
    /// Error rate recorded for threshold `t`, if evaluated.
    pub fn error_rate_at(&self, t: T) -> Option<T> {
        self.error_rates.iter().find(|(th, _)| *th == t).map(|(_, r)| *r)
    }
}

/// Default density grid: 5%, 10%, ..., 100%.
pub fn default_densities<T: Scalar>() -> Vec<T> {
    (1..=20).map(|i| T::count(i) / T::lit(20.0)).collect()
}

pub const DEFAULT_THETA: f64 = 1.0;
pub const DEFAULT_THRESHOLDS: [f64; 3] = [1.0, 3.0, 5.0];

/// Absolute errors of jointly valid pixels, paired with their row-major index.
fn joint_errors<T: Scalar>(pred: &DisparityMap<T>, gt: &DisparityMap<T>) -> Result<Vec<(usize, T)>> {
    ensure_dims(pred.dims(), gt.dims())?;
    let errs: Vec<(usize, T)> = (0..pred.len())
        .filter(|&i| pred.is_valid(i) && gt.is_valid(i))
        .map(|i| (i, (pred.value(i) - gt.value(i)).abs()))
        .collect();
    if errs.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(errs)
}

fn check_threshold<T: Scalar>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("threshold must be positive and finite, got {t}")))
    }
}

fn rate_above<T: Scalar>(errs: &[(usize, T)], t: T) -> T {
    let wrong = errs.iter().filter(|(_, e)| *e > t).count();
    T::count(wrong) / T::count(errs.len())
}

/// End-point error: mean `|pred - gt|` over jointly valid pixels.
pub fn epe<T: Scalar>(pred: &DisparityMap<T>, gt: &DisparityMap<T>) -> Result<T> {
    let errs = joint_errors(pred, gt)?;
    let sum: T = errs.iter().map(|(_, e)| *e).sum();
    Ok(sum / T::count(errs.len()))
}

/// Fraction of jointly valid pixels whose error exceeds `t` pixels.
pub fn error_rate<T: Scalar>(pred: &DisparityMap<T>, gt: &DisparityMap<T>, t: T) -> Result<T> {
    check_threshold(t)?;
    let errs = joint_errors(pred, gt)?;
    Ok(rate_above(&errs, t))
}

fn check_densities<T: Scalar>(densities: &[T]) -> Result<()> {
    if densities.is_empty() {
        return Err(Error::invalid("density list is empty"));
    }
    if densities.iter().any(|d| !(*d > T::zero() && *d <= T::one())) {
        return Err(Error::invalid("densities must lie in (0, 1]"));
    }
    if densities.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("densities must be strictly increasing"));
    }
    if *densities.last().unwrap() != T::one() {
        return Err(Error::invalid("density list must end at 1"));
    }
    Ok(())
}

/// Curve from `(confidence, wrong)` samples already in row-major (tie-break) order.
fn curve_from_samples<T: Scalar>(mut samples: Vec<(T, bool)>, theta: T, densities: &[T]) -> SparsificationCurve<T> {
    // Stable sort keeps ascending index order among equal confidences.
    samples.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("confidence is finite"));
    let n = samples.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0usize);
    for (_, wrong) in &samples {
        prefix.push(prefix.last().unwrap() + usize::from(*wrong));
    }
    let points = densities
        .iter()
        .map(|&d| {
            let take = fraction_count(d.to_f64_lossy(), n, Rounding::Ceil).clamp(1, n);
            (d, T::count(prefix[take]) / T::count(take))
        })
        .collect();
    SparsificationCurve { points, theta }
}

/// Sparsification (ROC) curve: error rate among the top-`d` most confident pixels
/// for each density `d`.
pub fn sparsification<T: Scalar>(
    pred: &DisparityMap<T>,
    gt: &DisparityMap<T>,
    conf: &ConfidenceMap<T>,
    theta: T,
    densities: &[T],
) -> Result<SparsificationCurve<T>> {
    check_threshold(theta)?;
    check_densities(densities)?;
    ensure_dims(pred.dims(), conf.dims())?;
    let errs = joint_errors(pred, gt)?;
    let samples = errs.iter().map(|&(i, e)| (conf.value(i), e > theta)).collect();
    Ok(curve_from_samples(samples, theta, densities))
}

/// Dataset-level sparsification curve: all images' pixels ranked together.
pub fn sparsification_pooled<T: Scalar>(
    items: &[(&DisparityMap<T>, &DisparityMap<T>, &ConfidenceMap<T>)],
    theta: T,
    densities: &[T],
) -> Result<SparsificationCurve<T>> {
    check_threshold(theta)?;
    check_densities(densities)?;
    let mut samples = Vec::new();
    for (pred, gt, conf) in items {
        ensure_dims(pred.dims(), conf.dims())?;
        let errs = match joint_errors(pred, gt) {
            Ok(e) => e,
            Err(Error::EmptyMask) => continue,
            Err(e) => return Err(e),
        };
        samples.extend(errs.iter().map(|&(i, e)| (conf.value(i), e > theta)));
    }
    if samples.is_empty() {
        return Err(Error::EmptyMask);
    }
    Ok(curve_from_samples(samples, theta, densities))
}

/// Area under a sparsification curve: a rectangle over `[0, d_1]` at the first
/// error rate, then trapezoids between consecutive points.
pub fn auc<T: Scalar>(curve: &SparsificationCurve<T>) -> T {
    let Some(&(d0, e0)) = curve.points.first() else {
        return T::zero();
    };
    let half = T::lit(0.5);
    let mut area = d0 * e0;
    for w in curve.points.windows(2) {
        let ((da, ea), (db, eb)) = (w[0], w[1]);
        area = area + (db - da) * (ea + eb) * half;
    }
    area
}

/// Area under the ideal sparsification curve for full-density error rate `epsilon`:
/// `ε + (1 - ε) ln(1 - ε)`, with the continuous limits 0 at ε = 0 and 1 at ε = 1.
pub fn auc_opt<T: Scalar>(epsilon: T) -> Result<T> {
    if !(epsilon >= T::zero() && epsilon <= T::one()) {
        return Err(Error::domain(format!("error rate {epsilon} outside [0, 1]")));
    }
    if epsilon == T::zero() {
        return Ok(T::zero());
    }
    if epsilon == T::one() {
        return Ok(T::one());
    }
    let keep = T::one() - epsilon;
    Ok(epsilon + keep * keep.ln())
}

fn ratio_of<T: Scalar>(auc_opt: T, auc: T) -> T {
    if auc == T::zero() {
        T::zero()
    } else {
        auc_opt / auc
    }
}

/// Evaluates a prediction against ground truth: EPE, error rates at each
/// threshold and, when a confidence map is given, AUC, optimal AUC and their ratio.
pub fn evaluate<T: Scalar>(
    pred: &DisparityMap<T>,
    gt: &DisparityMap<T>,
    conf: Option<&ConfidenceMap<T>>,
    theta: T,
    thresholds: &[T],
) -> Result<EvalReport<T>> {
    check_threshold(theta)?;
    for &t in thresholds {
        check_threshold(t)?;
    }
    let errs = joint_errors(pred, gt)?;
    let n = errs.len();
    let epe = errs.iter().map(|(_, e)| *e).sum::<T>() / T::count(n);
    let error_rates = thresholds.iter().map(|&t| (t, rate_above(&errs, t))).collect();
    let epsilon = rate_above(&errs, theta);

    let (auc_v, auc_opt_v, ratio) = match conf {
        Some(conf) => {
            let curve = sparsification(pred, gt, conf, theta, &default_densities())?;
            let a = auc(&curve);
            let o = auc_opt(epsilon)?;
            (Some(a), Some(o), Some(ratio_of(o, a)))
        }
        None => (None, None, None),
    };
    Ok(EvalReport { epe, error_rates, theta, epsilon, auc: auc_v, auc_opt: auc_opt_v, ratio, n_valid: n })
}

/// Dataset-level report from per-image reports.
///
/// AUC is the plain mean of per-image AUCs; EPE and error rates are weighted by
/// valid-pixel count; the optimal AUC is evaluated at the pixel-weighted mean of
/// `full_density_errors`.
pub fn aggregate<T: Scalar>(reports: &[EvalReport<T>], full_density_errors: &[T]) -> Result<EvalReport<T>> {
    let first = reports.first().ok_or_else(|| Error::invalid("no reports to aggregate"))?;
    if full_density_errors.len() != reports.len() {
        return Err(Error::invalid(format!(
            "{} reports but {} full-density error rates",
            reports.len(),
            full_density_errors.len()
        )));
    }
    let total: usize = reports.iter().map(|r| r.n_valid).sum();
    if total == 0 {
        return Err(Error::EmptyMask);
    }
    let thresholds: Vec<T> = first.error_rates.iter().map(|(t, _)| *t).collect();
    let has_auc = first.auc.is_some();
    for r in reports {
        if r.theta != first.theta {
            return Err(Error::invalid("reports use different theta"));
        }
        if r.error_rates.len() != thresholds.len() || r.error_rates.iter().zip(&thresholds).any(|((t, _), t0)| t != t0)
        {
            return Err(Error::invalid("reports use different thresholds"));
        }
        if r.auc.is_some() != has_auc {
            return Err(Error::invalid("some reports lack confidence metrics"));
        }
    }

    let weights: Vec<T> = reports.iter().map(|r| T::count(r.n_valid) / T::count(total)).collect();
    let wmean = |f: &dyn Fn(&EvalReport<T>) -> T| -> T { reports.iter().zip(&weights).map(|(r, &w)| w * f(r)).sum() };
    let epe = wmean(&|r| r.epe);
    let error_rates = thresholds.iter().enumerate().map(|(j, &t)| (t, wmean(&|r| r.error_rates[j].1))).collect();
    let epsilon: T = full_density_errors.iter().zip(&weights).map(|(&e, &w)| w * e).sum();

    let (auc_v, auc_opt_v, ratio) = if has_auc {
        let mean_auc = reports.iter().map(|r| r.auc.unwrap()).sum::<T>() / T::count(reports.len());
        let o = auc_opt(epsilon.min(T::one()))?;
        (Some(mean_auc), Some(o), Some(ratio_of(o, mean_auc)))
    } else {
        (None, None, None)
    };
    Ok(EvalReport {
        epe,
        error_rates,
        theta: first.theta,
        epsilon,
        auc: auc_v,
        auc_opt: auc_opt_v,
        ratio,
        n_valid: total,
    })
}

/// Serializes `[(threshold, rate)]` as a JSON object `{"<threshold>": rate}`.
mod threshold_map {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<T: Scalar, S: Serializer>(rates: &[(T, T)], s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(rates.len()))?;
        for (t, r) in rates {
            m.serialize_entry(&t.to_string(), r)?;
        }
        m.end()
    }

    pub fn deserialize<'de, T: Scalar, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(T, T)>, D::Error> {
        let raw: BTreeMap<String, T> = BTreeMap::deserialize(d)?;
        let mut out = raw
            .into_iter()
            .map(|(k, v)| {
                k.parse::<f64>()
                    .map(|t| (T::lit(t), v))
                    .map_err(|_| D::Error::custom(format!("bad threshold key {k:?}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn line(values: &[f64]) -> DisparityMap<f64> {
        DisparityMap::from_values(values.len(), 1, values.to_vec()).unwrap()
    }

    #[test]
    fn epe_examples() {
        let gt = DisparityMap::from_fn(5, 4, |x, y| (x + 2 * y) as f64).unwrap();
        assert_eq!(epe(&gt, &gt).unwrap(), 0.0);
        let shifted = DisparityMap::from_fn(5, 4, |x, y| (x + 2 * y) as f64 + 2.5).unwrap();
        assert_abs_diff_eq!(epe(&shifted, &gt).unwrap(), 2.5, epsilon = 1e-12);

        let pred = DisparityMap::new(4, 1, vec![1.0, 2.0, 6.0, 100.0], vec![true, true, true, false]).unwrap();
        let zero = line(&[0.0; 4]);
        assert_eq!(epe(&pred, &zero).unwrap(), 3.0);
    }

    #[test]
    fn error_rate_examples() {
        let pred = line(&[0.5, 1.5, 3.5, 0.0]);
        let gt = line(&[0.0; 4]);
        assert_eq!(error_rate(&pred, &gt, 1.0).unwrap(), 0.5);
        assert_eq!(error_rate(&pred, &gt, 3.0).unwrap(), 0.25);
        assert_eq!(error_rate(&gt, &gt, 1.0).unwrap(), 0.0);
        // strict inequality
        assert_eq!(error_rate(&line(&[1.0]), &line(&[0.0]), 1.0).unwrap(), 0.0);
        assert!(error_rate(&pred, &gt, 0.0).is_err());
    }

    #[test]
    fn empty_joint_mask_and_mismatch() {
        let a = DisparityMap::new(2, 1, vec![1.0, 2.0], vec![true, false]).unwrap();
        let b = DisparityMap::new(2, 1, vec![1.0, 2.0], vec![false, true]).unwrap();
        assert!(matches!(epe(&a, &b), Err(Error::EmptyMask)));
        let c = DisparityMap::from_values(1, 2, vec![1.0, 2.0]).unwrap();
        assert!(matches!(epe(&a, &c), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sparsification_ranked_errors() {
        // 10 pixels, pixels 3 and 7 wrong and least confident.
        let gt = line(&[0.0; 10]);
        let mut errs = [0.0; 10];
        errs[3] = 5.0;
        errs[7] = 2.0;
        let pred = line(&errs);
        let conf: Vec<f64> = (0..10).map(|i| if i == 3 || i == 7 { 0.1 } else { 0.9 }).collect();
        let conf = ConfidenceMap::new(10, 1, conf).unwrap();
        let densities: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
        let curve = sparsification(&pred, &gt, &conf, 1.0, &densities).unwrap();
        for &(d, e) in &curve.points {
            let take = (d * 10.0).round() as usize;
            let expected = if take <= 8 { 0.0 } else { (take - 8) as f64 / take as f64 };
            assert_eq!(e, expected, "density {d}");
        }
        assert_eq!(curve.full_density_error(), 0.2);
    }

    #[test]
    fn sparsification_ties_follow_row_major_order() {
        let gt = line(&[0.0; 4]);
        let pred = line(&[5.0, 0.0, 0.0, 0.0]);
        let conf = ConfidenceMap::constant(4, 1, 0.5).unwrap();
        let curve = sparsification(&pred, &gt, &conf, 1.0, &[0.25, 1.0]).unwrap();
        assert_eq!(curve.points[0].1, 1.0);
        let pred = line(&[0.0, 0.0, 0.0, 5.0]);
        let curve = sparsification(&pred, &gt, &conf, 1.0, &[0.25, 1.0]).unwrap();
        assert_eq!(curve.points[0].1, 0.0);
    }

    #[test]
    fn sparsification_rejects_bad_densities() {
        let m = line(&[0.0; 4]);
        let conf = ConfidenceMap::constant(4, 1, 0.5).unwrap();
        assert!(sparsification(&m, &m, &conf, 1.0, &[0.5, 0.25, 1.0]).is_err());
        assert!(sparsification(&m, &m, &conf, 1.0, &[0.0, 1.0]).is_err());
        assert!(sparsification(&m, &m, &conf, 1.0, &[0.5, 1.5]).is_err());
        assert!(sparsification(&m, &m, &conf, 1.0, &[0.5]).is_err());
        assert!(sparsification(&m, &m, &conf, 1.0, &[]).is_err());
    }

    #[test]
    fn auc_examples() {
        let zero = SparsificationCurve {
            points: default_densities::<f64>().into_iter().map(|d| (d, 0.0)).collect(),
            theta: 1.0,
        };
        assert_eq!(auc(&zero), 0.0);
        let flat = SparsificationCurve {
            points: default_densities::<f64>().into_iter().map(|d| (d, 0.3)).collect(),
            theta: 1.0,
        };
        assert_abs_diff_eq!(auc(&flat), 0.3, epsilon = 1e-15);
        let two = SparsificationCurve { points: vec![(0.5, 0.0), (1.0, 0.2)], theta: 1.0 };
        assert_abs_diff_eq!(auc(&two), 0.05, epsilon = 1e-15);
    }

    #[test]
    fn auc_opt_examples() {
        assert_eq!(auc_opt(0.0).unwrap(), 0.0);
        assert_eq!(auc_opt(1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(auc_opt(0.1337).unwrap(), 0.0094, epsilon = 5e-4);
        assert_abs_diff_eq!(auc_opt(0.1420).unwrap(), 0.0106, epsilon = 5e-4);
        assert_abs_diff_eq!(auc_opt(0.4402).unwrap(), 0.1154, epsilon = 5e-4);
        assert!(auc_opt(-0.01).is_err());
        assert!(auc_opt(1.01).is_err());
        assert!(auc_opt(f64::NAN).is_err());
    }

    #[test]
    fn evaluate_perfect_prediction() {
        let gt = DisparityMap::from_fn(8, 8, |x, y| (x * y) as f64 * 0.5).unwrap();
        let conf = ConfidenceMap::constant(8, 8, 0.7).unwrap();
        let r = evaluate(&gt, &gt, Some(&conf), 1.0, &DEFAULT_THRESHOLDS).unwrap();
        assert_eq!(r.epe, 0.0);
        assert!(r.error_rates.iter().all(|(_, e)| *e == 0.0));
        assert_eq!(r.auc, Some(0.0));
        assert_eq!(r.auc_opt, Some(0.0));
        assert_eq!(r.ratio, Some(0.0));
        assert_eq!(r.n_valid, 64);
        let r = evaluate(&gt, &gt, None, 1.0, &DEFAULT_THRESHOLDS).unwrap();
        assert!(r.auc.is_none() && r.auc_opt.is_none() && r.ratio.is_none());
    }

    #[test]
    fn ratio_arithmetic() {
        assert_abs_diff_eq!(ratio_of(0.0094, 0.0588), 0.1599, epsilon = 5e-4);
        assert_abs_diff_eq!(ratio_of(0.0106, 0.0478), 0.2218, epsilon = 5e-4);
    }

    fn report(epe: f64, eps: f64, auc_v: f64, n: usize) -> EvalReport<f64> {
        EvalReport {
            epe,
            error_rates: vec![(1.0, eps), (3.0, eps / 2.0)],
            theta: 1.0,
            epsilon: eps,
            auc: Some(auc_v),
            auc_opt: Some(auc_opt(eps).unwrap()),
            ratio: Some(auc_opt(eps).unwrap() / auc_v),
            n_valid: n,
        }
    }

    #[test]
    fn aggregate_single_is_identity() {
        let r = report(1.25, 0.1337, 0.0588, 100);
        let agg = aggregate(std::slice::from_ref(&r), &[r.epsilon]).unwrap();
        assert_eq!(agg, r);
    }

    #[test]
    fn aggregate_two_images() {
        let a = report(1.0, 0.1, 0.05, 50);
        let b = report(2.0, 0.2, 0.07, 50);
        let agg = aggregate(&[a, b], &[0.1, 0.2]).unwrap();
        assert_abs_diff_eq!(agg.epsilon, 0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(agg.auc_opt.unwrap(), auc_opt(0.15).unwrap(), epsilon = 1e-15);
        assert_abs_diff_eq!(agg.auc.unwrap(), 0.06, epsilon = 1e-15);
        assert_abs_diff_eq!(agg.epe, 1.5, epsilon = 1e-15);
        assert_eq!(agg.n_valid, 100);
        assert!(aggregate::<f64>(&[], &[]).is_err());
    }

    #[test]
    fn aggregate_weights_by_pixel_count() {
        let a = report(1.0, 0.1, 0.05, 30);
        let b = report(2.0, 0.2, 0.07, 10);
        let agg = aggregate(&[a, b], &[0.1, 0.2]).unwrap();
        assert_abs_diff_eq!(agg.epe, 1.25, epsilon = 1e-15);
        assert_abs_diff_eq!(agg.epsilon, 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(agg.auc.unwrap(), 0.06, epsilon = 1e-15);
    }

    #[test]
    fn aggregate_reference_row() {
        let r = report(1.3945, 0.1337, 0.0588, 1000);
        let agg = aggregate(&[r.clone(), r], &[0.1337, 0.1337]).unwrap();
        assert_abs_diff_eq!(agg.auc_opt.unwrap(), 0.0094, epsilon = 5e-4);
    }

    #[test]
    fn report_json_shape() {
        let r = report(1.0, 0.25, 0.1, 4);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["error_rates"]["1"], 0.25);
        assert_eq!(v["error_rates"]["3"], 0.125);
        assert_eq!(v["n_valid"], 4);
        let back: EvalReport<f64> = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);

        let mut no_conf = r.clone();
        no_conf.auc = None;
        no_conf.auc_opt = None;
        no_conf.ratio = None;
        let v = serde_json::to_value(&no_conf).unwrap();
        assert!(v.get("auc").is_none() && v.get("ratio").is_none() && v.get("auc_opt").is_none());
    }

    #[test]
    fn pooled_curve_matches_single_image() {
        let gt = line(&[0.0; 6]);
        let pred = line(&[0.0, 3.0, 0.0, 2.0, 0.0, 0.0]);
        let conf = ConfidenceMap::new(6, 1, vec![0.9, 0.2, 0.8, 0.3, 0.7, 0.6]).unwrap();
        let d = default_densities::<f64>();
        let single = sparsification(&pred, &gt, &conf, 1.0, &d).unwrap();
        let pooled = sparsification_pooled(&[(&pred, &gt, &conf)], 1.0, &d).unwrap();
        assert_eq!(single, pooled);
    }
}
