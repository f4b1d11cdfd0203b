//! Oracles shared by several test targets.
#![allow(dead_code)]

use confstereo::toymodel::{LossMode, ToyModel, ToyScene};
use confstereo::{ConfidenceMap, DisparityMap, FocusedLossParams};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub pred: DisparityMap<f64>,
    pub gt: DisparityMap<f64>,
    pub conf: ConfidenceMap<f64>,
}

/// Random maps with roughly a third of the pixels wrong at 1 px, a few invalid
/// pixels in both maps, and confidences on a coarse grid so ties occur.
pub fn random_instance(rng: &mut ChaCha8Rng, w: usize, h: usize) -> Instance {
    let n = w * h;
    let gt_vals: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0)).collect();
    let gt_valid: Vec<bool> = (0..n).map(|_| rng.random_bool(0.9)).collect();
    let pred_vals: Vec<f64> = gt_vals
        .iter()
        .map(|g| {
            let e = if rng.random_bool(0.35) { rng.random_range(1.0..6.0) } else { rng.random_range(0.0..1.0) };
            g + if rng.random::<bool>() { e } else { -e }
        })
        .collect();
    let pred_valid: Vec<bool> = (0..n).map(|_| rng.random_bool(0.95)).collect();
    let conf: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..=50u32)) / 50.0).collect();
    Instance {
        pred: DisparityMap::new(w, h, pred_vals, pred_valid).unwrap(),
        gt: DisparityMap::new(w, h, gt_vals, gt_valid).unwrap(),
        conf: ConfidenceMap::new(w, h, conf).unwrap(),
    }
}

/// `(confidence, |error|)` of jointly valid pixels in row-major order.
pub fn joint(inst: &Instance) -> Vec<(f64, f64)> {
    (0..inst.pred.len())
        .filter(|&i| inst.pred.is_valid(i) && inst.gt.is_valid(i))
        .map(|i| (inst.conf.value(i), (inst.pred.value(i) - inst.gt.value(i)).abs()))
        .collect()
}

/// Exact AUC over the 5%..100% grid: wrong-pixel prefix sums of the ranked
/// pixels, integer ceil for the pixel counts, rational accumulation.
pub fn rational_auc(samples: &[(f64, f64)], theta: f64) -> BigRational {
    let n = samples.len();
    let mut order: Vec<usize> = (0..n).collect();
    // descending confidence, ascending index among ties
    order.sort_by(|&a, &b| samples[b].0.partial_cmp(&samples[a].0).unwrap().then(a.cmp(&b)));
    let mut prefix = vec![0i64; n + 1];
    for (j, &i) in order.iter().enumerate() {
        prefix[j + 1] = prefix[j] + i64::from(samples[i].1 > theta);
    }
    let rate = |step: usize| {
        let take = (step * n).div_ceil(20);
        BigRational::new(BigInt::from(prefix[take]), BigInt::from(take as i64))
    };
    let width = BigRational::new(BigInt::from(1), BigInt::from(20));
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut area = &width * rate(1);
    for step in 2..=20 {
        area += &width * (rate(step - 1) + rate(step)) * &half;
    }
    area
}

pub fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn objective(
    model: &ToyModel<f64>,
    scene: &ToyScene<f64>,
    mode: LossMode,
    lp: &FocusedLossParams<f64>,
    lambda: f64,
) -> f64 {
    let all: Vec<usize> = (0..scene.n_pixels()).collect();
    model.objective(scene, &all, mode, lp, lambda).unwrap()
}

/// Fourth-order central difference of the training objective along parameter `k`.
pub fn numeric_partial(
    model: &ToyModel<f64>,
    scene: &ToyScene<f64>,
    mode: LossMode,
    lp: &FocusedLossParams<f64>,
    lambda: f64,
    k: usize,
) -> f64 {
    let h = 1e-4 * model.params[k].abs().max(1.0);
    let at = |t: f64| {
        let mut m = model.clone();
        m.params[k] += t;
        objective(&m, scene, mode, lp, lambda)
    };
    (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h)
}

/// `|a - n| / max(|a|, |n|, 1e-6)`.
pub fn rel_err(a: f64, n: f64) -> f64 {
    (a - n).abs() / a.abs().max(n.abs()).max(1e-6)
}
