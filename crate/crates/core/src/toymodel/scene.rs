use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::map::DisparityMap;
use crate::scalar::Scalar;

/// Synthetic per-pixel regression problem with a feature-predictable set of
/// corrupted targets.
#[derive(Debug, Clone, PartialEq)]
pub struct ToyScene<T> {
    pub width: usize,
    pub height: usize,
    pub feature_dim: usize,
    /// Row-major, `feature_dim` values per pixel.
    pub features: Vec<T>,
    pub gt_disparity: DisparityMap<T>,
    /// Pixels whose observed target carries a large offset.
    pub corruption_mask: Vec<bool>,
    /// Training target: ground truth plus noise, plus outliers where corrupted.
    pub observed_disparity: DisparityMap<T>,
}

impl<T: Scalar> ToyScene<T> {
    pub fn n_pixels(&self) -> usize {
        self.width * self.height
    }

    pub fn pixel_features(&self, idx: usize) -> &[T] {
        &self.features[idx * self.feature_dim..(idx + 1) * self.feature_dim]
    }

    pub fn n_corrupted(&self) -> usize {
        self.corruption_mask.iter().filter(|&&m| m).count()
    }
}

/// Parameters of [`gen_synthetic_scene`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneConfig {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub feature_dim: usize,
    pub outlier_frac: f64,
    pub noise_sigma: f64,
    pub outlier_magnitude: f64,
}

impl Default for SceneConfig {
    /// The standard scene: 50x50, 20% outliers, noise sigma 0.2.
    fn default() -> Self {
        Self {
            seed: 0,
            width: 50,
            height: 50,
            feature_dim: 4,
            outlier_frac: 0.2,
            noise_sigma: 0.2,
            outlier_magnitude: 8.0,
        }
    }
}

impl SceneConfig {
    pub fn generate<T: Scalar>(&self) -> Result<ToyScene<T>> {
        gen_synthetic_scene(
            self.seed,
            self.width,
            self.height,
            self.feature_dim,
            self.outlier_frac,
            self.noise_sigma,
            self.outlier_magnitude,
        )
    }
}

/// Builds a deterministic synthetic scene.
///
/// Features: pixel coordinates scaled to `[-1, 1]`, then `feature_dim - 2`
/// random plane waves over them. Ground truth is a smooth function of the
/// features. The `round(outlier_frac * n)` pixels with the largest value of the
/// last feature are corrupted with a positive offset between `outlier_magnitude`
/// and `2 * outlier_magnitude` that ripples quickly across the image, which a
/// small network struggles to fit. Every pixel gets Gaussian noise of standard
/// deviation `noise_sigma`.
pub fn gen_synthetic_scene<T: Scalar>(
    seed: u64,
    width: usize,
    height: usize,
    feature_dim: usize,
    outlier_frac: f64,
    noise_sigma: f64,
    outlier_magnitude: f64,
) -> Result<ToyScene<T>> {
    if width < 2 || height < 2 {
        return Err(Error::invalid(format!("scene must be at least 2x2, got {width}x{height}")));
    }
    if feature_dim < 2 {
        return Err(Error::invalid("scene needs at least 2 features"));
    }
    if !(0.0..=0.5).contains(&outlier_frac) {
        return Err(Error::domain(format!("outlier_frac {outlier_frac} outside [0, 0.5]")));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::domain(format!("noise_sigma must be non-negative, got {noise_sigma}")));
    }
    if !(outlier_magnitude >= 0.0 && outlier_magnitude.is_finite()) {
        return Err(Error::domain(format!("outlier_magnitude must be non-negative, got {outlier_magnitude}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, f64, f64)> = (2..feature_dim)
        .map(|_| {
            let freq = rng.random_range(1.0..2.5);
            let angle = rng.random_range(0.0..std::f64::consts::TAU);
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            (freq * angle.cos(), freq * angle.sin(), phase)
        })
        .collect();

    let n = width * height;
    let mut feats = Vec::with_capacity(n * feature_dim);
    let mut gt = Vec::with_capacity(n);
    let mut hardness = Vec::with_capacity(n);
    for y in 0..height {
        for x in 0..width {
            let u = 2.0 * x as f64 / (width - 1) as f64 - 1.0;
            let v = 2.0 * y as f64 / (height - 1) as f64 - 1.0;
            let mut f = vec![u, v];
            f.extend(waves.iter().map(|&(wu, wv, p)| (wu * u + wv * v + p).sin()));
            gt.push(ground_truth(&f));
            hardness.push(f[feature_dim - 1]);
            feats.extend(f.into_iter().map(T::lit));
        }
    }

    let n_corrupt = ((outlier_frac * n as f64).round() as usize).min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| hardness[j].partial_cmp(&hardness[i]).unwrap());
    let mut corruption_mask = vec![false; n];
    for &i in &order[..n_corrupt] {
        corruption_mask[i] = true;
    }

    let mut observed = Vec::with_capacity(n);
    for i in 0..n {
        let noise: f64 = rng.sample(StandardNormal);
        let mut o = gt[i] + noise_sigma * noise;
        if corruption_mask[i] {
            let (u, v) = (feats[i * feature_dim].to_f64_lossy(), feats[i * feature_dim + 1].to_f64_lossy());
            o += outlier_magnitude * (1.5 + 0.5 * (OUTLIER_RIPPLE * (u + 0.7 * v)).sin());
        }
        observed.push(T::lit(o));
    }

    Ok(ToyScene {
        width,
        height,
        feature_dim,
        features: feats,
        gt_disparity: DisparityMap::from_values(width, height, gt.into_iter().map(T::lit).collect())?,
        corruption_mask,
        observed_disparity: DisparityMap::from_values(width, height, observed)?,
    })
}

/// Spatial frequency of the outlier offset.
const OUTLIER_RIPPLE: f64 = 15.0;

fn ground_truth(f: &[f64]) -> f64 {
    let (u, v) = (f[0], f[1]);
    let mut d = 10.0 + 3.0 * u + 2.0 * (1.5 * v).sin() + u * v;
    for w in &f[2..] {
        d += 0.75 * w;
    }
    d
}
