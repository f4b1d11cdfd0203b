//! Per-pixel multilayer perceptron with a disparity output and a sigmoid
//! confidence head, plus reverse-mode gradients of the training objective.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{gradient_unchecked, terms_unchecked, FocusedLossParams};
use crate::map::{ConfidenceMap, DisparityMap};
use crate::scalar::Scalar;

use super::scene::ToyScene;

/// Which per-pixel loss drives training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LossMode {
    /// Confidence-weighted L1 with confidence regularization.
    Focused,
    /// Plain `|r|`; the confidence head receives no gradient.
    PlainL1,
}

/// `F -> H -> H -> 2` tanh MLP. Output 0 is the disparity, output 1 goes through
/// a logistic function and is clamped to `[c_min, 1]`.
///
/// Parameters live in one flat vector laid out as
/// `w1 (H x F), b1 (H), w2 (H x H), b2 (H), w3 (2 x H), b3 (2)`, matrices row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyModel<T> {
    pub feature_dim: usize,
    pub hidden: usize,
    pub c_min: T,
    pub params: Vec<T>,
}

#[derive(Debug, Clone, Copy)]
struct Layout {
    w1: usize,
    b1: usize,
    w2: usize,
    b2: usize,
    w3: usize,
    b3: usize,
    len: usize,
}

impl Layout {
    fn new(f: usize, h: usize) -> Self {
        let w1 = 0;
        let b1 = w1 + h * f;
        let w2 = b1 + h;
        let b2 = w2 + h * h;
        let w3 = b2 + h;
        let b3 = w3 + 2 * h;
        Self { w1, b1, w2, b2, w3, b3, len: b3 + 2 }
    }
}

/// Per-pixel buffers for the forward and backward passes.
struct Scratch<T> {
    h1: Vec<T>,
    h2: Vec<T>,
    d_h1: Vec<T>,
    d_h2: Vec<T>,
}

impl<T: Scalar> Scratch<T> {
    fn new(hidden: usize) -> Self {
        Self {
            h1: vec![T::zero(); hidden],
            h2: vec![T::zero(); hidden],
            d_h1: vec![T::zero(); hidden],
            d_h2: vec![T::zero(); hidden],
        }
    }
}

/// Network outputs for one pixel.
#[derive(Clone, Copy)]
struct Outputs<T> {
    disparity: T,
    /// Logistic output before clamping.
    squashed: T,
    confidence: T,
}

#[inline]
fn logistic<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

impl<T: Scalar> ToyModel<T> {
    pub fn param_count(feature_dim: usize, hidden: usize) -> usize {
        Layout::new(feature_dim, hidden).len
    }

    /// All parameters zero: disparity 0 and confidence 0.5 everywhere.
    pub fn zeros(feature_dim: usize, hidden: usize, c_min: T) -> Self {
        Self { feature_dim, hidden, c_min, params: vec![T::zero(); Self::param_count(feature_dim, hidden)] }
    }

    /// Every parameter uniform in `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`.
    pub fn init(feature_dim: usize, hidden: usize, c_min: T, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = Layout::new(feature_dim, hidden);
        let mut params = Vec::with_capacity(l.len);
        let mut fill = |count: usize, fan_in: usize| {
            let bound = 1.0 / (fan_in as f64).sqrt();
            for _ in 0..count {
                params.push(T::lit(rng.random_range(-bound..=bound)));
            }
        };
        fill(hidden * feature_dim + hidden, feature_dim);
        fill(hidden * hidden + hidden, hidden);
        fill(2 * hidden + 2, hidden);
        Self { feature_dim, hidden, c_min, params }
    }

    fn layout(&self) -> Layout {
        Layout::new(self.feature_dim, self.hidden)
    }

    fn check(&self) -> Result<()> {
        if self.params.len() != Self::param_count(self.feature_dim, self.hidden) {
            return Err(Error::invalid(format!(
                "model has {} parameters, layout needs {}",
                self.params.len(),
                Self::param_count(self.feature_dim, self.hidden)
            )));
        }
        Ok(())
    }

    fn run(&self, x: &[T], sc: &mut Scratch<T>) -> Outputs<T> {
        let l = self.layout();
        let (f, h) = (self.feature_dim, self.hidden);
        let p = &self.params;
        for j in 0..h {
            let row = &p[l.w1 + j * f..l.w1 + (j + 1) * f];
            let z = row.iter().zip(x).fold(p[l.b1 + j], |acc, (&w, &xi)| acc + w * xi);
            sc.h1[j] = z.tanh();
        }
        for j in 0..h {
            let row = &p[l.w2 + j * h..l.w2 + (j + 1) * h];
            let z = row.iter().zip(&sc.h1).fold(p[l.b2 + j], |acc, (&w, &a)| acc + w * a);
            sc.h2[j] = z.tanh();
        }
        let out = |o: usize| {
            let row = &p[l.w3 + o * h..l.w3 + (o + 1) * h];
            row.iter().zip(&sc.h2).fold(p[l.b3 + o], |acc, (&w, &a)| acc + w * a)
        };
        let disparity = out(0);
        let squashed = logistic(out(1));
        let confidence = squashed.max(self.c_min).min(T::one());
        Outputs { disparity, squashed, confidence }
    }

    /// Disparity and confidence for one pixel's features.
    pub fn forward_pixel(&self, x: &[T]) -> (T, T) {
        let o = self.run(x, &mut Scratch::new(self.hidden));
        (o.disparity, o.confidence)
    }

    /// Applies the model to every pixel of a `width x height` feature grid.
    pub fn forward(&self, features: &[T], width: usize, height: usize) -> Result<(DisparityMap<T>, ConfidenceMap<T>)> {
        self.check()?;
        let n = width * height;
        if features.len() != n * self.feature_dim {
            return Err(Error::invalid(format!(
                "expected {} feature values for {width}x{height}x{}, got {}",
                n * self.feature_dim,
                self.feature_dim,
                features.len()
            )));
        }
        let mut sc = Scratch::new(self.hidden);
        let (disp, conf): (Vec<T>, Vec<T>) = features
            .chunks_exact(self.feature_dim)
            .map(|x| {
                let o = self.run(x, &mut sc);
                (o.disparity, o.confidence)
            })
            .unzip();
        Ok((DisparityMap::from_values(width, height, disp)?, ConfidenceMap::new(width, height, conf)?))
    }

    pub fn forward_scene(&self, scene: &ToyScene<T>) -> Result<(DisparityMap<T>, ConfidenceMap<T>)> {
        if scene.feature_dim != self.feature_dim {
            return Err(Error::invalid(format!(
                "scene has {} features, model expects {}",
                scene.feature_dim, self.feature_dim
            )));
        }
        self.forward(&scene.features, scene.width, scene.height)
    }

    /// Accumulates `scale * d(loss)/d(params)` for one pixel into `grad` and
    /// returns the pixel loss.
    #[allow(clippy::too_many_arguments)]
    fn accumulate_pixel(
        &self,
        x: &[T],
        target: T,
        mode: LossMode,
        params: &FocusedLossParams<T>,
        scale: T,
        grad: &mut [T],
        sc: &mut Scratch<T>,
    ) -> T {
        let l = self.layout();
        let (f, h) = (self.feature_dim, self.hidden);
        let p = &self.params;
        let a = self.run(x, sc);
        let residual = a.disparity - target;

        let (loss, d_disp, d_logit) = match mode {
            LossMode::PlainL1 => {
                let s = if residual > T::zero() {
                    T::one()
                } else if residual < T::zero() {
                    -T::one()
                } else {
                    T::zero()
                };
                (residual.abs(), s, T::zero())
            }
            LossMode::Focused => {
                let terms = terms_unchecked(residual, a.confidence, params);
                let g = gradient_unchecked(residual, a.confidence, params);
                // the clamp to [c_min, 1] is flat outside its range
                let d_logit = if a.squashed > self.c_min && a.squashed < T::one() {
                    g.d_confidence * a.squashed * (T::one() - a.squashed)
                } else {
                    T::zero()
                };
                (terms.total, g.d_prediction, d_logit)
            }
        };
        let d_out = [d_disp * scale, d_logit * scale];

        let Scratch { h1, h2, d_h1, d_h2 } = sc;
        d_h2.fill(T::zero());
        for (o, &dz) in d_out.iter().enumerate() {
            if dz == T::zero() {
                continue;
            }
            grad[l.b3 + o] = grad[l.b3 + o] + dz;
            for j in 0..h {
                let wi = l.w3 + o * h + j;
                grad[wi] = grad[wi] + dz * h2[j];
                d_h2[j] = d_h2[j] + dz * p[wi];
            }
        }
        d_h1.fill(T::zero());
        for j in 0..h {
            let dz = d_h2[j] * (T::one() - h2[j] * h2[j]);
            grad[l.b2 + j] = grad[l.b2 + j] + dz;
            for i in 0..h {
                let wi = l.w2 + j * h + i;
                grad[wi] = grad[wi] + dz * h1[i];
                d_h1[i] = d_h1[i] + dz * p[wi];
            }
        }
        for j in 0..h {
            let dz = d_h1[j] * (T::one() - h1[j] * h1[j]);
            grad[l.b1 + j] = grad[l.b1 + j] + dz;
            for (i, &xi) in x.iter().enumerate().take(f) {
                let wi = l.w1 + j * f + i;
                grad[wi] = grad[wi] + dz * xi;
            }
        }
        loss
    }

    /// Mean per-pixel loss over `pixels` plus `weight_decay * sum |w|`, and its
    /// gradient (L1 subgradient `sign(w)`, 0 at `w = 0`).
    pub fn loss_and_gradient(
        &self,
        scene: &ToyScene<T>,
        pixels: &[usize],
        mode: LossMode,
        params: &FocusedLossParams<T>,
        weight_decay: T,
    ) -> Result<(T, Vec<T>)> {
        self.check()?;
        if pixels.is_empty() {
            return Err(Error::EmptyMask);
        }
        let scale = T::one() / T::count(pixels.len());
        let mut grad = vec![T::zero(); self.params.len()];
        let mut sc = Scratch::new(self.hidden);
        let mut sum = T::zero();
        for &i in pixels {
            sum = sum
                + self.accumulate_pixel(
                    scene.pixel_features(i),
                    scene.observed_disparity.value(i),
                    mode,
                    params,
                    scale,
                    &mut grad,
                    &mut sc,
                );
        }
        let mut objective = sum * scale;
        if weight_decay != T::zero() {
            for (g, &w) in grad.iter_mut().zip(&self.params) {
                objective = objective + weight_decay * w.abs();
                if w > T::zero() {
                    *g = *g + weight_decay;
                } else if w < T::zero() {
                    *g = *g - weight_decay;
                }
            }
        }
        Ok((objective, grad))
    }

    /// Objective of [`Self::loss_and_gradient`] without the gradient.
    pub fn objective(
        &self,
        scene: &ToyScene<T>,
        pixels: &[usize],
        mode: LossMode,
        params: &FocusedLossParams<T>,
        weight_decay: T,
    ) -> Result<T> {
        self.check()?;
        if pixels.is_empty() {
            return Err(Error::EmptyMask);
        }
        let mut sc = Scratch::new(self.hidden);
        let mut sum = T::zero();
        for &i in pixels {
            let o = self.run(scene.pixel_features(i), &mut sc);
            let r = o.disparity - scene.observed_disparity.value(i);
            sum = sum
                + match mode {
                    LossMode::PlainL1 => r.abs(),
                    LossMode::Focused => terms_unchecked(r, o.confidence, params).total,
                };
        }
        let reg = self.params.iter().fold(T::zero(), |acc, w| acc + w.abs());
        Ok(sum / T::count(pixels.len()) + weight_decay * reg)
    }
}

/// Gradient of the full-scene mean focused loss plus `weight_decay * sum |w|`.
pub fn backward<T: Scalar>(
    model: &ToyModel<T>,
    scene: &ToyScene<T>,
    params: &FocusedLossParams<T>,
    weight_decay: T,
) -> Result<Vec<T>> {
    params.validate()?;
    let pixels: Vec<usize> = (0..scene.n_pixels()).collect();
    Ok(model.loss_and_gradient(scene, &pixels, LossMode::Focused, params, weight_decay)?.1)
}
