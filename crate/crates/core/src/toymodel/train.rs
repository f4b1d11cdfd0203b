use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::loss::FocusedLossParams;
use crate::map::{ConfidenceMap, DisparityMap};
use crate::metrics::{auc, default_densities, sparsification};
use crate::scalar::Scalar;

use super::adam::{adam_step, AdamConfig, AdamState};
use super::model::{LossMode, ToyModel};
use super::scene::ToyScene;

/// Training hyper-parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainConfig<T> {
    pub loss_params: FocusedLossParams<T>,
    /// Coefficient of the L1 penalty on all parameters.
    pub weight_decay: T,
    pub learning_rate: T,
    pub beta1: T,
    pub beta2: T,
    pub adam_epsilon: T,
    pub iterations: usize,
    /// Pixels per minibatch, drawn uniformly with replacement.
    pub batch_pixels: usize,
    pub hidden: usize,
    pub seed: u64,
    /// Iterations after which the learning rate is halved.
    pub lr_milestones: Vec<usize>,
    /// Record the full-scene loss every this many iterations.
    pub log_every: usize,
}

impl<T: Scalar> Default for TrainConfig<T> {
    fn default() -> Self {
        Self {
            loss_params: FocusedLossParams::default(),
            weight_decay: T::lit(1e-4),
            learning_rate: T::lit(1e-2),
            beta1: T::lit(0.9),
            beta2: T::lit(0.999),
            adam_epsilon: T::lit(1e-8),
            iterations: 3000,
            batch_pixels: 128,
            hidden: 16,
            seed: 0,
            lr_milestones: vec![1500, 2250],
            log_every: 100,
        }
    }
}

impl<T: Scalar> TrainConfig<T> {
    pub fn validate(&self) -> Result<()> {
        self.loss_params.validate()?;
        if !(self.learning_rate > T::zero() && self.learning_rate.is_finite()) {
            return Err(Error::invalid("learning rate must be positive"));
        }
        if !(self.weight_decay >= T::zero() && self.weight_decay.is_finite()) {
            return Err(Error::invalid("weight decay must be non-negative"));
        }
        let unit = |b: T| b >= T::zero() && b < T::one();
        if !unit(self.beta1) || !unit(self.beta2) {
            return Err(Error::invalid("Adam betas must lie in [0, 1)"));
        }
        if !(self.adam_epsilon > T::zero() && self.adam_epsilon.is_finite()) {
            return Err(Error::invalid("Adam epsilon must be positive"));
        }
        if self.batch_pixels == 0 || self.hidden == 0 || self.log_every == 0 {
            return Err(Error::invalid("batch size, hidden width and log interval must be positive"));
        }
        Ok(())
    }

    fn adam(&self, lr: T) -> AdamConfig<T> {
        AdamConfig { learning_rate: lr, beta1: self.beta1, beta2: self.beta2, epsilon: self.adam_epsilon }
    }
}

/// Outcome of [`train`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainReport<T> {
    pub loss_mode: LossMode,
    pub iterations: usize,
    /// Full-scene mean data loss (under `loss_mode`) before training.
    pub initial_loss: T,
    pub final_loss: T,
    /// `(iteration, full-scene mean data loss)` every `log_every` iterations.
    pub loss_trajectory: Vec<(usize, T)>,
    /// EPE against the noise-free ground truth on non-corrupted pixels.
    pub clean_epe: T,
    /// EPE against the noise-free ground truth on corrupted pixels.
    pub corrupted_epe: Option<T>,
    pub mean_conf_clean: T,
    pub mean_conf_corrupted: Option<T>,
    /// Sparsification AUC of the learned confidence against the training target.
    pub auc: T,
    /// Same with a constant confidence (row-major ranking).
    pub constant_auc: T,
    #[serde(skip)]
    pub prediction: DisparityMap<T>,
    #[serde(skip)]
    pub confidence: ConfidenceMap<T>,
}

fn data_loss<T: Scalar>(
    model: &ToyModel<T>,
    scene: &ToyScene<T>,
    all: &[usize],
    mode: LossMode,
    p: &FocusedLossParams<T>,
) -> Result<T> {
    model.objective(scene, all, mode, p, T::zero())
}

/// Minibatch Adam training of a fresh model on `scene`. Deterministic given `cfg.seed`.
pub fn train<T: Scalar>(
    cfg: &TrainConfig<T>,
    scene: &ToyScene<T>,
    mode: LossMode,
) -> Result<(ToyModel<T>, TrainReport<T>)> {
    cfg.validate()?;
    let n = scene.n_pixels();
    let all: Vec<usize> = (0..n).collect();
    let lp = &cfg.loss_params;

    let mut model = ToyModel::init(scene.feature_dim, cfg.hidden, lp.c_min, cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_ba7c_u64);
    let mut state = AdamState::new(model.params.len());
    let initial_loss = data_loss(&model, scene, &all, mode, lp)?;
    let mut trajectory = Vec::new();
    let mut lr = cfg.learning_rate;
    let mut batch = vec![0usize; cfg.batch_pixels];

    for it in 0..cfg.iterations {
        if cfg.lr_milestones.contains(&it) {
            lr = lr / T::lit(2.0);
        }
        for b in batch.iter_mut() {
            *b = rng.random_range(0..n);
        }
        let (loss, grad) = model.loss_and_gradient(scene, &batch, mode, lp, cfg.weight_decay)?;
        if !loss.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::Divergence { iteration: it, loss: loss.to_f64_lossy() });
        }
        adam_step(&mut model.params, &grad, &mut state, &cfg.adam(lr));
        if (it + 1) % cfg.log_every == 0 {
            let l = data_loss(&model, scene, &all, mode, lp)?;
            if !l.is_finite() {
                return Err(Error::Divergence { iteration: it, loss: l.to_f64_lossy() });
            }
            trajectory.push((it + 1, l));
        }
    }

    let final_loss = data_loss(&model, scene, &all, mode, lp)?;
    let (prediction, confidence) = model.forward_scene(scene)?;
    let mean_where = |values: &dyn Fn(usize) -> T, corrupted: bool| -> Option<T> {
        let idx: Vec<usize> = (0..n).filter(|&i| scene.corruption_mask[i] == corrupted).collect();
        (!idx.is_empty()).then(|| idx.iter().map(|&i| values(i)).sum::<T>() / T::count(idx.len()))
    };
    let abs_err = |i: usize| (prediction.value(i) - scene.gt_disparity.value(i)).abs();
    let conf_at = |i: usize| confidence.value(i);
    let clean_epe = mean_where(&abs_err, false).ok_or(Error::EmptyMask)?;
    let corrupted_epe = mean_where(&abs_err, true);
    let mean_conf_clean = mean_where(&conf_at, false).ok_or(Error::EmptyMask)?;
    let mean_conf_corrupted = mean_where(&conf_at, true);

    let theta = T::one();
    let densities = default_densities();
    let curve = sparsification(&prediction, &scene.observed_disparity, &confidence, theta, &densities)?;
    let flat = ConfidenceMap::constant(scene.width, scene.height, T::lit(0.5))?;
    let flat_curve = sparsification(&prediction, &scene.observed_disparity, &flat, theta, &densities)?;

    let report = TrainReport {
        loss_mode: mode,
        iterations: cfg.iterations,
        initial_loss,
        final_loss,
        loss_trajectory: trajectory,
        clean_epe,
        corrupted_epe,
        mean_conf_clean,
        mean_conf_corrupted,
        auc: auc(&curve),
        constant_auc: auc(&flat_curve),
        prediction,
        confidence,
    };
    Ok((model, report))
}
