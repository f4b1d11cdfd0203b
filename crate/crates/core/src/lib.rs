//! Confidence-aware robust regression for stereo disparity.
//!
//! - [`loss`]: focused L1 loss with a learned per-pixel confidence, gradients,
//!   and the optimal confidence for a given residual;
//! - [`metrics`]: EPE, t-pixel error rates, sparsification curves and AUC;
//! - [`ensemble`]: confidence-guided replacement of unreliable pixels;
//! - [`io`]: PFM, 16-bit PNG, CSV and JSON;
//! - [`toymodel`]: a small trainable per-pixel regressor.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64` and `*32`
//! aliases below fix the scalar type.

pub mod ensemble;
pub mod error;
pub mod io;
pub mod loss;
pub mod map;
pub mod metrics;
pub mod scalar;
pub mod toymodel;

pub use ensemble::{conf_guided_ensemble, EnsembleConfig};
pub use error::{Error, Result};
pub use loss::{
    focused_loss_map, focused_loss_pixel, gradient_pixel, loss_scan, optimal_confidence, plain_l1_pixel,
    FocusedLossParams, LossGradient, PixelLossTerms,
};
pub use map::{ConfidenceMap, DisparityMap};
pub use metrics::{
    aggregate, auc, auc_opt, epe, error_rate, evaluate, sparsification, EvalReport, SparsificationCurve,
};
pub use scalar::Scalar;

pub type DisparityMap64 = DisparityMap<f64>;
pub type DisparityMap32 = DisparityMap<f32>;
pub type ConfidenceMap64 = ConfidenceMap<f64>;
pub type ConfidenceMap32 = ConfidenceMap<f32>;
pub type FocusedLossParams64 = FocusedLossParams<f64>;
pub type FocusedLossParams32 = FocusedLossParams<f32>;
pub type SparsificationCurve64 = SparsificationCurve<f64>;
pub type EvalReport64 = EvalReport<f64>;
pub type ToyModel64 = toymodel::ToyModel<f64>;
pub type ToyScene64 = toymodel::ToyScene<f64>;
pub type TrainConfig64 = toymodel::TrainConfig<f64>;
pub type TrainReport64 = toymodel::TrainReport<f64>;
