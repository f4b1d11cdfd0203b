//! Desk-scale disparity-plus-confidence regressor trained with the focused loss.
//!
//! A per-pixel MLP on synthetic features stands in for a stereo network so that
//! the behaviour of the loss itself is what gets exercised.

mod adam;
mod model;
mod scene;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use model::{backward, LossMode, ToyModel};
pub use scene::{gen_synthetic_scene, SceneConfig, ToyScene};
pub use train::{train, TrainConfig, TrainReport};
