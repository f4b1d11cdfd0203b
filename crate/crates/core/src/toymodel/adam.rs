use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Adam hyper-parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig<T> {
    pub learning_rate: T,
    pub beta1: T,
    pub beta2: T,
    pub epsilon: T,
}

impl<T: Scalar> Default for AdamConfig<T> {
    fn default() -> Self {
        Self { learning_rate: T::lit(1e-3), beta1: T::lit(0.9), beta2: T::lit(0.999), epsilon: T::lit(1e-8) }
    }
}

/// First and second moment estimates plus the step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub m: Vec<T>,
    pub v: Vec<T>,
    pub step: u64,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(n_params: usize) -> Self {
        Self { m: vec![T::zero(); n_params], v: vec![T::zero(); n_params], step: 0 }
    }
}

/// One bias-corrected Adam update of `params` in place.
pub fn adam_step<T: Scalar>(params: &mut [T], grads: &[T], state: &mut AdamState<T>, cfg: &AdamConfig<T>) {
    assert_eq!(params.len(), grads.len(), "parameter / gradient length mismatch");
    assert_eq!(params.len(), state.m.len(), "parameter / state length mismatch");
    state.step += 1;
    let t = state.step as i32;
    let one = T::one();
    let bias1 = one - cfg.beta1.powi(t);
    let bias2 = one - cfg.beta2.powi(t);
    for (((p, &g), m), v) in params.iter_mut().zip(grads).zip(state.m.iter_mut()).zip(state.v.iter_mut()) {
        *m = cfg.beta1 * *m + (one - cfg.beta1) * g;
        *v = cfg.beta2 * *v + (one - cfg.beta2) * g * g;
        let m_hat = *m / bias1;
        let v_hat = *v / bias2;
        *p = *p - cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_weights() {
        let mut p = vec![0.3, -1.2, 4.0];
        let orig = p.clone();
        let mut s = AdamState::new(3);
        adam_step(&mut p, &[0.0; 3], &mut s, &AdamConfig::default());
        assert_eq!(p, orig);
        assert_eq!(s.step, 1);
    }

    #[test]
    fn first_step_is_normalized() {
        // m_hat = g, v_hat = g², so the step is lr * g / (|g| + eps)
        let cfg = AdamConfig { learning_rate: 0.01, ..AdamConfig::default() };
        for g in [1e-3, 0.5, -7.0, 300.0] {
            let mut p = vec![1.0f64];
            let mut s = AdamState::new(1);
            adam_step(&mut p, &[g], &mut s, &cfg);
            let expected = 1.0 - 0.01 * g / (g.abs() + 1e-8);
            assert!((p[0] - expected).abs() < 1e-12, "g = {g}");
        }
    }
}
