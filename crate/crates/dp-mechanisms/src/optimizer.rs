use crate::{gaussian_sample, DpError, RdpAccountant};
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizerKind {
    Sgd,
    Adam,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActivationKind {
    Rectifier,
    Tanh,
}

/// Configuration of the private optimizer step. `clip_norm` bounds each
/// example (micro-batch) gradient in L2; `sigma` is the noise multiplier so
/// the aggregate mean receives per-coordinate noise of std
/// `sigma * clip_norm / batch`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DpSgdConfig {
    pub clip_norm: f64,
    pub sigma: f64,
    pub optimizer: OptimizerKind,
    pub activation: ActivationKind,
}

impl DpSgdConfig {
    pub fn new(clip_norm: f64, sigma: f64, optimizer: OptimizerKind, activation: ActivationKind) -> Self {
        assert!(clip_norm > 0.0, "clip_norm must be positive");
        assert!(sigma >= 0.0, "sigma must be non-negative");
        DpSgdConfig { clip_norm, sigma, optimizer, activation }
    }
}

/// Clip-and-noise aggregation of per-example gradients.
///
/// Each gradient is rescaled to L2 norm at most `clip_norm`, the clipped
/// gradients are averaged, and Gaussian noise of std
/// `sigma * clip_norm / batch` is added per coordinate. The accountant
/// records one mechanism step.
pub fn dp_optimizer_step<R: Rng + ?Sized>(
    per_example_grads: &[Vec<f64>],
    config: &DpSgdConfig,
    accountant: &mut RdpAccountant,
    rng: &mut R,
) -> Result<Vec<f64>, DpError> {
    if per_example_grads.is_empty() {
        return Err(DpError::EmptyBatch);
    }
    let dim = per_example_grads[0].len();
    let batch = per_example_grads.len() as f64;

    let mut agg = vec![0.0; dim];
    for (i, grad) in per_example_grads.iter().enumerate() {
        debug_assert_eq!(grad.len(), dim);
        if grad.iter().any(|g| !g.is_finite()) {
            return Err(DpError::NonFiniteGradient(i));
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        let scale = if config.clip_norm.is_infinite() || norm <= config.clip_norm {
            1.0
        } else {
            config.clip_norm / norm
        };
        for (acc, g) in agg.iter_mut().zip(grad) {
            *acc += g * scale;
        }
    }
    for acc in agg.iter_mut() {
        *acc /= batch;
    }

    if config.sigma > 0.0 {
        let noise_std = config.sigma * config.clip_norm / batch;
        for acc in agg.iter_mut() {
            *acc += gaussian_sample(noise_std, rng);
        }
    }

    // normalized recording: noise multiplier sigma on a unit-sensitivity sum
    accountant.record_gaussian(config.sigma, 1.0);
    Ok(agg)
}
