/// An (epsilon, delta) privacy budget. `epsilon = f64::INFINITY` means no
/// privacy (and therefore no noise).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrivacyBudget {
    pub epsilon: f64,
    pub delta: f64,
}

pub const DEFAULT_DELTA: f64 = 1e-5;

impl PrivacyBudget {
    pub fn new(epsilon: f64) -> Self {
        PrivacyBudget { epsilon, delta: DEFAULT_DELTA }
    }

    pub fn is_non_private(&self) -> bool {
        self.epsilon.is_infinite()
    }
}

/// Gaussian noise scale paired with the L2 sensitivity it was calibrated for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub sigma: f64,
    pub sensitivity: f64,
}

impl NoiseSpec {
    pub fn new(sigma: f64, sensitivity: f64) -> Self {
        assert!(sigma >= 0.0, "sigma must be non-negative");
        assert!(sensitivity > 0.0, "sensitivity must be positive");
        NoiseSpec { sigma, sensitivity }
    }

    /// The zero-noise spec used by non-private runs.
    pub fn none() -> Self {
        NoiseSpec { sigma: 0.0, sensitivity: 1.0 }
    }
}
