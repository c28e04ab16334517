use crate::DpError;
use rand::Rng;
use rand_distr::{Distribution, Normal};

/// L2 sensitivity of one Bellman value update over adjacent rewards
/// (`||r1 - r2||_2 <= 1`): `|S| / (|S| - 1)`.
pub fn bellman_sensitivity(n_states: usize) -> Result<f64, DpError> {
    if n_states < 2 {
        return Err(DpError::TooFewStates(n_states));
    }
    Ok(n_states as f64 / (n_states as f64 - 1.0))
}

/// Zero-mean Gaussian draw with standard deviation `sigma`.
///
/// `sigma = 0` returns exactly 0 without consuming the rng, so a zero-noise
/// run shares its random stream with a no-noise run.
pub fn gaussian_sample<R: Rng + ?Sized>(sigma: f64, rng: &mut R) -> f64 {
    assert!(sigma >= 0.0, "sigma must be non-negative");
    if sigma == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma).expect("finite sigma").sample(rng)
}
