use dp_mechanisms::OptimizerKind;
use thiserror::Error;

/// Training hyper-parameters for the deep solvers. Defaults follow the
/// testing configuration: 15 epochs of 200 optimizer steps, mini-batches of
/// 50 split into 5 micro-batches, learning rate 0.15, discount 0.99, seed 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub iterations: usize,
    pub episodes: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub micro_batches: usize,
    pub gamma: f64,
    pub seed: u64,
    pub optimizer: OptimizerKind,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 15,
            iterations: 200,
            episodes: 5,
            learning_rate: 0.15,
            batch_size: 50,
            micro_batches: 5,
            gamma: 0.99,
            seed: 0,
            optimizer: OptimizerKind::Sgd,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.epochs == 0 || self.iterations == 0 || self.episodes == 0 {
            return Err("epochs, iterations, and episodes must be positive".into());
        }
        if self.batch_size == 0 || self.micro_batches == 0 {
            return Err("batch size and micro-batch count must be positive".into());
        }
        if self.batch_size % self.micro_batches != 0 {
            return Err(format!(
                "mini-batch size {} is not divisible by micro-batch count {}",
                self.batch_size, self.micro_batches
            ));
        }
        if !(self.learning_rate > 0.0) || !(0.0..1.0).contains(&self.gamma) {
            return Err("learning rate must be positive and gamma in [0,1)".into());
        }
        Ok(())
    }

    pub fn total_iterations(&self) -> usize {
        self.epochs * self.iterations
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TrainError {
    #[error("loss diverged to a non-finite value at iteration {iteration}")]
    DivergedLoss { iteration: usize },
    #[error("trajectory batch contained no completed steps")]
    DegenerateBatch,
    #[error("invalid training configuration: {0}")]
    BadConfig(String),
}
