//! Differential-privacy building blocks: the Gaussian mechanism, the
//! Bellman-update sensitivity bound, RDP accounting with sigma calibration,
//! the published sigma table, and the clip-and-noise optimizer step.

mod accountant;
mod budget;
mod gaussian;
mod optimizer;
mod table;

pub use accountant::{
    default_order_grid, rdp_calibrate, rdp_epsilon_of_gaussian, RdpAccountant, SIGMA_CAP,
};
pub use budget::{NoiseSpec, PrivacyBudget};
pub use gaussian::{bellman_sensitivity, gaussian_sample};
pub use optimizer::{dp_optimizer_step, ActivationKind, DpSgdConfig, OptimizerKind};
pub use table::{sigma_from_table, PolicyFamily, EPSILON_BUDGETS, VI_SENSITIVITY_BOUND};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DpError {
    #[error("Bellman sensitivity needs at least 2 states, got {0}")]
    TooFewStates(usize),
    #[error("epsilon {0} is not one of the published budgets")]
    UnknownBudget(f64),
    #[error("no sigma below the cap {cap} satisfies epsilon {epsilon}")]
    BudgetTooSmall { epsilon: f64, cap: f64 },
    #[error("non-finite gradient at example {0}")]
    NonFiniteGradient(usize),
    #[error("empty gradient batch")]
    EmptyBatch,
}
