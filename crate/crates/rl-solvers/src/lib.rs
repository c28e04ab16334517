//! Policy solvers for tabular MDPs: value iteration with optional noisy
//! Bellman updates, DQN, and vanilla PPO over a small built-in feed-forward
//! approximator. Every solver is deterministic given its config and rng.

mod config;
mod dqn;
mod nn;
mod optim;
mod policy;
mod ppo;
mod rollout;
mod vi;

pub use config::{TrainConfig, TrainError};
pub use dqn::{train_dqn, TrainedPolicy};
pub use nn::{gradient_check, mse_loss_and_grad, Mlp};
pub use policy::{Policy, ValueFunction};
pub use ppo::{train_ppo, PpoOutcome};
pub use rollout::evaluate_return;
pub use vi::{
    bellman_sweep, greedy_policy, policy_evaluation_exact, value_iteration, SolveError, ViOutcome,
};

pub use dp_mechanisms::{ActivationKind, OptimizerKind};
