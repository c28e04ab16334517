//! Reward-reconstruction attack: given known dynamics and a learned policy,
//! recover a reward vector via the finite-state linear-programming inverse-RL
//! formulation, solved by a built-in dense two-phase simplex.

mod lp;
mod simplex;

pub use lp::{
    occupancy_matrix, policy_agreement, reconstruct_reward, Dynamics, IrlConfig, IrlError,
    ReconstructedReward, SolverStatus,
};
pub use simplex::{LpProblem, LpSolution, LpStatus};
