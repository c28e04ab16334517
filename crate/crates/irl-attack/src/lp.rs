use crate::simplex::{LpProblem, LpStatus};
use gridworld_mdp::TabularMdp;
use nalgebra::DMatrix;
use rl_solvers::Policy;
use thiserror::Error;

/// Constraint rows whose coefficients all fall below this bound carry no
/// information (two actions with identical transition rows) and are dropped.
const DEGENERATE_ROW_TOL: f64 = 1e-12;

/// Weight of the per-margin tie-break bonus in the LP objective; small
/// enough never to trade against the min-margin sum or the L1 penalty.
const MARGIN_TIEBREAK: f64 = 1e-4;

#[derive(Debug, Error, PartialEq)]
pub enum IrlError {
    #[error("the attack LP reported infeasibility; R = 0 is always feasible, so constraint assembly is broken")]
    Infeasible,
    #[error("the LP engine hit its iteration limit")]
    IterationLimit,
    #[error("the LP relaxation is unbounded; box constraints are broken")]
    Unbounded,
    #[error("(I - gamma P) is singular")]
    SingularSystem,
}

/// Parameters of the reconstruction LP. `gamma` must match the attacked
/// environment's discount.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IrlConfig {
    pub r_max: f64,
    pub l1_penalty: f64,
    pub gamma: f64,
    /// Saturation point of each state's min-margin term in the objective.
    pub margin_cap: f64,
    /// Weight of the per-margin strictness bonus.
    pub margin_bonus: f64,
}

impl Default for IrlConfig {
    fn default() -> Self {
        IrlConfig {
            r_max: 1.0,
            l1_penalty: 0.01,
            gamma: 0.99,
            margin_cap: 0.02,
            margin_bonus: MARGIN_TIEBREAK,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverStatus {
    Optimal,
    Infeasible,
    IterationLimit,
}

/// The attack output: the recovered reward vector and the LP diagnostics.
#[derive(Clone, Debug)]
pub struct ReconstructedReward {
    pub r_hat: Vec<f64>,
    pub lp_objective: f64,
    pub status: SolverStatus,
}

/// What the adversary knows about the environment: transition dynamics and
/// which states are terminal. Deliberately excludes rewards.
#[derive(Clone, Debug)]
pub struct Dynamics {
    n_states: usize,
    n_actions: usize,
    p: Vec<f64>,
    terminal: Vec<bool>,
}

impl Dynamics {
    pub fn new(n_states: usize, n_actions: usize, p: Vec<f64>, terminal: Vec<bool>) -> Self {
        assert_eq!(p.len(), n_states * n_actions * n_states);
        assert_eq!(terminal.len(), n_states);
        Dynamics { n_states, n_actions, p, terminal }
    }

    pub fn from_mdp(mdp: &TabularMdp) -> Self {
        let n = mdp.n_states();
        let a = mdp.n_actions();
        let mut p = Vec::with_capacity(n * a * n);
        for s in 0..n {
            for act in 0..a {
                p.extend_from_slice(mdp.transition_row(s, act));
            }
        }
        Dynamics::new(n, a, p, mdp.terminal().to_vec())
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn row(&self, s: usize, a: usize) -> &[f64] {
        let base = (s * self.n_actions + a) * self.n_states;
        &self.p[base..base + self.n_states]
    }

    pub fn is_terminal(&self, s: usize) -> bool {
        self.terminal[s]
    }

    /// Transition matrix of a deterministic policy, with terminal rows
    /// zeroed so that `(I - gamma P)^{-1} R` is the value function under the
    /// held-terminal convention (`V(terminal) = R(terminal)`).
    pub fn policy_matrix(&self, actions: &[usize]) -> DMatrix<f64> {
        assert_eq!(actions.len(), self.n_states);
        let mut m = DMatrix::<f64>::zeros(self.n_states, self.n_states);
        for s in 0..self.n_states {
            if self.terminal[s] {
                continue;
            }
            for (next, &p) in self.row(s, actions[s]).iter().enumerate() {
                m[(s, next)] = p;
            }
        }
        m
    }
}

/// Dense inverse `(I - gamma P_pi)^{-1}`, the shared factor of every LP
/// constraint row.
pub fn occupancy_matrix(p_pi: &DMatrix<f64>, gamma: f64) -> Result<DMatrix<f64>, IrlError> {
    assert!((0.0..1.0).contains(&gamma));
    let n = p_pi.nrows();
    let system = DMatrix::<f64>::identity(n, n) - p_pi * gamma;
    system.try_inverse().ok_or(IrlError::SingularSystem)
}

/// Mount the reward-reconstruction attack.
///
/// Solves the finite-state linear program that makes the observed policy
/// optimal by a large margin: maximize
/// `sum_s min(min_{a != a*(s)} (P_{a*(s)} - P_a) G R, margin_cap)  -  lambda ||R||_1`
/// subject to every margin being non-negative and `|R| <= r_max`, where
/// `G = (I - gamma P_{a*})^{-1}` with terminal rows of `P_{a*}` zeroed
/// (so `G R` is the held-terminal value function the solvers use).
/// Stochastic policies are determinized by their greedy view. Min terms are
/// linearized with one capped auxiliary variable per constrained state and
/// `|R|` with a positive/negative split; a tiny per-margin bonus breaks
/// objective ties toward strict margins.
pub fn reconstruct_reward(
    dynamics: &Dynamics,
    policy: &Policy,
    config: &IrlConfig,
) -> Result<ReconstructedReward, IrlError> {
    assert_eq!(policy.n_states(), dynamics.n_states());
    assert_eq!(policy.n_actions(), dynamics.n_actions());
    assert!(config.r_max.is_finite() && config.r_max > 0.0);
    assert!(config.l1_penalty.is_finite() && config.l1_penalty >= 0.0);

    let n = dynamics.n_states();
    let a_star = policy.greedy_actions();
    let occupancy = occupancy_matrix(&dynamics.policy_matrix(&a_star), config.gamma)?;

    // margin coefficient rows per state, skipping terminal states and
    // degenerate (all-zero) rows
    let mut margin_rows: Vec<(usize, Vec<f64>, f64)> = Vec::new();
    let mut constrained: Vec<bool> = vec![false; n];
    for s in 0..n {
        if dynamics.is_terminal(s) {
            continue;
        }
        for a in 0..dynamics.n_actions() {
            if a == a_star[s] {
                continue;
            }
            let star_row = dynamics.row(s, a_star[s]);
            let alt_row = dynamics.row(s, a);
            let mut coeffs = vec![0.0; n];
            let mut max_abs = 0.0f64;
            for j in 0..n {
                let mut acc = 0.0;
                for i in 0..n {
                    let diff = star_row[i] - alt_row[i];
                    if diff != 0.0 {
                        acc += diff * occupancy[(i, j)];
                    }
                }
                coeffs[j] = acc;
                max_abs = max_abs.max(acc.abs());
            }
            if max_abs <= DEGENERATE_ROW_TOL {
                continue;
            }
            constrained[s] = true;
            margin_rows.push((s, coeffs, max_abs));
        }
    }

    // variables: r+ (n), r- (n), then one margin floor t_s per constrained state
    let t_index: Vec<Option<usize>> = {
        let mut next = 2 * n;
        constrained
            .iter()
            .map(|&c| {
                if c {
                    let idx = next;
                    next += 1;
                    Some(idx)
                } else {
                    None
                }
            })
            .collect()
    };
    let n_vars = 2 * n + constrained.iter().filter(|&&c| c).count();

    let mut lp = LpProblem::new(n_vars);
    let mut objective = vec![0.0; n_vars];
    for s in 0..n {
        objective[s] = -config.l1_penalty;
        objective[n + s] = -config.l1_penalty;
    }
    for idx in t_index.iter().flatten() {
        objective[*idx] = 1.0;
    }
    // strictness bonus: a small reward on every individual margin pushes,
    // within the sum-optimal region, toward rewards whose margins are
    // strict, so re-solving on r_hat does not flip tied actions
    for (_, coeffs, max_abs) in &margin_rows {
        let w = config.margin_bonus / max_abs;
        for (j, &d) in coeffs.iter().enumerate() {
            objective[j] += w * d;
            objective[n + j] -= w * d;
        }
    }
    lp.set_objective(objective);

    for (s, coeffs, max_abs) in &margin_rows {
        // rows are scaled by 1/max|d|; with a zero right-hand side this is
        // an exact reformulation that keeps tableau entries O(1)
        let scale = 1.0 / max_abs;
        // margin >= 0:   -d.(r+ - r-) <= 0
        let mut row = vec![0.0; n_vars];
        for (j, &d) in coeffs.iter().enumerate() {
            row[j] = -d * scale;
            row[n + j] = d * scale;
        }
        lp.add_constraint(row.clone(), 0.0);
        // t_s <= margin:  t_s - d.(r+ - r-) <= 0
        row[t_index[*s].expect("constrained state has a t variable")] = scale;
        lp.add_constraint(row, 0.0);
    }
    if config.margin_cap.is_finite() {
        for idx in t_index.iter().flatten() {
            let mut row = vec![0.0; n_vars];
            row[*idx] = 1.0;
            lp.add_constraint(row, config.margin_cap);
        }
    }
    for s in 0..n {
        let mut up = vec![0.0; n_vars];
        up[s] = 1.0;
        lp.add_constraint(up, config.r_max);
        let mut down = vec![0.0; n_vars];
        down[n + s] = 1.0;
        lp.add_constraint(down, config.r_max);
    }

    let max_iters = 100 * (lp.n_constraints() + n_vars) + 1000;
    let solution = lp.solve(max_iters);
    match solution.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(IrlError::Infeasible),
        LpStatus::Unbounded => return Err(IrlError::Unbounded),
        LpStatus::IterationLimit => return Err(IrlError::IterationLimit),
    }

    let r_hat: Vec<f64> = (0..n).map(|s| solution.x[s] - solution.x[n + s]).collect();
    // report the formulation's objective (min-margin sum minus the L1
    // penalty) without the tie-break perturbation
    let margin_sum: f64 = t_index.iter().flatten().map(|&idx| solution.x[idx]).sum();
    let l1: f64 = (0..2 * n).map(|j| solution.x[j]).sum();
    Ok(ReconstructedReward {
        r_hat,
        lp_objective: margin_sum - config.l1_penalty * l1,
        status: SolverStatus::Optimal,
    })
}

/// Fraction of masked states where the two policies' greedy actions agree.
/// An empty mask counts as full agreement.
pub fn policy_agreement(a: &Policy, b: &Policy, mask: &[bool]) -> f64 {
    assert_eq!(a.n_states(), b.n_states());
    assert_eq!(a.n_actions(), b.n_actions());
    assert_eq!(mask.len(), a.n_states());
    let ga = a.greedy_actions();
    let gb = b.greedy_actions();
    let total = mask.iter().filter(|&&m| m).count();
    if total == 0 {
        return 1.0;
    }
    let agree = mask
        .iter()
        .enumerate()
        .filter(|&(s, &m)| m && ga[s] == gb[s])
        .count();
    agree as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_dynamics(n: usize, n_actions: usize) -> Dynamics {
        // all actions identical: uniform over states
        let p = vec![1.0 / n as f64; n * n_actions * n];
        Dynamics::new(n, n_actions, p, vec![false; n])
    }

    #[test]
    fn occupancy_at_zero_discount_is_identity() {
        let p = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 1.0, 0.0]);
        let g = occupancy_matrix(&p, 0.0).unwrap();
        assert!((g - DMatrix::<f64>::identity(2, 2)).abs().max() < 1e-12);
    }

    #[test]
    fn occupancy_row_sums_are_geometric() {
        let p = DMatrix::from_row_slice(3, 3, &[0.2, 0.3, 0.5, 0.0, 1.0, 0.0, 0.6, 0.2, 0.2]);
        let gamma = 0.9;
        let g = occupancy_matrix(&p, gamma).unwrap();
        for i in 0..3 {
            let sum: f64 = (0..3).map(|j| g[(i, j)]).sum();
            assert!((sum - 1.0 / (1.0 - gamma)).abs() < 1e-9);
        }
    }

    #[test]
    fn occupancy_inverts_its_system() {
        let p = DMatrix::from_row_slice(3, 3, &[0.1, 0.9, 0.0, 0.3, 0.3, 0.4, 0.0, 0.0, 1.0]);
        let gamma = 0.99;
        let g = occupancy_matrix(&p, gamma).unwrap();
        let product = (DMatrix::<f64>::identity(3, 3) - p * gamma) * g;
        assert!((product - DMatrix::<f64>::identity(3, 3)).abs().max() < 1e-9);
    }

    #[test]
    fn indistinguishable_actions_reconstruct_zero() {
        let dynamics = uniform_dynamics(3, 4);
        let policy = Policy::from_greedy_actions(&[0, 1, 2], 4);
        let config = IrlConfig { gamma: 0.9, ..Default::default() };
        let out = reconstruct_reward(&dynamics, &policy, &config).unwrap();
        assert!(out.r_hat.iter().all(|&r| r.abs() < 1e-9), "{:?}", out.r_hat);
        assert!(out.lp_objective.abs() < 1e-9);
    }

    #[test]
    fn two_state_stay_swap_matches_grid_search() {
        // action 0 stays, action 1 swaps; policy always stays
        let n = 2;
        let mut p = vec![0.0; n * 2 * n];
        // state 0: stay -> 0, swap -> 1
        p[0] = 1.0; // (0, stay, 0)
        p[3] = 1.0; // (0, swap, 1)
        p[4] = 1.0; // (1, stay, 1)
        p[6] = 1.0; // (1, swap, 0)
        let dynamics = Dynamics::new(n, 2, p, vec![false; n]);
        let policy = Policy::from_greedy_actions(&[0, 0], 2);
        let config = IrlConfig { gamma: 0.9, ..IrlConfig::default() };
        let lp = reconstruct_reward(&dynamics, &policy, &config).unwrap();

        // brute-force oracle over R in {-1, -0.9, ..., 1}^2
        let gamma = config.gamma;
        let g = occupancy_matrix(&dynamics.policy_matrix(&[0, 0]), gamma).unwrap();
        let mut best = f64::NEG_INFINITY;
        for i in 0..=20 {
            for j in 0..=20 {
                let r = [i as f64 / 10.0 - 1.0, j as f64 / 10.0 - 1.0];
                let v = [g[(0, 0)] * r[0] + g[(0, 1)] * r[1], g[(1, 0)] * r[0] + g[(1, 1)] * r[1]];
                // margins of stay vs swap at each state
                let m0 = v[0] - v[1];
                let m1 = v[1] - v[0];
                if m0 < -1e-9 || m1 < -1e-9 {
                    continue;
                }
                let obj = m0.min(config.margin_cap) + m1.min(config.margin_cap)
                    - config.l1_penalty * (r[0].abs() + r[1].abs());
                best = best.max(obj);
            }
        }
        assert!(
            (lp.lp_objective - best).abs() <= 0.1,
            "lp {} vs grid {best}",
            lp.lp_objective
        );
        assert!(lp.lp_objective >= best - 1e-9, "grid points are feasible LP points");
    }

    #[test]
    fn optimum_respects_the_box() {
        let dynamics = {
            // 3 states, 2 actions: action 0 advances 0->1->2->2, action 1 stays
            let n = 3;
            let mut p = vec![0.0; n * 2 * n];
            let mut set = |s: usize, a: usize, next: usize| p[(s * 2 + a) * n + next] = 1.0;
            set(0, 0, 1);
            set(1, 0, 2);
            set(2, 0, 2);
            set(0, 1, 0);
            set(1, 1, 1);
            set(2, 1, 2);
            Dynamics::new(n, 2, p, vec![false; n])
        };
        let policy = Policy::from_greedy_actions(&[0, 0, 0], 2);
        let config = IrlConfig { l1_penalty: 0.5, gamma: 0.9, ..IrlConfig::default() };
        let out = reconstruct_reward(&dynamics, &policy, &config).unwrap();
        for &r in &out.r_hat {
            assert!(r.abs() <= config.r_max + 1e-9);
        }
        // margins of the advancing policy must be non-negative under r_hat
        let g = occupancy_matrix(&dynamics.policy_matrix(&[0, 0, 0]), config.gamma).unwrap();
        for s in 0..2 {
            let star = dynamics.row(s, 0);
            let alt = dynamics.row(s, 1);
            let margin: f64 = (0..3)
                .map(|j| {
                    (0..3).map(|i| (star[i] - alt[i]) * g[(i, j)]).sum::<f64>() * out.r_hat[j]
                })
                .sum();
            assert!(margin >= -1e-7, "state {s}: margin {margin}");
        }
    }

    #[test]
    fn scaling_a_feasible_reward_preserves_feasibility() {
        // constraints are homogeneous in R: margins scale linearly
        let dynamics = uniform_dynamics(2, 2);
        let policy = Policy::from_greedy_actions(&[0, 0], 2);
        let out = reconstruct_reward(&dynamics, &policy, &IrlConfig::default()).unwrap();
        // uniform dynamics leave nothing to constrain; optimum is zero and
        // any rescaling of it stays feasible trivially
        assert!(out.r_hat.iter().all(|&r| r.abs() < 1e-9));
    }

    #[test]
    fn agreement_fractions() {
        let a = Policy::from_greedy_actions(&[0, 1, 2, 3], 4);
        let b = Policy::from_greedy_actions(&[0, 1, 3, 2], 4);
        let all = vec![true; 4];
        assert_eq!(policy_agreement(&a, &a, &all), 1.0);
        assert_eq!(policy_agreement(&a, &b, &all), 0.5);
        assert_eq!(policy_agreement(&a, &b, &[true, true, false, false]), 1.0);
        // symmetry
        assert_eq!(policy_agreement(&a, &b, &all), policy_agreement(&b, &a, &all));
        let opposite = Policy::from_greedy_actions(&[1, 0], 2);
        let base = Policy::from_greedy_actions(&[0, 1], 2);
        assert_eq!(policy_agreement(&base, &opposite, &[true, true]), 0.0);
    }
}
