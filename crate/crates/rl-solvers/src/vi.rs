use crate::policy::{argmax_lowest, Policy, ValueFunction};
use dp_mechanisms::{gaussian_sample, NoiseSpec};
use gridworld_mdp::TabularMdp;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("the policy-evaluation system is singular")]
    SingularSystem,
}

/// Result of a value-iteration run. Hitting the sweep cap is a valid stop
/// (noisy updates never converge), reported via `converged`.
#[derive(Clone, Debug)]
pub struct ViOutcome {
    pub values: ValueFunction,
    pub policy: Policy,
    pub sweeps: usize,
    pub converged: bool,
}

/// One synchronous Bellman sweep: for each non-terminal state,
/// `V'(s) = max_a sum_s' P(s,a,s') [R(s) + gamma V(s')] + N(0, sigma)`.
/// Terminal states are held at `V = R(s)` and receive no noise.
pub fn bellman_sweep<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    values: &[f64],
    sigma: f64,
    rng: &mut R,
) -> Vec<f64> {
    let n = mdp.n_states();
    let gamma = mdp.gamma();
    let mut next = vec![0.0; n];
    for s in 0..n {
        if mdp.is_terminal(s) {
            next[s] = mdp.reward(s);
            continue;
        }
        let mut best = f64::NEG_INFINITY;
        for a in 0..mdp.n_actions() {
            let row = mdp.transition_row(s, a);
            let future: f64 = row.iter().zip(values).map(|(p, v)| p * v).sum();
            let q = mdp.reward(s) + gamma * future;
            if q > best {
                best = q;
            }
        }
        next[s] = best + gaussian_sample(sigma, rng);
    }
    next
}

/// Iterate Bellman sweeps until the max-norm change drops below
/// `conv_threshold` or `max_iters` sweeps have run, then extract the greedy
/// policy of the final values.
pub fn value_iteration<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    conv_threshold: f64,
    max_iters: usize,
    noise: Option<&NoiseSpec>,
    rng: &mut R,
) -> ViOutcome {
    assert!(conv_threshold > 0.0, "convergence threshold must be positive");
    let sigma = noise.map_or(0.0, |n| n.sigma);

    let mut values = vec![0.0; mdp.n_states()];
    for s in 0..mdp.n_states() {
        if mdp.is_terminal(s) {
            values[s] = mdp.reward(s);
        }
    }

    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_iters {
        let next = bellman_sweep(mdp, &values, sigma, rng);
        let delta = values
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        values = next;
        sweeps += 1;
        if delta < conv_threshold {
            converged = true;
            break;
        }
    }

    let policy = greedy_policy(mdp, &values);
    ViOutcome { values, policy, sweeps, converged }
}

/// Greedy policy of a value function: per state the action maximizing
/// `sum_s' P(s,a,s') [R(s) + gamma V(s')]`, ties to the lowest action index.
pub fn greedy_policy(mdp: &TabularMdp, values: &[f64]) -> Policy {
    let gamma = mdp.gamma();
    let actions: Vec<usize> = (0..mdp.n_states())
        .map(|s| {
            let qs: Vec<f64> = (0..mdp.n_actions())
                .map(|a| {
                    let future: f64 =
                        mdp.transition_row(s, a).iter().zip(values).map(|(p, v)| p * v).sum();
                    mdp.reward(s) + gamma * future
                })
                .collect();
            argmax_lowest(&qs)
        })
        .collect();
    Policy::from_greedy_actions(&actions, mdp.n_actions())
}

/// Exact value of a policy via a dense linear solve of `(I - gamma P_pi) V = R`,
/// with terminal rows pinned to `V = R(s)`. Serves as the oracle for
/// `value_iteration`.
pub fn policy_evaluation_exact(mdp: &TabularMdp, policy: &Policy) -> Result<ValueFunction, SolveError> {
    policy.validate_against(mdp).expect("policy must match the MDP shape");
    let n = mdp.n_states();
    let gamma = mdp.gamma();

    let mut a = DMatrix::<f64>::identity(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for s in 0..n {
        b[s] = mdp.reward(s);
        if mdp.is_terminal(s) {
            continue; // identity row: V(s) = R(s)
        }
        let pi = policy.row(s);
        for act in 0..mdp.n_actions() {
            if pi[act] == 0.0 {
                continue;
            }
            for (next, &p) in mdp.transition_row(s, act).iter().enumerate() {
                a[(s, next)] -= gamma * pi[act] * p;
            }
        }
    }

    a.lu().solve(&b).map(|v| v.as_slice().to_vec()).ok_or(SolveError::SingularSystem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gridworld_mdp::{build_mdp, GridMap, RewardTable};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_state_chain() -> TabularMdp {
        let map = GridMap::parse("YG").unwrap();
        build_mdp(&map, 0.0, &RewardTable::default(), 0.99)
    }

    #[test]
    fn absorbing_state_held_at_reward() {
        let mdp = two_state_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = value_iteration(&mdp, 1e-10, 10_000, None, &mut rng);
        assert!(out.converged);
        assert!((out.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_state_chain_values_match_hand_solution() {
        let mdp = two_state_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = value_iteration(&mdp, 1e-10, 10_000, None, &mut rng);
        // V(start) = R(start) + gamma * V(goal) = 0 + 0.99
        assert!((out.values[0] - 0.99).abs() < 1e-9, "got {}", out.values[0]);
        assert_eq!(out.policy.greedy_actions()[0], gridworld_mdp::Action::Right as usize);
    }

    #[test]
    fn zero_noise_spec_equals_no_noise() {
        let mdp = two_state_chain();
        let spec = NoiseSpec::new(0.0, 1.05);
        let a = value_iteration(&mdp, 1e-10, 10_000, None, &mut ChaCha8Rng::seed_from_u64(5));
        let b =
            value_iteration(&mdp, 1e-10, 10_000, Some(&spec), &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a.values, b.values);
        assert_eq!(a.policy, b.policy);
        assert_eq!(a.sweeps, b.sweeps);
    }

    #[test]
    fn noisy_updates_hit_the_sweep_cap() {
        let mdp = two_state_chain();
        let spec = NoiseSpec::new(5.0, 1.05);
        let out =
            value_iteration(&mdp, 1e-10, 500, Some(&spec), &mut ChaCha8Rng::seed_from_u64(1));
        assert!(!out.converged);
        assert_eq!(out.sweeps, 500);
    }

    #[test]
    fn greedy_ties_pick_action_zero() {
        // all-safe map with zero rewards: every action tied everywhere
        let map = GridMap::parse("YS\nSG").unwrap();
        let rewards = RewardTable { goal: 0.0, ..RewardTable::default() };
        let mdp = build_mdp(&map, 0.0, &rewards, 0.9);
        let policy = greedy_policy(&mdp, &vec![0.0; 4]);
        assert_eq!(policy.greedy_actions(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn terminal_row_is_one_hot_on_action_zero() {
        let mdp = two_state_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = value_iteration(&mdp, 1e-10, 10_000, None, &mut rng);
        assert_eq!(out.policy.row(1), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn exact_evaluation_of_self_loop() {
        // non-terminal self-loop: V = R / (1 - gamma) = 1 / 0.5 = 2
        let map = GridMap::parse("YHG").unwrap(); // hole resets to start
        let rewards = RewardTable { safe: 1.0, ..RewardTable::default() };
        let mdp = build_mdp(&map, 0.0, &rewards, 0.5);
        // policy: press left at start (clamps in place -> self-loop)
        let policy = Policy::from_greedy_actions(&[2, 0, 0], 4);
        let v = policy_evaluation_exact(&mdp, &policy).unwrap();
        assert!((v[0] - 2.0).abs() < 1e-10, "got {}", v[0]);
    }

    #[test]
    fn zero_rewards_give_zero_values() {
        let map = GridMap::parse("YG").unwrap();
        let rewards = RewardTable { safe: 0.0, goal: 0.0, ..RewardTable::default() };
        let mdp = build_mdp(&map, 0.0, &rewards, 0.99);
        let policy = Policy::from_greedy_actions(&[3, 0], 4);
        let v = policy_evaluation_exact(&mdp, &policy).unwrap();
        assert!(v.iter().all(|&x| x.abs() < 1e-14));
    }

    #[test]
    fn vi_matches_exact_evaluation_of_its_greedy_policy() {
        let mdp = two_state_chain();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = value_iteration(&mdp, 1e-10, 10_000, None, &mut rng);
        let exact = policy_evaluation_exact(&mdp, &out.policy).unwrap();
        for (vi, ex) in out.values.iter().zip(&exact) {
            assert!((vi - ex).abs() < 1e-8);
        }
    }

    #[test]
    fn residual_is_non_increasing_without_noise() {
        let map = GridMap::parse("YSS\nSFS\nSSG").unwrap();
        let mdp = build_mdp(&map, 0.1, &RewardTable::default(), 0.95);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut values = vec![0.0; mdp.n_states()];
        let mut prev_residual = f64::INFINITY;
        for _ in 0..200 {
            let next = bellman_sweep(&mdp, &values, 0.0, &mut rng);
            let residual =
                values.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(residual <= prev_residual + 1e-12);
            prev_residual = residual;
            values = next;
        }
    }
}
