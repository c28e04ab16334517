use crate::policy::Policy;
use gridworld_mdp::TabularMdp;
use rand::Rng;

/// Mean discounted return over simulated episodes.
///
/// Each episode starts from the start distribution and follows the policy's
/// stochastic rows, collecting `gamma^j R(s_j)` for every state occupied.
/// Episodes end on entering a terminal state (after collecting its reward)
/// or after `max_steps` occupied states.
pub fn evaluate_return<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    policy: &Policy,
    episodes: usize,
    gamma: f64,
    max_steps: usize,
    rng: &mut R,
) -> f64 {
    assert!(episodes >= 1 && max_steps >= 1);
    let mut total = 0.0;
    for _ in 0..episodes {
        let mut state = mdp.sample_start(rng);
        let mut discount = 1.0;
        let mut ret = 0.0;
        for _ in 0..max_steps {
            ret += discount * mdp.reward(state);
            if mdp.is_terminal(state) {
                break;
            }
            let action = policy.sample_action(state, rng);
            state = mdp.sample_next(state, action, rng);
            discount *= gamma;
        }
        total += ret;
    }
    total / episodes as f64
}

/// Conventional episode cap used throughout: four times the state count.
pub(crate) fn episode_cap(mdp: &TabularMdp) -> usize {
    4 * mdp.n_states()
}
