use crate::config::{TrainConfig, TrainError};
use crate::dqn::plain_mean;
use crate::nn::Mlp;
use crate::optim::Optimizer;
use crate::policy::Policy;
use crate::rollout::episode_cap;
use dp_mechanisms::{dp_optimizer_step, DpSgdConfig, OptimizerKind, RdpAccountant};
use gridworld_mdp::TabularMdp;
use rand::Rng;

const ADV_NORM_EPS: f64 = 1e-8;

fn one_hot(n: usize, s: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[s] = 1.0;
    x
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - m).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// One actor transition: state, action, behavior probability at collection
/// time, and the (later normalized) advantage.
struct ActorSample {
    state: usize,
    action: usize,
    prob_old: f64,
    advantage: f64,
}

/// Critic regression pair: state and its observed return-to-go.
struct CriticSample {
    state: usize,
    ret: f64,
}

/// Run whole episodes under the current stochastic actor until at least
/// `want` transitions are collected. Returns-to-go bootstrap from the critic
/// when an episode is truncated at the step cap.
fn collect_batch<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    actor: &Mlp,
    critic: &Mlp,
    want: usize,
    rng: &mut R,
) -> (Vec<ActorSample>, Vec<CriticSample>) {
    let n = mdp.n_states();
    let gamma = mdp.gamma();
    let cap = episode_cap(mdp);

    let mut actor_samples = Vec::new();
    let mut critic_samples = Vec::new();

    while actor_samples.len() < want {
        let mut states = Vec::new();
        let mut actions = Vec::new();
        let mut probs_old = Vec::new();

        let mut state = mdp.sample_start(rng);
        let mut steps = 0;
        while !mdp.is_terminal(state) && steps < cap {
            let probs = softmax(&actor.forward(&one_hot(n, state)));
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut action = probs.len() - 1;
            for (a, &p) in probs.iter().enumerate() {
                acc += p;
                if u < acc {
                    action = a;
                    break;
                }
            }
            states.push(state);
            actions.push(action);
            probs_old.push(probs[action]);
            state = mdp.sample_next(state, action, rng);
            steps += 1;
        }

        // tail value: terminal reward if finished, critic bootstrap if truncated
        let mut g = if mdp.is_terminal(state) {
            critic_samples.push(CriticSample { state, ret: mdp.reward(state) });
            mdp.reward(state)
        } else {
            critic.forward(&one_hot(n, state))[0]
        };
        for t in (0..states.len()).rev() {
            g = mdp.reward(states[t]) + gamma * g;
            let baseline = critic.forward(&one_hot(n, states[t]))[0];
            actor_samples.push(ActorSample {
                state: states[t],
                action: actions[t],
                prob_old: probs_old[t],
                advantage: g - baseline,
            });
            critic_samples.push(CriticSample { state: states[t], ret: g });
        }
    }

    (actor_samples, critic_samples)
}

fn normalize_advantages(samples: &mut [ActorSample]) {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|s| s.advantage).sum::<f64>() / n;
    let var = samples.iter().map(|s| (s.advantage - mean) * (s.advantage - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    for s in samples.iter_mut() {
        s.advantage = (s.advantage - mean) / (std + ADV_NORM_EPS);
    }
}

/// Result of a PPO run: the stochastic softmax policy of the final actor,
/// optimizer steps taken, and the final critic's per-state value estimates.
pub struct PpoOutcome {
    pub policy: Policy,
    pub steps: usize,
    pub critic_values: Vec<f64>,
}

/// Train an actor-critic pair with the unclipped importance-ratio surrogate.
///
/// The critic fits discounted returns by squared-error regression and is
/// never privatized; the optional DP config applies to the actor only. The
/// returned policy is the stochastic softmax of the final actor.
pub fn train_ppo<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    config: &TrainConfig,
    actor: Mlp,
    critic: Mlp,
    dp_actor: Option<&DpSgdConfig>,
    rng: &mut R,
) -> Result<PpoOutcome, TrainError> {
    config.validate().map_err(TrainError::BadConfig)?;
    assert_eq!(actor.n_inputs(), mdp.n_states());
    assert_eq!(actor.n_outputs(), mdp.n_actions());
    assert_eq!(critic.n_inputs(), mdp.n_states());
    assert_eq!(critic.n_outputs(), 1);

    let mut actor = actor;
    let mut critic = critic;
    let mut actor_opt = Optimizer::new(config.optimizer, config.learning_rate, actor.param_count());
    // the critic is plain non-private regression on returns that can span
    // orders of magnitude across maps; Adam keeps its steps bounded where
    // raw SGD at the shared learning rate diverges
    let mut critic_opt =
        Optimizer::new(OptimizerKind::Adam, config.learning_rate, critic.param_count());
    let mut accountant = RdpAccountant::new();

    let n = mdp.n_states();
    let micro_size = config.batch_size / config.micro_batches;
    let mut steps = 0usize;

    for epoch in 0..config.epochs {
        for it in 0..config.iterations {
            let global = epoch * config.iterations + it;

            // fresh on-policy mini-batch: the ratio sits at 1 where the
            // gradient is taken, so the surrogate update is the exact
            // policy gradient and never chases stale data
            let (mut actor_data, critic_data) =
                collect_batch(mdp, &actor, &critic, config.batch_size, rng);
            if actor_data.is_empty() {
                return Err(TrainError::DegenerateBatch);
            }
            actor_data.truncate(config.batch_size);
            normalize_advantages(&mut actor_data);

            // actor: maximize mean(ratio * advantage) over the mini-batch
            let batch: Vec<&ActorSample> = actor_data.iter().collect();
            let mut surrogate = 0.0;
            let mut micro_grads = Vec::with_capacity(config.micro_batches);
            for chunk in batch.chunks(micro_size) {
                let mut grad = vec![0.0; actor.param_count()];
                let scale = 1.0 / chunk.len() as f64;
                for sample in chunk {
                    let cache = actor.forward_cached(&one_hot(n, sample.state));
                    let probs = softmax(cache.output());
                    let ratio = probs[sample.action] / sample.prob_old;
                    surrogate += ratio * sample.advantage / config.batch_size as f64;
                    let coef = -scale * sample.advantage * ratio;
                    let mut dout = vec![0.0; probs.len()];
                    for (k, &p) in probs.iter().enumerate() {
                        let indicator = if k == sample.action { 1.0 } else { 0.0 };
                        dout[k] = coef * (indicator - p);
                    }
                    actor.accumulate_grad(&cache, &dout, &mut grad);
                }
                micro_grads.push(grad);
            }
            if !surrogate.is_finite() {
                return Err(TrainError::DivergedLoss { iteration: global });
            }
            let agg = match dp_actor {
                Some(cfg) => dp_optimizer_step(&micro_grads, cfg, &mut accountant, rng)
                    .map_err(|_| TrainError::DivergedLoss { iteration: global })?,
                None => plain_mean(&micro_grads),
            };
            actor_opt.apply(&mut actor, &agg);

            // critic: plain squared-error regression on returns
            let mut critic_grad = vec![0.0; critic.param_count()];
            let mut critic_loss = 0.0;
            let scale = 1.0 / config.batch_size as f64;
            for _ in 0..config.batch_size {
                let sample = &critic_data[rng.random_range(0..critic_data.len())];
                let cache = critic.forward_cached(&one_hot(n, sample.state));
                let v = cache.output()[0];
                critic_loss += scale * (v - sample.ret) * (v - sample.ret);
                critic.accumulate_grad(&cache, &[scale * 2.0 * (v - sample.ret)], &mut critic_grad);
            }
            if !critic_loss.is_finite() {
                return Err(TrainError::DivergedLoss { iteration: global });
            }
            critic_opt.apply(&mut critic, &critic_grad);
            steps += 1;
        }
    }

    let probs: Vec<f64> =
        (0..n).flat_map(|s| softmax(&actor.forward(&one_hot(n, s)))).collect();
    let policy = Policy::from_probs(n, mdp.n_actions(), probs)
        .expect("softmax rows are stochastic by construction");
    let critic_values = (0..n).map(|s| critic.forward(&one_hot(n, s))[0]).collect();
    Ok(PpoOutcome { policy, steps, critic_values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use dp_mechanisms::{ActivationKind, OptimizerKind};
    use gridworld_mdp::{build_mdp, GridMap, RewardTable};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chain_mdp() -> TabularMdp {
        let map = GridMap::parse("YG").unwrap();
        build_mdp(&map, 0.0, &RewardTable::default(), 0.99)
    }

    fn nets(seed: u64, n: usize, hidden: usize) -> (Mlp, Mlp, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let actor = Mlp::new(&[n, hidden, hidden, 4], ActivationKind::Rectifier, &mut rng);
        let critic = Mlp::new(&[n, hidden, hidden, 1], ActivationKind::Rectifier, &mut rng);
        (actor, critic, rng)
    }

    #[test]
    fn learns_the_two_state_chain() {
        let mdp = chain_mdp();
        let cfg = TrainConfig { epochs: 4, iterations: 60, ..Default::default() };
        let (actor, critic, mut rng) = nets(0, 2, 32);
        let out = train_ppo(&mdp, &cfg, actor, critic, None, &mut rng).unwrap();
        assert_eq!(out.policy.greedy_actions()[0], gridworld_mdp::Action::Right as usize);
        assert_eq!(out.steps, 240);
        // stochastic rows must still be valid distributions
        let row = out.policy.row(0);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_dp_actor_matches_non_private_bitwise() {
        let mdp = chain_mdp();
        let cfg = TrainConfig { epochs: 2, iterations: 30, ..Default::default() };
        let dp = DpSgdConfig::new(f64::INFINITY, 0.0, OptimizerKind::Sgd, ActivationKind::Rectifier);
        let run = |dp: Option<&DpSgdConfig>| {
            let (actor, critic, mut rng) = nets(5, 2, 16);
            train_ppo(&mdp, &cfg, actor, critic, dp, &mut rng).unwrap().policy
        };
        let plain = run(None);
        let degenerate = run(Some(&dp));
        let bits = |p: &Policy| p.probs().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&plain), bits(&degenerate));
    }

    #[test]
    fn critic_learns_terminal_reward() {
        let mdp = chain_mdp();
        let cfg = TrainConfig { epochs: 4, iterations: 60, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let actor = Mlp::new(&[2, 16, 16, 4], ActivationKind::Tanh, &mut rng);
        let critic = Mlp::new(&[2, 16, 16, 1], ActivationKind::Tanh, &mut rng);
        let out = train_ppo(&mdp, &cfg, actor, critic, None, &mut rng).unwrap();
        // the goal state appears as a regression input with target R(goal)
        let v = out.critic_values[1];
        assert!((v - mdp.reward(1)).abs() < 0.1, "critic value {v} vs {}", mdp.reward(1));
    }
}
