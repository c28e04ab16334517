use crate::config::{TrainConfig, TrainError};
use crate::nn::Mlp;
use crate::optim::Optimizer;
use crate::policy::{argmax_lowest, Policy};
use crate::rollout::episode_cap;
use dp_mechanisms::{dp_optimizer_step, DpSgdConfig, RdpAccountant};
use gridworld_mdp::TabularMdp;
use rand::Rng;

const REPLAY_CAPACITY: usize = 10_000;
const TARGET_REFRESH: usize = 100;
const ENV_STEPS_PER_ITER: usize = 8;
const EPSILON_FLOOR: f64 = 0.05;

pub struct TrainedPolicy {
    pub policy: Policy,
    /// Optimizer steps taken.
    pub steps: usize,
    /// Final Q table, |S| x |A| row-major.
    pub q_values: Vec<f64>,
}

/// Uniform-sampling ring buffer of `(state, action, next_state)` transitions.
struct ReplayBuffer {
    transitions: Vec<(usize, usize, usize)>,
    capacity: usize,
    write: usize,
}

impl ReplayBuffer {
    fn new(capacity: usize) -> Self {
        ReplayBuffer { transitions: Vec::with_capacity(capacity), capacity, write: 0 }
    }

    fn push(&mut self, t: (usize, usize, usize)) {
        if self.transitions.len() < self.capacity {
            self.transitions.push(t);
        } else {
            self.transitions[self.write] = t;
            self.write = (self.write + 1) % self.capacity;
        }
    }

    fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<(usize, usize, usize)> {
        (0..n).map(|_| self.transitions[rng.random_range(0..self.transitions.len())]).collect()
    }
}

fn one_hot(n: usize, s: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[s] = 1.0;
    x
}

fn greedy_action(net: &Mlp, n_states: usize, s: usize) -> usize {
    argmax_lowest(&net.forward(&one_hot(n_states, s)))
}

/// Greedy one-hot policy of a Q-network over all states.
pub(crate) fn q_network_policy(net: &Mlp, n_states: usize, n_actions: usize) -> Policy {
    let actions: Vec<usize> = (0..n_states).map(|s| greedy_action(net, n_states, s)).collect();
    Policy::from_greedy_actions(&actions, n_actions)
}

/// Linear epsilon decay from 1.0 to the floor over the first half of
/// training, then flat.
fn exploration_epsilon(global_iter: usize, total_iters: usize) -> f64 {
    let half = (total_iters / 2).max(1);
    if global_iter >= half {
        EPSILON_FLOOR
    } else {
        1.0 - (1.0 - EPSILON_FLOOR) * global_iter as f64 / half as f64
    }
}

struct EnvCursor {
    state: usize,
    steps_in_episode: usize,
}

impl EnvCursor {
    fn step<R: Rng + ?Sized>(
        &mut self,
        mdp: &TabularMdp,
        net: &Mlp,
        eps: f64,
        buffer: &mut ReplayBuffer,
        rng: &mut R,
    ) {
        let s = self.state;
        let a = if rng.random::<f64>() < eps {
            rng.random_range(0..mdp.n_actions())
        } else {
            greedy_action(net, mdp.n_states(), s)
        };
        let next = mdp.sample_next(s, a, rng);
        buffer.push((s, a, next));
        self.steps_in_episode += 1;
        if mdp.is_terminal(next) || self.steps_in_episode >= episode_cap(mdp) {
            self.state = mdp.sample_start(rng);
            self.steps_in_episode = 0;
        } else {
            self.state = next;
        }
    }
}

/// TD target for one transition, bootstrapping from the target network.
fn td_target(mdp: &TabularMdp, target_net: &Mlp, gamma: f64, t: (usize, usize, usize)) -> f64 {
    let (s, _, next) = t;
    let tail = if mdp.is_terminal(next) {
        mdp.reward(next)
    } else {
        let q = target_net.forward(&one_hot(mdp.n_states(), next));
        q.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    };
    mdp.reward(s) + gamma * tail
}

/// Train a Q-network with epsilon-greedy rollouts, a replay buffer, a
/// periodically refreshed target network, and (optionally) the private
/// clip-and-noise optimizer step over per-micro-batch gradients.
pub fn train_dqn<R: Rng + ?Sized>(
    mdp: &TabularMdp,
    config: &TrainConfig,
    net: Mlp,
    dp: Option<&DpSgdConfig>,
    rng: &mut R,
) -> Result<TrainedPolicy, TrainError> {
    config.validate().map_err(TrainError::BadConfig)?;
    assert_eq!(net.n_inputs(), mdp.n_states(), "network input must be one-hot over states");
    assert_eq!(net.n_outputs(), mdp.n_actions());

    let mut net = net;
    let mut target_net = net.clone();
    let mut optimizer = Optimizer::new(config.optimizer, config.learning_rate, net.param_count());
    let mut accountant = RdpAccountant::new();
    let mut buffer = ReplayBuffer::new(REPLAY_CAPACITY);
    let mut cursor = EnvCursor { state: mdp.sample_start(rng), steps_in_episode: 0 };

    let total = config.total_iterations();
    let micro_size = config.batch_size / config.micro_batches;

    for _ in 0..config.batch_size {
        cursor.step(mdp, &net, 1.0, &mut buffer, rng);
    }

    let mut updates = 0usize;
    for global in 0..total {
        let eps = exploration_epsilon(global, total);
        for _ in 0..ENV_STEPS_PER_ITER {
            cursor.step(mdp, &net, eps, &mut buffer, rng);
        }

        let batch = buffer.sample(config.batch_size, rng);
        let mut loss = 0.0;
        let mut micro_grads: Vec<Vec<f64>> = Vec::with_capacity(config.micro_batches);
        for chunk in batch.chunks(micro_size) {
            let mut grad = vec![0.0; net.param_count()];
            let scale = 1.0 / chunk.len() as f64;
            for &(s, a, next) in chunk {
                let y = td_target(mdp, &target_net, config.gamma, (s, a, next));
                let cache = net.forward_cached(&one_hot(mdp.n_states(), s));
                let q = cache.output()[a];
                loss += (q - y) * (q - y) / config.batch_size as f64;
                let mut dout = vec![0.0; mdp.n_actions()];
                dout[a] = scale * 2.0 * (q - y);
                net.accumulate_grad(&cache, &dout, &mut grad);
            }
            micro_grads.push(grad);
        }
        if !loss.is_finite() {
            return Err(TrainError::DivergedLoss { iteration: global });
        }

        let agg = match dp {
            Some(cfg) => dp_optimizer_step(&micro_grads, cfg, &mut accountant, rng)
                .map_err(|_| TrainError::DivergedLoss { iteration: global })?,
            None => plain_mean(&micro_grads),
        };
        optimizer.apply(&mut net, &agg);
        updates += 1;
        if updates % TARGET_REFRESH == 0 {
            target_net = net.clone();
        }
    }

    let q_values: Vec<f64> =
        (0..mdp.n_states()).flat_map(|s| net.forward(&one_hot(mdp.n_states(), s))).collect();
    Ok(TrainedPolicy {
        policy: q_network_policy(&net, mdp.n_states(), mdp.n_actions()),
        steps: updates,
        q_values,
    })
}

/// Mean of micro-batch gradients using the same summation order as the
/// private step, so a zero-noise, infinite-clip private run is bit-identical.
pub(crate) fn plain_mean(grads: &[Vec<f64>]) -> Vec<f64> {
    let n = grads.len() as f64;
    let mut agg = vec![0.0; grads[0].len()];
    for grad in grads {
        for (a, g) in agg.iter_mut().zip(grad) {
            *a += *g;
        }
    }
    for a in agg.iter_mut() {
        *a /= n;
    }
    agg
}
