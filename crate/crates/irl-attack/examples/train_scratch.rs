// Scratch: desk-scale DQN/PPO competence on the 5x5 corpus.
use dp_mechanisms::ActivationKind;
use gridworld_mdp::{build_mdp, bundled_maps, GridMap, RewardTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rl_solvers::{evaluate_return, train_dqn, train_ppo, value_iteration, Mlp, TrainConfig};
use std::time::Instant;

fn main() {
    let rewards = RewardTable::default();
    let cfg = TrainConfig::default();
    for m in bundled_maps() {
        let map = GridMap::parse(m.text).unwrap();
        if map.width() != 5 {
            continue;
        }
        let mdp = build_mdp(&map, 0.0001, &rewards, 0.99);
        let n = mdp.n_states();
        let cap = 4 * n;

        let vi = value_iteration(&mdp, 1e-10, 10_000, None, &mut ChaCha8Rng::seed_from_u64(0));
        let vi_ret =
            evaluate_return(&mdp, &vi.policy, 5, 0.99, cap, &mut ChaCha8Rng::seed_from_u64(99));

        let t0 = Instant::now();
        let dqn = {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let net = Mlp::new(&[n, 64, 64, 4], ActivationKind::Rectifier, &mut rng);
            train_dqn(&mdp, &cfg, net, None, &mut rng)
        };
        let dqn_t = t0.elapsed();
        let dqn_ret = dqn
            .map(|out| {
                evaluate_return(&mdp, &out.policy, 5, 0.99, cap, &mut ChaCha8Rng::seed_from_u64(99))
            })
            .unwrap_or(f64::NAN);

        let t1 = Instant::now();
        let ppo = {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let actor = Mlp::new(&[n, 64, 64, 4], ActivationKind::Rectifier, &mut rng);
            let critic = Mlp::new(&[n, 64, 64, 1], ActivationKind::Rectifier, &mut rng);
            train_ppo(&mdp, &cfg, actor, critic, None, &mut rng)
        };
        let ppo_t = t1.elapsed();
        let ppo_ret = ppo
            .map(|out| {
                evaluate_return(&mdp, &out.policy, 5, 0.99, cap, &mut ChaCha8Rng::seed_from_u64(99))
            })
            .unwrap_or(f64::NAN);

        let frac = |r: f64| r / vi_ret;
        println!(
            "{}: vi={vi_ret:8.4}  dqn={dqn_ret:8.4} ({:5.1}% {dqn_t:.1?})  ppo={ppo_ret:8.4} ({:5.1}% {ppo_t:.1?})",
            m.id,
            100.0 * frac(dqn_ret),
            100.0 * frac(ppo_ret),
        );
    }
}
