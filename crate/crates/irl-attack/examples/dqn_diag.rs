// Scratch: learning-rate scan on corpus v3.
use dp_mechanisms::ActivationKind;
use gridworld_mdp::{build_mdp, bundled_maps, GridMap, RewardTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rl_solvers::{evaluate_return, train_dqn, train_ppo, value_iteration, Mlp, TrainConfig};

fn main() {
    for lr in [0.015, 0.02, 0.025] {
        let mut worst_d = f64::INFINITY;
        let mut worst_p = f64::INFINITY;
        let mut rows = Vec::new();
        for m in bundled_maps() {
            let map = GridMap::parse(m.text).unwrap();
            if map.width() != 5 { continue; }
            let mdp = build_mdp(&map, 0.0001, &RewardTable::default(), 0.99);
            let n = mdp.n_states();
            let cfg = TrainConfig { learning_rate: lr, ..TrainConfig::default() };
            let vi = value_iteration(&mdp, 1e-10, 10_000, None, &mut ChaCha8Rng::seed_from_u64(0));
            let vi_ret = evaluate_return(&mdp, &vi.policy, 5, 0.99, 4 * n, &mut ChaCha8Rng::seed_from_u64(99));
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let net = Mlp::new(&[n, 64, 64, 4], ActivationKind::Rectifier, &mut rng);
            let d = train_dqn(&mdp, &cfg, net, None, &mut rng)
                .map(|o| evaluate_return(&mdp, &o.policy, 5, 0.99, 4 * n, &mut ChaCha8Rng::seed_from_u64(99)))
                .unwrap_or(f64::NAN);
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            let actor = Mlp::new(&[n, 64, 64, 4], ActivationKind::Rectifier, &mut rng);
            let critic = Mlp::new(&[n, 64, 64, 1], ActivationKind::Rectifier, &mut rng);
            let p = train_ppo(&mdp, &cfg, actor, critic, None, &mut rng)
                .map(|o| evaluate_return(&mdp, &o.policy, 5, 0.99, 4 * n, &mut ChaCha8Rng::seed_from_u64(99)))
                .unwrap_or(f64::NAN);
            worst_d = worst_d.min(d / vi_ret);
            worst_p = worst_p.min(p / vi_ret);
            rows.push(format!("{}:d{:.0}/p{:.0}", &m.id[4..], 100.0*d/vi_ret, 100.0*p/vi_ret));
        }
        println!("lr={lr}: worst dqn={:.1}% ppo={:.1}%  [{}]", 100.0*worst_d, 100.0*worst_p, rows.join(" "));
    }
}
