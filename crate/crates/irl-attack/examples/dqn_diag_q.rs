// Scratch: Q inspection on map 01 at lr 0.02.
use dp_mechanisms::ActivationKind;
use gridworld_mdp::{build_mdp, bundled_maps, GridMap, RewardTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rl_solvers::{evaluate_return, train_dqn, value_iteration, Mlp, TrainConfig};

fn main() {
    let m = bundled_maps().iter().find(|m| m.id == "5x5_01").unwrap();
    let map = GridMap::parse(m.text).unwrap();
    let mdp = build_mdp(&map, 0.0001, &RewardTable::default(), 0.99);
    let n = mdp.n_states();
    let vi = value_iteration(&mdp, 1e-10, 10_000, None, &mut ChaCha8Rng::seed_from_u64(0));
    let cfg = TrainConfig { learning_rate: 0.02, ..TrainConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let net = Mlp::new(&[n, 64, 64, 4], ActivationKind::Rectifier, &mut rng);
    let out = train_dqn(&mdp, &cfg, net, None, &mut rng).unwrap();
    let ret = evaluate_return(&mdp, &out.policy, 5, 0.99, 4 * n, &mut ChaCha8Rng::seed_from_u64(99));
    println!("return {ret:.4}; vi greedy {:?}", vi.policy.greedy_actions());
    println!("dqn greedy {:?}", out.policy.greedy_actions());
    for s in 0..n {
        let q = &out.q_values[s * 4..(s + 1) * 4];
        println!("s={s:2} vi_v={:6.3} q=[{:7.3} {:7.3} {:7.3} {:7.3}]", vi.values[s], q[0], q[1], q[2], q[3]);
    }
}
