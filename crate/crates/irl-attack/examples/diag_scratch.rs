// Diagnostic scratch for one map: margin structure of the reconstruction.
use gridworld_mdp::{build_mdp, bundled_maps, GridMap, RewardTable};
use irl_attack::{occupancy_matrix, reconstruct_reward, Dynamics, IrlConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rl_solvers::value_iteration;

fn main() {
    let m = bundled_maps().iter().find(|m| m.id == "5x5_01").unwrap();
    let map = GridMap::parse(m.text).unwrap();
    let mdp = build_mdp(&map, 0.0001, &RewardTable::default(), 0.99);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let vi = value_iteration(&mdp, 1e-10, 10_000, None, &mut rng);
    let a_star = vi.policy.greedy_actions();

    let cfg = IrlConfig { l1_penalty: 0.01, ..IrlConfig::default() };
    let dynamics = Dynamics::from_mdp(&mdp);
    let out = reconstruct_reward(&dynamics, &vi.policy, &cfg).unwrap();
    println!("lp_obj={:.6}", out.lp_objective);
    println!("r_hat: {:?}", out.r_hat.iter().map(|v| (v * 1000.0).round() / 1000.0).collect::<Vec<_>>());
    println!("r_tru: {:?}", mdp.rewards());

    // independent margin check under the held convention
    let g = occupancy_matrix(&dynamics.policy_matrix(&a_star), cfg.gamma).unwrap();
    let n = mdp.n_states();
    let v: Vec<f64> = (0..n).map(|i| (0..n).map(|j| g[(i, j)] * out.r_hat[j]).sum()).collect();

    let attacked = mdp.with_rewards(out.r_hat.clone());
    let revi = value_iteration(&attacked, 1e-10, 10_000, None, &mut ChaCha8Rng::seed_from_u64(0));
    let re_actions = revi.policy.greedy_actions();

    for s in 0..n {
        if mdp.is_terminal(s) {
            continue;
        }
        let mut margins = Vec::new();
        for a in 0..4 {
            if a == a_star[s] {
                continue;
            }
            let margin: f64 = (0..n)
                .map(|i| (dynamics.row(s, a_star[s])[i] - dynamics.row(s, a)[i]) * v[i])
                .sum();
            margins.push((a, margin));
        }
        let flag = if re_actions[s] == a_star[s] { " " } else { "X" };
        println!(
            "{flag} s={s:2} a*={} re={} margins={:?}",
            a_star[s],
            re_actions[s],
            margins.iter().map(|(a, m)| format!("{a}:{m:+.4}")).collect::<Vec<_>>()
        );
    }
}
