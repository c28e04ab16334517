// Scratch: attack robustness against noisy private policies, plus timing.
use dp_mechanisms::{sigma_from_table, NoiseSpec, PolicyFamily, EPSILON_BUDGETS, VI_SENSITIVITY_BOUND};
use gridworld_mdp::{build_mdp, bundled_maps, GridMap, RewardTable};
use irl_attack::{reconstruct_reward, Dynamics, IrlConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rl_solvers::value_iteration;
use std::time::Instant;

fn main() {
    let m = bundled_maps().iter().find(|m| m.id == "5x5_01").unwrap();
    let map = GridMap::parse(m.text).unwrap();
    let mdp = build_mdp(&map, 0.0001, &RewardTable::default(), 0.99);
    let dynamics = Dynamics::from_mdp(&mdp);
    let cfg = IrlConfig::default();

    let start = Instant::now();
    let mut failures = 0;
    let mut cells = 0;
    for (ei, &eps) in EPSILON_BUDGETS.iter().enumerate() {
        let sigma = sigma_from_table(PolicyFamily::Vi, eps).unwrap();
        for rep in 0..10u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 * ei as u64 + rep);
            let noise = NoiseSpec::new(sigma, VI_SENSITIVITY_BOUND);
            let spec = if sigma > 0.0 { Some(&noise) } else { None };
            let vi = value_iteration(&mdp, 1e-10, 10_000, spec, &mut rng);
            match reconstruct_reward(&dynamics, &vi.policy, &cfg) {
                Ok(out) => {
                    assert!(out.r_hat.iter().all(|r| r.is_finite()));
                }
                Err(e) => {
                    failures += 1;
                    println!("eps={eps} rep={rep}: {e}");
                }
            }
            cells += 1;
        }
    }
    println!("cells={cells} failures={failures} elapsed={:.2?}", start.elapsed());
}
