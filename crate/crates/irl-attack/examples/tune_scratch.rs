// Scratch driver used while tuning attack defaults. Not part of the
// deliverable surface; run with --release.
use gridworld_mdp::{build_mdp, bundled_maps, GridMap, RewardTable};
use irl_attack::{occupancy_matrix, policy_agreement, reconstruct_reward, Dynamics, IrlConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rl_solvers::{value_iteration, Policy};

fn roundtrip_worst(cfg: &IrlConfig) -> f64 {
    let rewards = RewardTable::default();
    let mut worst = f64::INFINITY;
    for m in bundled_maps() {
        let map = GridMap::parse(m.text).unwrap();
        if map.width() != 5 {
            continue;
        }
        let mdp = build_mdp(&map, 0.0001, &rewards, 0.99);
        let vi = value_iteration(&mdp, 1e-10, 10_000, None, &mut ChaCha8Rng::seed_from_u64(0));
        let out = match reconstruct_reward(&Dynamics::from_mdp(&mdp), &vi.policy, cfg) {
            Ok(out) => out,
            Err(_) => return -1.0,
        };
        let attacked = mdp.with_rewards(out.r_hat.clone());
        let revi =
            value_iteration(&attacked, 1e-10, 10_000, None, &mut ChaCha8Rng::seed_from_u64(0));
        let mask: Vec<bool> = (0..mdp.n_states()).map(|s| !mdp.is_terminal(s)).collect();
        worst = worst.min(policy_agreement(&vi.policy, &revi.policy, &mask));
    }
    worst
}

fn brute_worst_gap(cfg: &IrlConfig) -> f64 {
    let axis: Vec<f64> = (0..=20).map(|i| i as f64 / 10.0 - 1.0).collect();
    let mut worst_gap = 0.0f64;
    for n in 1..=3usize {
        let transitions = n.pow(2 * n as u32);
        for code in 0..transitions {
            let mut c = code;
            let mut next = vec![[0usize; 2]; n];
            for s in 0..n {
                for a in 0..2 {
                    next[s][a] = c % n;
                    c /= n;
                }
            }
            let mut p = vec![0.0; n * 2 * n];
            for s in 0..n {
                for a in 0..2 {
                    p[(s * 2 + a) * n + next[s][a]] = 1.0;
                }
            }
            let dynamics = Dynamics::new(n, 2, p, vec![false; n]);
            for pol_code in 0..(1usize << n) {
                let actions: Vec<usize> = (0..n).map(|s| (pol_code >> s) & 1).collect();
                let policy = Policy::from_greedy_actions(&actions, 2);
                let lp = reconstruct_reward(&dynamics, &policy, cfg).unwrap();

                let g = occupancy_matrix(&dynamics.policy_matrix(&actions), cfg.gamma).unwrap();
                let mut margin_rows: Vec<(usize, Vec<f64>)> = Vec::new();
                for s in 0..n {
                    let a_alt = 1 - actions[s];
                    if next[s][actions[s]] == next[s][a_alt] {
                        continue;
                    }
                    let coeffs: Vec<f64> = (0..n)
                        .map(|j| g[(next[s][actions[s]], j)] - g[(next[s][a_alt], j)])
                        .collect();
                    if coeffs.iter().all(|c| c.abs() < 1e-12) {
                        continue;
                    }
                    margin_rows.push((s, coeffs));
                }
                let mut best = f64::NEG_INFINITY;
                let mut idx = vec![0usize; n];
                let mut point = vec![0.0; n];
                'grid: loop {
                    for (k, &i) in idx.iter().enumerate() {
                        point[k] = axis[i];
                    }
                    let mut feasible = true;
                    let mut per_state_min = vec![f64::INFINITY; n];
                    for (s, coeffs) in &margin_rows {
                        let m: f64 = coeffs.iter().zip(&point).map(|(c, r)| c * r).sum();
                        if m < -1e-9 {
                            feasible = false;
                            break;
                        }
                        per_state_min[*s] = per_state_min[*s].min(m);
                    }
                    if feasible {
                        let mut obj = 0.0;
                        for &m in &per_state_min {
                            if m.is_finite() {
                                obj += m.min(cfg.margin_cap);
                            }
                        }
                        obj -= cfg.l1_penalty * point.iter().map(|r| r.abs()).sum::<f64>();
                        best = best.max(obj);
                    }
                    for k in 0..n {
                        idx[k] += 1;
                        if idx[k] < axis.len() {
                            continue 'grid;
                        }
                        idx[k] = 0;
                    }
                    break;
                }
                worst_gap = worst_gap.max((lp.lp_objective - best).abs());
            }
        }
    }
    worst_gap
}

fn main() {
    for lambda in [0.01, 0.02, 0.05, 0.1] {
        for cap in [0.01, 0.02, 0.05] {
            for bonus in [1e-4, 1e-3, 1e-2] {
                let cfg = IrlConfig {
                    l1_penalty: lambda,
                    margin_cap: cap,
                    margin_bonus: bonus,
                    ..IrlConfig::default()
                };
                let worst = roundtrip_worst(&cfg);
                let gap = brute_worst_gap(&cfg);
                let ok = worst >= 0.95 && gap <= 0.1;
                println!(
                    "{} lambda={lambda:<5} cap={cap:<5} bonus={bonus:<6} worst_agree={worst:.3} brute_gap={gap:.4}",
                    if ok { "OK " } else { "   " }
                );
            }
        }
    }
}
