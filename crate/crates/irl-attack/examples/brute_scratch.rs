// Scratch: LP vs exhaustive grid search over all deterministic MDPs with
// <= 3 states and 2 actions, under the default IrlConfig.
use irl_attack::{occupancy_matrix, reconstruct_reward, Dynamics, IrlConfig};
use nalgebra::DMatrix;
use rl_solvers::Policy;
use std::time::Instant;

fn grid_axis() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 10.0 - 1.0).collect()
}

fn main() {
    let config = IrlConfig::default();
    let start = Instant::now();
    let mut cases = 0usize;
    let mut worst_gap = 0.0f64;

    for n in 1..=3usize {
        let transitions = n.pow(2 * n as u32); // n^(states*actions)
        for code in 0..transitions {
            // decode: next[s][a]
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
                let lp = reconstruct_reward(&dynamics, &policy, &config).unwrap();

                // oracle: exhaustive grid search of the same objective
                let p_pi = dynamics.policy_matrix(&actions);
                let g = occupancy_matrix(&p_pi, config.gamma).unwrap();
                // margin coefficient vectors per state (skip degenerate)
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
                let axis = grid_axis();
                let mut best = f64::NEG_INFINITY;
                let mut point = vec![0.0; n];
                let mut idx = vec![0usize; n];
                'grid: loop {
                    for (k, &i) in idx.iter().enumerate() {
                        point[k] = axis[i];
                    }
                    let mut obj = 0.0;
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
                        for &m in &per_state_min {
                            if m.is_finite() {
                                obj += m.min(config.margin_cap);
                            }
                        }
                        obj -= config.l1_penalty * point.iter().map(|r| r.abs()).sum::<f64>();
                        best = best.max(obj);
                    }
                    // odometer
                    for k in 0..n {
                        idx[k] += 1;
                        if idx[k] < axis.len() {
                            continue 'grid;
                        }
                        idx[k] = 0;
                    }
                    break;
                }
                let gap = (lp.lp_objective - best).abs();
                if gap > worst_gap {
                    worst_gap = gap;
                    if gap > 0.1 {
                        println!(
                            "GAP {gap:.4} n={n} code={code} pol={actions:?} lp={} grid={best}",
                            lp.lp_objective
                        );
                    }
                }
                assert!(
                    lp.lp_objective >= best - 1e-7,
                    "lp {} below grid {best} (n={n} code={code} pol={actions:?})",
                    lp.lp_objective
                );
                cases += 1;
            }
        }
    }
    let _ = DMatrix::<f64>::identity(1, 1);
    println!("cases={cases} worst_gap={worst_gap:.5} elapsed={:.2?}", start.elapsed());
}
