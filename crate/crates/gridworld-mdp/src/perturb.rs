use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Sample a reward vector adjacent to `r`: the returned vector differs from
/// `r` by a random direction scaled to L2 norm `u` with `u ~ Uniform(0, 1]`,
/// so `||r - r'||_2 <= 1` always holds.
pub fn neighboring_reward<R: Rng + ?Sized>(r: &[f64], rng: &mut R) -> Vec<f64> {
    assert!(r.iter().all(|v| v.is_finite()), "reward vector must be finite");
    let n = r.len();
    if n == 0 {
        return Vec::new();
    }

    let mut dir: Vec<f64> = Vec::with_capacity(n);
    let mut norm = 0.0;
    while norm == 0.0 {
        dir.clear();
        for _ in 0..n {
            let v: f64 = StandardNormal.sample(rng);
            dir.push(v);
        }
        norm = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    }

    let u = 1.0 - rng.random::<f64>(); // (0, 1]
    let scale = u / norm;
    r.iter().zip(&dir).map(|(ri, di)| ri + di * scale).collect()
}
