use gridworld_mdp::TabularMdp;
use rand::Rng;

/// Expected discounted return per state.
pub type ValueFunction = Vec<f64>;

/// A per-state action distribution, stored as a row-stochastic |S| x |A|
/// matrix. The greedy view takes the row argmax with ties broken by the
/// lowest action index.
#[derive(Clone, Debug, PartialEq)]
pub struct Policy {
    n_states: usize,
    n_actions: usize,
    probs: Vec<f64>,
}

impl Policy {
    /// Build from a flat row-major probability matrix, checking row
    /// stochasticity within 1e-9.
    pub fn from_probs(n_states: usize, n_actions: usize, probs: Vec<f64>) -> Result<Self, String> {
        if probs.len() != n_states * n_actions {
            return Err(format!(
                "expected {} probabilities, got {}",
                n_states * n_actions,
                probs.len()
            ));
        }
        for s in 0..n_states {
            let row = &probs[s * n_actions..(s + 1) * n_actions];
            if row.iter().any(|&p| p < 0.0 || !p.is_finite()) {
                return Err(format!("invalid probability in row {s}"));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(format!("row {s} sums to {sum}, not 1"));
            }
        }
        Ok(Policy { n_states, n_actions, probs })
    }

    /// Deterministic policy: one-hot rows on the given actions.
    pub fn from_greedy_actions(actions: &[usize], n_actions: usize) -> Self {
        let n_states = actions.len();
        let mut probs = vec![0.0; n_states * n_actions];
        for (s, &a) in actions.iter().enumerate() {
            assert!(a < n_actions);
            probs[s * n_actions + a] = 1.0;
        }
        Policy { n_states, n_actions, probs }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn row(&self, s: usize) -> &[f64] {
        &self.probs[s * self.n_actions..(s + 1) * self.n_actions]
    }

    /// Greedy action per state: row argmax, ties to the lowest action index.
    pub fn greedy_actions(&self) -> Vec<usize> {
        (0..self.n_states).map(|s| argmax_lowest(self.row(s))).collect()
    }

    /// One-hot determinization of the greedy view.
    pub fn determinized(&self) -> Policy {
        Policy::from_greedy_actions(&self.greedy_actions(), self.n_actions)
    }

    pub fn sample_action<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let row = self.row(s);
        let mut acc = 0.0;
        for (a, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return a;
            }
        }
        row.len() - 1
    }

    pub fn validate_against(&self, mdp: &TabularMdp) -> Result<(), String> {
        if self.n_states != mdp.n_states() || self.n_actions != mdp.n_actions() {
            return Err("policy shape does not match MDP".to_string());
        }
        Ok(())
    }
}

/// Index of the largest value; ties resolve to the lowest index.
pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn greedy_breaks_ties_toward_lowest_index() {
        assert_eq!(argmax_lowest(&[1.0, 1.0, 1.0, 1.0]), 0);
        assert_eq!(argmax_lowest(&[0.0, 2.0, 2.0, 1.0]), 1);
        assert_eq!(argmax_lowest(&[0.0, 0.0, 0.0, 3.0]), 3);
    }

    #[test]
    fn rejects_non_stochastic_rows() {
        assert!(Policy::from_probs(1, 2, vec![0.6, 0.6]).is_err());
        assert!(Policy::from_probs(1, 2, vec![-0.1, 1.1]).is_err());
        assert!(Policy::from_probs(1, 2, vec![0.25, 0.75]).is_ok());
    }

    #[test]
    fn determinization_is_one_hot_on_greedy() {
        let p = Policy::from_probs(2, 2, vec![0.3, 0.7, 0.5, 0.5]).unwrap();
        let d = p.determinized();
        assert_eq!(d.greedy_actions(), vec![1, 0]);
        assert_eq!(d.row(0), &[0.0, 1.0]);
        assert_eq!(d.row(1), &[1.0, 0.0]);
    }
}
