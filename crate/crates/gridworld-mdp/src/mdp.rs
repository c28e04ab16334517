use crate::map::{GridMap, TileKind};

pub const N_ACTIONS: usize = 4;

/// Movement actions, indexed 0..4 in this order everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Action {
    Up = 0,
    Down = 1,
    Left = 2,
    Right = 3,
}

impl Action {
    pub const ALL: [Action; N_ACTIONS] = [Action::Up, Action::Down, Action::Left, Action::Right];

    /// (row delta, col delta)
    fn delta(self) -> (isize, isize) {
        match self {
            Action::Up => (-1, 0),
            Action::Down => (1, 0),
            Action::Left => (0, -1),
            Action::Right => (0, 1),
        }
    }

    /// The two perpendicular slip directions the wind can push toward.
    fn perpendicular(self) -> [Action; 2] {
        match self {
            Action::Up | Action::Down => [Action::Left, Action::Right],
            Action::Left | Action::Right => [Action::Up, Action::Down],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Up => "up",
            Action::Down => "down",
            Action::Left => "left",
            Action::Right => "right",
        }
    }
}

/// Per-tile-kind scalar rewards.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewardTable {
    pub safe: f64,
    pub frozen: f64,
    pub hole: f64,
    pub high_reward: f64,
    pub goal: f64,
}

impl Default for RewardTable {
    fn default() -> Self {
        RewardTable { safe: 0.0, frozen: -0.1, hole: -1.0, high_reward: 0.5, goal: 1.0 }
    }
}

impl RewardTable {
    pub fn reward_for(&self, tile: TileKind) -> f64 {
        match tile {
            TileKind::Safe => self.safe,
            TileKind::Frozen => self.frozen,
            TileKind::Hole => self.hole,
            TileKind::HighReward => self.high_reward,
            TileKind::Goal => self.goal,
        }
    }

    pub fn all_finite(&self) -> bool {
        [self.safe, self.frozen, self.hole, self.high_reward, self.goal]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Dense tabular MDP: transition tensor `P[s][a][s']`, state reward vector,
/// discount, start distribution, and terminal mask. Immutable after
/// construction and safe to share across workers.
#[derive(Clone, Debug)]
pub struct TabularMdp {
    n_states: usize,
    n_actions: usize,
    p: Vec<f64>,
    r: Vec<f64>,
    gamma: f64,
    start_dist: Vec<f64>,
    terminal: Vec<bool>,
}

impl TabularMdp {
    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rewards(&self) -> &[f64] {
        &self.r
    }

    pub fn reward(&self, s: usize) -> f64 {
        self.r[s]
    }

    pub fn start_dist(&self) -> &[f64] {
        &self.start_dist
    }

    pub fn terminal(&self) -> &[bool] {
        &self.terminal
    }

    pub fn is_terminal(&self, s: usize) -> bool {
        self.terminal[s]
    }

    pub fn prob(&self, s: usize, a: usize, next: usize) -> f64 {
        self.p[(s * self.n_actions + a) * self.n_states + next]
    }

    /// Transition probabilities out of `(s, a)` as a dense slice over `s'`.
    pub fn transition_row(&self, s: usize, a: usize) -> &[f64] {
        let base = (s * self.n_actions + a) * self.n_states;
        &self.p[base..base + self.n_states]
    }

    /// Same MDP with a different reward vector (dynamics shared unchanged).
    pub fn with_rewards(&self, r: Vec<f64>) -> TabularMdp {
        assert_eq!(r.len(), self.n_states);
        TabularMdp { r, ..self.clone() }
    }

    /// Row-stochasticity, start-distribution, and terminal-absorption checks.
    pub fn validate(&self) -> Result<(), String> {
        for s in 0..self.n_states {
            for a in 0..self.n_actions {
                let row = self.transition_row(s, a);
                if row.iter().any(|&v| v < 0.0) {
                    return Err(format!("negative probability at state {s}, action {a}"));
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > 1e-12 {
                    return Err(format!("row ({s},{a}) sums to {sum}, not 1"));
                }
            }
        }
        let start_sum: f64 = self.start_dist.iter().sum();
        if (start_sum - 1.0).abs() > 1e-12 {
            return Err(format!("start distribution sums to {start_sum}"));
        }
        for s in 0..self.n_states {
            if self.terminal[s] {
                for a in 0..self.n_actions {
                    if (self.prob(s, a, s) - 1.0).abs() > 1e-12 {
                        return Err(format!("terminal state {s} is not absorbing under action {a}"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Sample the start state.
    pub fn sample_start<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_categorical(&self.start_dist, rng)
    }

    /// Sample the next state after taking `a` in `s`.
    pub fn sample_next<R: rand::Rng + ?Sized>(&self, s: usize, a: usize, rng: &mut R) -> usize {
        sample_categorical(self.transition_row(s, a), rng)
    }
}

pub(crate) fn sample_categorical<R: rand::Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// Build the dense MDP for a map.
///
/// Movement: the intended neighbor receives probability `1 - wind` and each
/// perpendicular neighbor `wind / 2`; mass that would leave the grid stays on
/// the current cell. Hole states reset to the start under every action; the
/// goal is absorbing. `R[s]` is the tile reward, with the start cell counting
/// as safe.
pub fn build_mdp(map: &GridMap, wind: f64, rewards: &RewardTable, gamma: f64) -> TabularMdp {
    assert!((0.0..1.0).contains(&wind), "wind must lie in [0, 1)");
    assert!((0.0..1.0).contains(&gamma), "gamma must lie in [0, 1)");
    assert!(rewards.all_finite(), "reward table must be finite");

    let n = map.n_cells();
    let mut p = vec![0.0; n * N_ACTIONS * n];
    let mut r = vec![0.0; n];
    let mut terminal = vec![false; n];
    let start = map.start_index();

    for s in 0..n {
        let tile = map.tile(s);
        r[s] = rewards.reward_for(tile);
        if tile == TileKind::Goal {
            terminal[s] = true;
        }

        for (ai, action) in Action::ALL.iter().enumerate() {
            let base = (s * N_ACTIONS + ai) * n;
            match tile {
                TileKind::Goal => p[base + s] = 1.0,
                TileKind::Hole => p[base + start] = 1.0,
                _ => {
                    let mut add = |dir: Action, mass: f64| {
                        p[base + step(map, s, dir)] += mass;
                    };
                    add(*action, 1.0 - wind);
                    for perp in action.perpendicular() {
                        add(perp, wind / 2.0);
                    }
                }
            }
        }
    }

    let mut start_dist = vec![0.0; n];
    start_dist[start] = 1.0;

    TabularMdp { n_states: n, n_actions: N_ACTIONS, p, r, gamma, start_dist, terminal }
}

/// Destination of a move, clamping off-grid motion to the current cell.
fn step(map: &GridMap, s: usize, dir: Action) -> usize {
    let (row, col) = map.row_col(s);
    let (dr, dc) = dir.delta();
    let nr = row as isize + dr;
    let nc = col as isize + dc;
    if nr < 0 || nc < 0 || nr >= map.height() as isize || nc >= map.width() as isize {
        s
    } else {
        map.index(nr as usize, nc as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> RewardTable {
        RewardTable::default()
    }

    #[test]
    fn deterministic_two_state_chain() {
        let map = GridMap::parse("YG").unwrap();
        let mdp = build_mdp(&map, 0.0, &defaults(), 0.99);
        mdp.validate().unwrap();
        assert_eq!(mdp.prob(0, Action::Right as usize, 1), 1.0);
        // off-grid moves clamp in place
        assert_eq!(mdp.prob(0, Action::Left as usize, 0), 1.0);
        assert_eq!(mdp.prob(0, Action::Up as usize, 0), 1.0);
        // goal is absorbing
        for a in 0..N_ACTIONS {
            assert_eq!(mdp.prob(1, a, 1), 1.0);
        }
        assert_eq!(mdp.rewards(), &[0.0, 1.0]);
        assert!(mdp.is_terminal(1));
        assert!(!mdp.is_terminal(0));
    }

    #[test]
    fn hole_resets_to_start() {
        let map = GridMap::parse("YHG").unwrap();
        let mdp = build_mdp(&map, 0.25, &defaults(), 0.99);
        mdp.validate().unwrap();
        for a in 0..N_ACTIONS {
            assert_eq!(mdp.prob(1, a, 0), 1.0);
        }
    }

    #[test]
    fn wind_splits_mass_on_perpendiculars() {
        let map = GridMap::parse("SSS\nSYS\nSSG").unwrap();
        let wind = 0.0001;
        let mdp = build_mdp(&map, wind, &defaults(), 0.99);
        mdp.validate().unwrap();
        let s = map.index(1, 1);
        let up = map.index(0, 1);
        let left = map.index(1, 0);
        let right = map.index(1, 2);
        assert!((mdp.prob(s, Action::Up as usize, up) - (1.0 - wind)).abs() < 1e-15);
        assert!((mdp.prob(s, Action::Up as usize, left) - wind / 2.0).abs() < 1e-15);
        assert!((mdp.prob(s, Action::Up as usize, right) - wind / 2.0).abs() < 1e-15);
        let sum: f64 = mdp.transition_row(s, Action::Up as usize).iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn corner_clamp_conserves_mass() {
        let map = GridMap::parse("YS\nSG").unwrap();
        let mdp = build_mdp(&map, 0.0, &defaults(), 0.9);
        // pressing into the corner keeps the full unit mass on the grid
        assert_eq!(mdp.prob(0, Action::Up as usize, 0), 1.0);
        assert_eq!(mdp.prob(0, Action::Left as usize, 0), 1.0);
        mdp.validate().unwrap();
    }

    #[test]
    fn start_cell_counts_as_safe() {
        let map = GridMap::parse("YG").unwrap();
        let rewards = RewardTable { safe: 0.25, ..defaults() };
        let mdp = build_mdp(&map, 0.0, &rewards, 0.99);
        assert_eq!(mdp.reward(0), 0.25);
    }
}
