//! Dense two-phase simplex for small LPs (hundreds of rows). Maximizes
//! `c.x` subject to `A x <= b` (any sign of `b`) and `x >= 0`. Dantzig
//! pricing with a Bland fallback after degenerate stalls; the final basic
//! solution is recomputed from the original data to shed tableau drift.

use nalgebra::{DMatrix, DVector};

const TOL: f64 = 1e-9;
/// Minimum magnitude of an eligible pivot element.
const PIVOT_TOL: f64 = 1e-7;
/// Consecutive non-improving pivots before switching to Bland's rule.
const STALL_LIMIT: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub x: Vec<f64>,
    pub objective: f64,
}

/// maximize `objective . x` s.t. `rows[i] . x <= rhs[i]`, `x >= 0`.
#[derive(Clone, Debug, Default)]
pub struct LpProblem {
    n_vars: usize,
    objective: Vec<f64>,
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(n_vars: usize) -> Self {
        LpProblem { n_vars, objective: vec![0.0; n_vars], rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn set_objective(&mut self, c: Vec<f64>) {
        assert_eq!(c.len(), self.n_vars);
        self.objective = c;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<f64>, b: f64) {
        assert_eq!(coeffs.len(), self.n_vars);
        self.rows.push(coeffs);
        self.rhs.push(b);
    }

    pub fn n_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn solve(&self, max_iters: usize) -> LpSolution {
        Tableau::build(self).solve(max_iters)
    }
}

struct Tableau {
    n_vars: usize,
    n_slack: usize,
    n_art: usize,
    // rows[i] has n_vars + n_slack + n_art coefficient columns plus rhs
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    objective: Vec<f64>, // original costs, length n_vars
    // standard-form copy for the final refactorization
    orig_rows: Vec<Vec<f64>>,
    orig_rhs: Vec<f64>,
}

impl Tableau {
    fn build(p: &LpProblem) -> Tableau {
        let m = p.rows.len();
        let n = p.n_vars;
        let k = p.rhs.iter().filter(|&&b| b < 0.0).count();
        let width = n + m + k;

        let mut rows = vec![vec![0.0; width]; m];
        let mut rhs = vec![0.0; m];
        let mut basis = vec![0usize; m];
        let mut next_art = 0;
        for i in 0..m {
            let flip = p.rhs[i] < 0.0;
            let sign = if flip { -1.0 } else { 1.0 };
            for j in 0..n {
                rows[i][j] = sign * p.rows[i][j];
            }
            rhs[i] = sign * p.rhs[i];
            rows[i][n + i] = sign; // slack (+1) or surplus (-1)
            if flip {
                rows[i][n + m + next_art] = 1.0;
                basis[i] = n + m + next_art;
                next_art += 1;
            } else {
                basis[i] = n + i;
            }
        }

        Tableau {
            n_vars: n,
            n_slack: m,
            n_art: k,
            orig_rows: rows.clone(),
            orig_rhs: rhs.clone(),
            rows,
            rhs,
            basis,
            objective: p.objective.clone(),
        }
    }

    fn width(&self) -> usize {
        self.n_vars + self.n_slack + self.n_art
    }

    /// Reduced-cost row `z_j - c_j` for the given full-length costs.
    fn reduced_costs(&self, costs: &[f64]) -> Vec<f64> {
        let width = self.width();
        let mut red = vec![0.0; width];
        for j in 0..width {
            let mut z = 0.0;
            for i in 0..self.rows.len() {
                let cb = costs[self.basis[i]];
                if cb != 0.0 {
                    z += cb * self.rows[i][j];
                }
            }
            red[j] = z - costs[j];
        }
        red
    }

    fn pivot(&mut self, row: usize, col: usize, red: &mut [f64]) {
        let piv = self.rows[row][col];
        let inv = 1.0 / piv;
        for v in self.rows[row].iter_mut() {
            *v *= inv;
        }
        self.rhs[row] *= inv;
        self.rows[row][col] = 1.0;

        for i in 0..self.rows.len() {
            if i == row {
                continue;
            }
            let factor = self.rows[i][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..self.width() {
                self.rows[i][j] -= factor * self.rows[row][j];
            }
            self.rows[i][col] = 0.0;
            self.rhs[i] -= factor * self.rhs[row];
        }

        let factor = red[col];
        if factor != 0.0 {
            for j in 0..self.width() {
                red[j] -= factor * self.rows[row][j];
            }
            red[col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Run simplex iterations for the given costs until optimal. `allowed`
    /// bounds the usable columns (phase 2 excludes artificials). Dantzig
    /// pricing until a degenerate stall, then Bland's rule for the rest of
    /// the phase. Reduced costs are refreshed from scratch periodically to
    /// shed incremental drift.
    fn optimize(&mut self, costs: &[f64], allowed: usize, max_iters: usize) -> Result<(), LpStatus> {
        let mut red = self.reduced_costs(costs);
        let mut stall = 0usize;
        let mut bland = false;
        for iter in 0..max_iters {
            if iter > 0 && iter % 128 == 0 {
                red = self.reduced_costs(costs);
            }
            let pick = |red: &[f64], bland: bool| {
                if bland {
                    red.iter().take(allowed).position(|&r| r < -TOL)
                } else {
                    let mut best = None;
                    let mut best_val = -TOL;
                    for (j, &r) in red.iter().enumerate().take(allowed) {
                        if r < best_val {
                            best_val = r;
                            best = Some(j);
                        }
                    }
                    best
                }
            };
            let entering = match pick(&red, bland) {
                Some(col) => Some(col),
                None => {
                    // apparent optimality can be an artifact of incremental
                    // drift; re-verify against exact reduced costs
                    red = self.reduced_costs(costs);
                    pick(&red, bland)
                }
            };
            let Some(col) = entering else {
                return Ok(());
            };

            // ratio test over sufficiently large pivot elements; ties go to
            // the lowest basic index under Bland, else to the largest pivot
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > PIVOT_TOL {
                    let ratio = self.rhs[i].max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            let tied = (ratio - lr).abs() <= 1e-9 * (1.0 + lr.abs());
                            if tied {
                                if bland {
                                    self.basis[i] < self.basis[li]
                                } else {
                                    a > self.rows[li][col]
                                }
                            } else {
                                ratio < lr
                            }
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, ratio)) = leave else {
                // no admissible pivot: either truly unbounded or only
                // sub-threshold positive entries remain; treat as unbounded
                return Err(LpStatus::Unbounded);
            };

            if ratio < 1e-12 {
                stall += 1;
                if stall >= STALL_LIMIT {
                    bland = true;
                }
            } else {
                stall = 0;
            }
            self.pivot(row, col, &mut red);
        }
        Err(LpStatus::IterationLimit)
    }

    fn solve(mut self, max_iters: usize) -> LpSolution {
        let width = self.width();

        if self.n_art > 0 {
            // phase 1: maximize -sum(artificials)
            let mut costs = vec![0.0; width];
            for j in (width - self.n_art)..width {
                costs[j] = -1.0;
            }
            if let Err(status) = self.optimize(&costs, width, max_iters) {
                return self.finish(status);
            }
            let infeasibility: f64 = (0..self.rows.len())
                .filter(|&i| self.basis[i] >= width - self.n_art)
                .map(|i| self.rhs[i])
                .sum();
            if infeasibility > 1e-7 {
                return self.finish(LpStatus::Infeasible);
            }
            self.evict_basic_artificials();
        }

        // phase 2: the real objective over structural + slack columns
        let mut costs = vec![0.0; self.width()];
        costs[..self.n_vars].copy_from_slice(&self.objective);
        let allowed = self.n_vars + self.n_slack;
        match self.optimize(&costs, allowed, max_iters) {
            Ok(()) => self.finish(LpStatus::Optimal),
            Err(status) => self.finish(status),
        }
    }

    /// Pivot artificials out of the basis; rows that cannot pivot are
    /// redundant and dropped (together with their standard-form copies).
    fn evict_basic_artificials(&mut self) {
        let art_start = self.width() - self.n_art;
        let mut drop_rows = Vec::new();
        for i in 0..self.rows.len() {
            if self.basis[i] < art_start {
                continue;
            }
            let col = (0..art_start).find(|&j| self.rows[i][j].abs() > PIVOT_TOL);
            match col {
                Some(col) => {
                    let mut dummy = vec![0.0; self.width()];
                    self.pivot(i, col, &mut dummy);
                }
                None => drop_rows.push(i),
            }
        }
        for &i in drop_rows.iter().rev() {
            self.rows.remove(i);
            self.rhs.remove(i);
            self.basis.remove(i);
            self.orig_rows.remove(i);
            self.orig_rhs.remove(i);
        }
    }

    /// Recompute the basic values from the untouched standard-form data:
    /// solve `B x_B = b` for the final basis. This sheds the numerical
    /// drift a long dense pivot sequence accumulates.
    fn refined_basic_values(&self) -> Option<Vec<f64>> {
        let m = self.rows.len();
        if m == 0 {
            return Some(Vec::new());
        }
        let mut b_mat = DMatrix::<f64>::zeros(m, m);
        for (k, &var) in self.basis.iter().enumerate() {
            for i in 0..m {
                b_mat[(i, k)] = self.orig_rows[i][var];
            }
        }
        let rhs = DVector::from_iterator(m, self.orig_rhs.iter().cloned());
        b_mat.lu().solve(&rhs).map(|v| v.as_slice().to_vec())
    }

    fn finish(&self, status: LpStatus) -> LpSolution {
        let basic_values = if status == LpStatus::Optimal {
            self.refined_basic_values().unwrap_or_else(|| self.rhs.clone())
        } else {
            self.rhs.clone()
        };
        let mut x = vec![0.0; self.n_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n_vars {
                x[b] = basic_values[i];
            }
        }
        let objective = self.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpSolution { status, x, objective }
    }
}
