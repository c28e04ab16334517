use crate::{DpError, PrivacyBudget};

/// Calibration search gives up above this sigma.
pub const SIGMA_CAP: f64 = 1e7;

/// Renyi orders used for accounting: {1.25, 1.5, 1.75, 2..=10, 12..=64 by 4}
/// plus a tail of high orders {128, 256, 512, 1024}. The tail keeps the
/// conversion floor `ln(1/delta)/(alpha_max - 1)` below the smallest budgets
/// in use (0.1 needs orders above 116 at delta = 1e-5).
pub fn default_order_grid() -> Vec<f64> {
    let mut orders = vec![1.25, 1.5, 1.75];
    orders.extend((2..=10).map(f64::from));
    orders.extend((12..=64).step_by(4).map(f64::from));
    orders.extend([128.0, 256.0, 512.0, 1024.0]);
    orders
}

/// Per-step Gaussian RDP at order `alpha`: `alpha * sensitivity^2 / (2 sigma^2)`.
fn gaussian_rdp(alpha: f64, sigma: f64, sensitivity: f64) -> f64 {
    alpha * sensitivity * sensitivity / (2.0 * sigma * sigma)
}

/// Classic RDP-to-DP conversion: `min_alpha rdp(alpha) + ln(1/delta)/(alpha-1)`.
fn convert(orders: &[f64], total_rdp: impl Fn(f64) -> f64, delta: f64) -> f64 {
    let log_inv_delta = (1.0 / delta).ln();
    orders
        .iter()
        .map(|&a| total_rdp(a) + log_inv_delta / (a - 1.0))
        .fold(f64::INFINITY, f64::min)
}

/// Epsilon spent by `steps` compositions of a Gaussian mechanism with noise
/// standard deviation `sigma` on a quantity of L2 sensitivity `sensitivity`.
pub fn rdp_epsilon_of_gaussian(sigma: f64, sensitivity: f64, steps: usize, delta: f64) -> f64 {
    assert!(sigma > 0.0, "rdp accounting needs sigma > 0");
    assert!(steps >= 1);
    let orders = default_order_grid();
    convert(&orders, |a| steps as f64 * gaussian_rdp(a, sigma, sensitivity), delta)
}

/// Binary-search the smallest sigma whose spent epsilon stays within the
/// budget. `epsilon = inf` short-circuits to `sigma = 0`.
pub fn rdp_calibrate(
    budget: PrivacyBudget,
    sensitivity: f64,
    steps: usize,
) -> Result<f64, DpError> {
    if budget.is_non_private() {
        return Ok(0.0);
    }
    assert!(budget.epsilon > 0.0, "epsilon must be positive");

    let eps_of = |sigma: f64| rdp_epsilon_of_gaussian(sigma, sensitivity, steps, budget.delta);

    let mut hi = 1.0;
    while eps_of(hi) > budget.epsilon {
        hi *= 2.0;
        if hi > SIGMA_CAP {
            return Err(DpError::BudgetTooSmall { epsilon: budget.epsilon, cap: SIGMA_CAP });
        }
    }
    let mut lo = hi / 1024.0;
    // epsilon is monotone decreasing in sigma; keep eps(hi) <= budget
    while (hi - lo) / hi > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if eps_of(mid) <= budget.epsilon {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Accumulates Gaussian-mechanism steps and converts to (epsilon, delta)-DP.
///
/// Identical consecutive steps are stored as one counted group, so the RDP
/// total after k equal steps is exactly k times the single-step value.
#[derive(Clone, Debug)]
pub struct RdpAccountant {
    orders: Vec<f64>,
    groups: Vec<StepGroup>,
}

#[derive(Clone, Debug)]
struct StepGroup {
    sigma: f64,
    sensitivity: f64,
    count: u64,
}

impl RdpAccountant {
    pub fn new() -> Self {
        RdpAccountant { orders: default_order_grid(), groups: Vec::new() }
    }

    /// Record one mechanism invocation with noise std `sigma` on a quantity
    /// of L2 sensitivity `sensitivity`.
    pub fn record_gaussian(&mut self, sigma: f64, sensitivity: f64) {
        if let Some(last) = self.groups.last_mut() {
            if last.sigma == sigma && last.sensitivity == sensitivity {
                last.count += 1;
                return;
            }
        }
        self.groups.push(StepGroup { sigma, sensitivity, count: 1 });
    }

    pub fn steps(&self) -> u64 {
        self.groups.iter().map(|g| g.count).sum()
    }

    /// Accumulated RDP at order `alpha`. Zero-sigma steps spend infinity.
    pub fn rdp_at(&self, alpha: f64) -> f64 {
        self.groups
            .iter()
            .map(|g| {
                if g.sigma == 0.0 {
                    f64::INFINITY
                } else {
                    g.count as f64 * gaussian_rdp(alpha, g.sigma, g.sensitivity)
                }
            })
            .sum()
    }

    /// Epsilon spent so far at the given delta.
    pub fn epsilon(&self, delta: f64) -> f64 {
        if self.groups.is_empty() {
            return 0.0;
        }
        convert(&self.orders, |a| self.rdp_at(a), delta)
    }
}

impl Default for RdpAccountant {
    fn default() -> Self {
        Self::new()
    }
}
