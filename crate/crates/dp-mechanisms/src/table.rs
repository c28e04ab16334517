use crate::DpError;

/// The three solver families whose noise scales were published.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PolicyFamily {
    Vi,
    Dqn,
    Ppo,
}

/// The nine published privacy budgets, smallest first, `inf` last.
pub const EPSILON_BUDGETS: [f64; 9] =
    [0.1, 0.105, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, f64::INFINITY];

/// Configured upper bound on the value-iteration update sensitivity.
pub const VI_SENSITIVITY_BOUND: f64 = 1.05;

const VI_SIGMAS: [f64; 9] = [2080.08, 1886.69, 520.02, 83.20, 20.80, 5.20, 0.83, 0.21, 0.0];
const DL_SIGMAS: [f64; 9] = [94229.0, 150.0, 22.75, 9.89, 5.38, 3.03, 1.55, 1.0, 0.0];

/// Exact lookup of the published noise standard deviation for a
/// (policy family, budget) pair. Budgets outside the published nine are
/// rejected; callers fall back to [`crate::rdp_calibrate`] for those.
pub fn sigma_from_table(family: PolicyFamily, epsilon: f64) -> Result<f64, DpError> {
    let idx = EPSILON_BUDGETS
        .iter()
        .position(|&b| b == epsilon || (b.is_infinite() && epsilon.is_infinite()))
        .ok_or(DpError::UnknownBudget(epsilon))?;
    let sigma = match family {
        PolicyFamily::Vi => VI_SIGMAS[idx],
        PolicyFamily::Dqn | PolicyFamily::Ppo => DL_SIGMAS[idx],
    };
    Ok(sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_entries() {
        assert_eq!(sigma_from_table(PolicyFamily::Vi, 0.5).unwrap(), 83.20);
        assert_eq!(sigma_from_table(PolicyFamily::Dqn, 0.105).unwrap(), 150.0);
        assert_eq!(sigma_from_table(PolicyFamily::Ppo, f64::INFINITY).unwrap(), 0.0);
        assert_eq!(sigma_from_table(PolicyFamily::Vi, 1.0).unwrap(), 20.80);
        assert_eq!(sigma_from_table(PolicyFamily::Dqn, 0.1).unwrap(), 94229.0);
    }

    #[test]
    fn unknown_budget_is_rejected() {
        assert_eq!(sigma_from_table(PolicyFamily::Vi, 0.3), Err(DpError::UnknownBudget(0.3)));
        assert_eq!(sigma_from_table(PolicyFamily::Ppo, 42.0), Err(DpError::UnknownBudget(42.0)));
    }
}
