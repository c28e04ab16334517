//! Reward-distance metrics: normalized L1/L2/Linf distances and the
//! sign-change count between an original and a reconstructed reward vector.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("cannot normalize a zero vector")]
    ZeroVector,
    #[error("vectors have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    L1,
    L2,
    Linf,
}

impl Norm {
    fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

/// The four distances between an original and a reconstructed reward.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceReport {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub sign_changes: usize,
}

/// Normalize each vector by its own chosen norm, then return that norm of
/// the difference. Scale-invariant on both sides; zero vectors are an error
/// (an all-zero reconstruction is an attack failure, not a perfect match).
pub fn normalized_distance(r: &[f64], r_hat: &[f64], norm: Norm) -> Result<f64, MetricError> {
    if r.len() != r_hat.len() {
        return Err(MetricError::LengthMismatch(r.len(), r_hat.len()));
    }
    let na = norm.of(r);
    let nb = norm.of(r_hat);
    if na == 0.0 || nb == 0.0 {
        return Err(MetricError::ZeroVector);
    }
    let diff: Vec<f64> = r.iter().zip(r_hat).map(|(a, b)| a / na - b / nb).collect();
    Ok(norm.of(&diff))
}

/// Number of states whose reward strictly changes sign between the two
/// vectors; entries equal to zero never count.
pub fn sign_change_count(r: &[f64], r_hat: &[f64]) -> usize {
    assert_eq!(r.len(), r_hat.len());
    r.iter().zip(r_hat).filter(|(a, b)| a.signum() * b.signum() < 0.0 && **a != 0.0 && **b != 0.0).count()
}

/// Bundle all four metrics.
pub fn distance_report(r: &[f64], r_hat: &[f64]) -> Result<DistanceReport, MetricError> {
    Ok(DistanceReport {
        l1: normalized_distance(r, r_hat, Norm::L1)?,
        l2: normalized_distance(r, r_hat, Norm::L2)?,
        linf: normalized_distance(r, r_hat, Norm::Linf)?,
        sign_changes: sign_change_count(r, r_hat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_vectors_score_zero() {
        let r = vec![0.5, -0.25, 1.0];
        let report = distance_report(&r, &r).unwrap();
        assert_eq!(report, DistanceReport { l1: 0.0, l2: 0.0, linf: 0.0, sign_changes: 0 });
    }

    #[test]
    fn orthogonal_unit_vectors_under_l1() {
        let d = normalized_distance(&[1.0, 0.0], &[0.0, 1.0], Norm::L1).unwrap();
        assert_eq!(d, 2.0);
    }

    #[test]
    fn hand_computed_l2_case() {
        // (3,4) and (4,3) both have L2 norm 5; the difference is
        // (-1/5, 1/5) with norm 0.2 * sqrt(2)
        let d = normalized_distance(&[3.0, 4.0], &[4.0, 3.0], Norm::L2).unwrap();
        assert!((d - 0.2 * 2.0f64.sqrt()).abs() < 1e-12, "got {d}");
        assert!((d - 0.28284).abs() < 1e-5);
    }

    #[test]
    fn zero_vector_is_reported() {
        assert_eq!(
            normalized_distance(&[0.0, 0.0], &[1.0, 0.0], Norm::L2),
            Err(MetricError::ZeroVector)
        );
        assert_eq!(
            normalized_distance(&[1.0, 0.0], &[0.0, 0.0], Norm::Linf),
            Err(MetricError::ZeroVector)
        );
        assert!(distance_report(&[0.0], &[1.0]).is_err());
    }

    #[test]
    fn sign_changes_ignore_zeros() {
        assert_eq!(sign_change_count(&[1.0, -1.0, 0.0], &[-1.0, 1.0, 5.0]), 2);
        assert_eq!(sign_change_count(&[1.0, 2.0], &[1.0, 2.0]), 0);
        assert_eq!(sign_change_count(&[0.0, 0.0], &[1.0, -1.0]), 0);
    }

    #[test]
    fn negation_counts_every_nonzero_entry() {
        let r = vec![1.0, -2.0, 0.0, 3.0];
        let neg: Vec<f64> = r.iter().map(|x| -x).collect();
        assert_eq!(sign_change_count(&r, &neg), 3);
    }
}
