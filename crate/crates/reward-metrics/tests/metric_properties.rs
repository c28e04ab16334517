use proptest::prelude::*;
use reward_metrics::{distance_report, normalized_distance, sign_change_count, Norm};

fn nonzero_vec(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0..10.0f64, len)
        .prop_filter("needs a clearly nonzero entry", |v| v.iter().any(|x| x.abs() > 1e-3))
}

fn vec_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..12).prop_flat_map(|n| (nonzero_vec(n), nonzero_vec(n)))
}

proptest! {
    #[test]
    fn metrics_are_symmetric((a, b) in vec_pair()) {
        for norm in [Norm::L1, Norm::L2, Norm::Linf] {
            let ab = normalized_distance(&a, &b, norm).unwrap();
            let ba = normalized_distance(&b, &a, norm).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
        }
        prop_assert_eq!(sign_change_count(&a, &b), sign_change_count(&b, &a));
    }

    #[test]
    fn positive_scaling_is_invisible(a in nonzero_vec(8), c in 0.01..100.0f64) {
        let scaled: Vec<f64> = a.iter().map(|x| x * c).collect();
        let report = distance_report(&a, &scaled).unwrap();
        prop_assert!(report.l1 < 1e-9);
        prop_assert!(report.l2 < 1e-9);
        prop_assert!(report.linf < 1e-9);
        prop_assert_eq!(report.sign_changes, 0);
    }

    #[test]
    fn scaling_the_reconstruction_leaves_distances_fixed(
        (a, b) in vec_pair(), c in 0.01..100.0f64
    ) {
        let scaled: Vec<f64> = b.iter().map(|x| x * c).collect();
        let base = distance_report(&a, &b).unwrap();
        let after = distance_report(&a, &scaled).unwrap();
        prop_assert!((base.l1 - after.l1).abs() < 1e-9);
        prop_assert!((base.l2 - after.l2).abs() < 1e-9);
        prop_assert!((base.linf - after.linf).abs() < 1e-9);
        prop_assert_eq!(base.sign_changes, after.sign_changes);
    }

    #[test]
    fn normalized_distances_are_bounded_by_two((a, b) in vec_pair()) {
        for norm in [Norm::L1, Norm::L2, Norm::Linf] {
            let d = normalized_distance(&a, &b, norm).unwrap();
            prop_assert!(d <= 2.0 + 1e-12);
        }
    }
}
