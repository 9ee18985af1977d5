use ospq_core::ospclassic::{span_dimension, verify_classical, verify_pre_limits};

#[test]
fn classical_suite_is_exact() {
    for n in 1..=3 {
        let results = verify_classical(n).unwrap();
        let pb = results.iter().filter(|r| r.id.starts_with("PB[")).count();
        assert_eq!(pb, 8 * n * n * n);
        for r in &results {
            assert!(r.passed(), "{r:?}");
        }
    }
}

#[test]
fn span_dimensions() {
    assert_eq!([1, 2, 3].map(|n| span_dimension(n).unwrap()), [5, 14, 27]);
}

#[test]
fn pre_relations_limit_to_classical_ones() {
    for n in 1..=3 {
        for r in verify_pre_limits(n).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }
}
