use ospq_core::fockrep::{
    block_dim_multinomial, check_matrix_relations, check_norm_consistency, check_unitarity, check_weyl_relations, decompose_gl,
    FockRep, OpLabel, Tolerances,
};
use ospq_core::uqosp::catalog;
use ospq_core::Sign;

const SET: [(usize, usize); 7] = [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3), (3, 2), (2, 5)];

fn all_pass(results: &[ospq_core::report::CheckResult]) {
    for r in results {
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn dimensions_are_exact() {
    for (n, k) in SET {
        assert_eq!(FockRep::new(n, k).unwrap().dim(), k.pow(n as u32));
    }
}

#[test]
fn representation_checks_pass_on_the_reference_set() {
    let tol = Tolerances::default();
    for (n, k) in SET {
        let rep = FockRep::new(n, k).unwrap();
        all_pass(&check_unitarity(&rep, &tol).unwrap());
        all_pass(&check_weyl_relations(&rep, &tol).unwrap());
        all_pass(&check_norm_consistency(&rep, &tol).unwrap());
        all_pass(&check_matrix_relations(&rep, &catalog(n).unwrap(), &tol).unwrap());
    }
}

#[test]
fn block_structure() {
    let tol = Tolerances::default();
    for (n, k, dims) in [(2, 3, vec![1, 2, 3, 2, 1]), (3, 2, vec![1, 3, 3, 1]), (1, 4, vec![1; 4]), (3, 3, vec![1, 3, 6, 7, 6, 3, 1])] {
        let (d, checks) = decompose_gl(&FockRep::new(n, k).unwrap(), &tol).unwrap();
        assert_eq!(d.dims(), dims);
        all_pass(&checks);
    }
}

#[test]
fn multinomial_counts_sum_to_total() {
    for (n, k) in [(2, 5), (4, 3), (5, 2)] {
        let total: u128 = (0..=n * (k - 1)).map(|m| block_dim_multinomial(n, k, m)).sum();
        assert_eq!(total, (k as u128).pow(n as u32));
    }
}

#[test]
fn crossing_rule_as_matrices() {
    // a_1^+ a_2^+ = q a_2^+ a_1^+ at q = exp(i pi / 3)
    let rep = FockRep::new(2, 3).unwrap();
    let a1 = rep.generator(OpLabel::Osc(1, Sign::Plus)).unwrap();
    let a2 = rep.generator(OpLabel::Osc(2, Sign::Plus)).unwrap();
    let d = a1.mul(&a2).unwrap().sub(&a2.mul(&a1).unwrap().scale(rep.q())).unwrap();
    assert!(d.max_abs() < 1e-12);
}

#[test]
fn invalid_labels_are_rejected() {
    let rep = FockRep::new(2, 3).unwrap();
    assert!(rep.generator(OpLabel::Gl(1, 1)).is_err());
    assert!(rep.generator(OpLabel::Osc(3, Sign::Plus)).is_err());
}
