//! Algebraic laws of feature unification over random shallow structures.

mod common;

use common::features::structure;
use proptest::prelude::*;
use xtag::grammar::{unify, FeatureStructure};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn idempotent(a in structure()) {
        prop_assert!(a.depth() <= 2);
        prop_assert_eq!(unify(&a, &a).unwrap(), a.canonical().unwrap());
    }

    #[test]
    fn commutative_on_success(a in structure(), b in structure()) {
        match (unify(&a, &b), unify(&b, &a)) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "one order failed: {:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn associative_on_success(a in structure(), b in structure(), c in structure()) {
        let left = unify(&a, &b).and_then(|ab| unify(&ab, &c));
        let right = unify(&b, &c).and_then(|bc| unify(&a, &bc));
        match (left, right) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "groupings disagree: {:?} vs {:?}", x, y),
        }
    }

    #[test]
    fn empty_is_identity(a in structure()) {
        prop_assert_eq!(unify(&a, &FeatureStructure::new()).unwrap(), a.canonical().unwrap());
    }
}

/// The generator must exercise both outcomes for the laws to mean much.
#[test]
fn generator_mixes_success_and_failure() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let (mut ok, mut clash) = (0, 0);
    for _ in 0..1000 {
        let a = structure().new_tree(&mut runner).unwrap().current();
        let b = structure().new_tree(&mut runner).unwrap().current();
        match unify(&a, &b) {
            Ok(_) => ok += 1,
            Err(_) => clash += 1,
        }
    }
    assert!(ok > 100 && clash > 100, "ok {ok}, clash {clash}");
}
