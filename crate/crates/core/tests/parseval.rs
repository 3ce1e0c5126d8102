mod common;

use common::scorer::{score, spans_of, tree_pair, HAND};
use proptest::prelude::*;
use xtag::evaluation::{parse_sexpr, parseval, BracketOptions, Bracketing, EvalError};

fn bracketing(tree: &str) -> Bracketing {
    parse_sexpr(tree).unwrap().brackets(BracketOptions::default())
}

fn agrees(cand: &str, gold: &str) -> Result<(), String> {
    let got = parseval(&bracketing(cand), &bracketing(gold)).map_err(|e| e.to_string())?;
    let want = score(&spans_of(cand), &spans_of(gold));
    if (got.crossings, got.correct) != (want.crossings, want.correct) || got.recall != want.recall || got.precision != want.precision {
        return Err(format!("{cand} vs {gold}: {got:?} != {want:?}"));
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn matches_brute_force((cand, gold) in tree_pair()) {
        prop_assert!(agrees(&cand, &gold).is_ok(), "{:?}", agrees(&cand, &gold));
    }

    #[test]
    fn self_comparison_is_perfect((t, _) in tree_pair()) {
        let b = bracketing(&t);
        let r = parseval(&b, &b).unwrap();
        prop_assert_eq!((r.crossings, r.recall, r.precision), (0, 1.0, 1.0));
    }

    #[test]
    fn swapping_swaps_recall_and_precision((a, b) in tree_pair()) {
        let (x, y) = (bracketing(&a), bracketing(&b));
        let ab = parseval(&x, &y).unwrap();
        let ba = parseval(&y, &x).unwrap();
        prop_assert_eq!(ab.recall, ba.precision);
        prop_assert_eq!(ab.precision, ba.recall);
        prop_assert_eq!(ab.correct, ba.correct);
    }
}

#[test]
fn hand_fixtures() {
    for (cand, gold, crossings, correct, recall, precision) in HAND {
        let r = parseval(&bracketing(cand), &bracketing(gold)).unwrap();
        assert_eq!((r.crossings, r.correct), (crossings, correct), "{cand} vs {gold}");
        assert!((r.recall - recall).abs() < 1e-12 && (r.precision - precision).abs() < 1e-12, "{cand} vs {gold}");
        agrees(cand, gold).unwrap();
    }
}

#[test]
fn spans_of_a_small_tree() {
    assert_eq!(bracketing("(S (NP a b) c)"), Bracketing::from_spans(3, [(0, 2), (0, 3)]));
    assert_eq!(bracketing("(S a b c d)"), Bracketing::from_spans(4, [(0, 4)]));
}

#[test]
fn length_mismatch_is_an_error() {
    let err = parseval(&bracketing("(S a b)"), &bracketing("(S a b c)")).unwrap_err();
    assert_eq!(err, EvalError::LengthMismatch { candidate: 2, gold: 3 });
}
