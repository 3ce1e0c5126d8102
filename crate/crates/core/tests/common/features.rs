//! Random shallow feature structures.

use proptest::prelude::*;
use xtag::grammar::{FeatureStructure, FeatureValue};

const ATTRS: [&str; 5] = ["agr", "num", "case", "mode", "wh"];
const ATOMS: [&str; 6] = ["sing", "plur", "nom", "acc", "+", "-"];
const VARS: [&str; 2] = ["x", "y"];

fn leaf() -> impl Strategy<Value = FeatureValue> {
    prop_oneof![
        4 => prop::sample::select(&ATOMS[..]).prop_map(FeatureValue::atom),
        1 => prop::sample::select(&VARS[..]).prop_map(|v| FeatureValue::Var(v.to_string())),
    ]
}

fn flat() -> impl Strategy<Value = FeatureStructure> {
    prop::collection::btree_map(prop::sample::select(&ATTRS[..]), leaf(), 0..3).prop_map(|m| {
        let mut fs = FeatureStructure::new();
        for (k, v) in m {
            fs.insert(k, v);
        }
        fs
    })
}

/// Structures of depth at most 2.
pub fn structure() -> impl Strategy<Value = FeatureStructure> {
    let value = prop_oneof![3 => leaf(), 2 => flat().prop_map(FeatureValue::Struct)];
    prop::collection::btree_map(prop::sample::select(&ATTRS[..]), value, 0..4).prop_map(|m| {
        let mut fs = FeatureStructure::new();
        for (k, v) in m {
            fs.insert(k, v);
        }
        fs
    })
}
