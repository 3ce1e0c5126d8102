//! Attribute-value feature structures.
//!
//! A [`FeatureStructure`] maps attribute names to atoms, nested structures or
//! variables. Variables mark re-entrancy: every occurrence of `?x` inside one
//! scope denotes the same node. In the tree database that scope is a whole
//! elementary tree; for the stand-alone [`unify`] each argument is its own
//! scope.
//!
//! Textual form: `{agr: {num: sing, pers: 3}, mode: ?m, wh: ?w=-}` where
//! `?w=-` is a variable whose value is also constrained.

use super::fgraph::{Clash, FeatureGraph, ReadbackError};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

/// Maximum attribute path length (e.g. `agr.num`).
pub const MAX_DEPTH: usize = 2;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FeatureStructure(BTreeMap<String, FeatureValue>);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FeatureValue {
    Atom(String),
    Struct(FeatureStructure),
    Var(String),
    /// A variable occurrence that also carries a value constraint.
    Tagged(String, Box<FeatureValue>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    #[error("feature clash at {0}")]
    Clash(Clash),
    #[error("result exceeds the maximum feature depth of {MAX_DEPTH}")]
    TooDeep,
    #[error("result contains a cyclic structure")]
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("conflicting values at path {path}")]
pub struct PathConflict {
    pub path: String,
}

impl FeatureStructure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, attr: &str) -> Option<&FeatureValue> {
        self.0.get(attr)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &FeatureValue)> {
        self.0.iter()
    }

    pub fn insert(&mut self, attr: impl Into<String>, value: FeatureValue) -> Option<FeatureValue> {
        self.0.insert(attr.into(), value)
    }

    /// Value at a dotted path such as `agr.num`, looking through tags.
    pub fn get_path(&self, path: &str) -> Option<&FeatureValue> {
        let mut current = self;
        let parts: Vec<&str> = path.split('.').collect();
        for (k, part) in parts.iter().enumerate() {
            let value = current.0.get(*part)?.untagged();
            if k + 1 == parts.len() {
                return Some(value);
            }
            match value {
                FeatureValue::Struct(inner) => current = inner,
                _ => return None,
            }
        }
        None
    }

    /// Adds the equation `path = value`, merging with what is already there.
    pub fn insert_path(&mut self, path: &[&str], value: FeatureValue) -> Result<(), PathConflict> {
        let conflict = || PathConflict { path: path.join(".") };
        let (last, init) = path.split_last().ok_or_else(conflict)?;
        let mut current = self;
        for key in init {
            let slot = current
                .0
                .entry(key.to_string())
                .or_insert_with(|| FeatureValue::Struct(FeatureStructure::new()));
            if let FeatureValue::Var(name) = slot {
                *slot = FeatureValue::Tagged(name.clone(), Box::new(FeatureValue::Struct(FeatureStructure::new())));
            }
            current = match slot {
                FeatureValue::Struct(inner) => inner,
                FeatureValue::Tagged(_, inner) => match inner.as_mut() {
                    FeatureValue::Struct(s) => s,
                    _ => return Err(conflict()),
                },
                _ => return Err(conflict()),
            };
        }
        match current.0.remove(*last) {
            None => {
                current.0.insert(last.to_string(), value);
                Ok(())
            }
            Some(existing) => match merge_values(existing.clone(), value) {
                Some(merged) => {
                    current.0.insert(last.to_string(), merged);
                    Ok(())
                }
                None => {
                    current.0.insert(last.to_string(), existing);
                    Err(conflict())
                }
            },
        }
    }

    /// Longest attribute path, counting nested structures behind tags.
    pub fn depth(&self) -> usize {
        self.0.values().map(|v| 1 + v.depth()).max().unwrap_or(0)
    }

    /// Every variable name mentioned in the structure.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        for v in self.0.values() {
            v.collect_vars(out);
        }
    }

    /// Normal form of the structure: same information, canonical variable
    /// names and tag placement.
    pub fn canonical(&self) -> Result<FeatureStructure, UnifyError> {
        let mut graph = FeatureGraph::new();
        let root = graph.fresh();
        let mut vars = HashMap::new();
        graph.add_structure(root, self, &mut vars).map_err(UnifyError::Clash)?;
        readback_checked(&graph, root)
    }
}

impl FeatureValue {
    pub fn atom(s: impl Into<String>) -> Self {
        FeatureValue::Atom(s.into())
    }

    fn untagged(&self) -> &FeatureValue {
        match self {
            FeatureValue::Tagged(_, inner) => inner.untagged(),
            v => v,
        }
    }

    fn depth(&self) -> usize {
        match self {
            FeatureValue::Struct(s) => s.depth(),
            FeatureValue::Tagged(_, inner) => inner.depth(),
            _ => 0,
        }
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            FeatureValue::Var(n) => out.push(n.clone()),
            FeatureValue::Tagged(n, inner) => {
                out.push(n.clone());
                inner.collect_vars(out);
            }
            FeatureValue::Struct(s) => s.collect_vars(out),
            FeatureValue::Atom(_) => {}
        }
    }
}

fn merge_values(a: FeatureValue, b: FeatureValue) -> Option<FeatureValue> {
    use FeatureValue::*;
    Some(match (a, b) {
        (Atom(x), Atom(y)) => {
            if x == y {
                Atom(x)
            } else {
                return None;
            }
        }
        (Var(x), Var(y)) => {
            if x == y {
                Var(x)
            } else {
                return None;
            }
        }
        (Var(x), v @ (Atom(_) | Struct(_))) | (v @ (Atom(_) | Struct(_)), Var(x)) => Tagged(x, Box::new(v)),
        (Tagged(x, inner), Var(y)) | (Var(y), Tagged(x, inner)) => {
            if x == y {
                Tagged(x, inner)
            } else {
                return None;
            }
        }
        (Tagged(x, inner), v @ (Atom(_) | Struct(_))) | (v @ (Atom(_) | Struct(_)), Tagged(x, inner)) => {
            Tagged(x, Box::new(merge_values(*inner, v)?))
        }
        (Tagged(x, a), Tagged(y, b)) => {
            if x != y {
                return None;
            }
            Tagged(x, Box::new(merge_values(*a, *b)?))
        }
        (Struct(mut x), Struct(y)) => {
            for (k, v) in y.0 {
                let merged = match x.0.remove(&k) {
                    Some(existing) => merge_values(existing, v)?,
                    None => v,
                };
                x.0.insert(k, merged);
            }
            Struct(x)
        }
        (Atom(_), Struct(_)) | (Struct(_), Atom(_)) => return None,
    })
}

/// Most general unifier of two feature structures.
///
/// Variables are scoped to their own argument; shared variables in the
/// result are named `?0`, `?1`, ... in a canonical traversal order, so
/// `unify(a, b)` and `unify(b, a)` produce identical output.
pub fn unify(a: &FeatureStructure, b: &FeatureStructure) -> Result<FeatureStructure, UnifyError> {
    let mut graph = FeatureGraph::new();
    let ra = graph.fresh();
    let rb = graph.fresh();
    let mut vars_a = HashMap::new();
    let mut vars_b = HashMap::new();
    graph.add_structure(ra, a, &mut vars_a).map_err(UnifyError::Clash)?;
    graph.add_structure(rb, b, &mut vars_b).map_err(UnifyError::Clash)?;
    graph.unify(ra, rb).map_err(UnifyError::Clash)?;
    readback_checked(&graph, ra)
}

fn readback_checked(graph: &FeatureGraph, root: u32) -> Result<FeatureStructure, UnifyError> {
    let value = graph.readback(root).map_err(|e| match e {
        ReadbackError::Cyclic => UnifyError::Cyclic,
    })?;
    if graph.depth(root) > MAX_DEPTH {
        return Err(UnifyError::TooDeep);
    }
    let fs = match value {
        FeatureValue::Struct(s) => s,
        FeatureValue::Tagged(_, inner) => match *inner {
            FeatureValue::Struct(s) => s,
            _ => FeatureStructure::new(),
        },
        _ => FeatureStructure::new(),
    };
    Ok(fs)
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (attr, value)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{attr}: {value}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for FeatureValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureValue::Atom(a) => f.write_str(a),
            FeatureValue::Struct(s) => write!(f, "{s}"),
            FeatureValue::Var(v) => write!(f, "?{v}"),
            FeatureValue::Tagged(v, inner) => write!(f, "?{v}={inner}"),
        }
    }
}

impl Serialize for FeatureStructure {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl Serialize for FeatureValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            FeatureValue::Atom(a) => s.serialize_str(a),
            FeatureValue::Struct(inner) => inner.serialize(s),
            FeatureValue::Var(v) => s.collect_str(&format_args!("?{v}")),
            FeatureValue::Tagged(v, inner) => {
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry(&format!("?{v}"), inner)?;
                map.end()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse feature structure at byte {offset}: {message}")]
pub struct FeatureSyntaxError {
    pub offset: usize,
    pub message: String,
}

impl FromStr for FeatureStructure {
    type Err = FeatureSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = FsParser { src: s.as_bytes(), pos: 0 };
        let fs = p.structure()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(fs)
    }
}

impl FromStr for FeatureValue {
    type Err = FeatureSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = FsParser { src: s.as_bytes(), pos: 0 };
        let v = p.value()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("trailing input"));
        }
        Ok(v)
    }
}

pub(crate) fn is_symbol_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, b'_' | b'+' | b'-' | b'#')
}

struct FsParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl FsParser<'_> {
    fn error(&self, message: &str) -> FeatureSyntaxError {
        FeatureSyntaxError { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FeatureSyntaxError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn symbol(&mut self) -> Result<String, FeatureSyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && is_symbol_char(self.src[self.pos]) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a symbol"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn structure(&mut self) -> Result<FeatureStructure, FeatureSyntaxError> {
        self.expect(b'{')?;
        let mut fs = FeatureStructure::new();
        if self.peek() == Some(b'}') {
            self.pos += 1;
            return Ok(fs);
        }
        loop {
            let attr = self.symbol()?;
            self.expect(b':')?;
            let value = self.value()?;
            if fs.0.insert(attr, value).is_some() {
                return Err(self.error("duplicate attribute"));
            }
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(fs);
                }
                _ => return Err(self.error("expected ',' or '}'")),
            }
        }
    }

    fn value(&mut self) -> Result<FeatureValue, FeatureSyntaxError> {
        match self.peek() {
            Some(b'{') => Ok(FeatureValue::Struct(self.structure()?)),
            Some(b'?') => {
                self.pos += 1;
                let name = self.symbol()?;
                if self.peek() == Some(b'=') {
                    self.pos += 1;
                    let inner = self.value()?;
                    if matches!(inner, FeatureValue::Var(_) | FeatureValue::Tagged(..)) {
                        return Err(self.error("a tag cannot wrap another variable"));
                    }
                    Ok(FeatureValue::Tagged(name, Box::new(inner)))
                } else {
                    Ok(FeatureValue::Var(name))
                }
            }
            _ => Ok(FeatureValue::Atom(self.symbol()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FeatureStructure {
        s.parse().unwrap()
    }

    #[test]
    fn idempotent_on_atoms() {
        let a = fs("{mode: ind}");
        assert_eq!(unify(&a, &a).unwrap(), a);
    }

    #[test]
    fn atomic_clash_fails() {
        let err = unify(&fs("{mode: ind}"), &fs("{mode: inf}")).unwrap_err();
        match err {
            UnifyError::Clash(c) => assert_eq!(c.path_string(), "mode"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn disjoint_nested_merge() {
        let got = unify(&fs("{agr: {num: sing}}"), &fs("{agr: {pers: 3}}")).unwrap();
        assert_eq!(got, fs("{agr: {num: sing, pers: 3}}"));
    }

    #[test]
    fn atom_against_structure_fails() {
        assert!(unify(&fs("{agr: sing}"), &fs("{agr: {num: sing}}")).is_err());
    }

    #[test]
    fn variables_propagate_within_an_argument() {
        let got = unify(&fs("{agr: ?x, head: ?x}"), &fs("{agr: {num: plur}}")).unwrap();
        assert_eq!(got.to_string(), "{agr: ?0={num: plur}, head: ?0}");
        let clash = unify(&fs("{a: ?x, b: ?x}"), &fs("{a: sing, b: plur}"));
        assert!(clash.is_err());
    }

    #[test]
    fn variables_are_local_to_each_argument() {
        let got = unify(&fs("{a: ?x}"), &fs("{b: ?x, a: sing}")).unwrap();
        assert_eq!(got.get_path("a"), Some(&FeatureValue::atom("sing")));
        assert!(matches!(got.get_path("b"), Some(FeatureValue::Var(_))));
    }

    #[test]
    fn depth_limit_enforced_on_result() {
        let a = fs("{f: ?p, g: {h: ?p}}");
        let b = fs("{f: {k: x}}");
        assert_eq!(unify(&a, &b), Err(UnifyError::TooDeep));
    }

    #[test]
    fn cyclic_result_is_rejected() {
        let a = fs("{f: ?p={h: ?p}}");
        assert_eq!(a.canonical(), Err(UnifyError::Cyclic));
    }

    #[test]
    fn insert_path_merges_tags() {
        let mut s = FeatureStructure::new();
        s.insert_path(&["agr"], FeatureValue::Var("a".into())).unwrap();
        s.insert_path(&["agr", "num"], FeatureValue::atom("sing")).unwrap();
        assert_eq!(s.to_string(), "{agr: ?a={num: sing}}");
        assert!(s.insert_path(&["agr", "num"], FeatureValue::atom("plur")).is_err());
        assert_eq!(s.depth(), 2);
    }

    #[test]
    fn display_parse_roundtrip() {
        let text = "{agr: ?a={num: sing, pers: 3}, mode: ind, wh: -}";
        assert_eq!(fs(text).to_string(), text);
    }

    #[test]
    fn json_form() {
        let v = serde_json::to_value(fs("{agr: ?a={num: sing}, mode: ?m}")).unwrap();
        assert_eq!(v, serde_json::json!({"agr": {"?a": {"num": "sing"}}, "mode": "?m"}));
    }
}
