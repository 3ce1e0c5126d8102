//! Derivation trees: extraction from the forest, a text form, and replay
//! into derived trees.
//!
//! Text form: `(αnx0Vnx1[had] (subst @1 αNXN[I]) (adjoin @2 βvxARB[yesterday]))`.
//! Addresses are Gorn addresses in the parent's elementary tree. Anchor words
//! must not contain whitespace, parentheses, brackets or commas.

use super::chart::{Back, ParseForest, State};
use crate::grammar::{
    Anchor, AnchoredTree, ComposeError, DerivedTreeState, Grammar, GornAddress, ParseTree,
};
use crate::grammar::instance::InstanceError;
use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    #[serde(rename = "subst")]
    Substitution,
    #[serde(rename = "adjoin")]
    Adjunction,
}

impl Operation {
    pub fn keyword(self) -> &'static str {
        match self {
            Operation::Substitution => "subst",
            Operation::Adjunction => "adjoin",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Derivation {
    pub tree: String,
    pub anchors: Vec<Anchor>,
    #[serde(skip)]
    pub instance: Option<Arc<AnchoredTree>>,
    pub children: Vec<DerivationEdge>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivationEdge {
    pub op: Operation,
    pub address: GornAddress,
    pub child: Derivation,
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.tree == other.tree
            && self.anchors.len() == other.anchors.len()
            && self.anchors.iter().zip(&other.anchors).all(|(a, b)| a.word == b.word)
            && self.children == other.children
    }
}

impl Derivation {
    pub fn leaf(inst: Arc<AnchoredTree>) -> Self {
        Derivation { tree: inst.tree.name.clone(), anchors: inst.anchors.clone(), instance: Some(inst), children: Vec::new() }
    }

    /// `tree[w1,w2]`.
    pub fn label(&self) -> String {
        let words: Vec<&str> = self.anchors.iter().map(|a| a.word.as_str()).collect();
        format!("{}[{}]", self.tree, words.join(","))
    }

    /// First anchor's sentence position.
    pub fn position(&self) -> Option<usize> {
        self.anchors.first().and_then(|a| a.position)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|e| e.child.size()).sum::<usize>()
    }

    /// Every edge with its parent, parents before children.
    pub fn edges(&self) -> Vec<(&Derivation, &DerivationEdge)> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(d) = stack.pop() {
            for e in &d.children {
                out.push((d, e));
            }
            stack.extend(d.children.iter().rev().map(|e| &e.child));
        }
        out
    }

    pub fn count(&self, op: Operation) -> usize {
        self.edges().iter().filter(|(_, e)| e.op == op).count()
    }

    /// Unlabeled head→dependent arcs between first-anchor positions.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .edges()
            .iter()
            .filter_map(|(p, e)| Some((p.position()?, e.child.position()?)))
            .collect();
        out.sort_unstable();
        out
    }

    fn sort(&mut self) {
        self.children.sort_by(|a, b| (&a.address, a.op).cmp(&(&b.address, b.op)));
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.label())?;
        for e in &self.children {
            write!(f, " {e}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for DerivationEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} @{} {}", self.op.keyword(), self.address, self.child.label())?;
        for e in &self.child.children {
            write!(f, " {e}")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("derivation syntax error at byte {at}: {message}")]
pub struct DerivationSyntaxError {
    pub at: usize,
    pub message: String,
}

struct Reader<'a> {
    s: &'a str,
    pos: usize,
}

impl Reader<'_> {
    fn err<T>(&self, m: &str) -> Result<T, DerivationSyntaxError> {
        Err(DerivationSyntaxError { at: self.pos, message: m.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.s[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        let end = self.s[start..]
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .map_or(self.s.len(), |x| start + x);
        self.pos = end;
        &self.s[start..end]
    }

    fn node(&mut self) -> Result<Derivation, DerivationSyntaxError> {
        let at = self.pos;
        let label = self.word().to_string();
        let Some((tree, rest)) = label.split_once('[') else {
            self.pos = at;
            return self.err("expected tree[words]");
        };
        let Some(words) = rest.strip_suffix(']') else {
            self.pos = at;
            return self.err("unterminated anchor list");
        };
        let anchors = words
            .split(',')
            .filter(|w| !w.is_empty())
            .map(|w| Anchor { word: w.to_string(), position: None })
            .collect();
        let mut d = Derivation { tree: tree.to_string(), anchors, instance: None, children: Vec::new() };
        while self.eat('(') {
            let op = match self.word() {
                "subst" => Operation::Substitution,
                "adjoin" => Operation::Adjunction,
                _ => return self.err("expected subst or adjoin"),
            };
            let addr = self.word();
            let Some(addr) = addr.strip_prefix('@').and_then(|a| a.parse::<GornAddress>().ok()) else {
                return self.err("expected @address");
            };
            let child = self.node()?;
            if !self.eat(')') {
                return self.err("expected )");
            }
            d.children.push(DerivationEdge { op, address: addr, child });
        }
        Ok(d)
    }
}

impl FromStr for Derivation {
    type Err = DerivationSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = Reader { s, pos: 0 };
        if !r.eat('(') {
            return r.err("expected (");
        }
        let d = r.node()?;
        if !r.eat(')') {
            return r.err("expected )");
        }
        r.skip_ws();
        if r.pos != s.len() {
            return r.err("trailing input");
        }
        Ok(d)
    }
}

type Alts = Rc<Vec<Vec<DerivationEdge>>>;

struct Extractor<'f> {
    forest: &'f ParseForest,
    limit: usize,
    alts: HashMap<u32, Alts>,
    derivs: HashMap<u32, Rc<Vec<Derivation>>>,
    busy: HashSet<u32>,
}

impl Extractor<'_> {
    fn address(&self, item: u32) -> GornAddress {
        let it = &self.forest.items[item as usize];
        self.forest.instances[it.inst as usize].tree.flat()[it.node as usize].address.clone()
    }

    fn derivations(&mut self, root: u32) -> Rc<Vec<Derivation>> {
        if let Some(d) = self.derivs.get(&root) {
            return d.clone();
        }
        let inst = self.forest.instances[self.forest.items[root as usize].inst as usize].clone();
        let out: Vec<Derivation> = self
            .alternatives(root)
            .iter()
            .map(|edges| {
                let mut d = Derivation::leaf(inst.clone());
                d.children = edges.clone();
                d.sort();
                d
            })
            .collect();
        let out = Rc::new(out);
        self.derivs.insert(root, out.clone());
        out
    }

    fn alternatives(&mut self, item: u32) -> Alts {
        if let Some(a) = self.alts.get(&item) {
            return a.clone();
        }
        if !self.busy.insert(item) {
            return Rc::new(Vec::new());
        }
        let mut out: Vec<Vec<DerivationEdge>> = Vec::new();
        for back in self.forest.backs[item as usize].clone() {
            if out.len() >= self.limit {
                break;
            }
            match back {
                Back::Scan | Back::Foot => out.push(Vec::new()),
                Back::FirstChild(c) | Back::NoAdjoin(c) => out.extend(self.alternatives(c).iter().cloned()),
                Back::Extend(y, z) => {
                    let (l, r) = (self.alternatives(y), self.alternatives(z));
                    'outer: for a in l.iter() {
                        for b in r.iter() {
                            if out.len() >= self.limit {
                                break 'outer;
                            }
                            out.push(a.iter().chain(b).cloned().collect());
                        }
                    }
                }
                Back::Adjoin { aux, below } => {
                    let address = self.address(below);
                    let (host, ds) = (self.alternatives(below), self.derivations(aux));
                    'outer: for a in host.iter() {
                        for d in ds.iter() {
                            if out.len() >= self.limit {
                                break 'outer;
                            }
                            let mut v = a.clone();
                            v.push(DerivationEdge { op: Operation::Adjunction, address: address.clone(), child: d.clone() });
                            out.push(v);
                        }
                    }
                }
                Back::Subst(filler) => {
                    let address = self.address(item);
                    for d in self.derivations(filler).iter() {
                        out.push(vec![DerivationEdge {
                            op: Operation::Substitution,
                            address: address.clone(),
                            child: d.clone(),
                        }]);
                    }
                }
            }
        }
        out.truncate(self.limit);
        self.busy.remove(&item);
        let out = Rc::new(out);
        self.alts.insert(item, out.clone());
        out
    }
}

/// Up to `limit` distinct derivations, in chart order.
pub fn extract_derivations(forest: &ParseForest, limit: usize) -> Vec<Derivation> {
    let mut ex = Extractor { forest, limit, alts: HashMap::new(), derivs: HashMap::new(), busy: HashSet::new() };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for &g in &forest.goals {
        debug_assert_eq!(forest.items[g as usize].state, State::Above);
        for d in ex.derivations(g).iter() {
            if out.len() >= limit {
                return out;
            }
            if seen.insert(d.to_string()) {
                out.push(d.clone());
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("unknown tree {0}")]
    UnknownTree(String),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("{tree}: no node {address}")]
    NoAddress { tree: String, address: String },
    #[error("{label}: {error}")]
    Compose { label: String, error: ComposeError },
}

impl ReplayError {
    pub fn compose_error(&self) -> Option<&ComposeError> {
        match self {
            ReplayError::Compose { error, .. } => Some(error),
            _ => None,
        }
    }
}

/// Builds the composed state of a derivation without the final top/bottom
/// check.
pub fn derived_state(d: &Derivation, grammar: &Grammar) -> Result<DerivedTreeState, ReplayError> {
    let inst = match &d.instance {
        Some(i) => i.clone(),
        None => {
            let tree = grammar.tree(&d.tree).ok_or_else(|| ReplayError::UnknownTree(d.tree.clone()))?;
            Arc::new(AnchoredTree::new(tree.clone(), d.anchors.clone())?)
        }
    };
    let mut state = DerivedTreeState::from_instance(&inst);
    for e in &d.children {
        let child = derived_state(&e.child, grammar)?;
        let at = state
            .locate(0, &e.address)
            .ok_or_else(|| ReplayError::NoAddress { tree: d.label(), address: e.address.to_string() })?;
        let res = match e.op {
            Operation::Substitution => state.substitute(&at, &child),
            Operation::Adjunction => state.adjoin(&at, &child),
        };
        state = res.map_err(|error| ReplayError::Compose { label: d.label(), error })?;
    }
    Ok(state)
}

/// Replays a derivation bottom-up and applies the final top/bottom check.
pub fn derived_tree(d: &Derivation, grammar: &Grammar) -> Result<ParseTree, ReplayError> {
    derived_state(d, grammar)?.finish().map_err(|error| ReplayError::Compose { label: d.label(), error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let s = "(αnx0Vnx1[had] (subst @1 αNXN[I]) (subst @2.2 αNXdxN[map] (subst @1 αDXD[a])) (adjoin @2 βvxARB[yesterday]))";
        let d: Derivation = s.parse().unwrap();
        assert_eq!(d.to_string(), s);
        assert_eq!(d.size(), 5);
        assert_eq!(d.count(Operation::Adjunction), 1);
        assert_eq!(d.children[1].child.children[0].child.label(), "αDXD[a]");
        let multi: Derivation = "(αnx0Vplnx1[map,out])".parse().unwrap();
        assert_eq!(multi.anchors.len(), 2);
    }

    #[test]
    fn syntax_errors() {
        assert!("αNXN[I]".parse::<Derivation>().is_err());
        assert!("(αNXN[I] (move @1 αN[x]))".parse::<Derivation>().is_err());
        assert!("(αNXN[I]) x".parse::<Derivation>().is_err());
        assert!("(αNXN (subst @1 αN[x]))".parse::<Derivation>().is_err());
    }
}
