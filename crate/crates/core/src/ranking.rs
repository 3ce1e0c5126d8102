//! Structural preferences over derivations.
//!
//! Each derivation gets a vector of non-negative penalty counts; derivations
//! are ordered by the weighted sum of those counts, ties by their text form.
//!
//! | component | counts |
//! |-----------|--------|
//! | `h1` | adjunctions (arguments beat adjuncts) |
//! | `h2` | for each adjoined PP other than *of*, eligible NP/VP sites lower than the chosen one |
//! | `h3` | adjective, adverb and PP modifiers stacked against right branching |
//! | `h4` | noun modifiers stacked against left branching |
//! | `h5` | modifiers scoping over only the edge conjunct of a coordination |

use crate::grammar::{ElementaryTree, Grammar, GornAddress, ParseTree, TreeKind};
use crate::parser::{derived_tree, Derivation, Operation, ReplayError};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PenaltyVector {
    pub h1: u32,
    pub h2: u32,
    pub h3: u32,
    pub h4: u32,
    pub h5: u32,
    /// Text form of the derivation; orders equal totals.
    pub tie_break: String,
}

impl PenaltyVector {
    pub fn components(&self) -> [u32; 5] {
        [self.h1, self.h2, self.h3, self.h4, self.h5]
    }

    pub fn weighted(&self, w: &Weights) -> f64 {
        self.components().iter().zip(w.0).map(|(&h, w)| w * f64::from(h)).sum()
    }
}

/// Per-heuristic weights, all 1 by default.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Weights(pub [f64; 5]);

impl Default for Weights {
    fn default() -> Self {
        Weights([1.0; 5])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightsError {
    #[error("expected 5 comma-separated weights, found {0}")]
    Count(usize),
    #[error("weight {0:?} is not a finite non-negative number")]
    Value(String),
}

impl Weights {
    pub fn new(w: [f64; 5]) -> Result<Self, WeightsError> {
        match w.iter().find(|x| !x.is_finite() || **x < 0.0) {
            Some(bad) => Err(WeightsError::Value(bad.to_string())),
            None => Ok(Weights(w)),
        }
    }

    pub fn scaled(&self, c: f64) -> Weights {
        Weights(self.0.map(|w| w * c))
    }
}

impl FromStr for Weights {
    type Err = WeightsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 5 {
            return Err(WeightsError::Count(parts.len()));
        }
        let mut w = [0.0; 5];
        for (slot, p) in w.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| WeightsError::Value(p.to_string()))?;
        }
        Weights::new(w)
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RankedParse {
    pub derivation: Derivation,
    pub penalties: PenaltyVector,
    pub total: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankedParses {
    pub parses: Vec<RankedParse>,
    pub weights: Weights,
    pub cutoff: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Class {
    Adj,
    Adv,
    Prep,
    Noun,
    Det,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    /// Modifier whose anchor precedes what it modifies.
    Left(Class),
    Right(Class),
    Coordination,
    Other,
}

impl Role {
    fn class(self) -> Option<Class> {
        match self {
            Role::Left(c) | Role::Right(c) => Some(c),
            _ => None,
        }
    }

    fn is_chain(self) -> bool {
        matches!(self.class(), Some(Class::Adj | Class::Adv | Class::Prep))
    }
}

fn role(tree: &ElementaryTree) -> Role {
    let flat = tree.flat();
    let Some(&anchor) = tree.anchors().first() else { return Role::Other };
    let class = match flat[anchor as usize].label.as_str() {
        "A" => Class::Adj,
        "Ad" => Class::Adv,
        "P" => Class::Prep,
        "N" => Class::Noun,
        "D" => Class::Det,
        "Conj" if tree.kind == TreeKind::Auxiliary => return Role::Coordination,
        _ => return Role::Other,
    };
    match tree.foot() {
        Some(foot) => {
            let frontier = tree.frontier();
            let at = |k: u32| frontier.iter().position(|&x| x == k);
            if at(anchor) < at(foot) {
                Role::Left(class)
            } else {
                Role::Right(class)
            }
        }
        // a determiner tree sits left of its noun
        None if class == Class::Det && flat[0].label.as_str() == "D" => Role::Left(Class::Det),
        None => Role::Other,
    }
}

fn tree_name(part_label: &str) -> &str {
    part_label.split('[').next().unwrap_or(part_label)
}

fn role_of(grammar: &Grammar, name: &str) -> Role {
    grammar.tree(name).map(|t| role(t)).unwrap_or(Role::Other)
}

/// Penalty counts for one derivation. The derivation must replay against
/// `grammar`.
pub fn score(d: &Derivation, grammar: &Grammar) -> Result<PenaltyVector, ReplayError> {
    let derived = derived_tree(d, grammar)?;
    let mut v = PenaltyVector { h1: 0, h2: 0, h3: 0, h4: 0, h5: 0, tie_break: d.to_string() };
    for (parent, edge) in d.edges() {
        if edge.op != Operation::Adjunction {
            continue;
        }
        v.h1 += 1;
        let (rp, rc) = (role_of(grammar, &parent.tree), role_of(grammar, &edge.child.tree));
        let at_root = edge.address.is_root();
        if rp.is_chain() && rc.is_chain() {
            let against = match rc {
                Role::Left(_) => !at_root,
                Role::Right(_) => at_root && matches!(rp, Role::Right(_)),
                _ => false,
            };
            v.h3 += u32::from(against);
        }
        if rc == Role::Left(Class::Noun) && rp == Role::Left(Class::Noun) && at_root {
            v.h4 += 1;
        }
    }
    let proper = proper_labels(d);
    v.h2 = pp_distance(&derived, grammar, &proper);
    v.h5 = narrow_scope(&derived, grammar);
    Ok(v)
}

/// Labels of proper-noun trees. Without a lexicon instance, a capitalized
/// word longer than one letter counts as a proper noun.
fn proper_labels(d: &Derivation) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    let mut stack = vec![d];
    while let Some(n) = stack.pop() {
        let pn = match &n.instance {
            Some(inst) => inst.pos.as_deref() == Some("PN"),
            None => n.anchors.first().is_some_and(|a| {
                a.word.chars().count() > 1 && a.word.chars().next().is_some_and(char::is_uppercase)
            }),
        };
        if pn {
            out.insert(n.label());
        }
        stack.extend(n.children.iter().map(|e| &e.child));
    }
    out
}

fn single_leaf(t: &ParseTree) -> Option<&ParseTree> {
    match t.children.as_slice() {
        [] => t.word.as_ref().map(|_| t),
        [c] => single_leaf(c),
        _ => None,
    }
}

fn walk<'a>(t: &'a ParseTree, out: &mut Vec<&'a ParseTree>) {
    out.push(t);
    for c in &t.children {
        walk(c, out);
    }
}

/// Follows the foot's address inside an adjoined tree's root node.
fn foot_child<'a>(root: &'a ParseTree, tree: &ElementaryTree) -> Option<&'a ParseTree> {
    let foot = tree.foot()?;
    let addr: &GornAddress = &tree.flat()[foot as usize].address;
    let mut cur = root;
    for &i in addr.path() {
        cur = cur.children.get(usize::from(i).checked_sub(1)?)?;
    }
    Some(cur)
}

fn pp_distance(derived: &ParseTree, grammar: &Grammar, proper: &BTreeSet<String>) -> u32 {
    let mut total = 0;
    let mut sites = Vec::new();
    walk(derived, &mut sites);
    for r in sites.iter().filter(|n| n.address.is_root()) {
        let Some(tree) = grammar.tree(tree_name(&r.tree)) else { continue };
        if role(tree) != Role::Right(Class::Prep) {
            continue;
        }
        let prep = r.tree.split_once('[').map(|(_, w)| w.trim_end_matches(']')).unwrap_or("");
        if prep.eq_ignore_ascii_case("of") {
            continue;
        }
        let Some(chosen) = foot_child(r, tree) else { continue };
        let q = chosen.span.1;
        let lower: BTreeSet<(&str, (usize, usize))> = sites
            .iter()
            .filter(|s| matches!(s.label.as_str(), "NP" | "VP"))
            .filter(|s| s.span.1 == q && s.span.0 > chosen.span.0)
            .filter(|s| !(s.label == "NP" && single_leaf(s).is_some_and(|l| proper.contains(&l.tree))))
            .map(|s| (s.label.as_str(), s.span))
            .collect();
        total += lower.len() as u32;
    }
    total
}

fn narrow_scope(derived: &ParseTree, grammar: &Grammar) -> u32 {
    let mut all = Vec::new();
    walk(derived, &mut all);
    let mut total = 0;
    for c in all.iter().filter(|n| n.address.is_root() && role_of(grammar, tree_name(&n.tree)) == Role::Coordination) {
        let mut inside = Vec::new();
        for child in &c.children {
            walk(child, &mut inside);
        }
        for m in inside.iter().filter(|n| n.address.is_root()) {
            let edge = match role_of(grammar, tree_name(&m.tree)) {
                Role::Left(_) => m.span.0 == c.span.0,
                Role::Right(_) => m.span.1 == c.span.1,
                _ => false,
            };
            total += u32::from(edge);
        }
    }
    total
}

fn cmp_totals(a: f64, b: f64) -> Ordering {
    let scale = a.abs().max(b.abs()).max(1.0);
    if (a - b).abs() <= 1e-9 * scale {
        Ordering::Equal
    } else {
        a.total_cmp(&b)
    }
}

/// Scores and orders derivations, best first, keeping at most `n`.
pub fn rank(
    ds: &[Derivation],
    grammar: &Grammar,
    weights: &Weights,
    n: Option<usize>,
) -> Result<RankedParses, ReplayError> {
    let mut parses = ds
        .iter()
        .map(|d| {
            let penalties = score(d, grammar)?;
            let total = penalties.weighted(weights);
            Ok(RankedParse { derivation: d.clone(), penalties, total })
        })
        .collect::<Result<Vec<_>, ReplayError>>()?;
    parses.sort_by(|a, b| {
        cmp_totals(a.total, b.total).then_with(|| a.penalties.tie_break.cmp(&b.penalties.tie_break))
    });
    if let Some(n) = n {
        parses.truncate(n);
    }
    Ok(RankedParses { parses, weights: *weights, cutoff: n })
}
