//! Brute-force derivation enumerator. Independent of the chart: derivations
//! are applied to plain trees directly.

use std::collections::{BTreeSet, HashSet};
use xtag::grammar::{Grammar, NodeKind, TreeKind, TreeNode};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Kind {
    Word,
    Slot,
    Foot,
    Inner,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct ONode {
    label: String,
    kind: Kind,
    /// No further adjunction here: NA, or already adjoined.
    closed: bool,
    children: Vec<ONode>,
}

fn convert(t: &TreeNode) -> ONode {
    let kind = match t.kind {
        NodeKind::Anchor | NodeKind::Terminal => Kind::Word,
        NodeKind::Substitution => Kind::Slot,
        NodeKind::Foot => Kind::Foot,
        NodeKind::Internal => Kind::Inner,
    };
    ONode {
        label: t.label.clone(),
        closed: t.na || kind != Kind::Inner,
        kind,
        children: t.children.iter().map(convert).collect(),
    }
}

fn size(n: &ONode) -> usize {
    match n.kind {
        Kind::Word | Kind::Slot => 1,
        _ => n.children.iter().map(size).sum(),
    }
}

fn has_slot(n: &ONode) -> bool {
    n.kind == Kind::Slot || n.children.iter().any(has_slot)
}

fn words(n: &ONode, out: &mut Vec<String>) {
    if n.kind == Kind::Word {
        out.push(n.label.clone());
    }
    for c in &n.children {
        words(c, out);
    }
}

/// Paths to open slots and to adjoinable nodes.
fn sites(n: &ONode, path: &mut Vec<usize>, slots: &mut Vec<Vec<usize>>, adj: &mut Vec<Vec<usize>>) {
    if n.kind == Kind::Slot {
        slots.push(path.clone());
    }
    if n.kind == Kind::Inner && !n.closed {
        adj.push(path.clone());
    }
    for (i, c) in n.children.iter().enumerate() {
        path.push(i);
        sites(c, path, slots, adj);
        path.pop();
    }
}

fn at_mut<'a>(n: &'a mut ONode, path: &[usize]) -> &'a mut ONode {
    path.iter().fold(n, |n, &i| &mut n.children[i])
}

fn plug_foot(n: &mut ONode, site: &ONode) -> bool {
    if n.kind == Kind::Foot {
        *n = site.clone();
        return true;
    }
    n.children.iter_mut().any(|c| plug_foot(c, site))
}

/// Every string of at most `max_len` words derivable from an `S`-rooted
/// initial tree, by exhaustive substitution and adjunction. Anchors are
/// their own words.
pub fn derivable_strings(g: &Grammar, max_len: usize) -> BTreeSet<Vec<String>> {
    let initial: Vec<ONode> = g.trees().filter(|t| t.kind == TreeKind::Initial).map(|t| convert(&t.root)).collect();
    let aux: Vec<ONode> = g.trees().filter(|t| t.kind == TreeKind::Auxiliary).map(|t| convert(&t.root)).collect();
    let mut seen: HashSet<ONode> = HashSet::new();
    let mut queue: Vec<ONode> = initial.iter().filter(|t| t.label == "S").cloned().collect();
    let mut out = BTreeSet::new();
    while let Some(t) = queue.pop() {
        if size(&t) > max_len || !seen.insert(t.clone()) {
            continue;
        }
        if !has_slot(&t) {
            let mut w = Vec::new();
            words(&t, &mut w);
            out.insert(w);
        }
        let (mut slots, mut adj) = (Vec::new(), Vec::new());
        sites(&t, &mut Vec::new(), &mut slots, &mut adj);
        for p in &slots {
            let label = &at_mut(&mut t.clone(), p).label.clone();
            for f in initial.iter().filter(|f| &f.label == label) {
                let mut nt = t.clone();
                *at_mut(&mut nt, p) = f.clone();
                queue.push(nt);
            }
        }
        for p in &adj {
            let mut probe = t.clone();
            let site = at_mut(&mut probe, p).clone();
            for a in aux.iter().filter(|a| a.label == site.label) {
                let mut closed_site = site.clone();
                closed_site.closed = true;
                let mut wrapped = a.clone();
                plug_foot(&mut wrapped, &closed_site);
                let mut nt = t.clone();
                *at_mut(&mut nt, p) = wrapped;
                queue.push(nt);
            }
        }
    }
    out
}

/// All strings over `alphabet` of length 1..=max_len.
pub fn all_strings(alphabet: &[&str], max_len: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for a in alphabet {
                let mut t = s.clone();
                t.push(a.to_string());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
