//! Substitution and adjunction over derived trees.
//!
//! A [`DerivedTreeState`] is a partially composed tree: a node arena plus one
//! feature graph holding the top and bottom structures of every node. When an
//! auxiliary tree adjoins at node `n`, `n` stays in the tree as the single
//! child of the foot and is marked as adjoined; its top and bottom are then
//! never unified with each other. [`DerivedTreeState::finish`] collapses such
//! nodes into the foot when producing the final [`ParseTree`].

use super::address::GornAddress;
use super::features::FeatureStructure;
use super::fgraph::{Clash, FeatureGraph};
use super::instance::AnchoredTree;
use super::symbol::Sym;
use super::tree::{bottom_id, top_id, NodeKind, TreeKind};
use serde::Serialize;

#[derive(Clone, Debug)]
struct DNode {
    label: Sym,
    kind: NodeKind,
    na: bool,
    adjoined: bool,
    word: Option<String>,
    position: Option<usize>,
    top: u32,
    bottom: u32,
    parent: Option<u32>,
    children: Vec<u32>,
    part: u32,
    address: GornAddress,
}

/// One elementary instance that has been composed into the state.
#[derive(Clone, Debug, Serialize)]
pub struct Part {
    pub tree: String,
    pub label: String,
    pub kind: TreeKind,
}

#[derive(Clone, Debug)]
pub struct DerivedTreeState {
    nodes: Vec<DNode>,
    root: u32,
    graph: FeatureGraph,
    parts: Vec<Part>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComposeError {
    #[error("no node at address {0}")]
    NoNode(String),
    #[error("node {0} is not a substitution slot")]
    NotASlot(String),
    #[error("node {0} cannot host adjunction")]
    NotAdjoinable(String),
    #[error("null-adjunction constraint at {0}")]
    NullAdjunction(String),
    #[error("label mismatch: {host} vs {child}")]
    LabelMismatch { host: String, child: String },
    #[error("{0} is not an initial tree")]
    NotInitial(String),
    #[error("{0} is not an auxiliary tree")]
    NotAuxiliary(String),
    #[error("unification failure at {path} ({detail})")]
    Unification { address: String, path: String, detail: String },
    #[error("substitution slot {0} is still open")]
    OpenSlot(String),
}

impl ComposeError {
    /// Short machine-readable reason.
    pub fn reason(&self) -> &'static str {
        match self {
            ComposeError::NoNode(_) => "no such node",
            ComposeError::NotASlot(_) => "not a substitution slot",
            ComposeError::NotAdjoinable(_) => "not an adjunction site",
            ComposeError::NullAdjunction(_) => "null-adjunction constraint",
            ComposeError::LabelMismatch { .. } => "label mismatch",
            ComposeError::NotInitial(_) => "filler is not an initial tree",
            ComposeError::NotAuxiliary(_) => "adjoining tree is not auxiliary",
            ComposeError::Unification { .. } => "unification failure",
            ComposeError::OpenSlot(_) => "open substitution slot",
        }
    }

    /// Failing feature path such as `top.wh`, when there is one.
    pub fn path(&self) -> Option<&str> {
        match self {
            ComposeError::Unification { path, .. } => Some(path),
            _ => None,
        }
    }

    /// Derived-tree address of the offending node.
    pub fn address(&self) -> Option<&str> {
        match self {
            ComposeError::NoNode(a)
            | ComposeError::NotASlot(a)
            | ComposeError::NotAdjoinable(a)
            | ComposeError::NullAdjunction(a)
            | ComposeError::OpenSlot(a) => Some(a),
            ComposeError::Unification { address, .. } => Some(address),
            _ => None,
        }
    }
}

fn clash_error(address: &GornAddress, side: &str, c: Clash) -> ComposeError {
    let path = if c.path.is_empty() { side.to_string() } else { format!("{side}.{}", c.path_string()) };
    ComposeError::Unification { address: address.to_string(), path, detail: c.to_string() }
}

impl DerivedTreeState {
    pub fn from_instance(inst: &AnchoredTree) -> Self {
        let tree = &inst.tree;
        let flat = tree.flat();
        let mut anchor_iter = inst.anchors.iter();
        let nodes = flat
            .iter()
            .enumerate()
            .map(|(k, n)| {
                let anchor = if n.kind == NodeKind::Anchor { anchor_iter.next() } else { None };
                DNode {
                    label: n.label,
                    kind: n.kind,
                    na: n.na,
                    adjoined: false,
                    word: anchor.map(|a| a.word.clone()),
                    position: anchor.and_then(|a| a.position),
                    top: top_id(k as u32),
                    bottom: bottom_id(k as u32),
                    parent: n.parent,
                    children: n.children.clone(),
                    part: 0,
                    address: n.address.clone(),
                }
            })
            .collect();
        DerivedTreeState {
            nodes,
            root: 0,
            graph: inst.graph().clone(),
            parts: vec![Part { tree: tree.name.clone(), label: inst.label(), kind: tree.kind }],
        }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn kind(&self) -> TreeKind {
        self.parts[0].kind
    }

    pub fn root_label(&self) -> &'static str {
        self.nodes[self.root as usize].label.as_str()
    }

    pub fn node_count(&self) -> usize {
        self.count_from(self.root)
    }

    fn count_from(&self, n: u32) -> usize {
        1 + self.nodes[n as usize].children.iter().map(|&c| self.count_from(c)).sum::<usize>()
    }

    fn node_at(&self, addr: &GornAddress) -> Option<u32> {
        let mut cur = self.root;
        for &i in addr.path() {
            cur = *self.nodes[cur as usize].children.get((i as usize).checked_sub(1)?)?;
        }
        Some(cur)
    }

    /// Derived-tree address of an arena node.
    fn address_of(&self, mut n: u32) -> GornAddress {
        let mut path = Vec::new();
        while let Some(p) = self.nodes[n as usize].parent {
            let i = self.nodes[p as usize].children.iter().position(|&c| c == n).unwrap();
            path.push(i + 1);
            n = p;
        }
        path.iter().rev().fold(GornAddress::root(), |a, &i| a.child(i))
    }

    /// Derived-tree address of elementary node `address` of part `part`,
    /// skipping nodes that have been replaced by adjunction.
    pub fn locate(&self, part: usize, address: &GornAddress) -> Option<GornAddress> {
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n as usize];
            if node.part as usize == part && &node.address == address {
                return Some(self.address_of(n));
            }
            stack.extend(node.children.iter().rev());
        }
        None
    }

    /// Left-to-right leaves: anchor words, terminal labels, and `None` for
    /// open substitution slots.
    pub fn frontier(&self) -> Vec<Option<String>> {
        let mut out = Vec::new();
        self.collect_frontier(self.root, &mut out);
        out
    }

    fn collect_frontier(&self, n: u32, out: &mut Vec<Option<String>>) {
        let node = &self.nodes[n as usize];
        if node.children.is_empty() {
            match node.kind {
                NodeKind::Anchor => out.push(node.word.clone()),
                NodeKind::Terminal => out.push(Some(node.label.as_str().to_string())),
                NodeKind::Substitution => out.push(None),
                NodeKind::Foot | NodeKind::Internal => {}
            }
        }
        for &c in &node.children {
            self.collect_frontier(c, out);
        }
    }

    /// Appends `other`'s arena and graph, returning (node offset, part offset).
    fn absorb(&mut self, other: &DerivedTreeState) -> (u32, u32) {
        let node_off = self.nodes.len() as u32;
        let part_off = self.parts.len() as u32;
        let graph_off = self.graph.append(&other.graph);
        for n in &other.nodes {
            let mut n = n.clone();
            n.top += graph_off;
            n.bottom += graph_off;
            n.parent = n.parent.map(|p| p + node_off);
            n.children.iter_mut().for_each(|c| *c += node_off);
            n.part += part_off;
            self.nodes.push(n);
        }
        self.parts.extend(other.parts.iter().cloned());
        (node_off, part_off)
    }

    pub fn substitute(&self, addr: &GornAddress, filler: &DerivedTreeState) -> Result<Self, ComposeError> {
        let slot = self.node_at(addr).ok_or_else(|| ComposeError::NoNode(addr.to_string()))?;
        let slot_node = &self.nodes[slot as usize];
        if slot_node.kind != NodeKind::Substitution {
            return Err(ComposeError::NotASlot(addr.to_string()));
        }
        if filler.kind() != TreeKind::Initial {
            return Err(ComposeError::NotInitial(filler.parts[0].label.clone()));
        }
        let filler_root = &filler.nodes[filler.root as usize];
        if slot_node.label != filler_root.label {
            return Err(ComposeError::LabelMismatch {
                host: slot_node.label.to_string(),
                child: filler_root.label.to_string(),
            });
        }
        let mut out = self.clone();
        let (off, _) = out.absorb(filler);
        let new_root = filler.root + off;
        let (slot_top, root_top) = (out.nodes[slot as usize].top, out.nodes[new_root as usize].top);
        out.graph.unify(slot_top, root_top).map_err(|c| clash_error(addr, "top", c))?;
        out.replace_child(slot, new_root);
        Ok(out)
    }

    pub fn adjoin(&self, addr: &GornAddress, aux: &DerivedTreeState) -> Result<Self, ComposeError> {
        let site = self.node_at(addr).ok_or_else(|| ComposeError::NoNode(addr.to_string()))?;
        let site_node = &self.nodes[site as usize];
        if site_node.na || site_node.adjoined {
            return Err(ComposeError::NullAdjunction(addr.to_string()));
        }
        if site_node.kind != NodeKind::Internal && site_node.kind != NodeKind::Anchor {
            return Err(ComposeError::NotAdjoinable(addr.to_string()));
        }
        if aux.kind() != TreeKind::Auxiliary {
            return Err(ComposeError::NotAuxiliary(aux.parts[0].label.clone()));
        }
        let aux_root = &aux.nodes[aux.root as usize];
        if site_node.label != aux_root.label {
            return Err(ComposeError::LabelMismatch { host: site_node.label.to_string(), child: aux_root.label.to_string() });
        }
        let foot = aux
            .nodes
            .iter()
            .position(|n| n.kind == NodeKind::Foot && n.children.is_empty())
            .ok_or_else(|| ComposeError::NotAuxiliary(aux.parts[0].label.clone()))? as u32;
        let mut out = self.clone();
        let (off, _) = out.absorb(aux);
        let (new_root, new_foot) = (aux.root + off, foot + off);
        let site_top = out.nodes[site as usize].top;
        let site_bottom = out.nodes[site as usize].bottom;
        let root_top = out.nodes[new_root as usize].top;
        let foot_bottom = out.nodes[new_foot as usize].bottom;
        out.graph.unify(site_top, root_top).map_err(|c| clash_error(addr, "top", c))?;
        out.graph.unify(site_bottom, foot_bottom).map_err(|c| clash_error(addr, "bottom", c))?;
        out.replace_child(site, new_root);
        out.nodes[site as usize].adjoined = true;
        out.nodes[site as usize].parent = Some(new_foot);
        out.nodes[new_foot as usize].children = vec![site];
        Ok(out)
    }

    /// Puts `new` where `old` was in the tree.
    fn replace_child(&mut self, old: u32, new: u32) {
        match self.nodes[old as usize].parent {
            Some(p) => {
                let i = self.nodes[p as usize].children.iter().position(|&c| c == old).unwrap();
                self.nodes[p as usize].children[i] = new;
                self.nodes[new as usize].parent = Some(p);
            }
            None => {
                self.root = new;
                self.nodes[new as usize].parent = None;
            }
        }
    }

    /// Serializable snapshot with separate top and bottom structures.
    pub fn view(&self) -> StateNode {
        self.view_node(self.root, GornAddress::root())
    }

    fn view_node(&self, n: u32, address: GornAddress) -> StateNode {
        let node = &self.nodes[n as usize];
        StateNode {
            label: node.label.as_str().to_string(),
            kind: node.kind,
            na: node.na,
            adjoined: node.adjoined,
            word: node.word.clone(),
            tree: self.parts[node.part as usize].label.clone(),
            origin: node.address.clone(),
            top: self.graph.structure_at(node.top).unwrap_or_default(),
            bottom: self.graph.structure_at(node.bottom).unwrap_or_default(),
            children: node
                .children
                .iter()
                .enumerate()
                .map(|(i, &c)| self.view_node(c, address.child(i + 1)))
                .collect(),
            address,
        }
    }

    /// Final top/bottom unification and conversion to a parse tree.
    pub fn finish(&self) -> Result<ParseTree, ComposeError> {
        let mut graph = self.graph.clone();
        let mut stack = vec![self.root];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n as usize];
            if node.kind == NodeKind::Substitution {
                return Err(ComposeError::OpenSlot(self.address_of(n).to_string()));
            }
            if !node.adjoined {
                graph
                    .unify(node.top, node.bottom)
                    .map_err(|c| clash_error(&self.address_of(n), "top", c))?;
            }
            stack.extend(node.children.iter());
        }
        let mut next = 0;
        Ok(self.build_parse(self.root, &graph, &mut next))
    }

    fn build_parse(&self, n: u32, graph: &FeatureGraph, next: &mut usize) -> ParseTree {
        let node = &self.nodes[n as usize];
        // a foot with an adjoined node below stands for that node
        let body = if node.kind == NodeKind::Foot && node.children.len() == 1 {
            &self.nodes[node.children[0] as usize]
        } else {
            node
        };
        let start = *next;
        let children: Vec<ParseTree> = body.children.iter().map(|&c| self.build_parse(c, graph, next)).collect();
        let word = match body.kind {
            NodeKind::Anchor => body.word.clone(),
            NodeKind::Terminal => Some(body.label.as_str().to_string()),
            _ => None,
        };
        if word.is_some() {
            *next += 1;
        }
        ParseTree {
            label: node.label.as_str().to_string(),
            kind: body.kind,
            word,
            position: body.position,
            tree: self.parts[body.part as usize].label.clone(),
            part: body.part as usize,
            address: body.address.clone(),
            features: graph.structure_at(node.top).unwrap_or_default(),
            span: (start, *next),
            children,
        }
    }
}

/// Composition state rendered for inspection.
#[derive(Clone, Debug, Serialize)]
pub struct StateNode {
    pub label: String,
    pub kind: NodeKind,
    pub na: bool,
    pub adjoined: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    pub address: GornAddress,
    pub tree: String,
    pub origin: GornAddress,
    pub top: FeatureStructure,
    pub bottom: FeatureStructure,
    pub children: Vec<StateNode>,
}

/// Derived phrase-structure tree. Each node carries its final unified
/// features and the elementary node it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParseTree {
    pub label: String,
    pub kind: NodeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip)]
    pub position: Option<usize>,
    pub tree: String,
    /// Index of the contributing elementary tree in derivation preorder.
    #[serde(skip)]
    pub part: usize,
    pub address: GornAddress,
    pub features: FeatureStructure,
    /// Token span `[start, end)` counted over the frontier.
    pub span: (usize, usize),
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    pub fn frontier(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        if let Some(w) = &self.word {
            out.push(w.clone());
        }
        for c in &self.children {
            c.collect(out);
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ParseTree::node_count).sum::<usize>()
    }

    /// Bracketed form, e.g. `(S (NP (N I)) (VP (V had) ...))`.
    pub fn to_bracketed(&self) -> String {
        let mut s = String::new();
        self.write_bracketed(&mut s);
        s
    }

    fn write_bracketed(&self, s: &mut String) {
        if self.kind == NodeKind::Terminal {
            s.push_str(&escape_token(self.word.as_deref().unwrap_or(&self.label)));
            return;
        }
        s.push('(');
        s.push_str(&escape_token(&self.label));
        if let Some(w) = &self.word {
            s.push(' ');
            s.push_str(&escape_token(w));
        }
        for c in &self.children {
            s.push(' ');
            c.write_bracketed(s);
        }
        s.push(')');
    }
}

/// Backslash-escapes parentheses, backslashes and whitespace.
pub fn escape_token(t: &str) -> String {
    let mut out = String::with_capacity(t.len());
    for c in t.chars() {
        if c == '(' || c == ')' || c == '\\' || c.is_whitespace() {
            out.push('\\');
        }
        out.push(c);
    }
    out
}
