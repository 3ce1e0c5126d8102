use super::address::GornAddress;
use super::features::{FeatureStructure, FeatureValue, MAX_DEPTH};
use super::fgraph::FeatureGraph;
use super::symbol::Sym;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeKind {
    Initial,
    Auxiliary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Internal,
    Anchor,
    Substitution,
    Foot,
    /// A fixed lexical leaf; its label is the word.
    Terminal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TreeNode {
    pub label: String,
    pub kind: NodeKind,
    pub na: bool,
    pub address: GornAddress,
    pub top: FeatureStructure,
    pub bottom: FeatureStructure,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn new(label: impl Into<String>, kind: NodeKind) -> Self {
        TreeNode {
            label: label.into(),
            kind,
            na: false,
            address: GornAddress::root(),
            top: FeatureStructure::new(),
            bottom: FeatureStructure::new(),
            children: Vec::new(),
        }
    }

    pub fn internal(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        let mut n = TreeNode::new(label, NodeKind::Internal);
        n.children = children;
        n
    }

    pub fn with_na(mut self) -> Self {
        self.na = true;
        self
    }

    fn assign_addresses(&mut self, here: GornAddress) {
        for (i, c) in self.children.iter_mut().enumerate() {
            c.assign_addresses(here.child(i + 1));
        }
        self.address = here;
    }

    pub fn at(&self, addr: &GornAddress) -> Option<&TreeNode> {
        let mut node = self;
        for &i in addr.path() {
            node = node.children.get((i as usize).checked_sub(1)?)?;
        }
        Some(node)
    }

    pub fn at_mut(&mut self, addr: &GornAddress) -> Option<&mut TreeNode> {
        let mut node = self;
        for &i in addr.path() {
            node = node.children.get_mut((i as usize).checked_sub(1)?)?;
        }
        Some(node)
    }

    pub fn count(&self) -> usize {
        1 + self.children.iter().map(TreeNode::count).sum::<usize>()
    }

    /// Preorder walk.
    pub fn walk<'a>(&'a self, out: &mut Vec<&'a TreeNode>) {
        out.push(self);
        for c in &self.children {
            c.walk(out);
        }
    }
}

/// Flattened node used by the parser. Index 0 is the root; nodes are in
/// preorder so leaves appear in frontier order.
#[derive(Clone, Debug)]
pub struct FlatNode {
    pub label: Sym,
    pub kind: NodeKind,
    pub na: bool,
    pub parent: Option<u32>,
    pub children: Vec<u32>,
    pub address: GornAddress,
    /// Dominates (or is) the foot node.
    pub on_spine: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ElementaryTree {
    pub name: String,
    pub kind: TreeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    pub anchor_addresses: Vec<GornAddress>,
    pub root: TreeNode,
    #[serde(skip)]
    flat: Vec<FlatNode>,
    #[serde(skip)]
    graph: FeatureGraph,
    #[serde(skip)]
    feature_errors: Vec<String>,
}

pub fn top_id(node: u32) -> u32 {
    2 * node
}

pub fn bottom_id(node: u32) -> u32 {
    2 * node + 1
}

impl ElementaryTree {
    /// Builds a tree, recomputing addresses. Problems with the structure are
    /// reported by [`validate_tree`], not here.
    pub fn new(name: impl Into<String>, kind: TreeKind, family: Option<String>, mut root: TreeNode) -> Self {
        root.assign_addresses(GornAddress::root());
        let mut flat = Vec::new();
        flatten(&root, None, &mut flat);
        let foot = flat.iter().position(|n| n.kind == NodeKind::Foot);
        if let Some(f) = foot {
            let mut cur = Some(f as u32);
            while let Some(c) = cur {
                flat[c as usize].on_spine = true;
                cur = flat[c as usize].parent;
            }
        }
        for n in flat.iter_mut() {
            if n.kind == NodeKind::Foot {
                n.na = true;
            }
        }
        let anchor_addresses =
            flat.iter().filter(|n| n.kind == NodeKind::Anchor).map(|n| n.address.clone()).collect();
        let mut tree = ElementaryTree {
            name: name.into(),
            kind,
            family,
            anchor_addresses,
            root,
            flat,
            graph: FeatureGraph::new(),
            feature_errors: Vec::new(),
        };
        tree.compile_features();
        tree
    }

    fn compile_features(&mut self) {
        let mut graph = FeatureGraph::with_base(2 * self.flat.len());
        let mut vars = HashMap::new();
        let mut nodes = Vec::new();
        self.root.walk(&mut nodes);
        for (k, node) in nodes.iter().enumerate() {
            for (side, fs, id) in [("top", &node.top, top_id(k as u32)), ("bot", &node.bottom, bottom_id(k as u32))] {
                if let Err(clash) = graph.add_structure(id, fs, &mut vars) {
                    self.feature_errors
                        .push(format!("feature clash at node {} {side}.{}", node.address, clash));
                }
            }
        }
        self.graph = graph.compact(2 * self.flat.len());
    }

    pub fn flat(&self) -> &[FlatNode] {
        &self.flat
    }

    /// Compacted feature graph over `2 * len` base nodes: node `k` has its
    /// top at `2k` and its bottom at `2k + 1`.
    pub fn graph(&self) -> &FeatureGraph {
        &self.graph
    }

    pub fn node_count(&self) -> usize {
        self.flat.len()
    }

    pub fn index_of(&self, addr: &GornAddress) -> Option<u32> {
        self.flat.iter().position(|n| &n.address == addr).map(|i| i as u32)
    }

    pub fn foot(&self) -> Option<u32> {
        self.flat.iter().position(|n| n.kind == NodeKind::Foot).map(|i| i as u32)
    }

    pub fn anchors(&self) -> Vec<u32> {
        self.indices_of(NodeKind::Anchor)
    }

    pub fn indices_of(&self, kind: NodeKind) -> Vec<u32> {
        (0..self.flat.len() as u32).filter(|&i| self.flat[i as usize].kind == kind).collect()
    }

    /// Leaves in left-to-right order.
    pub fn frontier(&self) -> Vec<u32> {
        (0..self.flat.len() as u32).filter(|&i| self.flat[i as usize].children.is_empty()).collect()
    }

    pub fn root_label(&self) -> Sym {
        self.flat[0].label
    }

    /// Resolves `root`, `foot`, `anchor`, `anchorN` (1-based) or a Gorn address.
    pub fn resolve(&self, name: &str) -> Option<u32> {
        match name {
            "root" => Some(0),
            "foot" => self.foot(),
            "anchor" => self.anchors().first().copied(),
            _ => {
                if let Some(n) = name.strip_prefix("anchor") {
                    let i: usize = n.parse().ok()?;
                    return self.anchors().get(i.checked_sub(1)?).copied();
                }
                self.index_of(&name.parse().ok()?)
            }
        }
    }
}

fn flatten(node: &TreeNode, parent: Option<u32>, out: &mut Vec<FlatNode>) -> u32 {
    let id = out.len() as u32;
    out.push(FlatNode {
        label: Sym::new(&node.label),
        kind: node.kind,
        na: node.na,
        parent,
        children: Vec::new(),
        address: node.address.clone(),
        on_spine: false,
    });
    let children: Vec<u32> = node.children.iter().map(|c| flatten(c, Some(id), out)).collect();
    out[id as usize].children = children;
    id
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Checks every structural and feature invariant of an elementary tree.
pub fn validate_tree(t: &ElementaryTree) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut nodes = Vec::new();
    t.root.walk(&mut nodes);
    let feet = nodes.iter().filter(|n| n.kind == NodeKind::Foot).count();
    match (t.kind, feet) {
        (TreeKind::Initial, 0) | (TreeKind::Auxiliary, 1) => {}
        (TreeKind::Initial, _) => out.push(Violation("foot in initial tree".into())),
        (TreeKind::Auxiliary, 0) => out.push(Violation("auxiliary tree without a foot".into())),
        (TreeKind::Auxiliary, n) => out.push(Violation(format!("auxiliary tree with {n} foot nodes"))),
    }
    if !matches!(t.root.kind, NodeKind::Internal | NodeKind::Anchor) {
        out.push(Violation("root must be an internal or anchor node".into()));
    }
    for n in &nodes {
        if n.label.is_empty() {
            out.push(Violation(format!("empty label at {}", n.address)));
        }
        match n.kind {
            NodeKind::Internal => {
                if n.children.is_empty() {
                    out.push(Violation(format!("internal node {} has no children", n.address)));
                }
            }
            _ => {
                if !n.children.is_empty() {
                    out.push(Violation(format!("{:?} node {} has children", n.kind, n.address)));
                }
            }
        }
        if n.kind == NodeKind::Foot && n.label != t.root.label {
            out.push(Violation(format!(
                "foot label {} differs from root label {}",
                n.label, t.root.label
            )));
        }
        for fs in [&n.top, &n.bottom] {
            if fs.depth() > MAX_DEPTH {
                out.push(Violation(format!("feature structure deeper than {MAX_DEPTH} at {}", n.address)));
            }
        }
        for (i, c) in n.children.iter().enumerate() {
            if c.address != n.address.child(i + 1) {
                out.push(Violation(format!("inconsistent address {}", c.address)));
            }
        }
    }
    if !nodes.iter().any(|n| n.kind == NodeKind::Anchor) {
        out.push(Violation("tree has no anchor".into()));
    }
    if let Err(v) = check_variable_depths(&nodes) {
        out.push(v);
    }
    out.extend(t.feature_errors.iter().map(|e| Violation(e.clone())));
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// A variable must always appear at the same attribute depth; otherwise
/// unification inside the tree could build structures deeper than allowed.
fn check_variable_depths(nodes: &[&TreeNode]) -> Result<(), Violation> {
    fn visit(fs: &FeatureStructure, depth: usize, seen: &mut HashMap<String, usize>) -> Result<(), String> {
        for (_, v) in fs.iter() {
            visit_value(v, depth + 1, seen)?;
        }
        Ok(())
    }
    fn visit_value(v: &FeatureValue, depth: usize, seen: &mut HashMap<String, usize>) -> Result<(), String> {
        match v {
            FeatureValue::Atom(_) => Ok(()),
            FeatureValue::Struct(s) => visit(s, depth, seen),
            FeatureValue::Var(name) => note(name, depth, seen),
            FeatureValue::Tagged(name, inner) => {
                note(name, depth, seen)?;
                visit_value(inner, depth, seen)
            }
        }
    }
    fn note(name: &str, depth: usize, seen: &mut HashMap<String, usize>) -> Result<(), String> {
        match seen.insert(name.to_string(), depth) {
            Some(d) if d != depth => Err(name.to_string()),
            _ => Ok(()),
        }
    }
    let mut seen = HashMap::new();
    for n in nodes {
        for fs in [&n.top, &n.bottom] {
            visit(fs, 0, &mut seen).map_err(|v| Violation(format!("variable ?{v} used at different depths")))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(label: &str, kind: NodeKind) -> TreeNode {
        TreeNode::new(label, kind)
    }

    fn transitive() -> ElementaryTree {
        let root = TreeNode::internal(
            "S",
            vec![
                leaf("NP", NodeKind::Substitution),
                TreeNode::internal("VP", vec![leaf("V", NodeKind::Anchor), leaf("NP", NodeKind::Substitution)]),
            ],
        );
        ElementaryTree::new("αnx0Vnx1", TreeKind::Initial, None, root)
    }

    #[test]
    fn initial_tree_without_foot_is_valid() {
        let t = transitive();
        assert_eq!(validate_tree(&t), Ok(()));
        assert_eq!(t.anchor_addresses, vec!["2.1".parse().unwrap()]);
        assert_eq!(t.frontier().len(), 3);
        assert_eq!(t.resolve("anchor"), Some(3));
    }

    #[test]
    fn foot_in_initial_tree_is_reported() {
        let root = TreeNode::internal("VP", vec![leaf("VP", NodeKind::Foot), leaf("Ad", NodeKind::Anchor)]);
        let t = ElementaryTree::new("αbad", TreeKind::Initial, None, root);
        let v = validate_tree(&t).unwrap_err();
        assert!(v.iter().any(|x| x.0 == "foot in initial tree"));
    }

    #[test]
    fn two_feet_are_reported() {
        let root = TreeNode::internal(
            "VP",
            vec![leaf("VP", NodeKind::Foot), leaf("Ad", NodeKind::Anchor), leaf("VP", NodeKind::Foot)],
        );
        let t = ElementaryTree::new("βbad", TreeKind::Auxiliary, None, root);
        assert!(validate_tree(&t).is_err());
    }

    #[test]
    fn foot_label_must_match_root() {
        let root = TreeNode::internal("VP", vec![leaf("NP", NodeKind::Foot), leaf("Ad", NodeKind::Anchor)]);
        let t = ElementaryTree::new("βbad", TreeKind::Auxiliary, None, root);
        let v = validate_tree(&t).unwrap_err();
        assert!(v[0].0.contains("foot label"));
    }

    #[test]
    fn spine_marks_path_to_foot() {
        let root = TreeNode::internal(
            "NP",
            vec![
                leaf("NP", NodeKind::Foot),
                TreeNode::internal("PP", vec![leaf("P", NodeKind::Anchor), leaf("NP", NodeKind::Substitution)]),
            ],
        );
        let t = ElementaryTree::new("βnxPnx", TreeKind::Auxiliary, None, root);
        let spine: Vec<bool> = t.flat().iter().map(|n| n.on_spine).collect();
        assert_eq!(spine, vec![true, true, false, false, false]);
        assert!(t.flat()[1].na);
    }

    #[test]
    fn variables_must_keep_depth() {
        let mut root = TreeNode::internal("S", vec![leaf("V", NodeKind::Anchor)]);
        root.top.insert_path(&["agr"], FeatureValue::Var("a".into())).unwrap();
        root.children[0].bottom.insert_path(&["agr", "num"], FeatureValue::Var("a".into())).unwrap();
        let t = ElementaryTree::new("αx", TreeKind::Initial, None, root);
        assert!(validate_tree(&t).is_err());
    }
}
