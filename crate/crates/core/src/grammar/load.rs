//! Text formats for the tree database and the feature-template file.
//!
//! Tree file, one block per tree (`;` starts a comment):
//!
//! ```text
//! tree αnx0Vnx1 family Tnx0Vnx1
//!   (S (NP!) (VP (V<>) (NP!)))
//!   feat 1 top case=nom
//!   feat 0 bot mode=?m
//! ```
//!
//! Node heads carry markers: `!` substitution slot, `*` foot, `<>` anchor,
//! `@NA` null adjunction. A quoted head such as `("to")` is a terminal leaf.
//!
//! Template file: `template #VPr_past: anchor.bot.tense = past` lines. A
//! template may span several lines; equations within a line are separated
//! by `,`.

use super::address::GornAddress;
use super::features::FeatureValue;
use super::fgraph::{Clash, FeatureGraph};
use super::symbol::Sym;
use super::tree::{bottom_id, top_id, validate_tree, ElementaryTree, NodeKind, TreeKind, TreeNode};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("tree {tree} is invalid: {}", violations.join("; "))]
    Invalid { tree: String, violations: Vec<String> },
    #[error("duplicate tree {0}")]
    Duplicate(String),
    #[error("family {family} lists unknown tree {tree}")]
    UnknownFamilyMember { family: String, tree: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Top,
    #[serde(rename = "bot")]
    Bottom,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EqValue {
    Atom(String),
    Var(String),
}

/// `node.side.path = value`, where `node` is `root`, `foot`, `anchor`,
/// `anchorN` or a Gorn address.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Equation {
    pub node: String,
    pub side: Side,
    pub path: Vec<String>,
    pub value: EqValue,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquationError {
    #[error("no node {node} in tree {tree}")]
    NoNode { node: String, tree: String },
    #[error("equation {equation} fails: {clash}")]
    Clash { equation: String, clash: String },
}

impl Equation {
    /// Adds the equation to an instance graph whose base nodes follow the
    /// tree's top/bottom numbering. `vars` scopes variables.
    pub fn apply(
        &self,
        tree: &ElementaryTree,
        graph: &mut FeatureGraph,
        vars: &mut HashMap<String, u32>,
    ) -> Result<(), EquationError> {
        let k = tree
            .resolve(&self.node)
            .ok_or_else(|| EquationError::NoNode { node: self.node.clone(), tree: tree.name.clone() })?;
        let base = match self.side {
            Side::Top => top_id(k),
            Side::Bottom => bottom_id(k),
        };
        let path: Vec<Sym> = self.path.iter().map(|p| Sym::new(p)).collect();
        let wrap = |c: Clash| EquationError::Clash { equation: self.to_string(), clash: c.to_string() };
        let target = graph.path_or_create(base, &path).map_err(wrap)?;
        let value = match &self.value {
            EqValue::Atom(a) => FeatureValue::Atom(a.clone()),
            EqValue::Var(v) => FeatureValue::Var(v.clone()),
        };
        graph.add_value(target, &value, vars).map_err(wrap)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Top => "top",
            Side::Bottom => "bot",
        };
        write!(f, "{}.{side}.{} = ", self.node, self.path.join("."))?;
        match &self.value {
            EqValue::Atom(a) => f.write_str(a),
            EqValue::Var(v) => write!(f, "?{v}"),
        }
    }
}

impl std::str::FromStr for Equation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lhs, rhs) = s.split_once('=').ok_or_else(|| format!("missing '=' in {s:?}"))?;
        let parts: Vec<&str> = lhs.trim().split('.').collect();
        let side_at = parts
            .iter()
            .position(|p| matches!(*p, "top" | "bot" | "bottom"))
            .ok_or_else(|| format!("missing top/bot in {s:?}"))?;
        if side_at == 0 || side_at + 1 >= parts.len() {
            return Err(format!("malformed equation {s:?}"));
        }
        let node = parts[..side_at].join(".");
        let side = if parts[side_at] == "top" { Side::Top } else { Side::Bottom };
        let path: Vec<String> = parts[side_at + 1..].iter().map(|p| p.to_string()).collect();
        if path.iter().any(|p| p.is_empty()) {
            return Err(format!("empty attribute in {s:?}"));
        }
        Ok(Equation { node, side, path, value: parse_eq_value(rhs.trim())? })
    }
}

fn parse_eq_value(s: &str) -> Result<EqValue, String> {
    let ok = |t: &str| !t.is_empty() && t.bytes().all(super::features::is_symbol_char);
    if let Some(v) = s.strip_prefix('?') {
        if ok(v) {
            return Ok(EqValue::Var(v.to_string()));
        }
    } else if ok(s) {
        return Ok(EqValue::Atom(s.to_string()));
    }
    Err(format!("bad value {s:?}"))
}

#[derive(Clone, Debug, Default)]
pub struct Grammar {
    trees: BTreeMap<String, Arc<ElementaryTree>>,
    families: BTreeMap<String, Vec<String>>,
    templates: BTreeMap<String, Vec<Equation>>,
}

impl Grammar {
    /// Grammar from already-built trees; every tree is validated.
    pub fn from_trees(trees: Vec<ElementaryTree>) -> Result<Self, GrammarError> {
        let mut g = Grammar::default();
        for t in trees {
            g.add_tree(t)?;
        }
        Ok(g)
    }

    fn add_tree(&mut self, t: ElementaryTree) -> Result<(), GrammarError> {
        if let Err(v) = validate_tree(&t) {
            return Err(GrammarError::Invalid {
                tree: t.name.clone(),
                violations: v.into_iter().map(|x| x.0).collect(),
            });
        }
        if self.trees.contains_key(&t.name) {
            return Err(GrammarError::Duplicate(t.name.clone()));
        }
        if let Some(fam) = &t.family {
            self.families.entry(fam.clone()).or_default().push(t.name.clone());
        }
        self.trees.insert(t.name.clone(), Arc::new(t));
        Ok(())
    }

    pub fn tree(&self, name: &str) -> Option<&Arc<ElementaryTree>> {
        self.trees.get(name)
    }

    /// Trees in name order.
    pub fn trees(&self) -> impl Iterator<Item = &Arc<ElementaryTree>> {
        self.trees.values()
    }

    pub fn tree_count(&self) -> usize {
        self.trees.len()
    }

    pub fn family(&self, name: &str) -> Option<&[String]> {
        self.families.get(name).map(Vec::as_slice)
    }

    pub fn families(&self) -> &BTreeMap<String, Vec<String>> {
        &self.families
    }

    pub fn template(&self, name: &str) -> Option<&[Equation]> {
        self.templates.get(name).map(Vec::as_slice)
    }

    pub fn templates(&self) -> &BTreeMap<String, Vec<Equation>> {
        &self.templates
    }

    /// Number of trees that belong to no family.
    pub fn individual_tree_count(&self) -> usize {
        self.trees.values().filter(|t| t.family.is_none()).count()
    }
}

pub fn load_grammar(tree_text: &str, template_text: &str) -> Result<Grammar, GrammarError> {
    let mut g = Grammar::default();
    for t in parse_trees(tree_text)? {
        g.add_tree(t)?;
    }
    g.templates = parse_templates(template_text)?;
    for (fam, members) in &g.families {
        for m in members {
            if !g.trees.contains_key(m) {
                return Err(GrammarError::UnknownFamilyMember { family: fam.clone(), tree: m.clone() });
            }
        }
    }
    Ok(g)
}

fn strip_comment(line: &str) -> &str {
    match line.find(';') {
        Some(i) => &line[..i],
        None => line,
    }
}

pub fn parse_templates(text: &str) -> Result<BTreeMap<String, Vec<Equation>>, GrammarError> {
    let mut out: BTreeMap<String, Vec<Equation>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| GrammarError::Parse { line: i + 1, message };
        let body = if let Some(rest) = line.strip_prefix("template ") {
            let (name, body) = rest.split_once(':').ok_or_else(|| err("missing ':' after template name".into()))?;
            let name = name.trim();
            if !name.starts_with('#') {
                return Err(err(format!("template name {name:?} must start with '#'")));
            }
            out.entry(name.to_string()).or_default();
            current = Some(name.to_string());
            body
        } else if current.is_some() {
            line
        } else {
            return Err(err("equation outside a template".into()));
        };
        let name = current.clone().unwrap();
        for piece in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let eq: Equation = piece.parse().map_err(err)?;
            out.get_mut(&name).unwrap().push(eq);
        }
    }
    Ok(out)
}

pub fn parse_trees(text: &str) -> Result<Vec<ElementaryTree>, GrammarError> {
    struct Block {
        line: usize,
        name: String,
        family: Option<String>,
        body: String,
        feats: Vec<(usize, String)>,
    }
    let mut blocks: Vec<Block> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| GrammarError::Parse { line: i + 1, message: message.to_string() };
        if let Some(rest) = line.strip_prefix("tree ") {
            let words: Vec<&str> = rest.split_whitespace().collect();
            let (name, family) = match words.as_slice() {
                [name] => (name.to_string(), None),
                [name, "family", fam] => (name.to_string(), Some(fam.to_string())),
                _ => return Err(err("expected `tree <name> [family <fam>]`")),
            };
            blocks.push(Block { line: i + 1, name, family, body: String::new(), feats: Vec::new() });
        } else {
            let block = blocks.last_mut().ok_or_else(|| err("content before the first tree"))?;
            if line.starts_with("feat ") {
                block.feats.push((i + 1, line.to_string()));
            } else {
                block.body.push_str(line);
                block.body.push(' ');
            }
        }
    }
    let mut trees = Vec::new();
    for b in blocks {
        let mut root = parse_bracketed(&b.body).map_err(|message| GrammarError::Parse { line: b.line, message })?;
        root.address = GornAddress::root();
        assign(&mut root, GornAddress::root());
        for (line, feat) in &b.feats {
            apply_feat_line(&mut root, feat).map_err(|message| GrammarError::Parse { line: *line, message })?;
        }
        let foot = {
            let mut all = Vec::new();
            root.walk(&mut all);
            all.iter().any(|n| n.kind == NodeKind::Foot)
        };
        let kind = if b.name.starts_with('α') {
            TreeKind::Initial
        } else if b.name.starts_with('β') || foot {
            TreeKind::Auxiliary
        } else {
            TreeKind::Initial
        };
        trees.push(ElementaryTree::new(b.name, kind, b.family, root));
    }
    Ok(trees)
}

fn assign(node: &mut TreeNode, here: GornAddress) {
    for (i, c) in node.children.iter_mut().enumerate() {
        assign(c, here.child(i + 1));
    }
    node.address = here;
}

/// `feat <addr> top|bot <path>=<atom|?var>`
fn apply_feat_line(root: &mut TreeNode, line: &str) -> Result<(), String> {
    let rest = line.strip_prefix("feat ").unwrap().trim();
    let mut words = rest.splitn(3, char::is_whitespace);
    let addr = words.next().ok_or("missing address")?;
    let side = words.next().ok_or("missing top/bot")?;
    let eq = words.next().ok_or("missing equation")?;
    let (path, value) = eq.split_once('=').ok_or("missing '='")?;
    let path: Vec<&str> = path.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(format!("bad path in {line:?}"));
    }
    let value = match parse_eq_value(value.trim())? {
        EqValue::Atom(a) => FeatureValue::Atom(a),
        EqValue::Var(v) => FeatureValue::Var(v),
    };
    let addr: GornAddress = resolve_named(root, addr)?;
    let node = root.at_mut(&addr).ok_or_else(|| format!("no node at {addr}"))?;
    let fs = match side {
        "top" => &mut node.top,
        "bot" | "bottom" => &mut node.bottom,
        other => return Err(format!("expected top or bot, got {other:?}")),
    };
    fs.insert_path(&path, value).map_err(|e| e.to_string())
}

fn resolve_named(root: &TreeNode, name: &str) -> Result<GornAddress, String> {
    let mut all = Vec::new();
    root.walk(&mut all);
    let find = |kind: NodeKind| all.iter().find(|n| n.kind == kind).map(|n| n.address.clone());
    match name {
        "root" => Ok(GornAddress::root()),
        "foot" => find(NodeKind::Foot).ok_or_else(|| "tree has no foot".to_string()),
        "anchor" => find(NodeKind::Anchor).ok_or_else(|| "tree has no anchor".to_string()),
        _ => name.parse().map_err(|e: super::address::AddressError| e.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    Quoted(String),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                out.push(Tok::Open);
            }
            ')' => {
                chars.next();
                out.push(Tok::Close);
            }
            '"' => {
                chars.next();
                let mut w = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some('\\') => w.push(chars.next().ok_or("dangling escape")?),
                        Some(ch) => w.push(ch),
                        None => return Err("unterminated string".into()),
                    }
                }
                out.push(Tok::Quoted(w));
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut w = String::new();
                while let Some(&ch) = chars.peek() {
                    if ch.is_whitespace() || ch == '(' || ch == ')' || ch == '"' {
                        break;
                    }
                    w.push(ch);
                    chars.next();
                }
                out.push(Tok::Word(w));
            }
        }
    }
    Ok(out)
}

/// Parses a bracketed tree expression such as `(S (NP!) (VP (V<>) (NP!)))`.
pub fn parse_bracketed(s: &str) -> Result<TreeNode, String> {
    let toks = tokenize(s)?;
    let mut pos = 0;
    let node = parse_node(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err("trailing tokens after tree".into());
    }
    Ok(node)
}

fn parse_node(toks: &[Tok], pos: &mut usize) -> Result<TreeNode, String> {
    match toks.get(*pos) {
        Some(Tok::Quoted(w)) => {
            *pos += 1;
            Ok(TreeNode::new(w.clone(), NodeKind::Terminal))
        }
        Some(Tok::Open) => {
            *pos += 1;
            let mut node = match toks.get(*pos) {
                Some(Tok::Word(head)) => parse_head(head)?,
                Some(Tok::Quoted(w)) => TreeNode::new(w.clone(), NodeKind::Terminal),
                _ => return Err("expected a node label".into()),
            };
            *pos += 1;
            while let Some(t) = toks.get(*pos) {
                if *t == Tok::Close {
                    *pos += 1;
                    if node.kind == NodeKind::Internal && node.children.is_empty() {
                        return Err(format!("internal node {} has no children", node.label));
                    }
                    return Ok(node);
                }
                if node.kind != NodeKind::Internal {
                    return Err(format!("leaf node {} cannot have children", node.label));
                }
                node.children.push(parse_node(toks, pos)?);
            }
            Err("unbalanced parentheses".into())
        }
        _ => Err("expected '(' or a quoted terminal".into()),
    }
}

fn parse_head(head: &str) -> Result<TreeNode, String> {
    let mut label = head;
    let mut na = false;
    if let Some(l) = label.strip_suffix("@NA") {
        label = l;
        na = true;
    }
    let (label, kind) = if let Some(l) = label.strip_suffix("<>") {
        (l, NodeKind::Anchor)
    } else if let Some(l) = label.strip_suffix('!') {
        (l, NodeKind::Substitution)
    } else if let Some(l) = label.strip_suffix('*') {
        (l, NodeKind::Foot)
    } else {
        (label, NodeKind::Internal)
    };
    if label.is_empty() {
        return Err(format!("empty label in {head:?}"));
    }
    let mut n = TreeNode::new(label, kind);
    n.na = na;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_initial_tree() {
        let g = load_grammar("tree αNXN\n  (NP (N<>))\n", "").unwrap();
        assert_eq!(g.tree_count(), 1);
        assert!(g.families().is_empty());
        assert_eq!(g.tree("αNXN").unwrap().kind, TreeKind::Initial);
    }

    #[test]
    fn foot_label_mismatch_names_tree() {
        let err = load_grammar("tree βbad\n (VP (NP*) (Ad<>))\n", "").unwrap_err();
        match err {
            GrammarError::Invalid { tree, .. } => assert_eq!(tree, "βbad"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = load_grammar("tree αx\n (S (NP!)\n", "").unwrap_err();
        assert!(matches!(err, GrammarError::Parse { line: 1, .. }));
        let err = load_grammar("tree αx\n (S (V<>))\n feat 9 top a=b\n", "").unwrap_err();
        assert!(matches!(err, GrammarError::Parse { line: 3, .. }));
    }

    #[test]
    fn markers_and_features() {
        let text = "tree βvxARB family Tx\n (VP@NA (VP*) (Ad<>))\n feat 0 bot mode=?m\n feat 1 top mode=?m\n";
        let g = load_grammar(text, "").unwrap();
        let t = g.tree("βvxARB").unwrap();
        assert_eq!(t.kind, TreeKind::Auxiliary);
        assert!(t.root.na);
        assert_eq!(t.root.bottom.to_string(), "{mode: ?m}");
        assert_eq!(g.family("Tx").unwrap(), ["βvxARB".to_string()]);
    }

    #[test]
    fn quoted_terminals() {
        let g = load_grammar("tree αa\n (S (a<>) (S \"b\"))\n", "").unwrap();
        let t = g.tree("αa").unwrap();
        let leaf = t.root.at(&"2.1".parse().unwrap()).unwrap();
        assert_eq!(leaf.kind, NodeKind::Terminal);
        assert_eq!(leaf.label, "b");
    }

    #[test]
    fn templates_parse() {
        let text = "template #VPr_past: anchor.bot.mode = ind, anchor.bot.tense = past\n\
                    template #N_plur: anchor.bot.agr.num = plur\n  root.top.x = ?v\n";
        let t = parse_templates(text).unwrap();
        assert_eq!(t["#VPr_past"].len(), 2);
        assert_eq!(t["#N_plur"][1].value, EqValue::Var("v".into()));
        assert_eq!(t["#N_plur"][0].to_string(), "anchor.bot.agr.num = plur");
        assert!(parse_templates("template VP: a.top.b = c").is_err());
    }

    #[test]
    fn equation_with_gorn_node() {
        let e: Equation = "2.1.top.agr.num = sing".parse().unwrap();
        assert_eq!(e.node, "2.1");
        assert_eq!(e.path, vec!["agr", "num"]);
    }
}
