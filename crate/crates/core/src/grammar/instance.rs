use super::fgraph::{Clash, FeatureGraph};
use super::load::{Equation, EquationError};
use super::tree::{bottom_id, top_id, ElementaryTree, NodeKind};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Anchor {
    pub word: String,
    /// Sentence position; absent for hand-built instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

/// An elementary tree with its anchors bound and all lexical feature
/// equations expanded into its feature graph.
#[derive(Clone, Debug)]
pub struct AnchoredTree {
    pub tree: Arc<ElementaryTree>,
    /// One per anchor node, in frontier order.
    pub anchors: Vec<Anchor>,
    /// Part of speech of the selecting token, if selected from a lexicon.
    pub pos: Option<String>,
    /// Syntactic entry that selected this tree.
    pub entry: Option<String>,
    pub templates: Vec<String>,
    graph: FeatureGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("tree {tree} has {expected} anchors but {given} words were supplied")]
    AnchorCount { tree: String, expected: usize, given: usize },
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error("tree {tree}: features of node {address} are inconsistent ({clash})")]
    Inconsistent { tree: String, address: String, clash: String },
}

impl AnchoredTree {
    pub fn new(tree: Arc<ElementaryTree>, anchors: Vec<Anchor>) -> Result<Self, InstanceError> {
        Self::with_equations(tree, anchors, &[])
    }

    /// Each group of equations gets its own variable scope.
    pub fn with_equations(
        tree: Arc<ElementaryTree>,
        anchors: Vec<Anchor>,
        groups: &[Vec<Equation>],
    ) -> Result<Self, InstanceError> {
        let expected = tree.anchors().len();
        if expected != anchors.len() {
            return Err(InstanceError::AnchorCount { tree: tree.name.clone(), expected, given: anchors.len() });
        }
        let mut graph = tree.graph().clone();
        for group in groups {
            let mut vars = HashMap::new();
            for eq in group {
                eq.apply(&tree, &mut graph, &mut vars)?;
            }
        }
        // slots and feet never see adjunction, so their halves coincide
        for (k, node) in tree.flat().iter().enumerate() {
            if matches!(node.kind, NodeKind::Substitution | NodeKind::Foot) {
                let k = k as u32;
                graph.unify(top_id(k), bottom_id(k)).map_err(|c: Clash| InstanceError::Inconsistent {
                    tree: tree.name.clone(),
                    address: node.address.to_string(),
                    clash: c.to_string(),
                })?;
            }
        }
        let graph = graph.compact(2 * tree.node_count());
        Ok(AnchoredTree { tree, anchors, pos: None, entry: None, templates: Vec::new(), graph })
    }

    /// Instance anchored by the given words with no positions.
    pub fn from_words(tree: Arc<ElementaryTree>, words: &[&str]) -> Result<Self, InstanceError> {
        let anchors = words.iter().map(|w| Anchor { word: w.to_string(), position: None }).collect();
        Self::new(tree, anchors)
    }

    pub fn graph(&self) -> &FeatureGraph {
        &self.graph
    }

    pub fn name(&self) -> &str {
        &self.tree.name
    }

    /// First anchor position, if bound to a sentence.
    pub fn position(&self) -> Option<usize> {
        self.anchors.first().and_then(|a| a.position)
    }

    /// `tree[word]` or `tree[w1,w2]` for multi-anchor trees.
    pub fn label(&self) -> String {
        let words: Vec<&str> = self.anchors.iter().map(|a| a.word.as_str()).collect();
        format!("{}[{}]", self.tree.name, words.join(","))
    }
}

impl fmt::Display for AnchoredTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
