//! Elementary trees, feature structures and tree composition.

pub mod address;
pub mod compose;
pub mod features;
pub mod fgraph;
pub mod instance;
pub mod load;
pub mod symbol;
pub mod tree;

pub use address::GornAddress;
pub use compose::{ComposeError, DerivedTreeState, ParseTree};
pub use features::{unify, FeatureStructure, FeatureValue, UnifyError, MAX_DEPTH};
pub use fgraph::{Clash, FeatureGraph};
pub use instance::{Anchor, AnchoredTree};
pub use load::{load_grammar, Equation, Grammar, GrammarError};
pub use symbol::Sym;
pub use tree::{bottom_id, top_id, validate_tree, ElementaryTree, NodeKind, TreeKind, TreeNode};
