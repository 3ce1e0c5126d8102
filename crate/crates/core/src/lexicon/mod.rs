//! Morphological, syntactic and statistics databases, and tree selection.

pub mod morph;
pub mod pos;
pub mod select;
pub mod stats;
pub mod synt;

pub use morph::{default_pos, MorphDb, MorphEntry};
pub use pos::Pos;
pub use select::{obligatory_layout, select_by_anchor_label, Lexicon, TokenInfo};
pub use stats::{stat_top_k, StatsDb};
pub use synt::{SyntDb, SyntEntry};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LexiconError {
    #[error("{file} database, line {line}: {message}")]
    Parse { file: &'static str, line: usize, message: String },
    #[error("syntactic entry {entry}: {message}")]
    Reference { entry: String, message: String },
}
