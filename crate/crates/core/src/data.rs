//! Bundled grammars, lexicons and fixtures.

use crate::grammar::{load_grammar, Grammar, GrammarError};
use crate::lexicon::{Lexicon, LexiconError, MorphDb, StatsDb, SyntDb};

pub mod formal {
    pub const NESTED: &str = include_str!("../data/formal/nested.trees");
    pub const COPY: &str = include_str!("../data/formal/copy.trees");
    pub const NULL_ADJUNCTION: &str = include_str!("../data/formal/null_adjunction.trees");
    pub const ABCD: &str = include_str!("../data/formal/abcd.trees");

    /// (name, tree text, alphabet).
    pub const ALL: [(&str, &str, &[&str]); 4] = [
        ("nested", NESTED, &["a", "b"]),
        ("copy", COPY, &["a", "b"]),
        ("null-adjunction", NULL_ADJUNCTION, &["a", "b"]),
        ("abcd", ABCD, &["a", "b", "c", "d"]),
    ];
}

/// A template-free grammar from tree text.
pub fn formal_grammar(text: &str) -> Result<Grammar, GrammarError> {
    load_grammar(text, "")
}

pub mod english {
    pub const TREES: &str = include_str!("../data/english/trees.txt");
    pub const TEMPLATES: &str = include_str!("../data/english/templates.txt");
    pub const MORPH: &str = include_str!("../data/english/morph.tsv");
    pub const SYNT: &str = include_str!("../data/english/synt.txt");
    pub const STATS: &str = include_str!("../data/english/stats.tsv");
    /// Gold-tagged training sentences for the tagger.
    pub const TRAIN: &str = include_str!("../data/english/corpus/train.tagged");
    pub const HELDOUT: &str = include_str!("../data/english/corpus/heldout.tagged");
}

/// The bundled English fragment.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub grammar: Grammar,
    pub lexicon: Lexicon,
    pub stats: StatsDb,
}

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

impl Bundle {
    pub fn from_texts(trees: &str, templates: &str, morph: &str, synt: &str, stats: &str) -> Result<Self, BundleError> {
        let grammar = load_grammar(trees, templates)?;
        let synt = SyntDb::parse(synt)?;
        synt.check(&grammar)?;
        let lexicon = Lexicon::new(MorphDb::parse(morph)?, synt);
        Ok(Bundle { grammar, lexicon, stats: StatsDb::parse(stats)? })
    }

    pub fn english() -> Result<Self, BundleError> {
        use english::*;
        Self::from_texts(TREES, TEMPLATES, MORPH, SYNT, STATS)
    }
}
