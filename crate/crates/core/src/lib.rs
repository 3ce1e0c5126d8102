//! Lexicalized tree-adjoining grammar engine.

pub mod data;
pub mod evaluation;
pub mod grammar;
pub mod lexicon;
pub mod parser;
pub mod pipeline;
pub mod ranking;
pub mod tagger;
