//! Trigram tagging with exact N-best output, and the POS blender.

mod decode;
mod model;

pub use decode::{blend, n_best, viterbi, TagSequence};
pub use model::{parse_tagged_corpus, TaggedSentence, TrigramModel, DEFAULT_LAMBDA, DEFAULT_UNKNOWN_MASS};

use crate::lexicon::Pos;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TaggerError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("tag {0} is outside the model's tag vocabulary")]
    TagOutsideVocabulary(Pos),
    #[error("corpus line {line}: {message}")]
    Corpus { line: usize, message: String },
    #[error("model line {line}: {message}")]
    Model { line: usize, message: String },
    #[error("cannot tag an empty sentence")]
    EmptySentence,
    #[error("N must be at least 1")]
    ZeroN,
    #[error("sentence has {sentence} tokens but a tag sequence has {sequence}")]
    LengthMismatch { sentence: usize, sequence: usize },
}
