//! Tree grafting: a bottom-up chart over anchored elementary trees with
//! substitution, adjunction and feature unification, plus derivation
//! extraction and replay.

mod chart;
mod derivation;
mod filter;

pub use chart::{parse, ChartStats, ParseForest};
pub use derivation::{
    derived_state, derived_tree, extract_derivations, DerivationSyntaxError, Derivation, DerivationEdge, Operation, ReplayError,
};
pub use filter::{parse_with_retry, span_filter};

use crate::grammar::FeatureStructure;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const DEFAULT_ITEM_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
pub enum StartCategory {
    #[default]
    #[serde(rename = "S")]
    S,
    #[serde(rename = "embedded-S")]
    EmbeddedS,
    #[serde(rename = "NP")]
    NP,
    #[serde(rename = "DetP")]
    DetP,
}

impl StartCategory {
    pub const ALL: [StartCategory; 4] = [StartCategory::S, StartCategory::EmbeddedS, StartCategory::NP, StartCategory::DetP];

    pub fn root_label(self) -> &'static str {
        match self {
            StartCategory::S | StartCategory::EmbeddedS => "S",
            StartCategory::NP => "NP",
            StartCategory::DetP => "D",
        }
    }

    /// Required on the top of the root of a complete parse.
    pub fn constraint(self) -> FeatureStructure {
        match self {
            StartCategory::S => "{mode: ind, comp: none}".parse().expect("static structure"),
            _ => FeatureStructure::new(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StartCategory::S => "S",
            StartCategory::EmbeddedS => "embedded-S",
            StartCategory::NP => "NP",
            StartCategory::DetP => "DetP",
        }
    }
}

impl fmt::Display for StartCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown start category {0:?} (expected S, embedded-S, NP or DetP)")]
pub struct UnknownStartCategory(pub String);

impl FromStr for StartCategory {
    type Err = UnknownStartCategory;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(StartCategory::S),
            "embedded-s" | "embedded_s" | "embeddeds" => Ok(StartCategory::EmbeddedS),
            "np" => Ok(StartCategory::NP),
            "detp" | "dp" => Ok(StartCategory::DetP),
            _ => Err(UnknownStartCategory(s.to_string())),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParserOptions {
    pub start: StartCategory,
    pub item_cap: usize,
    /// Off: every feature check succeeds.
    pub use_features: bool,
}

impl Default for ParserOptions {
    fn default() -> Self {
        ParserOptions { start: StartCategory::S, item_cap: DEFAULT_ITEM_CAP, use_features: true }
    }
}

impl ParserOptions {
    pub fn with_start(start: StartCategory) -> Self {
        ParserOptions { start, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("chart exceeded {cap} items")]
    ItemCap { cap: usize },
    #[error("{tokens} tokens but {lists} candidate lists")]
    LengthMismatch { tokens: usize, lists: usize },
    #[error("stat filter k must be at least 1")]
    ZeroK,
}
