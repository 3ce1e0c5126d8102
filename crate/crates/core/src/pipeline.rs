//! The end-to-end flow: morphology, tagging and blending, tree selection,
//! filtering, parsing, extraction, ranking and derived trees.

use crate::data::{english, Bundle, BundleError};
use crate::evaluation::{parseval, read_treebank, BracketOptions, CorpusParseval, CorpusReport, EvalError};
use crate::grammar::{AnchoredTree, ParseTree};
use crate::lexicon::{LexiconError, Pos, StatsDb, TokenInfo};
use crate::parser::{
    derived_tree, extract_derivations, parse_with_retry, span_filter, ChartStats, ParseError, ParserOptions,
    ReplayError, StartCategory, DEFAULT_ITEM_CAP,
};
use crate::ranking::{rank, PenaltyVector, Weights};
use crate::tagger::{blend, n_best, parse_tagged_corpus, TagSequence, TaggedSentence, TaggerError, TrigramModel};
use serde::Serialize;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

/// Response schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaggerMode {
    #[default]
    On,
    Off,
    /// Blend first; parse again unblended when that finds nothing.
    RetryOnFailure,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown tagger mode {0:?} (expected on, off or retry)")]
pub struct UnknownTaggerMode(pub String);

impl FromStr for TaggerMode {
    type Err = UnknownTaggerMode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "on" => Ok(TaggerMode::On),
            "off" => Ok(TaggerMode::Off),
            "retry" | "retry-on-failure" => Ok(TaggerMode::RetryOnFailure),
            _ => Err(UnknownTaggerMode(s.to_string())),
        }
    }
}

impl fmt::Display for TaggerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaggerMode::On => "on",
            TaggerMode::Off => "off",
            TaggerMode::RetryOnFailure => "retry-on-failure",
        })
    }
}

/// Files overriding the bundled English resources. Unset fields fall back
/// to the bundle; an unset model is trained on the bundled corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ResourcePaths {
    pub trees: Option<PathBuf>,
    pub templates: Option<PathBuf>,
    pub morph: Option<PathBuf>,
    pub synt: Option<PathBuf>,
    pub stats: Option<PathBuf>,
    pub model: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub tagger: TaggerMode,
    pub start: StartCategory,
    /// Tag sequences kept by the tagger.
    pub n_best: usize,
    /// Trees kept per token by the frequency filter; `None` disables it.
    pub stat_k: Option<usize>,
    pub weights: Weights,
    /// Ranked parses returned.
    pub max_parses: usize,
    /// Derivations extracted before ranking; also the cap on reported counts.
    pub extract_limit: usize,
    pub item_cap: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tagger: TaggerMode::On,
            start: StartCategory::S,
            n_best: 3,
            stat_k: Some(3),
            weights: Weights::default(),
            max_parses: 10,
            extract_limit: 1000,
            item_cap: DEFAULT_ITEM_CAP,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Tagger(#[from] TaggerError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("sentence {id}: {source}")]
    Sentence { id: usize, source: Box<PipelineError> },
    #[error("corpus has {corpus} sentences but gold has {gold}")]
    GoldCount { corpus: usize, gold: usize },
}

impl PipelineError {
    /// True for problems with configuration or resources rather than input.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            PipelineError::Io { .. }
                | PipelineError::Bundle(_)
                | PipelineError::Lexicon(_)
                | PipelineError::Config(_)
                | PipelineError::Tagger(TaggerError::Corpus { .. } | TaggerError::Model { .. } | TaggerError::EmptyCorpus)
        )
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    std::fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn read_or(path: &Option<PathBuf>, fallback: &str) -> Result<String, PipelineError> {
    path.as_deref().map_or_else(|| Ok(fallback.to_string()), read)
}

/// Loaded, immutable resources shared by every request.
#[derive(Clone, Debug)]
pub struct Engine {
    pub bundle: Bundle,
    pub model: TrigramModel,
}

impl Engine {
    pub fn english() -> Result<Self, PipelineError> {
        Self::load(&ResourcePaths::default())
    }

    pub fn load(paths: &ResourcePaths) -> Result<Self, PipelineError> {
        let bundle = Bundle::from_texts(
            &read_or(&paths.trees, english::TREES)?,
            &read_or(&paths.templates, english::TEMPLATES)?,
            &read_or(&paths.morph, english::MORPH)?,
            &read_or(&paths.synt, english::SYNT)?,
            &read_or(&paths.stats, english::STATS)?,
        )?;
        let model = match &paths.model {
            Some(p) => TrigramModel::from_text(&read(p)?)?,
            None => TrigramModel::train(&parse_tagged_corpus(english::TRAIN)?)?,
        };
        Ok(Engine { bundle, model })
    }

    pub fn validate(&self, config: &PipelineConfig) -> Result<(), PipelineError> {
        let bad = |m: &str| Err(PipelineError::Config(m.to_string()));
        if config.n_best == 0 {
            return bad("N-best must be at least 1");
        }
        if config.stat_k == Some(0) {
            return bad("stat filter k must be at least 1");
        }
        if config.extract_limit == 0 {
            return bad("extraction limit must be at least 1");
        }
        if config.item_cap == 0 {
            return bad("item cap must be at least 1");
        }
        Ok(())
    }

    /// Runs the whole flow on one whitespace-tokenized sentence.
    pub fn parse_sentence(&self, config: &PipelineConfig, sentence: &str) -> Result<ParseResponse, PipelineError> {
        self.validate(config)?;
        let words: Vec<String> = sentence.split_whitespace().map(String::from).collect();
        let info = self.bundle.lexicon.analyze(&words);
        let morph_pos: Vec<Vec<Pos>> = info.iter().map(|t| t.pos.clone()).collect();
        let sequences = match config.tagger {
            TaggerMode::Off => Vec::new(),
            _ if words.is_empty() => Vec::new(),
            _ => n_best(&self.model, &words, config.n_best)?,
        };
        let blended = blend(&morph_pos, &sequences)?;

        let mut attempt = self.attempt(config, &words, &info, &blended)?;
        let mut tagger_retry = false;
        if attempt.derivation_count == 0 && config.tagger == TaggerMode::RetryOnFailure && blended != morph_pos {
            attempt = self.attempt(config, &words, &info, &morph_pos)?;
            tagger_retry = true;
        }

        let ranked = rank(&attempt.derivations, &self.bundle.grammar, &config.weights, Some(config.max_parses))?;
        let parses = ranked
            .parses
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let derived = derived_tree(&r.derivation, &self.bundle.grammar)?;
                Ok(RankedOutput {
                    id: i,
                    derivation: r.derivation.to_string(),
                    penalties: r.penalties,
                    total: r.total,
                    bracketed: derived.to_bracketed(),
                    derived,
                    derivation_tree: r.derivation,
                })
            })
            .collect::<Result<Vec<_>, ReplayError>>()?;

        let tokens = info
            .into_iter()
            .zip(if tagger_retry { morph_pos } else { blended })
            .map(|(info, used)| TokenAnalysis { info, used })
            .collect();
        Ok(ParseResponse {
            v: SCHEMA_VERSION,
            sentence: words.join(" "),
            start: config.start,
            tagger: config.tagger,
            tag_sequences: sequences,
            tokens,
            tagger_retry,
            retry: attempt.stat_retry,
            uncovered: attempt.uncovered,
            derivation_count: attempt.derivation_count,
            chart: attempt.stats,
            parses,
        })
    }

    fn attempt(
        &self,
        config: &PipelineConfig,
        words: &[String],
        info: &[TokenInfo],
        pos_sets: &[Vec<Pos>],
    ) -> Result<Attempt, PipelineError> {
        let selected = self.select(words, info, pos_sets);
        let opts = ParserOptions { start: config.start, item_cap: config.item_cap, use_features: true };
        let k = config.stat_k.unwrap_or(usize::MAX);
        let (forest, stat_retry) = parse_with_retry(words, &selected, &self.bundle.stats, k, &opts)?;
        let derivations = extract_derivations(&forest, config.extract_limit);
        Ok(Attempt {
            derivation_count: derivations.len(),
            derivations,
            stat_retry,
            uncovered: forest.uncovered,
            stats: forest.stats,
        })
    }

    /// Anchored trees per token after the span filter.
    pub fn select(&self, words: &[String], info: &[TokenInfo], pos_sets: &[Vec<Pos>]) -> Vec<Vec<AnchoredTree>> {
        let selected = self.bundle.lexicon.select_trees(&self.bundle.grammar, info, pos_sets);
        span_filter(&selected, words.len())
    }

    /// Runs every sentence; failures count as non-parses with a diagnostic.
    pub fn run_corpus(&self, config: &PipelineConfig, sentences: &[String]) -> Vec<SentenceOutcome> {
        std::thread::scope(|s| {
            let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(sentences.len().max(1));
            let chunk = sentences.len().div_ceil(workers).max(1);
            let handles: Vec<_> = sentences
                .chunks(chunk)
                .enumerate()
                .map(|(c, part)| {
                    s.spawn(move || {
                        part.iter()
                            .enumerate()
                            .map(|(i, sent)| SentenceOutcome::from_result(c * chunk + i, self.parse_sentence(config, sent)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("corpus worker panicked")).collect()
        })
    }

    pub fn corpus_report(&self, config: &PipelineConfig, name: &str, sentences: &[String]) -> (CorpusReport, Vec<SentenceOutcome>) {
        let outcomes = self.run_corpus(config, sentences);
        let counts: Vec<usize> = outcomes.iter().map(|o| o.parses).collect();
        (CorpusReport::from_counts(name, &counts), outcomes)
    }

    /// Corpus report plus, when gold trees are given, bracket scores of the
    /// top-ranked parse of every parsed sentence.
    pub fn evaluate(
        &self,
        config: &PipelineConfig,
        name: &str,
        corpus: &str,
        gold: Option<&str>,
        opts: BracketOptions,
    ) -> Result<EvalReport, PipelineError> {
        let sentences = read_corpus(corpus);
        let gold = gold.map(read_treebank).transpose()?;
        if let Some(g) = &gold {
            if g.len() != sentences.len() {
                return Err(PipelineError::GoldCount { corpus: sentences.len(), gold: g.len() });
            }
        }
        let (report, outcomes) = self.corpus_report(config, name, &sentences);
        let parseval = match gold {
            None => None,
            Some(gold) => {
                let mut total = CorpusParseval::default();
                for (o, g) in outcomes.iter().zip(&gold) {
                    let Some(top) = &o.top else { continue };
                    let r = parseval(&crate::evaluation::brackets_with(top, opts), &g.brackets(opts))
                        .map_err(|e| PipelineError::Sentence { id: o.id, source: Box::new(e.into()) })?;
                    total.add(&r);
                }
                Some(total)
            }
        };
        Ok(EvalReport { report, parseval, outcomes })
    }

    /// Tree frequencies from the best parse of each gold-tagged sentence.
    pub fn tree_stats(&self, corpus: &[TaggedSentence], start: StartCategory) -> Result<StatsDb, PipelineError> {
        let mut stats = StatsDb::default();
        for sent in corpus {
            let words: Vec<String> = sent.iter().map(|(w, _)| w.clone()).collect();
            let info = self.bundle.lexicon.analyze(&words);
            let gold: Vec<Vec<Pos>> = sent.iter().map(|(_, p)| vec![*p]).collect();
            let selected = self.select(&words, &info, &gold);
            let forest = crate::parser::parse(&words, &selected, &ParserOptions::with_start(start))?;
            let ds = extract_derivations(&forest, 1000);
            let ranked = rank(&ds, &self.bundle.grammar, &Weights::default(), Some(1))?;
            let Some(best) = ranked.parses.first() else { continue };
            let mut stack = vec![&best.derivation];
            while let Some(d) = stack.pop() {
                let pos = d.instance.as_ref().and_then(|i| i.pos.as_deref()).and_then(|p| p.parse::<Pos>().ok());
                if let Some(pos) = pos {
                    stats.add(&d.tree, pos, 1);
                }
                stack.extend(d.children.iter().map(|e| &e.child));
            }
        }
        Ok(stats)
    }
}

struct Attempt {
    derivations: Vec<crate::parser::Derivation>,
    derivation_count: usize,
    stat_retry: bool,
    uncovered: Vec<usize>,
    stats: ChartStats,
}

/// Sentences from a corpus file: one per line, blanks and `;` comments
/// skipped.
pub fn read_corpus(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(';'))
        .map(String::from)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TokenAnalysis {
    #[serde(flatten)]
    pub info: TokenInfo,
    /// Parts of speech handed to tree selection.
    pub used: Vec<Pos>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankedOutput {
    pub id: usize,
    pub derivation: String,
    pub penalties: PenaltyVector,
    pub total: f64,
    pub bracketed: String,
    pub derivation_tree: crate::parser::Derivation,
    pub derived: ParseTree,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParseResponse {
    pub v: u32,
    pub sentence: String,
    pub start: StartCategory,
    pub tagger: TaggerMode,
    pub tag_sequences: Vec<TagSequence>,
    pub tokens: Vec<TokenAnalysis>,
    /// The tagger-off fallback ran.
    pub tagger_retry: bool,
    /// The unfiltered fallback after the frequency filter ran.
    pub retry: bool,
    pub uncovered: Vec<usize>,
    /// Derivations found, capped by the extraction limit.
    pub derivation_count: usize,
    pub chart: ChartStats,
    pub parses: Vec<RankedOutput>,
}

impl ParseResponse {
    pub fn accepted(&self) -> bool {
        self.derivation_count > 0
    }

    /// Canonical JSON; every front end emits exactly these bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("response serializes")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SentenceOutcome {
    pub id: usize,
    pub parses: usize,
    pub retry: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub top: Option<ParseTree>,
}

impl SentenceOutcome {
    fn from_result(id: usize, r: Result<ParseResponse, PipelineError>) -> Self {
        match r {
            Ok(resp) => SentenceOutcome {
                id,
                parses: resp.derivation_count,
                retry: resp.retry,
                error: None,
                top: resp.parses.into_iter().next().map(|p| p.derived),
            },
            Err(e) => SentenceOutcome {
                id,
                parses: 0,
                retry: false,
                error: Some(PipelineError::Sentence { id, source: Box::new(e) }.to_string()),
                top: None,
            },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EvalReport {
    pub report: CorpusReport,
    pub parseval: Option<CorpusParseval>,
    pub outcomes: Vec<SentenceOutcome>,
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", CorpusReport::header())?;
        writeln!(f, "{}", self.report.row())?;
        if let Some(p) = &self.parseval {
            writeln!(f)?;
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}
