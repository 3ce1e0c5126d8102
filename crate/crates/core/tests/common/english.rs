//! Shared checks over the bundled English grammar. Each returns the list of
//! offending sentences so the same code backs both the focused tests and the
//! acceptance report.

use super::suite::{self, Item};
use std::sync::OnceLock;
use xtag::pipeline::{Engine, ParseResponse, PipelineConfig, TaggerMode};

pub fn engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(|| Engine::english().expect("bundled resources load"))
}

pub fn config(tagger: TaggerMode, stat_k: Option<usize>) -> PipelineConfig {
    PipelineConfig { tagger, stat_k, ..PipelineConfig::default() }
}

pub fn parse(c: &PipelineConfig, s: &str) -> ParseResponse {
    engine().parse_sentence(c, s).unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Sentences whose accept/reject outcome disagrees with the suite marking.
pub fn suite_mismatches(c: &PipelineConfig) -> Vec<String> {
    suite::load()
        .iter()
        .filter(|it| parse(c, &it.sentence()).accepted() != it.grammatical)
        .map(Item::sentence)
        .collect()
}

/// Every extracted derivation must replay to a tree whose frontier is the
/// input, in order.
pub fn frontier_violations() -> Vec<String> {
    let c = PipelineConfig { max_parses: usize::MAX, ..config(TaggerMode::Off, None) };
    let mut bad = Vec::new();
    for it in suite::load() {
        let r = parse(&c, &it.sentence());
        if r.parses.len() != r.derivation_count {
            bad.push(format!("{}: ranked {} of {}", it.sentence(), r.parses.len(), r.derivation_count));
        }
        for p in &r.parses {
            if p.derived.frontier() != it.words {
                bad.push(format!("{}: {}", it.sentence(), p.derivation));
            }
        }
    }
    bad
}

pub struct Blending {
    pub instances_on: usize,
    pub instances_off: usize,
    /// Sentences covered by the N-best whose outcome changed.
    pub changed: Vec<String>,
    pub covered: usize,
}

impl Blending {
    pub fn holds(&self) -> bool {
        self.instances_on < self.instances_off && self.changed.is_empty() && self.covered > 0
    }
}

/// Tagger on vs off, frequency filter disabled in both.
pub fn blending() -> Blending {
    let on = config(TaggerMode::On, None);
    let off = config(TaggerMode::Off, None);
    let mut b = Blending { instances_on: 0, instances_off: 0, changed: Vec::new(), covered: 0 };
    for it in suite::load() {
        let s = it.sentence();
        let (a, z) = (parse(&on, &s), parse(&off, &s));
        b.instances_on += a.chart.instances;
        b.instances_off += z.chart.instances;
        let covered = it.tags.iter().enumerate().all(|(i, t)| a.tag_sequences.iter().any(|q| q.tags[i] == *t));
        if covered {
            b.covered += 1;
            if a.accepted() != z.accepted() {
                b.changed.push(s);
            }
        }
    }
    b
}

/// Sentence whose relative clause needs a low-frequency verb tree.
pub const STAT_RETRY_SENTENCE: &str = "the book that he read had a map";

/// Sentences where the k=3 filter changes accept/reject against no filter,
/// plus a note if the retry fixture does not report a retry.
pub fn stat_filter_problems() -> Vec<String> {
    let filtered = config(TaggerMode::On, Some(3));
    let full = config(TaggerMode::On, None);
    let mut bad: Vec<String> = suite::load()
        .iter()
        .map(Item::sentence)
        .filter(|s| parse(&filtered, s).accepted() != parse(&full, s).accepted())
        .collect();
    let r = parse(&filtered, STAT_RETRY_SENTENCE);
    if !r.retry || !r.accepted() {
        bad.push(format!("{STAT_RETRY_SENTENCE}: retry {} parses {}", r.retry, r.parses.len()));
    }
    bad
}

pub const WORKED_SENTENCE: &str = "I had a map yesterday";
pub const WORKED_DERIVATION: &str =
    "(αnx0Vnx1[had] (subst @1 αNXN[I]) (adjoin @2 βvxARB[yesterday]) (subst @2.2 αNXdxN[map] (subst @1 αDXD[a])))";

/// Problems with the worked example: single parse, expected derivation,
/// expected operations.
pub fn worked_example_problems() -> Vec<String> {
    let r = parse(&PipelineConfig::default(), WORKED_SENTENCE);
    let mut bad = Vec::new();
    let Some(top) = r.parses.first() else { return vec!["no parse".into()] };
    if top.derivation != WORKED_DERIVATION {
        bad.push(format!("top derivation {}", top.derivation));
    }
    let d = &top.derivation_tree;
    if d.tree != "αnx0Vnx1" || d.count(xtag::parser::Operation::Substitution) != 3 || d.count(xtag::parser::Operation::Adjunction) != 1 {
        bad.push(format!("operations of {}", top.derivation));
    }
    if top.bracketed != "(S (NP (N I)) (VP (VP (V had) (NP (D a) (N map))) (Ad yesterday)))" {
        bad.push(format!("derived {}", top.bracketed));
    }
    bad
}
