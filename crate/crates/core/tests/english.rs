//! End-to-end behaviour of the bundled English grammar.

mod common;

use common::english::*;
use common::suite::{self, CORPUS10, CORPUS10_GOLD};
use xtag::evaluation::{dependency_arcs, BracketOptions, CorpusReport};
use xtag::grammar::{bottom_id, AnchoredTree, Sym};
use xtag::lexicon::{stat_top_k, Pos};
use xtag::pipeline::{PipelineConfig, PipelineError, TaggerMode};

fn names(v: &[AnchoredTree]) -> Vec<&str> {
    let mut n: Vec<&str> = v.iter().map(|t| t.name()).collect();
    n.sort_unstable();
    n
}

fn select_as(words: &str, pos: Pos) -> Vec<Vec<AnchoredTree>> {
    let e = engine();
    let w: Vec<String> = words.split_whitespace().map(String::from).collect();
    let info = e.bundle.lexicon.analyze(&w);
    e.bundle.lexicon.select_trees(&e.bundle.grammar, &info, &vec![vec![pos]; w.len()])
}

#[test]
fn worked_example_derivation() {
    assert!(worked_example_problems().is_empty(), "{:?}", worked_example_problems());
    let r = parse(&PipelineConfig::default(), WORKED_SENTENCE);
    assert_eq!(r.parses.len(), 1);
    let b = xtag::evaluation::brackets(&r.parses[0].derived);
    assert!(b.spans.iter().any(|s| (s.start, s.end) == (0, 5)));
}

#[test]
fn worked_example_dependencies() {
    let r = parse(&PipelineConfig::default(), WORKED_SENTENCE);
    let d = &r.parses[0].derivation_tree;
    let mut arcs = dependency_arcs(d, &engine().bundle.grammar).unwrap();
    arcs.sort_unstable();
    assert_eq!(arcs, vec![(1, 0), (1, 3), (1, 4), (3, 2)]);
}

#[test]
fn suite_accepts_and_rejects_as_marked() {
    let items = suite::load();
    assert!(items.iter().filter(|i| i.grammatical).count() >= 30);
    assert!(items.iter().filter(|i| !i.grammatical).count() >= 15);
    assert_eq!(suite_mismatches(&PipelineConfig::default()), Vec::<String>::new());
    assert_eq!(suite_mismatches(&config(TaggerMode::Off, None)), Vec::<String>::new());
}

#[test]
fn every_derivation_yields_its_input() {
    assert_eq!(frontier_violations(), Vec::<String>::new());
}

#[test]
fn tagger_prunes_without_losing_covered_parses() {
    let b = blending();
    assert!(b.instances_on < b.instances_off, "{} vs {}", b.instances_on, b.instances_off);
    assert!(b.covered > 0);
    assert_eq!(b.changed, Vec::<String>::new());
}

#[test]
fn frequency_filter_retries_instead_of_failing() {
    assert_eq!(stat_filter_problems(), Vec::<String>::new());
    let r = parse(&config(TaggerMode::On, Some(3)), "I had a map yesterday");
    assert!(!r.retry);
}

#[test]
fn retry_on_failure_falls_back_to_morphology() {
    let s = "the men store maps";
    let on = parse(&config(TaggerMode::On, Some(3)), s);
    assert!(!on.accepted());
    let retry = parse(&config(TaggerMode::RetryOnFailure, Some(3)), s);
    assert!(retry.tagger_retry && retry.accepted());
    assert_eq!(retry.parses.len(), parse(&config(TaggerMode::Off, Some(3)), s).parses.len());
    // no retry when the first pass already succeeds
    assert!(!parse(&config(TaggerMode::RetryOnFailure, Some(3)), WORKED_SENTENCE).tagger_retry);
}

#[test]
fn noun_map_tree_counts_follow_number() {
    let sing = select_as("map", Pos::N);
    let plur = select_as("maps", Pos::N);
    assert_eq!(names(&sing[0]), ["αN", "αNXdxN", "βNn"]);
    assert_eq!(names(&plur[0]), ["αN", "αNXN", "αNXdxN", "βNn"]);
}

#[test]
fn frequency_ranks_compound_noun_above_bare_noun() {
    let stats = &engine().bundle.stats;
    assert!(stats.count("αN", Pos::N).is_none());
    assert!(stats.count("βNn", Pos::N).unwrap() > 0);
    let mut sel = select_as("map", Pos::N);
    sel[0].retain(|t| matches!(t.name(), "αN" | "βNn"));
    let kept = stat_top_k(&sel, stats, 1);
    assert_eq!(names(&kept[0]), ["βNn"]);
}

#[test]
fn past_auxiliary_carries_tense() {
    let sel = select_as("had", Pos::V);
    let aux = sel[0].iter().find(|t| t.name() == "βVvx").expect("auxiliary tree for had");
    assert!(aux.templates.iter().any(|t| t == "#VPr_past"));
    assert_eq!(aux.graph().atom_at(bottom_id(0), &[Sym::new("tense")]).map(Sym::as_str), Some("past"));
}

#[test]
fn unknown_words_are_flagged_and_guessed() {
    let r = parse(&PipelineConfig::default(), "I saw the blorf");
    assert!(r.tokens[3].info.unknown);
    assert!(!r.tokens[2].info.unknown);
    assert!(r.accepted());
}

#[test]
fn responses_are_deterministic() {
    let c = PipelineConfig::default();
    for it in suite::load().iter().take(10) {
        let s = it.sentence();
        assert_eq!(parse(&c, &s).to_json(), parse(&c, &s).to_json(), "{s}");
    }
}

#[test]
fn corpus_report_row() {
    let c = PipelineConfig::default();
    let sentences = xtag::pipeline::read_corpus(CORPUS10);
    let (report, outcomes) = engine().corpus_report(&c, "corpus10", &sentences);
    let counts: Vec<usize> = outcomes.iter().map(|o| o.parses).collect();
    assert_eq!(counts, [1, 1, 2, 2, 3, 4, 8, 0, 0, 0]);
    assert_eq!(report.avg_parses(), Some(3.0));
    assert_eq!(CorpusReport::header(), "Corpus # of Sents % Parsed Av. # of parses/sent");
    assert_eq!(report.row(), "corpus10 10 70.00% 3.00");
    let again = engine().corpus_report(&c, "corpus10", &sentences).0;
    assert_eq!(again.row(), report.row());
}

#[test]
fn evaluation_against_gold() {
    let c = PipelineConfig::default();
    let r = engine().evaluate(&c, "corpus10", CORPUS10, Some(CORPUS10_GOLD), BracketOptions::default()).unwrap();
    let p = r.parseval.unwrap();
    assert_eq!((p.correct, p.candidate_brackets, p.gold_brackets, p.crossings), (31, 39, 33, 2));
    assert_eq!((p.sentences, p.zero_crossing_sentences), (7, 5));
    assert!((p.recall() - 31.0 / 33.0).abs() < 1e-12);
    assert!((p.precision() - 31.0 / 39.0).abs() < 1e-12);

    let short: String = CORPUS10_GOLD.lines().filter(|l| l.starts_with('(')).skip(1).collect::<Vec<_>>().join("\n");
    let err = engine().evaluate(&c, "corpus10", CORPUS10, Some(&short), BracketOptions::default()).unwrap_err();
    assert!(matches!(err, PipelineError::GoldCount { corpus: 10, gold: 9 }), "{err}");
}
