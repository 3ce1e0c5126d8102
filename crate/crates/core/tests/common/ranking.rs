//! Minimal ambiguous phrases, one per preference heuristic, parsed with the
//! tagger and frequency filter off so every reading reaches the ranker.

use super::english::{config, parse};
use xtag::parser::StartCategory;
use xtag::pipeline::{PipelineConfig, TaggerMode};
use xtag::ranking::Weights;

pub struct Fixture {
    /// Zero-based heuristic that must separate the readings.
    pub heuristic: usize,
    pub start: &'static str,
    pub sentence: &'static str,
    pub preferred: &'static str,
}

pub const FIXTURES: [Fixture; 6] = [
    Fixture {
        heuristic: 0,
        start: "S",
        sentence: "I looked at the map",
        preferred: "(αnx0Vpnx1[looked,at] (subst @1 αNXN[I]) (subst @2.2.2 αNXdxN[map] (subst @1 αDXD[the])))",
    },
    Fixture {
        heuristic: 1,
        start: "S",
        sentence: "I saw the man with the telescope",
        preferred: "(αnx0Vnx1[saw] (subst @1 αNXN[I]) (subst @2.2 αNXdxN[man] (adjoin @0 βnxPnx[with] (subst @2.2 αNXdxN[telescope] (subst @1 αDXD[the]))) (subst @1 αDXD[the])))",
    },
    Fixture {
        heuristic: 2,
        start: "NP",
        sentence: "a dark blue map",
        preferred: "(αNXdxN[map] (subst @1 αDXD[a]) (adjoin @2 βAn[blue] (adjoin @0 βAn[dark])))",
    },
    Fixture {
        heuristic: 3,
        start: "NP",
        sentence: "the map store owner",
        preferred: "(αNXdxN[owner] (subst @1 αDXD[the]) (adjoin @2 βNn[store] (adjoin @1 βNn[map])))",
    },
    Fixture {
        heuristic: 4,
        start: "NP",
        sentence: "old maps and books",
        preferred: "(αNXN[maps] (adjoin @1 βn1CONJn2[and] (adjoin @0 βAn[old]) (subst @3 αN[books])))",
    },
    // "of" attachments are exempt from the attachment penalty, so the
    // with-phrase still prefers the nearest noun.
    Fixture {
        heuristic: 1,
        start: "S",
        sentence: "I saw the map of the city with the telescope",
        preferred: "(αnx0Vnx1[saw] (subst @1 αNXN[I]) (subst @2.2 αNXdxN[map] (adjoin @0 βnxPnx[of] (subst @2.2 αNXdxN[city] (adjoin @0 βnxPnx[with] (subst @2.2 αNXdxN[telescope] (subst @1 αDXD[the]))) (subst @1 αDXD[the]))) (subst @1 αDXD[the])))",
    },
];

pub fn fixture_config(f: &Fixture, weights: Weights) -> PipelineConfig {
    PipelineConfig {
        start: f.start.parse::<StartCategory>().unwrap(),
        weights,
        max_parses: usize::MAX,
        ..config(TaggerMode::Off, None)
    }
}

/// Fixtures whose preferred reading is not ranked first, or whose
/// alternatives are not strictly worse on the targeted heuristic.
pub fn ranking_problems() -> Vec<String> {
    let mut bad = Vec::new();
    for f in &FIXTURES {
        let r = parse(&fixture_config(f, Weights::default()), f.sentence);
        if r.parses.len() < 2 {
            bad.push(format!("{}: {} reading(s), expected ambiguity", f.sentence, r.parses.len()));
            continue;
        }
        if r.parses[0].derivation != f.preferred {
            bad.push(format!("{}: top is {}", f.sentence, r.parses[0].derivation));
            continue;
        }
        let best = r.parses[0].penalties.components()[f.heuristic];
        for alt in &r.parses[1..] {
            if alt.penalties.components()[f.heuristic] <= best {
                bad.push(format!("{}: {} not penalized by h{}", f.sentence, alt.derivation, f.heuristic + 1));
            }
        }
    }
    bad
}
