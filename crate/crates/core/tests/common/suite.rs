//! The English regression suite: `+`/`-` lines of `word_TAG` tokens.

use xtag::lexicon::Pos;

pub const SUITE: &str = include_str!("../fixtures/english_suite.txt");
pub const CORPUS10: &str = include_str!("../fixtures/corpus10.txt");
pub const CORPUS10_GOLD: &str = include_str!("../fixtures/corpus10.gold");

#[derive(Debug, Clone)]
pub struct Item {
    pub grammatical: bool,
    pub words: Vec<String>,
    pub tags: Vec<Pos>,
}

impl Item {
    pub fn sentence(&self) -> String {
        self.words.join(" ")
    }
}

pub fn load() -> Vec<Item> {
    SUITE
        .lines()
        .filter(|l| l.starts_with('+') || l.starts_with('-'))
        .map(|l| {
            let (words, tags) = l[1..]
                .split_whitespace()
                .map(|t| {
                    let (w, p) = t.rsplit_once('_').unwrap();
                    (w.to_string(), p.parse::<Pos>().unwrap())
                })
                .unzip();
            Item { grammatical: l.starts_with('+'), words, tags }
        })
        .collect()
}
