//! Tree unigram frequencies keyed by (tree, POS): `tree TAB POS TAB count`.

use super::pos::Pos;
use super::LexiconError;
use crate::grammar::AnchoredTree;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatsDb {
    counts: BTreeMap<(String, Pos), u64>,
}

impl StatsDb {
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut db = StatsDb::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with(';') {
                continue;
            }
            let err = |m: String| LexiconError::Parse { file: "stats", line: i + 1, message: m };
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(err("expected `tree TAB POS TAB count`".into()));
            }
            let pos: Pos = f[1].parse().map_err(|e: super::pos::UnknownPos| err(e.to_string()))?;
            let n: u64 = f[2].trim().parse().map_err(|_| err(format!("bad count {:?}", f[2])))?;
            *db.counts.entry((f[0].to_string(), pos)).or_default() += n;
        }
        Ok(db)
    }

    pub fn add(&mut self, tree: &str, pos: Pos, n: u64) {
        *self.counts.entry((tree.to_string(), pos)).or_default() += n;
    }

    pub fn count(&self, tree: &str, pos: Pos) -> Option<u64> {
        self.counts.get(&(tree.to_string(), pos)).copied()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Serialized table sorted by tree then POS.
    pub fn to_text(&self) -> String {
        self.counts.iter().map(|((t, p), n)| format!("{t}\t{p}\t{n}\n")).collect()
    }
}

/// Keeps, per token and per selecting POS, the instances of the `k` most
/// frequent trees. Ties go to the lexicographically smaller name; trees
/// missing from the table rank after all listed ones.
pub fn stat_top_k(candidates: &[Vec<AnchoredTree>], stats: &StatsDb, k: usize) -> Vec<Vec<AnchoredTree>> {
    candidates
        .iter()
        .map(|token| {
            let mut by_pos: BTreeMap<Option<Pos>, BTreeSet<&str>> = BTreeMap::new();
            for inst in token {
                by_pos.entry(inst_pos(inst)).or_default().insert(inst.name());
            }
            let mut keep: BTreeSet<(Option<Pos>, &str)> = BTreeSet::new();
            for (pos, names) in by_pos {
                let mut ranked: Vec<&str> = names.into_iter().collect();
                ranked.sort_by_key(|name| {
                    let c = pos.and_then(|p| stats.count(name, p));
                    (c.is_none(), Reverse(c.unwrap_or(0)), *name)
                });
                keep.extend(ranked.into_iter().take(k).map(|n| (pos, n)));
            }
            token.iter().filter(|i| keep.contains(&(inst_pos(i), i.name()))).cloned().collect()
        })
        .collect()
}

fn inst_pos(inst: &AnchoredTree) -> Option<Pos> {
    inst.pos.as_deref().and_then(|p| p.parse().ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{load_grammar, Anchor};

    fn instances(names: &[&str]) -> Vec<AnchoredTree> {
        let text: String = names.iter().map(|n| format!("tree {n}\n (NP (N<>))\n")).collect();
        let g = load_grammar(&text, "").unwrap();
        names
            .iter()
            .map(|n| {
                let mut a = AnchoredTree::new(
                    g.tree(n).unwrap().clone(),
                    vec![Anchor { word: "w".into(), position: Some(0) }],
                )
                .unwrap();
                a.pos = Some("N".into());
                a
            })
            .collect()
    }

    #[test]
    fn top_three_by_count() {
        let stats = StatsDb::parse("αa\tN\t9\nαb\tN\t5\nαc\tN\t5\nαd\tN\t1\n").unwrap();
        let out = stat_top_k(&[instances(&["αd", "αc", "αb", "αa"])], &stats, 3);
        let names: Vec<&str> = out[0].iter().map(|i| i.name()).collect();
        assert_eq!(names, vec!["αc", "αb", "αa"]);
    }

    #[test]
    fn ties_and_missing_entries() {
        let stats = StatsDb::parse("αb\tN\t2\nαc\tN\t2\n").unwrap();
        let out = stat_top_k(&[instances(&["αa", "αc", "αb"])], &stats, 2);
        let names: Vec<&str> = out[0].iter().map(|i| i.name()).collect();
        assert_eq!(names, vec!["αc", "αb"]);
        let all = stat_top_k(&[instances(&["αa", "αc", "αb"])], &stats, 10);
        assert_eq!(all[0].len(), 3);
    }

    #[test]
    fn text_roundtrip() {
        let stats = StatsDb::parse("αb\tN\t2\nβx\tV\t7\n").unwrap();
        assert_eq!(StatsDb::parse(&stats.to_text()).unwrap(), stats);
    }
}
