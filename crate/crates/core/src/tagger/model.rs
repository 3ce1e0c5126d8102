//! Trigram HMM over the thirteen POS tags with add-λ smoothing.
//!
//! Transitions: `P(t3 | t1, t2) = (c(t1 t2 t3) + λ) / (c(t1 t2) + λ (T + 1))`
//! where the outcome set is the T tags plus STOP, and a sentence is padded
//! with two START symbols.
//!
//! Emissions over the training vocabulary V:
//! `(c(t, w) + λ) / (c(t) + λ |V|)` for known words. Closed-class tags give
//! unknown words zero mass; open-class tags reserve a constant `u` for the
//! unknown-word event and scale known-word mass by `1 - u`.

use super::TaggerError;
use crate::lexicon::Pos;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

pub const DEFAULT_LAMBDA: f64 = 0.1;
pub const DEFAULT_UNKNOWN_MASS: f64 = 0.05;
const HEADER: &str = "xtag-trigram v1";

pub type TaggedSentence = Vec<(String, Pos)>;

#[derive(Clone, Debug, PartialEq)]
pub struct TrigramModel {
    tags: Vec<Pos>,
    lambda: f64,
    unknown_mass: f64,
    /// (t1, t2, t3) with START = T and STOP = T as the outcome.
    trigram: HashMap<(usize, usize, usize), u64>,
    context: HashMap<(usize, usize), u64>,
    emission: HashMap<(usize, String), u64>,
    tag_count: Vec<u64>,
    vocab: BTreeSet<String>,
    sentences: usize,
}

fn normalize(word: &str) -> String {
    word.to_lowercase()
}

/// Parses `word_TAG word_TAG ...` lines.
pub fn parse_tagged_corpus(text: &str) -> Result<Vec<TaggedSentence>, TaggerError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        let mut sent = Vec::new();
        for tok in line.split_whitespace() {
            let (w, t) = tok
                .rsplit_once('_')
                .ok_or_else(|| TaggerError::Corpus { line: i + 1, message: format!("token {tok:?} lacks a tag") })?;
            let pos: Pos = t.parse().map_err(|_| TaggerError::Corpus { line: i + 1, message: format!("unknown tag {t:?}") })?;
            sent.push((w.to_string(), pos));
        }
        out.push(sent);
    }
    Ok(out)
}

impl TrigramModel {
    pub fn train(corpus: &[TaggedSentence]) -> Result<Self, TaggerError> {
        Self::train_with(corpus, &Pos::ALL, DEFAULT_LAMBDA, DEFAULT_UNKNOWN_MASS)
    }

    /// Training over an explicit tag vocabulary.
    pub fn train_with(corpus: &[TaggedSentence], tags: &[Pos], lambda: f64, unknown_mass: f64) -> Result<Self, TaggerError> {
        if corpus.iter().all(|s| s.is_empty()) {
            return Err(TaggerError::EmptyCorpus);
        }
        let t = tags.len();
        let mut m = TrigramModel {
            tags: tags.to_vec(),
            lambda,
            unknown_mass,
            trigram: HashMap::new(),
            context: HashMap::new(),
            emission: HashMap::new(),
            tag_count: vec![0; t],
            vocab: BTreeSet::new(),
            sentences: 0,
        };
        for sent in corpus.iter().filter(|s| !s.is_empty()) {
            let mut idx = Vec::with_capacity(sent.len());
            for (w, p) in sent {
                let k = m.tag_index(*p).ok_or(TaggerError::TagOutsideVocabulary(*p))?;
                idx.push(k);
                let w = normalize(w);
                *m.emission.entry((k, w.clone())).or_default() += 1;
                m.tag_count[k] += 1;
                m.vocab.insert(w);
            }
            let (mut a, mut b) = (t, t);
            for &c in idx.iter().chain(std::iter::once(&t)) {
                m.add_trigram(a, b, c, 1);
                a = b;
                b = c;
            }
            m.sentences += 1;
        }
        Ok(m)
    }

    fn add_trigram(&mut self, a: usize, b: usize, c: usize, n: u64) {
        *self.trigram.entry((a, b, c)).or_default() += n;
        *self.context.entry((a, b)).or_default() += n;
    }

    pub fn tags(&self) -> &[Pos] {
        &self.tags
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn set_lambda(&mut self, lambda: f64) {
        self.lambda = lambda;
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_known(&self, word: &str) -> bool {
        self.vocab.contains(&normalize(word))
    }

    pub fn tag_index(&self, p: Pos) -> Option<usize> {
        self.tags.iter().position(|&x| x == p)
    }

    /// Index of START in contexts and of STOP as an outcome.
    pub fn boundary(&self) -> usize {
        self.tags.len()
    }

    /// `P(c | a, b)`; `c == boundary()` is STOP, `a`/`b` may be START.
    pub fn transition(&self, a: usize, b: usize, c: usize) -> f64 {
        let num = self.trigram.get(&(a, b, c)).copied().unwrap_or(0) as f64 + self.lambda;
        let den = self.context.get(&(a, b)).copied().unwrap_or(0) as f64 + self.lambda * (self.tags.len() + 1) as f64;
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn emission(&self, tag: usize, word: &str) -> f64 {
        let w = normalize(word);
        let open = self.tags[tag].is_open();
        if !self.vocab.contains(&w) {
            return if open { self.unknown_mass } else { 0.0 };
        }
        let num = self.emission.get(&(tag, w)).copied().unwrap_or(0) as f64 + self.lambda;
        let den = self.tag_count[tag] as f64 + self.lambda * self.vocab.len() as f64;
        let p = if den == 0.0 { 0.0 } else { num / den };
        if open {
            (1.0 - self.unknown_mass) * p
        } else {
            p
        }
    }

    /// Natural-log joint probability of a tag sequence, STOP included.
    pub fn log_prob(&self, words: &[String], tags: &[usize]) -> f64 {
        let t = self.boundary();
        let (mut a, mut b) = (t, t);
        let mut lp = 0.0;
        for (w, &c) in words.iter().zip(tags) {
            lp += self.transition(a, b, c).ln() + self.emission(c, w).ln();
            a = b;
            b = c;
        }
        lp + self.transition(a, b, t).ln()
    }

    /// Vocabulary in sorted order.
    pub fn vocabulary(&self) -> impl Iterator<Item = &String> {
        self.vocab.iter()
    }

    pub fn to_text(&self) -> String {
        let t = self.boundary();
        let name = |k: usize, outcome: bool| -> String {
            if k == t {
                if outcome { "</s>".into() } else { "<s>".into() }
            } else {
                self.tags[k].code().to_string()
            }
        };
        let mut s = String::new();
        writeln!(s, "{HEADER}").unwrap();
        writeln!(s, "lambda {}", self.lambda).unwrap();
        writeln!(s, "unknown {}", self.unknown_mass).unwrap();
        writeln!(s, "sentences {}", self.sentences).unwrap();
        writeln!(s, "tags {}", self.tags.iter().map(|p| p.code()).collect::<Vec<_>>().join(" ")).unwrap();
        let tri: BTreeMap<_, _> = self.trigram.iter().collect();
        for ((a, b, c), n) in tri {
            writeln!(s, "trans {} {} {} {n}", name(*a, false), name(*b, false), name(*c, true)).unwrap();
        }
        let mut em: Vec<_> = self.emission.iter().collect();
        em.sort_by(|x, y| (x.0 .0, &x.0 .1).cmp(&(y.0 .0, &y.0 .1)));
        for ((k, w), n) in em {
            writeln!(s, "emit {} {w} {n}", self.tags[*k].code()).unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, TaggerError> {
        let bad = |line: usize, m: &str| TaggerError::Model { line, message: m.to_string() };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.trim() == HEADER => {}
            _ => return Err(bad(1, "missing header")),
        }
        let mut lambda = DEFAULT_LAMBDA;
        let mut unknown = DEFAULT_UNKNOWN_MASS;
        let mut sentences = 0;
        let mut tags: Vec<Pos> = Vec::new();
        let mut tri = Vec::new();
        let mut em = Vec::new();
        for (i, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            let ln = i + 1;
            match f.as_slice() {
                [] => {}
                ["lambda", v] => lambda = v.parse().map_err(|_| bad(ln, "bad lambda"))?,
                ["unknown", v] => unknown = v.parse().map_err(|_| bad(ln, "bad unknown mass"))?,
                ["sentences", v] => sentences = v.parse().map_err(|_| bad(ln, "bad count"))?,
                ["tags", rest @ ..] => {
                    tags = rest.iter().map(|t| t.parse().map_err(|_| bad(ln, "bad tag"))).collect::<Result<_, _>>()?
                }
                ["trans", a, b, c, n] => tri.push((ln, a.to_string(), b.to_string(), c.to_string(), n.to_string())),
                ["emit", t, w, n] => em.push((ln, t.to_string(), w.to_string(), n.to_string())),
                _ => return Err(bad(ln, "unrecognized line")),
            }
        }
        let t = tags.len();
        let mut m = TrigramModel {
            tag_count: vec![0; t],
            tags,
            lambda,
            unknown_mass: unknown,
            trigram: HashMap::new(),
            context: HashMap::new(),
            emission: HashMap::new(),
            vocab: BTreeSet::new(),
            sentences,
        };
        let index = |m: &TrigramModel, s: &str, ln: usize| -> Result<usize, TaggerError> {
            if s == "<s>" || s == "</s>" {
                return Ok(t);
            }
            let p: Pos = s.parse().map_err(|_| bad(ln, "bad tag"))?;
            m.tag_index(p).ok_or_else(|| bad(ln, "tag not in vocabulary"))
        };
        for (ln, a, b, c, n) in tri {
            let (a, b, c) = (index(&m, &a, ln)?, index(&m, &b, ln)?, index(&m, &c, ln)?);
            let n: u64 = n.parse().map_err(|_| bad(ln, "bad count"))?;
            m.add_trigram(a, b, c, n);
        }
        for (ln, tg, w, n) in em {
            let k = index(&m, &tg, ln)?;
            let n: u64 = n.parse().map_err(|_| bad(ln, "bad count"))?;
            *m.emission.entry((k, w.clone())).or_default() += n;
            m.tag_count[k] += n;
            m.vocab.insert(w);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn corpus(s: &str) -> Vec<TaggedSentence> {
        parse_tagged_corpus(s).unwrap()
    }

    #[test]
    fn single_observation_dominates() {
        let m = TrigramModel::train(&corpus("a_D map_N")).unwrap();
        let d = m.tag_index(Pos::D).unwrap();
        let n = m.tag_index(Pos::N).unwrap();
        let start = m.boundary();
        let best = (0..=m.boundary()).max_by(|&x, &y| m.transition(start, d, x).total_cmp(&m.transition(start, d, y)));
        assert_eq!(best, Some(n));
    }

    #[test]
    fn distributions_sum_to_one() {
        let m = TrigramModel::train(&corpus("a_D map_N slept_V\nI_Pron had_V a_D map_N")).unwrap();
        let t = m.boundary();
        for a in 0..=t {
            for b in 0..=t {
                let s: f64 = (0..=t).map(|c| m.transition(a, b, c)).sum();
                assert!((s - 1.0).abs() < 1e-9);
            }
        }
        let words: Vec<String> = m.vocabulary().cloned().collect();
        for k in 0..t {
            let mut s: f64 = words.iter().map(|w| m.emission(k, w)).sum();
            if m.tags()[k].is_open() {
                s += m.emission(k, "zzz-unseen");
            }
            assert!((s - 1.0).abs() < 1e-9, "tag {k} sums to {s}");
        }
    }

    #[test]
    fn zero_lambda_unseen_context() {
        let mut m = TrigramModel::train(&corpus("a_D map_N")).unwrap();
        m.set_lambda(0.0);
        let v = m.tag_index(Pos::V).unwrap();
        assert_eq!(m.transition(v, v, v), 0.0);
    }

    #[test]
    fn tag_outside_vocabulary() {
        let err = TrigramModel::train_with(&corpus("a_D map_N"), &[Pos::N], 0.1, 0.05).unwrap_err();
        assert_eq!(err, TaggerError::TagOutsideVocabulary(Pos::D));
        assert_eq!(TrigramModel::train(&[]).unwrap_err(), TaggerError::EmptyCorpus);
    }

    #[test]
    fn text_roundtrip() {
        let m = TrigramModel::train(&corpus("a_D map_N slept_V\nI_Pron had_V a_D map_N")).unwrap();
        let back = TrigramModel::from_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
    }
}
