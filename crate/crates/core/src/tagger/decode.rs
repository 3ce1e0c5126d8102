//! List Viterbi over second-order states `(t_{i-1}, t_i)`.
//!
//! Each state keeps its N best partial paths. The score is additive and the
//! state captures everything the next transition depends on, so the N best
//! complete paths are always composed of per-state N-best prefixes.
//! Ties are broken by predecessor state index, then predecessor rank, so the
//! first sequence of `n_best(.., 1)` and `viterbi` always agree.

use super::model::TrigramModel;
use super::TaggerError;
use crate::lexicon::Pos;
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TagSequence {
    pub tags: Vec<Pos>,
    pub log_prob: f64,
}

#[derive(Clone, Copy)]
struct Entry {
    score: f64,
    /// Predecessor state index and rank within it.
    back: (usize, usize),
}

fn better(a: &Entry, b: &Entry) -> Ordering {
    b.score.total_cmp(&a.score).then(a.back.cmp(&b.back))
}

struct Trellis<'m> {
    model: &'m TrigramModel,
    t: usize,
}

impl Trellis<'_> {
    /// State `(prev, cur)` with `prev` in `0..=T` (T = START) and `cur` in `0..T`.
    fn state(&self, prev: usize, cur: usize) -> usize {
        prev * self.t + cur
    }

    fn split(&self, s: usize) -> (usize, usize) {
        (s / self.t, s % self.t)
    }

    fn states(&self) -> usize {
        (self.t + 1) * self.t
    }
}

/// Per position and state, the kept partial paths; plus the final list.
type Lattice = (Vec<Vec<Vec<Entry>>>, Vec<Entry>);

fn lattice(model: &TrigramModel, words: &[String], n: usize) -> Result<Lattice, TaggerError> {
    if words.is_empty() {
        return Err(TaggerError::EmptySentence);
    }
    if n == 0 {
        return Err(TaggerError::ZeroN);
    }
    let tr = Trellis { model, t: model.boundary() };
    let t = tr.t;
    let mut cols: Vec<Vec<Vec<Entry>>> = Vec::with_capacity(words.len());
    let mut first = vec![Vec::new(); tr.states()];
    for c in 0..t {
        let s = tr.model.transition(t, t, c).ln() + tr.model.emission(c, &words[0]).ln();
        if s > f64::NEG_INFINITY {
            first[tr.state(t, c)].push(Entry { score: s, back: (usize::MAX, 0) });
        }
    }
    cols.push(first);
    for w in &words[1..] {
        let prev = cols.last().unwrap();
        let mut col = vec![Vec::new(); tr.states()];
        let emissions: Vec<f64> = (0..t).map(|c| tr.model.emission(c, w).ln()).collect();
        for (ps, entries) in prev.iter().enumerate() {
            if entries.is_empty() {
                continue;
            }
            let (a, b) = tr.split(ps);
            for c in 0..t {
                let step = tr.model.transition(a, b, c).ln() + emissions[c];
                if step == f64::NEG_INFINITY {
                    continue;
                }
                let cell: &mut Vec<Entry> = &mut col[tr.state(b, c)];
                for (rank, e) in entries.iter().enumerate() {
                    cell.push(Entry { score: e.score + step, back: (ps, rank) });
                }
            }
        }
        for cell in &mut col {
            cell.sort_by(better);
            cell.truncate(n);
        }
        cols.push(col);
    }
    let mut finals = Vec::new();
    for (ps, entries) in cols.last().unwrap().iter().enumerate() {
        let (a, b) = tr.split(ps);
        let stop = model.transition(a, b, t).ln();
        if stop == f64::NEG_INFINITY {
            continue;
        }
        for (rank, e) in entries.iter().enumerate() {
            finals.push(Entry { score: e.score + stop, back: (ps, rank) });
        }
    }
    finals.sort_by(better);
    finals.truncate(n);
    Ok((cols, finals))
}

fn trace(model: &TrigramModel, cols: &[Vec<Vec<Entry>>], end: &Entry) -> TagSequence {
    let t = model.boundary();
    let mut tags = vec![Pos::N; cols.len()];
    let (mut state, mut rank) = end.back;
    for i in (0..cols.len()).rev() {
        tags[i] = model.tags()[state % t];
        let e = cols[i][state][rank];
        (state, rank) = e.back;
    }
    TagSequence { tags, log_prob: end.score }
}

/// The `n` most probable tag sequences, best first.
pub fn n_best(model: &TrigramModel, words: &[String], n: usize) -> Result<Vec<TagSequence>, TaggerError> {
    let (cols, finals) = lattice(model, words, n)?;
    Ok(finals.iter().map(|f| trace(model, &cols, f)).collect())
}

/// The single most probable tag sequence, or `None` if every sequence has
/// zero probability.
pub fn viterbi(model: &TrigramModel, words: &[String]) -> Result<Option<TagSequence>, TaggerError> {
    if words.is_empty() {
        return Err(TaggerError::EmptySentence);
    }
    let t = model.boundary();
    let idx = |prev: usize, cur: usize| prev * t + cur;
    let states = (t + 1) * t;
    let none = (f64::NEG_INFINITY, usize::MAX);
    let mut cols: Vec<Vec<(f64, usize)>> = Vec::with_capacity(words.len());
    let mut first = vec![none; states];
    for c in 0..t {
        let s = model.transition(t, t, c).ln() + model.emission(c, &words[0]).ln();
        if s > f64::NEG_INFINITY {
            first[idx(t, c)] = (s, usize::MAX);
        }
    }
    cols.push(first);
    for w in &words[1..] {
        let prev = cols.last().unwrap();
        let mut col = vec![none; states];
        for c in 0..t {
            let e = model.emission(c, w).ln();
            if e == f64::NEG_INFINITY {
                continue;
            }
            for (ps, &(score, _)) in prev.iter().enumerate() {
                if score == f64::NEG_INFINITY {
                    continue;
                }
                let (a, b) = (ps / t, ps % t);
                let s = score + (model.transition(a, b, c).ln() + e);
                let cell = &mut col[idx(b, c)];
                if s > f64::NEG_INFINITY && (s > cell.0 || cell.1 == usize::MAX) {
                    *cell = (s, ps);
                }
            }
        }
        cols.push(col);
    }
    let mut best = none;
    for (ps, &(score, _)) in cols.last().unwrap().iter().enumerate() {
        if score == f64::NEG_INFINITY {
            continue;
        }
        let s = score + model.transition(ps / t, ps % t, t).ln();
        if s > f64::NEG_INFINITY && (s > best.0 || best.1 == usize::MAX) {
            best = (s, ps);
        }
    }
    if best.1 == usize::MAX {
        return Ok(None);
    }
    let mut tags = vec![Pos::N; words.len()];
    let mut state = best.1;
    for i in (0..words.len()).rev() {
        tags[i] = model.tags()[state % t];
        state = cols[i][state].1;
    }
    Ok(Some(TagSequence { tags, log_prob: best.0 }))
}

/// Per token, keeps the morphological POS that some N-best sequence assigns
/// there; an empty intersection keeps the morphological set. An empty
/// `nbest` means tagging is disabled.
pub fn blend(morph_pos: &[Vec<Pos>], nbest: &[TagSequence]) -> Result<Vec<Vec<Pos>>, TaggerError> {
    for s in nbest {
        if s.tags.len() != morph_pos.len() {
            return Err(TaggerError::LengthMismatch { sentence: morph_pos.len(), sequence: s.tags.len() });
        }
    }
    if nbest.is_empty() {
        return Ok(morph_pos.to_vec());
    }
    Ok(morph_pos
        .iter()
        .enumerate()
        .map(|(i, set)| {
            let kept: Vec<Pos> = set.iter().copied().filter(|p| nbest.iter().any(|s| s.tags[i] == *p)).collect();
            if kept.is_empty() {
                set.clone()
            } else {
                kept
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tagger::parse_tagged_corpus;

    fn model() -> TrigramModel {
        let c = parse_tagged_corpus("I_Pron had_V a_D map_N\nthe_D map_N slept_V\nthey_Pron map_V roads_N").unwrap();
        TrigramModel::train(&c).unwrap()
    }

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn one_best_is_viterbi() {
        let m = model();
        for s in ["I had a map", "map", "they map the map", "zorp had a blick"] {
            let w = words(s);
            let nb = n_best(&m, &w, 1).unwrap();
            let v = viterbi(&m, &w).unwrap().unwrap();
            assert_eq!(nb[0].tags, v.tags);
            assert!((nb[0].log_prob - v.log_prob).abs() < 1e-9);
            assert!((m.log_prob(&w, &v.tags.iter().map(|p| m.tag_index(*p).unwrap()).collect::<Vec<_>>()) - v.log_prob).abs() < 1e-9);
        }
    }

    #[test]
    fn ordered_scores() {
        let m = model();
        let nb = n_best(&m, &words("the map had a map"), 20).unwrap();
        assert_eq!(nb.len(), 20);
        assert!(nb.windows(2).all(|p| p[0].log_prob >= p[1].log_prob));
    }

    #[test]
    fn errors() {
        let m = model();
        assert_eq!(n_best(&m, &[], 3).unwrap_err(), TaggerError::EmptySentence);
        assert_eq!(n_best(&m, &words("map"), 0).unwrap_err(), TaggerError::ZeroN);
    }

    #[test]
    fn blend_contract() {
        let seq = |t: Vec<Pos>| TagSequence { tags: t, log_prob: -1.0 };
        let morph = vec![vec![Pos::N, Pos::V], vec![Pos::Comp]];
        let nb = vec![seq(vec![Pos::N, Pos::P]), seq(vec![Pos::N, Pos::P])];
        assert_eq!(blend(&morph, &nb).unwrap(), vec![vec![Pos::N], vec![Pos::Comp]]);
        assert_eq!(blend(&morph, &[]).unwrap(), morph);
        assert!(matches!(blend(&morph, &[seq(vec![Pos::N])]), Err(TaggerError::LengthMismatch { .. })));
    }
}
