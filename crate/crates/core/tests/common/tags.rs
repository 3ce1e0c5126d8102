//! Exhaustive tag-sequence enumeration.

use xtag::lexicon::Pos;
use xtag::tagger::{n_best, parse_tagged_corpus, TrigramModel};

/// Every tag sequence of non-zero probability with its log-probability,
/// best first.
pub fn all_sequences(model: &TrigramModel, words: &[String]) -> Vec<(Vec<usize>, f64)> {
    let t = model.tags().len();
    let n = words.len();
    let mut out = Vec::new();
    let mut seq = vec![0usize; n];
    loop {
        let lp = model.log_prob(words, &seq);
        if lp > f64::NEG_INFINITY {
            out.push((seq.clone(), lp));
        }
        let mut i = n;
        loop {
            if i == 0 {
                out.sort_by(|a, b| b.1.total_cmp(&a.1));
                return out;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < t {
                break;
            }
            seq[i] = 0;
        }
    }
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

pub const FOUR: [Pos; 4] = [Pos::D, Pos::N, Pos::V, Pos::Pron];

pub const SMALL_CORPUS: &str = "\
I_Pron had_V a_D map_N
the_D map_N slept_V
they_Pron map_V the_D roads_N
he_Pron saw_V the_D man_N
a_D man_N saw_V them_Pron
";

pub const FIXTURE_SENTENCES: [&str; 6] =
    ["I had a map", "the map slept", "they map the roads", "map", "a man saw the map", "he had them"];

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

pub fn small_model() -> TrigramModel {
    TrigramModel::train_with(&parse_tagged_corpus(SMALL_CORPUS).unwrap(), &FOUR, 0.1, 0.05).unwrap()
}

/// n_best(n) against the exhaustive list: scores agree position by
/// position and each returned sequence carries its own true score.
pub fn check_against_enumeration(model: &TrigramModel, w: &[String], n: usize) -> Result<(), String> {
    let all = all_sequences(model, w);
    let got = n_best(model, w, n).map_err(|e| e.to_string())?;
    if got.len() != n.min(all.len()) {
        return Err(format!("{} sequences, expected {}", got.len(), n.min(all.len())));
    }
    for (i, s) in got.iter().enumerate() {
        if !close(s.log_prob, all[i].1) {
            return Err(format!("rank {i}: {} vs {}", s.log_prob, all[i].1));
        }
        let idx: Vec<usize> = s.tags.iter().map(|p| model.tag_index(*p).unwrap()).collect();
        if !close(model.log_prob(w, &idx), s.log_prob) {
            return Err(format!("rank {i}: reported score is not the sequence's score"));
        }
        // without a near-tie the sequence itself is determined
        let tied = all.iter().filter(|(_, lp)| close(*lp, all[i].1)).count() > 1;
        if !tied && idx != all[i].0 {
            return Err(format!("rank {i}: wrong sequence"));
        }
    }
    let distinct: std::collections::BTreeSet<_> = got.iter().map(|s| s.tags.clone()).collect();
    if distinct.len() != got.len() {
        return Err("duplicate sequences".into());
    }
    Ok(())
}
