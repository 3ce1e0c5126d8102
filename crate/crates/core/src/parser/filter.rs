use super::chart::{parse, ParseForest};
use super::{ParseError, ParserOptions};
use crate::grammar::AnchoredTree;
use crate::lexicon::{obligatory_layout, stat_top_k, StatsDb};

/// Drops trees that cannot fit the sentence around their anchor.
pub fn span_filter(candidates: &[Vec<AnchoredTree>], n: usize) -> Vec<Vec<AnchoredTree>> {
    candidates
        .iter()
        .map(|list| {
            list.iter()
                .filter(|inst| {
                    let (total, left, right) = obligatory_layout(inst);
                    match inst.position() {
                        Some(p) => total <= n && left <= p && right < n - p,
                        None => total <= n,
                    }
                })
                .cloned()
                .collect()
        })
        .collect()
}

/// Parses with the `k` most frequent trees per token first and falls back to
/// every candidate when that finds nothing. `k = usize::MAX` disables the
/// filter. The flag reports whether the fallback ran.
pub fn parse_with_retry(
    tokens: &[String],
    anchored: &[Vec<AnchoredTree>],
    stats: &StatsDb,
    k: usize,
    opts: &ParserOptions,
) -> Result<(ParseForest, bool), ParseError> {
    if k == 0 {
        return Err(ParseError::ZeroK);
    }
    if k == usize::MAX {
        return Ok((parse(tokens, anchored, opts)?, false));
    }
    let filtered = stat_top_k(anchored, stats, k);
    let first = parse(tokens, &filtered, opts)?;
    if !first.is_empty() {
        return Ok((first, false));
    }
    let unchanged = filtered.iter().zip(anchored).all(|(a, b)| a.len() == b.len());
    if unchanged {
        return Ok((first, false));
    }
    Ok((parse(tokens, anchored, opts)?, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{load_grammar, Anchor};

    fn inst(g: &crate::grammar::Grammar, name: &str, p: usize) -> AnchoredTree {
        AnchoredTree::new(g.tree(name).unwrap().clone(), vec![Anchor { word: "w".into(), position: Some(p) }]).unwrap()
    }

    #[test]
    fn room_around_the_anchor() {
        let g = load_grammar(
            "tree αtrans\n (S (NP!) (VP (V<>) (NP!)))\ntree αintrans\n (S (V<>))\ntree αditrans\n (S (NP!) (VP (V<>) (NP!) (NP!)))\n",
            "",
        )
        .unwrap();
        let out = span_filter(&[vec![inst(&g, "αtrans", 0), inst(&g, "αintrans", 0)], vec![], vec![]], 3);
        let names: Vec<&str> = out[0].iter().map(|i| i.name()).collect();
        assert_eq!(names, vec!["αintrans"]);
        let out = span_filter(&[vec![inst(&g, "αintrans", 0)]], 1);
        assert_eq!(out[0].len(), 1);
        let out = span_filter(&[vec![], vec![inst(&g, "αditrans", 1)], vec![]], 3);
        assert!(out[1].is_empty());
    }
}
