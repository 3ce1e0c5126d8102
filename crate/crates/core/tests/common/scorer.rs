//! Brute-force bracket scorer and random tree generator.

use proptest::prelude::*;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    pub crossings: usize,
    pub correct: usize,
    pub recall: f64,
    pub precision: f64,
}

fn tokens(s: (usize, usize)) -> BTreeSet<usize> {
    (s.0..s.1).collect()
}

/// Compares spans as token sets: crossing means sharing a token while
/// neither set contains the other.
pub fn score(candidate: &[(usize, usize)], gold: &[(usize, usize)]) -> Score {
    let cand: BTreeSet<_> = candidate.iter().copied().collect();
    let gold: BTreeSet<_> = gold.iter().copied().collect();
    let mut correct = 0;
    let mut crossings = 0;
    for &c in &cand {
        if gold.contains(&c) {
            correct += 1;
        }
        let cs = tokens(c);
        let crosses = gold.iter().any(|&g| {
            let gs = tokens(g);
            !cs.is_disjoint(&gs) && !cs.is_subset(&gs) && !gs.is_subset(&cs)
        });
        if crosses {
            crossings += 1;
        }
    }
    let frac = |a: usize, b: usize| if b == 0 { 1.0 } else { a as f64 / b as f64 };
    Score { crossings, correct, recall: frac(correct, gold.len()), precision: frac(correct, cand.len()) }
}

/// Spans of width at least 2 in an s-expression over `n` bare tokens.
pub fn spans_of(tree: &str) -> Vec<(usize, usize)> {
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut pos = 0;
    let mut after_open = false;
    for tok in tree.replace('(', " ( ").replace(')', " ) ").split_whitespace() {
        match tok {
            "(" => {
                stack.push(pos);
                after_open = true;
            }
            ")" => {
                let start = stack.pop().unwrap();
                if pos - start >= 2 {
                    out.push((start, pos));
                }
            }
            _ if after_open => after_open = false,
            _ => pos += 1,
        }
    }
    out
}

fn build(lo: usize, hi: usize, cuts: &mut impl Iterator<Item = u8>, out: &mut String) {
    if hi - lo == 1 {
        out.push_str(&format!("w{lo}"));
        return;
    }
    // split [lo, hi) into 2..=3 parts, or leave it flat
    let c = cuts.next().unwrap_or(0);
    out.push_str("(X");
    if c.is_multiple_of(4) {
        for i in lo..hi {
            out.push_str(&format!(" w{i}"));
        }
    } else {
        let mid = lo + 1 + usize::from(c) % (hi - lo - 1);
        let parts: Vec<(usize, usize)> = if c % 4 == 3 && hi - mid >= 2 {
            let mid2 = mid + 1 + usize::from(c / 4) % (hi - mid - 1);
            vec![(lo, mid), (mid, mid2), (mid2, hi)]
        } else {
            vec![(lo, mid), (mid, hi)]
        };
        for (a, b) in parts {
            out.push(' ');
            build(a, b, cuts, out);
        }
    }
    out.push(')');
}

/// A random tree over `n` tokens `w0 .. w{n-1}`, driven by `cuts`.
pub fn tree_text(n: usize, cuts: &[u8]) -> String {
    let mut s = String::new();
    let mut it = cuts.iter().copied();
    if n == 1 {
        return "(X w0)".to_string();
    }
    build(0, n, &mut it, &mut s);
    s
}

/// Pairs of random trees over the same tokens, `n <= 10`.
pub fn tree_pair() -> impl Strategy<Value = (String, String)> {
    (1usize..=10, prop::collection::vec(any::<u8>(), 20), prop::collection::vec(any::<u8>(), 20))
        .prop_map(|(n, a, b)| (tree_text(n, &a), tree_text(n, &b)))
}

/// (candidate, gold, crossings, correct, recall, precision), worked by hand.
pub const HAND: [(&str, &str, usize, usize, f64, f64); 5] = [
    ("(S (X a b) c)", "(S (X a b) c)", 0, 2, 1.0, 1.0),
    ("(S a (X b c))", "(S (X a b) c)", 1, 1, 0.5, 0.5),
    ("(S a b c d)", "(S (X a b) (Y c d))", 0, 1, 1.0 / 3.0, 1.0),
    ("(S (X a b c) d e)", "(S a (Y b c d e))", 1, 1, 0.5, 0.5),
    ("(S (X (Y a b) c) (Z d e))", "(S (X a (Y b c)) d e)", 1, 2, 2.0 / 3.0, 0.5),
];
