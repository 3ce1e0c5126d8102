//! Bracket scoring, corpus reports and derivation-level agreement.
//!
//! Gold trees are read one per line as s-expressions: `(S (NP (N I)) (VP ...))`.
//! A bare atom is a token; `\(`, `\)`, `\\` and an escaped space stand for
//! themselves inside atoms. Lines that are blank or start with `;` are skipped.

use crate::grammar::{Grammar, NodeKind, ParseTree};
use crate::parser::{derived_tree, Derivation, ReplayError};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("candidate has {candidate} tokens but gold has {gold}")]
    LengthMismatch { candidate: usize, gold: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bracket {
    pub start: usize,
    pub end: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Bracket {
    /// Partial overlap with neither span containing the other.
    pub fn crosses(&self, other: &Bracket) -> bool {
        (self.start < other.start && other.start < self.end && self.end < other.end)
            || (other.start < self.start && self.start < other.end && other.end < self.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bracketing {
    pub len: usize,
    pub spans: BTreeSet<Bracket>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BracketOptions {
    pub labeled: bool,
    /// Keep the span covering the whole sentence.
    pub include_full_span: bool,
    /// Narrowest span kept.
    pub min_width: usize,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions { labeled: false, include_full_span: true, min_width: 2 }
    }
}

impl Bracketing {
    pub fn from_spans(len: usize, spans: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Bracketing { len, spans: spans.into_iter().map(|(start, end)| Bracket { start, end, label: None }).collect() }
    }

    fn build(len: usize, raw: Vec<(String, usize, usize)>, opts: BracketOptions) -> Self {
        let spans = raw
            .into_iter()
            .filter(|(_, s, e)| e - s >= opts.min_width)
            .filter(|(_, s, e)| opts.include_full_span || (*s, *e) != (0, len))
            .map(|(l, start, end)| Bracket { start, end, label: opts.labeled.then_some(l) })
            .collect();
        Bracketing { len, spans }
    }
}

/// Unlabeled spans of a derived tree's nonterminal nodes.
pub fn brackets(t: &ParseTree) -> Bracketing {
    brackets_with(t, BracketOptions::default())
}

pub fn brackets_with(t: &ParseTree, opts: BracketOptions) -> Bracketing {
    fn go(t: &ParseTree, out: &mut Vec<(String, usize, usize)>) {
        if t.kind != NodeKind::Terminal && t.span.1 > t.span.0 {
            out.push((t.label.clone(), t.span.0, t.span.1));
        }
        t.children.iter().for_each(|c| go(c, out));
    }
    let mut raw = Vec::new();
    go(t, &mut raw);
    Bracketing::build(t.span.1, raw, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParsevalResult {
    pub crossings: usize,
    pub correct: usize,
    pub candidate_brackets: usize,
    pub gold_brackets: usize,
    /// 1 when there is nothing to find.
    pub recall: f64,
    /// 1 when nothing was proposed.
    pub precision: f64,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

pub fn parseval(candidate: &Bracketing, gold: &Bracketing) -> Result<ParsevalResult, EvalError> {
    if candidate.len != gold.len {
        return Err(EvalError::LengthMismatch { candidate: candidate.len, gold: gold.len });
    }
    let correct = candidate.spans.intersection(&gold.spans).count();
    let crossings = candidate.spans.iter().filter(|c| gold.spans.iter().any(|g| c.crosses(g))).count();
    Ok(ParsevalResult {
        crossings,
        correct,
        candidate_brackets: candidate.spans.len(),
        gold_brackets: gold.spans.len(),
        recall: ratio(correct, gold.spans.len()),
        precision: ratio(correct, candidate.spans.len()),
    })
}

/// Bracket scores summed over sentences.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CorpusParseval {
    pub sentences: usize,
    pub zero_crossing_sentences: usize,
    pub crossings: usize,
    pub correct: usize,
    pub candidate_brackets: usize,
    pub gold_brackets: usize,
}

impl CorpusParseval {
    pub fn add(&mut self, r: &ParsevalResult) {
        self.sentences += 1;
        self.zero_crossing_sentences += usize::from(r.crossings == 0);
        self.crossings += r.crossings;
        self.correct += r.correct;
        self.candidate_brackets += r.candidate_brackets;
        self.gold_brackets += r.gold_brackets;
    }

    pub fn merge(&mut self, other: &CorpusParseval) {
        self.sentences += other.sentences;
        self.zero_crossing_sentences += other.zero_crossing_sentences;
        self.crossings += other.crossings;
        self.correct += other.correct;
        self.candidate_brackets += other.candidate_brackets;
        self.gold_brackets += other.gold_brackets;
    }

    pub fn zero_crossing_pct(&self) -> f64 {
        100.0 * ratio(self.zero_crossing_sentences, self.sentences)
    }

    pub fn mean_crossings(&self) -> f64 {
        if self.sentences == 0 {
            0.0
        } else {
            self.crossings as f64 / self.sentences as f64
        }
    }

    pub fn recall(&self) -> f64 {
        ratio(self.correct, self.gold_brackets)
    }

    pub fn precision(&self) -> f64 {
        ratio(self.correct, self.candidate_brackets)
    }
}

impl fmt::Display for CorpusParseval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Crossing Brackets | Mean Crossings | Recall | Precision")?;
        write!(
            f,
            "{:.2}% | {:.2} | {:.2}% | {:.2}%",
            self.zero_crossing_pct(),
            self.mean_crossings(),
            100.0 * self.recall(),
            100.0 * self.precision()
        )
    }
}

/// Coverage of one corpus: sentences, share parsed and mean parse count.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CorpusReport {
    pub name: String,
    pub sentences: usize,
    pub parsed: usize,
    /// Parses summed over parsed sentences.
    pub total_parses: usize,
}

impl CorpusReport {
    /// `outcomes[i]` is the parse count of sentence `i`, zero when it failed.
    pub fn from_counts(name: impl Into<String>, outcomes: &[usize]) -> Self {
        let parsed = outcomes.iter().filter(|&&c| c > 0).count();
        CorpusReport { name: name.into(), sentences: outcomes.len(), parsed, total_parses: outcomes.iter().sum() }
    }

    pub fn parsed_pct(&self) -> Option<f64> {
        (self.sentences > 0).then(|| 100.0 * self.parsed as f64 / self.sentences as f64)
    }

    pub fn avg_parses(&self) -> Option<f64> {
        (self.parsed > 0).then(|| self.total_parses as f64 / self.parsed as f64)
    }

    pub fn header() -> &'static str {
        "Corpus # of Sents % Parsed Av. # of parses/sent"
    }

    /// `corpus10 10 70.00% 3.00`.
    pub fn row(&self) -> String {
        let pct = self.parsed_pct().map_or("n/a".to_string(), |p| format!("{p:.2}%"));
        let avg = self.avg_parses().map_or("n/a".to_string(), |a| format!("{a:.2}"));
        format!("{} {} {} {}", self.name, self.sentences, pct, avg)
    }
}

/// A gold-standard tree. Leaves are tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoldTree {
    Token(String),
    Node { label: String, children: Vec<GoldTree> },
}

impl GoldTree {
    pub fn tokens(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            GoldTree::Token(t) => out.push(t),
            GoldTree::Node { children, .. } => children.iter().for_each(|c| c.collect(out)),
        }
    }

    pub fn brackets(&self, opts: BracketOptions) -> Bracketing {
        fn go(t: &GoldTree, next: &mut usize, out: &mut Vec<(String, usize, usize)>) {
            match t {
                GoldTree::Token(_) => *next += 1,
                GoldTree::Node { label, children } => {
                    let start = *next;
                    children.iter().for_each(|c| go(c, next, out));
                    out.push((label.clone(), start, *next));
                }
            }
        }
        let (mut next, mut raw) = (0, Vec::new());
        go(self, &mut next, &mut raw);
        Bracketing::build(next, raw, opts)
    }
}

#[derive(Debug, PartialEq)]
enum Lex {
    Open,
    Close,
    Atom(String),
}

fn lex(s: &str) -> Result<Vec<Lex>, String> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' => out.push(Lex::Open),
            ')' => out.push(Lex::Close),
            c if c.is_whitespace() => {}
            _ => {
                let mut atom = String::new();
                let mut c = Some(c);
                while let Some(ch) = c {
                    if ch == '\\' {
                        atom.push(chars.next().ok_or("dangling escape")?);
                    } else {
                        atom.push(ch);
                    }
                    match chars.peek() {
                        Some(&n) if n != '(' && n != ')' && !n.is_whitespace() => c = chars.next(),
                        _ => c = None,
                    }
                }
                out.push(Lex::Atom(atom));
            }
        }
    }
    Ok(out)
}

/// Parses one bracketed tree.
pub fn parse_sexpr(s: &str) -> Result<GoldTree, String> {
    let toks = lex(s)?;
    let mut pos = 0;
    let tree = sexpr_node(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err("trailing input after tree".into());
    }
    Ok(tree)
}

fn sexpr_node(toks: &[Lex], pos: &mut usize) -> Result<GoldTree, String> {
    match toks.get(*pos) {
        Some(Lex::Atom(a)) => {
            *pos += 1;
            Ok(GoldTree::Token(a.clone()))
        }
        Some(Lex::Open) => {
            *pos += 1;
            let label = match toks.get(*pos) {
                Some(Lex::Atom(a)) => a.clone(),
                _ => return Err("expected a label after '('".into()),
            };
            *pos += 1;
            let mut children = Vec::new();
            loop {
                match toks.get(*pos) {
                    Some(Lex::Close) => {
                        *pos += 1;
                        break;
                    }
                    None => return Err("unbalanced parentheses".into()),
                    _ => children.push(sexpr_node(toks, pos)?),
                }
            }
            if children.is_empty() {
                return Err(format!("node {label} has no children"));
            }
            Ok(GoldTree::Node { label, children })
        }
        Some(Lex::Close) => Err("unexpected ')'".into()),
        None => Err("empty tree".into()),
    }
}

/// One tree per non-blank, non-comment line.
pub fn read_treebank(text: &str) -> Result<Vec<GoldTree>, EvalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with(';'))
        .map(|(i, l)| parse_sexpr(l).map_err(|message| EvalError::Syntax { line: i + 1, message }))
        .collect()
}

/// Head-to-dependent arcs of a derivation, as frontier positions of each
/// tree's first anchor. Positions come from replay, so derivations read
/// from text work too.
pub fn dependency_arcs(d: &Derivation, grammar: &Grammar) -> Result<Vec<(usize, usize)>, ReplayError> {
    let tree = derived_tree(d, grammar)?;
    let mut first_anchor: BTreeMap<usize, usize> = BTreeMap::new();
    fn leaves(t: &ParseTree, out: &mut BTreeMap<usize, usize>) {
        if t.kind == NodeKind::Anchor && t.children.is_empty() {
            out.entry(t.part).or_insert(t.span.0);
        }
        t.children.iter().for_each(|c| leaves(c, out));
    }
    leaves(&tree, &mut first_anchor);
    // parts are numbered in derivation preorder
    let mut arcs = Vec::new();
    let mut next = 0;
    fn go(d: &Derivation, next: &mut usize, anchors: &BTreeMap<usize, usize>, arcs: &mut Vec<(usize, usize)>) {
        let me = *next;
        *next += 1;
        for e in &d.children {
            let child = *next;
            go(&e.child, next, anchors, arcs);
            if let (Some(&h), Some(&c)) = (anchors.get(&me), anchors.get(&child)) {
                arcs.push((h, c));
            }
        }
    }
    go(d, &mut next, &first_anchor, &mut arcs);
    arcs.sort_unstable();
    Ok(arcs)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct DependencyScore {
    pub sentences: usize,
    pub exact: usize,
    pub correct_arcs: usize,
    pub gold_arcs: usize,
}

impl DependencyScore {
    pub fn add(&mut self, candidate: &Derivation, gold: &Derivation, grammar: &Grammar) -> Result<(), ReplayError> {
        let (c, g) = (dependency_arcs(candidate, grammar)?, dependency_arcs(gold, grammar)?);
        self.sentences += 1;
        self.exact += usize::from(candidate == gold);
        let gold_set: BTreeSet<_> = g.iter().collect();
        self.correct_arcs += c.iter().collect::<BTreeSet<_>>().intersection(&gold_set).count();
        self.gold_arcs += g.len();
        Ok(())
    }

    pub fn arc_accuracy(&self) -> f64 {
        ratio(self.correct_arcs, self.gold_arcs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gold_reader() {
        let t = parse_sexpr("(S (NP a b) c)").unwrap();
        assert_eq!(t.tokens(), vec!["a", "b", "c"]);
        let b = t.brackets(BracketOptions::default());
        assert_eq!(b, Bracketing::from_spans(3, [(0, 2), (0, 3)]));
        let esc = parse_sexpr(r"(X a\(b c\ d)").unwrap();
        assert_eq!(esc.tokens(), vec!["a(b", "c d"]);
        assert!(parse_sexpr("(S a").is_err());
        assert!(parse_sexpr("(S)").is_err());
        assert!(parse_sexpr("(S a) b").is_err());
    }

    #[test]
    fn options() {
        let t = parse_sexpr("(S (NP (D a) (N b)) (VP c))").unwrap();
        let no_root = t.brackets(BracketOptions { include_full_span: false, ..Default::default() });
        assert_eq!(no_root, Bracketing::from_spans(3, [(0, 2)]));
        let all = t.brackets(BracketOptions { min_width: 1, labeled: true, ..Default::default() });
        assert_eq!(all.spans.len(), 5);
    }

    #[test]
    fn report_rows() {
        let r = CorpusReport::from_counts("WSJ", &[1, 0, 2]);
        assert_eq!(r.row(), "WSJ 3 66.67% 1.50");
        assert_eq!(CorpusReport::from_counts("empty", &[]).row(), "empty 0 n/a n/a");
        assert_eq!(CorpusReport::from_counts("none", &[0, 0]).row(), "none 2 0.00% n/a");
    }
}
