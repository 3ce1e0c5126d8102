//! Tree selection: from tagged tokens to anchored elementary trees.

use super::morph::{default_pos, morph_equations, MorphDb, MorphEntry};
use super::pos::Pos;
use super::synt::{SyntDb, SyntEntry};
use crate::grammar::{Anchor, AnchoredTree, Equation, Grammar, NodeKind};
use serde::Serialize;

/// Morphological view of one input token.
#[derive(Clone, Debug, Serialize)]
pub struct TokenInfo {
    pub word: String,
    pub position: usize,
    pub morph: Vec<MorphEntry>,
    /// True when the word is missing from the morphological database.
    pub unknown: bool,
    /// Candidate parts of speech, most likely first for unknown words.
    pub pos: Vec<Pos>,
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    pub morph: MorphDb,
    pub synt: SyntDb,
}

impl Lexicon {
    pub fn new(morph: MorphDb, synt: SyntDb) -> Self {
        Lexicon { morph, synt }
    }

    pub fn analyze(&self, tokens: &[String]) -> Vec<TokenInfo> {
        tokens
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let morph: Vec<MorphEntry> = self.morph.lookup(w).into_iter().cloned().collect();
                let unknown = morph.is_empty();
                let pos = if unknown {
                    default_pos(w, i == 0)
                } else {
                    let mut p: Vec<Pos> = Vec::new();
                    for e in &morph {
                        if !p.contains(&e.pos) {
                            p.push(e.pos);
                        }
                    }
                    p
                };
                TokenInfo { word: w.clone(), position: i, morph, unknown, pos }
            })
            .collect()
    }

    /// Anchored trees per token. `pos_sets[i]` restricts the parts of speech
    /// considered for token `i`; a multi-anchor tree is listed under its
    /// first anchor.
    pub fn select_trees(&self, grammar: &Grammar, tokens: &[TokenInfo], pos_sets: &[Vec<Pos>]) -> Vec<Vec<AnchoredTree>> {
        let mut out: Vec<Vec<AnchoredTree>> = vec![Vec::new(); tokens.len()];
        for (i, tok) in tokens.iter().enumerate() {
            for &pos in &pos_sets[i] {
                for (root, features) in readings(tok, pos) {
                    let entries: Vec<&SyntEntry> = if tok.unknown || root == "*" {
                        self.synt.lookup("*", pos)
                    } else {
                        self.synt.lookup(&root, pos)
                    };
                    for e in entries {
                        for anchors in co_anchor_sequences(e, tokens, pos_sets, i) {
                            self.instantiate(grammar, e, tokens, &anchors, pos, &features, &mut out[i]);
                        }
                    }
                }
            }
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn instantiate(
        &self,
        grammar: &Grammar,
        e: &SyntEntry,
        tokens: &[TokenInfo],
        anchors: &[(usize, Vec<String>)],
        pos: Pos,
        first_features: &[String],
        out: &mut Vec<AnchoredTree>,
    ) {
        let lexemes = e.lexemes();
        let mut groups: Vec<Vec<Equation>> = Vec::new();
        let mut inline = Vec::new();
        for f in &e.fs {
            if let Some(t) = grammar.template(f) {
                groups.push(t.to_vec());
            } else if let Ok(eq) = f.parse::<Equation>() {
                inline.push(eq);
            }
        }
        groups.push(inline);
        for (j, (_, feats)) in anchors.iter().enumerate() {
            let feats = if j == 0 { first_features } else { feats.as_slice() };
            let node = if j == 0 { "anchor".to_string() } else { format!("anchor{}", j + 1) };
            groups.push(morph_equations(lexemes[j].1, feats, &node));
        }
        for name in e.tree_names(grammar) {
            let Some(tree) = grammar.tree(&name) else { continue };
            if tree.anchors().len() != anchors.len() {
                continue;
            }
            let bound = anchors
                .iter()
                .map(|(p, _)| Anchor { word: tokens[*p].word.clone(), position: Some(*p) })
                .collect();
            let Ok(mut inst) = AnchoredTree::with_equations(tree.clone(), bound, &groups) else { continue };
            inst.pos = Some(pos.code().to_string());
            inst.entry = Some(e.index.clone());
            inst.templates = e.fs.clone();
            let duplicate = out.iter().any(|o| {
                o.tree.name == inst.tree.name && o.anchors == inst.anchors && o.graph() == inst.graph()
            });
            if !duplicate {
                out.push(inst);
            }
        }
    }
}

/// (root, inflection features) readings of a token under one POS.
fn readings(tok: &TokenInfo, pos: Pos) -> Vec<(String, Vec<String>)> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for e in tok.morph.iter().filter(|e| e.pos == pos) {
        let r = (e.root.clone(), e.features.clone());
        if !out.contains(&r) {
            out.push(r);
        }
    }
    if out.is_empty() {
        out.push(("*".to_string(), Vec::new()));
    }
    out
}

/// Every way to bind the entry's lexemes to increasing token positions,
/// starting with `first`. Each binding carries the co-anchors' features.
fn co_anchor_sequences(
    e: &SyntEntry,
    tokens: &[TokenInfo],
    pos_sets: &[Vec<Pos>],
    first: usize,
) -> Vec<Vec<(usize, Vec<String>)>> {
    let lexemes = e.lexemes();
    let mut partial: Vec<Vec<(usize, Vec<String>)>> = vec![vec![(first, Vec::new())]];
    for &(word, pos) in &lexemes[1..] {
        let mut next = Vec::new();
        for seq in &partial {
            let after = seq.last().unwrap().0 + 1;
            for (j, tok) in tokens.iter().enumerate().skip(after) {
                if !pos_sets[j].contains(&pos) {
                    continue;
                }
                if let Some(m) = tok.morph.iter().find(|m| m.root == word && m.pos == pos) {
                    let mut s = seq.clone();
                    s.push((j, m.features.clone()));
                    next.push(s);
                }
            }
        }
        partial = next;
    }
    partial
}

/// Selection for grammars whose anchors are plain terminal symbols: every
/// single-anchor tree whose anchor label equals the token is chosen.
pub fn select_by_anchor_label(grammar: &Grammar, tokens: &[String]) -> Vec<Vec<AnchoredTree>> {
    tokens
        .iter()
        .enumerate()
        .map(|(i, w)| {
            grammar
                .trees()
                .filter(|t| {
                    let anchors = t.anchors();
                    anchors.len() == 1 && t.flat()[anchors[0] as usize].label.as_str() == w
                })
                .filter_map(|t| {
                    AnchoredTree::new(t.clone(), vec![Anchor { word: w.clone(), position: Some(i) }]).ok()
                })
                .collect()
        })
        .collect()
}

/// Obligatory frontier items (terminals, slots and anchors) of a tree, and
/// how many of them lie left and right of the first anchor.
pub fn obligatory_layout(inst: &AnchoredTree) -> (usize, usize, usize) {
    let tree = &inst.tree;
    let frontier = tree.frontier();
    let first_anchor = frontier.iter().position(|&k| tree.flat()[k as usize].kind == NodeKind::Anchor);
    let mut total = 0;
    let (mut left, mut right) = (0, 0);
    for (idx, &k) in frontier.iter().enumerate() {
        let kind = tree.flat()[k as usize].kind;
        if matches!(kind, NodeKind::Terminal | NodeKind::Substitution | NodeKind::Anchor) {
            total += 1;
            if Some(idx) != first_anchor {
                match first_anchor {
                    Some(a) if idx < a => left += 1,
                    Some(_) => right += 1,
                    None => {}
                }
            }
        }
    }
    (total, left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> (Grammar, Lexicon) {
        let trees = "tree αNXN\n (NP (N<>))\n feat 0 bot agr=?a\n feat 1 top agr=?a\n\
                     tree αnx0Vplnx1 family Tnx0Vplnx1\n (S (NP!) (VP (V<>) (PL<>) (NP!)))\n";
        let templates = "template #N_plur: anchor.bot.agr.num = plur\n";
        let g = crate::grammar::load_grammar(trees, templates).unwrap();
        let morph = MorphDb::parse(
            "map\tmap\tN\tsingular\nmaps\tmap\tN\tplural\nmap\tmap\tV\tbase\nout\tout\tPL\t-\n",
        )
        .unwrap();
        let synt = SyntDb::parse(
            "INDEX: map/4\nENTRY: map\nPOS: N\nTREES: αNXN\nFS: #N_plur\n\n\
             INDEX: map/1\nENTRY: NP0 map out NP1\nPOS: NP0 V PL NP1\nFAM: Tnx0Vplnx1\n",
        )
        .unwrap();
        synt.check(&g).unwrap();
        (g, Lexicon::new(morph, synt))
    }

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn template_clash_drops_instance() {
        let (g, lex) = tiny();
        let toks = lex.analyze(&words("map maps"));
        let sets: Vec<Vec<Pos>> = toks.iter().map(|t| t.pos.clone()).collect();
        let sel = lex.select_trees(&g, &toks, &sets);
        assert!(sel[0].iter().all(|i| i.name() != "αNXN"));
        assert_eq!(sel[1].len(), 1);
    }

    #[test]
    fn multi_anchor_needs_following_particle() {
        let (g, lex) = tiny();
        let toks = lex.analyze(&words("map out maps"));
        let sets: Vec<Vec<Pos>> = toks.iter().map(|t| t.pos.clone()).collect();
        let sel = lex.select_trees(&g, &toks, &sets);
        let inst = sel[0].iter().find(|i| i.name() == "αnx0Vplnx1").unwrap();
        assert_eq!(inst.label(), "αnx0Vplnx1[map,out]");
        let toks = lex.analyze(&words("out map"));
        let sets: Vec<Vec<Pos>> = toks.iter().map(|t| t.pos.clone()).collect();
        let sel = lex.select_trees(&g, &toks, &sets);
        assert!(sel.iter().flatten().all(|i| i.name() != "αnx0Vplnx1"));
    }

    #[test]
    fn layout_counts() {
        let (g, _) = tiny();
        let t = AnchoredTree::from_words(g.tree("αnx0Vplnx1").unwrap().clone(), &["map", "out"]).unwrap();
        assert_eq!(obligatory_layout(&t), (4, 1, 2));
    }
}
