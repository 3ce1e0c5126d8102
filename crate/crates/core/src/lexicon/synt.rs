//! Syntactic database records.
//!
//! ```text
//! INDEX: map/1
//! ENTRY: NP0 map out NP1
//! POS: NP0 V PL NP1
//! FAM: Tnx0Vplnx1
//! ```
//!
//! A line without a known field prefix continues the previous field. In the
//! ENTRY/POS pair, a token identical to its POS token (such as `NP0`) is an
//! argument position; every other token is a lexeme anchoring the trees.
//! ENTRY `*` matches any word missing from the morphological database.

use super::pos::Pos;
use super::LexiconError;
use crate::grammar::Grammar;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryItem {
    pub token: String,
    pub pos: String,
    pub placeholder: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyntEntry {
    pub index: String,
    pub entry_items: Vec<EntryItem>,
    pub trees: Vec<String>,
    pub fam: Vec<String>,
    pub fs: Vec<String>,
    pub ex: Vec<String>,
}

impl SyntEntry {
    /// Anchoring lexemes in order.
    pub fn lexemes(&self) -> Vec<(&str, Pos)> {
        self.entry_items
            .iter()
            .filter(|i| !i.placeholder)
            .map(|i| (i.token.as_str(), i.pos.parse().expect("validated at load")))
            .collect()
    }

    pub fn is_unknown_word_entry(&self) -> bool {
        self.lexemes().first().is_some_and(|(w, _)| *w == "*")
    }

    /// Tree names, expanding families.
    pub fn tree_names(&self, grammar: &Grammar) -> Vec<String> {
        let mut out = self.trees.clone();
        for f in &self.fam {
            out.extend(grammar.family(f).unwrap_or(&[]).iter().cloned());
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct SyntDb {
    entries: Vec<SyntEntry>,
}

#[derive(Default)]
struct Draft {
    line: usize,
    index: String,
    entry: String,
    pos: String,
    trees: String,
    fam: String,
    fs: String,
    ex: Vec<String>,
    has_trees: bool,
    has_fam: bool,
}

fn split_list(s: &str) -> Vec<String> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(String::from).collect()
}

impl Draft {
    fn finish(self) -> Result<SyntEntry, LexiconError> {
        let err = |m: String| LexiconError::Parse { file: "syntactic", line: self.line, message: m };
        if self.has_trees == self.has_fam {
            return Err(err(format!("entry {} must have exactly one of TREES or FAM", self.index)));
        }
        let tokens: Vec<&str> = self.entry.split_whitespace().collect();
        let pos: Vec<&str> = self.pos.split_whitespace().collect();
        if tokens.is_empty() || tokens.len() != pos.len() {
            return Err(err(format!("entry {}: ENTRY and POS lengths differ", self.index)));
        }
        let mut items = Vec::new();
        for (t, p) in tokens.iter().zip(&pos) {
            let placeholder = t == p;
            if !placeholder {
                p.parse::<Pos>().map_err(|e| err(e.to_string()))?;
            }
            items.push(EntryItem { token: t.to_string(), pos: p.to_string(), placeholder });
        }
        if items.iter().all(|i| i.placeholder) {
            return Err(err(format!("entry {} has no lexical anchor", self.index)));
        }
        let trees = split_list(&self.trees);
        let fam = split_list(&self.fam);
        if trees.is_empty() && fam.is_empty() {
            return Err(err(format!("entry {} lists no trees", self.index)));
        }
        Ok(SyntEntry { index: self.index, entry_items: items, trees, fam, fs: split_list(&self.fs), ex: self.ex })
    }
}

impl SyntDb {
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut entries = Vec::new();
        let mut draft: Option<Draft> = None;
        let mut field = "";
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with(';') {
                continue;
            }
            let err = |m: &str| LexiconError::Parse { file: "syntactic", line: i + 1, message: m.to_string() };
            let (name, rest) = match line.split_once(':') {
                Some((n, r)) if ["INDEX", "ENTRY", "POS", "TREES", "FAM", "FS", "EX"].contains(&n.trim()) => {
                    (n.trim(), r.trim())
                }
                _ => ("", line),
            };
            if name == "INDEX" {
                if let Some(d) = draft.take() {
                    entries.push(d.finish()?);
                }
                draft = Some(Draft { line: i + 1, index: rest.to_string(), ..Draft::default() });
                field = "INDEX";
                continue;
            }
            let d = draft.as_mut().ok_or_else(|| err("field before INDEX"))?;
            if !name.is_empty() {
                field = name;
                if field == "EX" {
                    d.ex.push(String::new());
                }
            }
            let append = |s: &mut String, text: &str| {
                if !s.is_empty() {
                    s.push(' ');
                }
                s.push_str(text);
            };
            match field {
                "ENTRY" => append(&mut d.entry, rest),
                "POS" => append(&mut d.pos, rest),
                "TREES" => {
                    d.has_trees = true;
                    append(&mut d.trees, rest)
                }
                "FAM" => {
                    d.has_fam = true;
                    append(&mut d.fam, rest)
                }
                "FS" => append(&mut d.fs, rest),
                "EX" => append(d.ex.last_mut().unwrap(), rest),
                _ => return Err(err("continuation of INDEX")),
            }
        }
        if let Some(d) = draft {
            entries.push(d.finish()?);
        }
        Ok(SyntDb { entries })
    }

    pub fn entries(&self) -> &[SyntEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries whose first lexeme is `root` with part of speech `pos`.
    pub fn lookup(&self, root: &str, pos: Pos) -> Vec<&SyntEntry> {
        self.entries
            .iter()
            .filter(|e| e.lexemes().first().is_some_and(|&(w, p)| p == pos && w == root))
            .collect()
    }

    /// Entries mentioning `root` in any lexeme position.
    pub fn mentioning(&self, root: &str) -> Vec<&SyntEntry> {
        self.entries.iter().filter(|e| e.lexemes().iter().any(|(w, _)| *w == root)).collect()
    }

    /// Every referenced tree, family and template must exist.
    pub fn check(&self, grammar: &Grammar) -> Result<(), LexiconError> {
        for e in &self.entries {
            let missing = |what: &str, name: &str| LexiconError::Reference {
                entry: e.index.clone(),
                message: format!("unknown {what} {name}"),
            };
            for t in &e.trees {
                if grammar.tree(t).is_none() {
                    return Err(missing("tree", t));
                }
            }
            for f in &e.fam {
                if grammar.family(f).is_none() {
                    return Err(missing("family", f));
                }
            }
            for f in &e.fs {
                if f.starts_with('#') {
                    if grammar.template(f).is_none() {
                        return Err(missing("template", f));
                    }
                } else if f.parse::<crate::grammar::Equation>().is_err() {
                    return Err(missing("feature equation", f));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: &str = "INDEX: have/26\n ENTRY: have\n POS: V\n TREES: βVvx\n FS: #VPr_ind, #VPr_past, #VPr_perfect+\n #VP_ppart, #VP_pass-\n EX: he had died; we had died\n\nINDEX: map/1\n ENTRY: NP0 map out NP1\n POS: NP0 V PL NP1\n FAM: Tnx0Vplnx1\n\nINDEX: map/3\n ENTRY: map\n POS: N\n TREES: αN , αNXdxN , βNn\n FS: #N_wh-, #N_refl-\n";

    #[test]
    fn parses_table_layout() {
        let db = SyntDb::parse(TABLE).unwrap();
        assert_eq!(db.len(), 3);
        let have = &db.entries()[0];
        assert_eq!(have.fs.len(), 5);
        assert_eq!(have.ex, vec!["he had died; we had died"]);
        let map1 = &db.entries()[1];
        assert_eq!(map1.lexemes(), vec![("map", Pos::V), ("out", Pos::PL)]);
        assert_eq!(map1.fam, vec!["Tnx0Vplnx1"]);
        assert_eq!(db.entries()[2].trees, vec!["αN", "αNXdxN", "βNn"]);
        assert_eq!(db.lookup("map", Pos::N).len(), 1);
        assert_eq!(db.lookup("map", Pos::V).len(), 1);
    }

    #[test]
    fn trees_xor_fam() {
        let both = "INDEX: x/1\nENTRY: x\nPOS: N\nTREES: αN\nFAM: Tnx0V\n";
        assert!(SyntDb::parse(both).is_err());
        let neither = "INDEX: x/1\nENTRY: x\nPOS: N\n";
        assert!(SyntDb::parse(neither).is_err());
    }
}
