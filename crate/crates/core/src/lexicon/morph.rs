//! Morphological database: inflected form to (root, POS, inflection).
//!
//! One entry per line: `form TAB root TAB POS TAB feat,feat` with `-` for an
//! empty feature list. Lines starting with `;` are comments.

use super::pos::Pos;
use super::LexiconError;
use crate::grammar::load::{EqValue, Equation, Side};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MorphEntry {
    pub form: String,
    pub root: String,
    pub pos: Pos,
    pub features: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct MorphDb {
    entries: Vec<MorphEntry>,
    by_form: HashMap<String, Vec<usize>>,
}

impl MorphDb {
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut db = MorphDb::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.trim().is_empty() || line.starts_with(';') {
                continue;
            }
            let err = |m: String| LexiconError::Parse { file: "morph", line: i + 1, message: m };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
            }
            let pos: Pos = fields[2].parse().map_err(|e: super::pos::UnknownPos| err(e.to_string()))?;
            let features = match fields[3].trim() {
                "-" | "" => Vec::new(),
                f => f.split(',').map(|s| s.trim().to_string()).collect(),
            };
            db.push(MorphEntry { form: fields[0].to_string(), root: fields[1].to_string(), pos, features });
        }
        Ok(db)
    }

    fn push(&mut self, e: MorphEntry) {
        self.by_form.entry(e.form.clone()).or_default().push(self.entries.len());
        self.entries.push(e);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MorphEntry] {
        &self.entries
    }

    /// Entries for the word as written and in lower case.
    pub fn lookup(&self, word: &str) -> Vec<&MorphEntry> {
        let mut out: Vec<&MorphEntry> = Vec::new();
        let lower = word.to_lowercase();
        for form in [word, lower.as_str()] {
            for &i in self.by_form.get(form).map(Vec::as_slice).unwrap_or(&[]) {
                if !out.iter().any(|e| std::ptr::eq(*e, &self.entries[i])) {
                    out.push(&self.entries[i]);
                }
            }
        }
        out
    }

    /// Inflected form for a (root, POS, features) triple.
    pub fn inflect(&self, root: &str, pos: Pos, features: &[String]) -> Option<&str> {
        self.entries
            .iter()
            .find(|e| e.root == root && e.pos == pos && e.features == features)
            .map(|e| e.form.as_str())
    }
}

/// POS candidates for a word missing from the database, most likely first.
pub fn default_pos(word: &str, sentence_initial: bool) -> Vec<Pos> {
    let capitalized = word.chars().next().is_some_and(char::is_uppercase);
    if capitalized && !sentence_initial {
        vec![Pos::PN, Pos::N, Pos::V, Pos::A, Pos::Ad]
    } else {
        vec![Pos::N, Pos::PN, Pos::V, Pos::A, Pos::Ad]
    }
}

/// Feature equations that inflection features place on an anchor's bottom.
pub fn morph_equations(pos: Pos, features: &[String], anchor: &str) -> Vec<Equation> {
    let eq = |path: &[&str], v: &str| Equation {
        node: anchor.to_string(),
        side: Side::Bottom,
        path: path.iter().map(|s| s.to_string()).collect(),
        value: EqValue::Atom(v.to_string()),
    };
    let has = |f: &str| features.iter().any(|x| x == f);
    let mut out = Vec::new();
    match pos {
        Pos::N | Pos::PN => {
            if has("singular") {
                out.extend([eq(&["agr", "num"], "sing"), eq(&["agr", "pers"], "3"), eq(&["agr", "3sg"], "+")]);
            }
            if has("plural") {
                out.extend([eq(&["agr", "num"], "plur"), eq(&["agr", "pers"], "3"), eq(&["agr", "3sg"], "-")]);
            }
        }
        Pos::V => {
            for f in features {
                match f.as_str() {
                    "present" => out.extend([eq(&["mode"], "ind"), eq(&["tense"], "pres")]),
                    "past" => out.extend([eq(&["mode"], "ind"), eq(&["tense"], "past")]),
                    "past-participle" => out.push(eq(&["mode"], "ppart")),
                    "present-participle" => out.push(eq(&["mode"], "ger")),
                    "base" => out.push(eq(&["mode"], "base")),
                    "infinitive" => out.push(eq(&["mode"], "inf")),
                    "3sg" => out.push(eq(&["agr", "3sg"], "+")),
                    "non3sg" => out.push(eq(&["agr", "3sg"], "-")),
                    _ => {}
                }
            }
        }
        Pos::Pron => {
            let pers = ["1st", "2nd", "3rd"].iter().position(|p| has(p));
            if let Some(p) = pers {
                out.push(eq(&["agr", "pers"], ["1", "2", "3"][p]));
            }
            let sing = has("singular");
            if sing {
                out.push(eq(&["agr", "num"], "sing"));
            }
            if has("plural") {
                out.push(eq(&["agr", "num"], "plur"));
            }
            if pers.is_some() && (sing || has("plural")) {
                out.push(eq(&["agr", "3sg"], if pers == Some(2) && sing { "+" } else { "-" }));
            } else if has("non3sg") {
                out.push(eq(&["agr", "3sg"], "-"));
            }
            if has("nominative") {
                out.push(eq(&["case"], "nom"));
            }
            if has("accusative") {
                out.push(eq(&["case"], "acc"));
            }
            out.push(eq(&["wh"], if has("wh") { "+" } else { "-" }));
        }
        Pos::D => {
            if has("singular") {
                out.push(eq(&["agr", "num"], "sing"));
            }
            if has("plural") {
                out.push(eq(&["agr", "num"], "plur"));
            }
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "had\thave\tV\tpast\nhad\thave\tV\tpast-participle\nmaps\tmap\tN\tplural\nmaps\tmap\tV\t3sg,present\nI\tI\tPron\t1st,singular,nominative\n";

    #[test]
    fn lookup_returns_all_readings() {
        let db = MorphDb::parse(SAMPLE).unwrap();
        let had: Vec<_> = db.lookup("had").iter().map(|e| e.features.join(",")).collect();
        assert_eq!(had, vec!["past", "past-participle"]);
        assert_eq!(db.lookup("Maps").len(), 2);
        assert!(db.lookup("blork").is_empty());
        assert_eq!(db.lookup("I").len(), 1);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(MorphDb::parse("x\ty\tQ\t-").is_err());
        assert!(MorphDb::parse("x\ty\tN").is_err());
    }

    #[test]
    fn defaults_prefer_proper_noun_mid_sentence() {
        assert_eq!(default_pos("blork", false), vec![Pos::N, Pos::PN, Pos::V, Pos::A, Pos::Ad]);
        assert_eq!(default_pos("Giardini", false)[0], Pos::PN);
        assert_eq!(default_pos("Giardini", true)[0], Pos::N);
    }

    #[test]
    fn pronoun_agreement() {
        let f = |s: &str| s.split(',').map(String::from).collect::<Vec<_>>();
        let he: Vec<String> = morph_equations(Pos::Pron, &f("3rd,singular,nominative"), "anchor")
            .iter()
            .map(|e| e.to_string())
            .collect();
        assert!(he.contains(&"anchor.bot.agr.3sg = +".to_string()));
        assert!(he.contains(&"anchor.bot.wh = -".to_string()));
        let i: Vec<String> =
            morph_equations(Pos::Pron, &f("1st,singular,nominative"), "anchor").iter().map(|e| e.to_string()).collect();
        assert!(i.contains(&"anchor.bot.agr.3sg = -".to_string()));
    }
}
