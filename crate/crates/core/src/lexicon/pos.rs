use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// The closed set of thirteen parts of speech shared by morphology, tagger
/// and syntactic database.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pos {
    N,
    PN,
    Pron,
    V,
    PL,
    Ad,
    A,
    P,
    Comp,
    D,
    Conj,
    I,
    NVC,
}

impl Pos {
    pub const ALL: [Pos; 13] = [
        Pos::N,
        Pos::PN,
        Pos::Pron,
        Pos::V,
        Pos::PL,
        Pos::Ad,
        Pos::A,
        Pos::P,
        Pos::Comp,
        Pos::D,
        Pos::Conj,
        Pos::I,
        Pos::NVC,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Pos::N => "N",
            Pos::PN => "PN",
            Pos::Pron => "Pron",
            Pos::V => "V",
            Pos::PL => "PL",
            Pos::Ad => "Ad",
            Pos::A => "A",
            Pos::P => "P",
            Pos::Comp => "Comp",
            Pos::D => "D",
            Pos::Conj => "Conj",
            Pos::I => "I",
            Pos::NVC => "NVC",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pos::N => "Noun",
            Pos::PN => "Proper Noun",
            Pos::Pron => "Pronoun",
            Pos::V => "Verb",
            Pos::PL => "Verb Particle",
            Pos::Ad => "Adverb",
            Pos::A => "Adjective",
            Pos::P => "Preposition",
            Pos::Comp => "Complementizer",
            Pos::D => "Determiner",
            Pos::Conj => "Conjunction",
            Pos::I => "Interjection",
            Pos::NVC => "Noun/Verb Contraction",
        }
    }

    pub fn index(self) -> usize {
        Pos::ALL.iter().position(|&p| p == self).unwrap()
    }

    /// Open classes receive unknown words.
    pub fn is_open(self) -> bool {
        matches!(self, Pos::N | Pos::PN | Pos::V | Pos::A | Pos::Ad)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown part of speech {0:?}")]
pub struct UnknownPos(pub String);

impl FromStr for Pos {
    type Err = UnknownPos;

    /// Accepts the short code or the full name.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Pos::ALL
            .iter()
            .copied()
            .find(|p| p.code() == s || p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownPos(s.to_string()))
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl Serialize for Pos {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_and_names_parse() {
        for p in Pos::ALL {
            assert_eq!(p.code().parse::<Pos>().unwrap(), p);
            assert_eq!(p.name().parse::<Pos>().unwrap(), p);
        }
        assert!("Xyz".parse::<Pos>().is_err());
        assert_eq!(Pos::ALL.iter().filter(|p| p.is_open()).count(), 5);
    }
}
