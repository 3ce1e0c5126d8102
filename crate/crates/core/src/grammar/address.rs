use serde::{Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Gorn address of a node inside an elementary tree.
///
/// The root is written `0`; the i-th child (1-based) of the root is `i`, and
/// the i-th child of any other node `a` is `a.i`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GornAddress(Vec<u16>);

impl GornAddress {
    pub fn root() -> Self {
        GornAddress(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> Self {
        let mut path = self.0.clone();
        path.push(index as u16);
        GornAddress(path)
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(GornAddress(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn path(&self) -> &[u16] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// True if `self` lies on the path from the root to `other` (inclusive).
    pub fn is_prefix_of(&self, other: &GornAddress) -> bool {
        other.0.starts_with(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed Gorn address {0:?}")]
pub struct AddressError(pub String);

impl FromStr for GornAddress {
    type Err = AddressError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Ok(GornAddress::root());
        }
        let mut path = Vec::new();
        for part in s.split('.') {
            match part.parse::<u16>() {
                Ok(i) if i >= 1 => path.push(i),
                _ => return Err(AddressError(s.to_string())),
            }
        }
        Ok(GornAddress(path))
    }
}

impl fmt::Display for GornAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GornAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{self}")
    }
}

impl Serialize for GornAddress {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_and_children() {
        let root = GornAddress::root();
        assert_eq!(root.to_string(), "0");
        assert_eq!(root.child(2).to_string(), "2");
        assert_eq!(root.child(2).child(1).to_string(), "2.1");
        assert_eq!("2.1".parse::<GornAddress>().unwrap(), root.child(2).child(1));
        assert_eq!("0".parse::<GornAddress>().unwrap(), root);
    }

    #[test]
    fn rejects_zero_inside_path() {
        assert!("1.0".parse::<GornAddress>().is_err());
        assert!("".parse::<GornAddress>().is_err());
        assert!("x".parse::<GornAddress>().is_err());
    }

    #[test]
    fn prefix_is_spine_test() {
        let foot: GornAddress = "2.1".parse().unwrap();
        assert!(GornAddress::root().is_prefix_of(&foot));
        assert!("2".parse::<GornAddress>().unwrap().is_prefix_of(&foot));
        assert!(!"1".parse::<GornAddress>().unwrap().is_prefix_of(&foot));
    }
}
