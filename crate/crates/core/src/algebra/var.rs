use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AlgebraError;

/// A colour variable, identified by a short ASCII name.
///
/// The name is packed big-endian into a `u64`, so the derived ordering is the
/// lexicographic order of names (`a < b < c < c0 < d < t < u1`). This is the
/// fixed variable registry order used for canonical display and tie-breaking.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u64);

impl Var {
    pub const MAX_LEN: usize = 8;

    pub fn new(name: &str) -> Result<Self, AlgebraError> {
        let bytes = name.as_bytes();
        if bytes.is_empty()
            || bytes.len() > Self::MAX_LEN
            || !bytes[0].is_ascii_alphabetic()
            || !bytes.iter().all(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            return Err(AlgebraError::InvalidVariable(name.to_string()));
        }
        let mut buf = [0u8; 8];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(Var(u64::from_be_bytes(buf)))
    }

    /// Panicking constructor for names known at compile time.
    pub fn named(name: &str) -> Self {
        Self::new(name).expect("invalid built-in variable name")
    }

    pub fn name(&self) -> String {
        let buf = self.0.to_be_bytes();
        let len = buf.iter().position(|b| *b == 0).unwrap_or(8);
        String::from_utf8_lossy(&buf[..len]).into_owned()
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Var({})", self.name())
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Var {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Var::new(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_lexicographic_by_name() {
        let names = ["a", "b", "c", "c0", "c7", "d", "t", "u1", "u2"];
        let vars: Vec<Var> = names.iter().map(|n| Var::named(n)).collect();
        let mut sorted = vars.clone();
        sorted.sort();
        assert_eq!(vars, sorted);
        assert_eq!(Var::named("u2").name(), "u2");
    }

    #[test]
    fn rejects_bad_names() {
        assert!(Var::new("").is_err());
        assert!(Var::new("toolongname").is_err());
        assert!(Var::new("1a").is_err());
        assert!(Var::new("a-b").is_err());
    }
}
