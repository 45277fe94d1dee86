use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use super::{AlgebraError, Var};

/// A product of colour variables with positive exponents.
///
/// Exponents are kept sorted by variable and zero exponents are never stored,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: SmallVec<[(Var, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        let mut exps = SmallVec::new();
        if e > 0 {
            exps.push((v, e));
        }
        Monomial { exps }
    }

    /// Builds a monomial from arbitrary (variable, exponent) pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial {
            exps: map.into_iter().filter(|(_, e)| *e > 0).collect(),
        }
    }

    /// Parses `a*b^2`-style text; `1` and the empty string give the unit.
    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Self::one());
        }
        let mut pairs = Vec::new();
        for factor in text.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (
                    n.trim(),
                    e.trim()
                        .parse::<u32>()
                        .map_err(|_| AlgebraError::Parse(text.to_string()))?,
                ),
                None => (factor, 1),
            };
            pairs.push((Var::new(name)?, exp));
        }
        Ok(Self::from_pairs(pairs))
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exps
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|(v, _)| *v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut exps = SmallVec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() && j < other.exps.len() {
            let (a, ea) = self.exps[i];
            let (b, eb) = other.exps[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    exps.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    exps.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    exps.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        exps.extend_from_slice(&self.exps[i..]);
        exps.extend_from_slice(&other.exps[j..]);
        Monomial { exps }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|(v, x)| (*v, x * e)).collect(),
        }
    }

    /// Drops the given variables (specializes them to 1).
    pub fn erase(&self, vars: &[Var]) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .filter(|(v, _)| !vars.contains(v))
                .copied()
                .collect(),
        }
    }

    pub fn to_map(&self) -> BTreeMap<String, u32> {
        self.exps.iter().map(|(v, e)| (v.name(), *e)).collect()
    }
}

/// Graded order: lower total degree first; within a degree, the monomial with
/// the larger exponent on the earliest variable comes first (`a^2 < ab < b^2`).
/// The order is compatible with multiplication.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (&(va, ea), &(vb, eb)) in self.exps.iter().zip(other.exps.iter()) {
            if va != vb {
                return va.cmp(&vb);
            }
            if ea != eb {
                return eb.cmp(&ea);
            }
        }
        self.exps.len().cmp(&other.exps.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, u32>::deserialize(d)?;
        let mut pairs = Vec::with_capacity(map.len());
        for (name, e) in map {
            pairs.push((Var::new(&name).map_err(serde::de::Error::custom)?, e));
        }
        Ok(Monomial::from_pairs(pairs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    #[test]
    fn canonical_form() {
        let x = Monomial::from_pairs([(Var::named("b"), 1), (Var::named("a"), 2), (Var::named("c"), 0)]);
        assert_eq!(x, m("a^2*b"));
        assert_eq!(x.degree(), 3);
        assert_eq!(x.to_string(), "a^2*b");
        assert!(m("1").is_one());
    }

    #[test]
    fn graded_order() {
        let mut v = vec![m("b^2"), m("a"), m("a*b"), m("1"), m("b"), m("a^2")];
        v.sort();
        assert_eq!(v, vec![m("1"), m("a"), m("b"), m("a^2"), m("a*b"), m("b^2")]);
    }

    #[test]
    fn mul_and_erase() {
        assert_eq!(m("a*b").mul(&m("b*c")), m("a*b^2*c"));
        assert_eq!(m("a*b^2").erase(&[Var::named("b")]), m("a"));
        assert_eq!(m("a*b").pow(3), m("a^3*b^3"));
    }

    #[test]
    fn order_respects_multiplication() {
        let all = [m("1"), m("a"), m("b"), m("a^2"), m("a*b"), m("b^2"), m("a*c")];
        for x in &all {
            for y in &all {
                for z in &all {
                    if x < y {
                        assert!(x.mul(z) < y.mul(z), "{x} {y} {z}");
                    }
                }
            }
        }
    }
}
