use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{Monomial, Var};

/// Sparse polynomial in colour variables with arbitrary-precision integer
/// coefficients. Terms are sorted by the graded monomial order and no zero
/// coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, BigInt)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: vec![(m, c)] }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, BigInt::one())
    }

    /// Collects terms in any order, summing duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_default() += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigInt>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Polynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, BigInt)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, BigInt)> {
        self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        match self.terms.binary_search_by(|(x, _)| x.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    /// Lowest term in the graded order.
    pub fn leading_low(&self) -> Option<&(Monomial, BigInt)> {
        self.terms.first()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Less => {
                    terms.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        terms.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Polynomial { terms }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        if other.is_zero() {
            return;
        }
        *self = self.add(other);
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Multiplies every term by `m`; the graded order is preserved, so no
    /// re-sorting is needed.
    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        if m.is_one() {
            return self.clone();
        }
        Polynomial {
            terms: self.terms.iter().map(|(x, c)| (x.mul(m), c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.mul_capped(other, None)
    }

    /// Product keeping only monomials of total degree at most `degmax`.
    pub fn mul_capped(&self, other: &Polynomial, degmax: Option<u32>) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        if other.terms.len() == 1 && other.terms[0].1.is_one() {
            return self.mul_monomial(&other.terms[0].0).truncate_degree(degmax);
        }
        if self.terms.len() == 1 && self.terms[0].1.is_one() {
            return other.mul_monomial(&self.terms[0].0).truncate_degree(degmax);
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(d) = degmax {
                    if ma.degree() + mb.degree() > d {
                        continue;
                    }
                }
                *acc.entry(ma.mul(mb)).or_default() += ca * cb;
            }
        }
        Self::from_map(acc)
    }

    pub fn truncate_degree(mut self, degmax: Option<u32>) -> Polynomial {
        if let Some(d) = degmax {
            self.terms.retain(|(m, _)| m.degree() <= d);
        }
        self
    }

    /// Specializes the given variables to 1.
    pub fn erase(&self, vars: &[Var]) -> Polynomial {
        if vars.is_empty() || !self.terms.iter().any(|(m, _)| m.vars().any(|v| vars.contains(&v))) {
            return self.clone();
        }
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.erase(vars), c.clone())))
    }

    /// Applies a monomial map term by term: each monomial is replaced by the
    /// image the closure returns (which may include a sign).
    pub fn map_monomials<F>(&self, mut f: F) -> Polynomial
    where
        F: FnMut(&Monomial) -> (Monomial, BigInt),
    {
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let (img, k) = f(m);
            (img, c * k)
        }))
    }

    /// Sum of all coefficients (every variable set to 1).
    pub fn total(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.iter().all(|(_, c)| !c.is_negative())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// One serialized term: `{"coeff": "3", "vars": {"a": 1}}`. Coefficients are
/// decimal strings so that arbitrary-precision values survive JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: String,
    pub vars: Monomial,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let recs: Vec<TermRecord> = self
            .terms
            .iter()
            .map(|(m, c)| TermRecord {
                coeff: c.to_string(),
                vars: m.clone(),
            })
            .collect();
        recs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let recs = Vec::<TermRecord>::deserialize(d)?;
        let mut terms = Vec::with_capacity(recs.len());
        for r in recs {
            let c: BigInt = r
                .coeff
                .trim()
                .parse()
                .map_err(|_| serde::de::Error::custom(format!("bad coefficient {:?}", r.coeff)))?;
            terms.push((r.vars, c));
        }
        Ok(Polynomial::from_terms(terms))
    }
}
