use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Monomial, Polynomial, Var};

/// A power series in `q` truncated at `q^qmax`, with polynomial coefficients
/// in the colour variables, optionally truncated at total colour degree
/// `degmax`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    qmax: usize,
    degmax: Option<u32>,
    coeffs: Vec<Polynomial>,
}

/// The first coefficient at which two series disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: usize,
    pub monomial: Monomial,
    #[serde(with = "super::bigint_str")]
    pub lhs: BigInt,
    #[serde(with = "super::bigint_str")]
    pub rhs: BigInt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineKind {
    Add,
    Mul,
}

pub fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Coefficient-wise sum or truncated product of two series sharing a
/// truncation order.
pub fn series_combine(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    kind: CombineKind,
) -> Result<TruncatedSeries, AlgebraError> {
    if f.qmax != g.qmax {
        return Err(AlgebraError::TruncationMismatch {
            left: f.qmax,
            right: g.qmax,
        });
    }
    Ok(match kind {
        CombineKind::Add => f.add(g),
        CombineKind::Mul => f.mul(g),
    })
}

impl TruncatedSeries {
    pub fn zero(qmax: usize, degmax: Option<u32>) -> Self {
        TruncatedSeries {
            qmax,
            degmax,
            coeffs: vec![Polynomial::zero(); qmax + 1],
        }
    }

    pub fn one(qmax: usize, degmax: Option<u32>) -> Self {
        Self::monomial_term(qmax, degmax, Monomial::one(), 0)
    }

    /// The series `m * q^n` (zero if it lies beyond either truncation).
    pub fn monomial_term(qmax: usize, degmax: Option<u32>, m: Monomial, n: usize) -> Self {
        let mut s = Self::zero(qmax, degmax);
        if n <= qmax && degmax.map_or(true, |d| m.degree() <= d) {
            s.coeffs[n] = Polynomial::monomial(m);
        }
        s
    }

    /// Builds a series from coefficient polynomials; missing trailing
    /// coefficients are zero and extra ones are dropped.
    pub fn from_coeffs(qmax: usize, degmax: Option<u32>, coeffs: Vec<Polynomial>) -> Self {
        let mut coeffs: Vec<Polynomial> = coeffs
            .into_iter()
            .take(qmax + 1)
            .map(|p| p.truncate_degree(degmax))
            .collect();
        coeffs.resize(qmax + 1, Polynomial::zero());
        TruncatedSeries { qmax, degmax, coeffs }
    }

    /// Builds a series from loose `(n, monomial, coefficient)` triples.
    pub fn from_terms<I>(qmax: usize, degmax: Option<u32>, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, Monomial, BigInt)>,
    {
        let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); qmax + 1];
        for (n, m, c) in terms {
            if n <= qmax {
                buckets[n].push((m, c));
            }
        }
        let coeffs = buckets.into_iter().map(Polynomial::from_terms).collect();
        Self::from_coeffs(qmax, degmax, coeffs)
    }

    pub fn qmax(&self) -> usize {
        self.qmax
    }

    pub fn degmax(&self) -> Option<u32> {
        self.degmax
    }

    pub fn coeff(&self, n: usize) -> &Polynomial {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Polynomial::is_zero)
    }

    /// Smallest `n` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|p| !p.is_zero())
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        debug_assert_eq!(self.qmax, other.qmax);
        let degmax = min_cap(self.degmax, other.degmax);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b).truncate_degree(degmax))
            .collect();
        TruncatedSeries {
            qmax: self.qmax,
            degmax,
            coeffs,
        }
    }

    pub fn add_assign(&mut self, other: &TruncatedSeries) {
        debug_assert_eq!(self.qmax, other.qmax);
        if other.degmax.is_some() && min_cap(self.degmax, other.degmax) != self.degmax {
            *self = self.add(other);
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_assign(b);
        }
    }

    pub fn neg(&self) -> TruncatedSeries {
        TruncatedSeries {
            qmax: self.qmax,
            degmax: self.degmax,
            coeffs: self.coeffs.iter().map(Polynomial::neg).collect(),
        }
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> TruncatedSeries {
        TruncatedSeries {
            qmax: self.qmax,
            degmax: self.degmax,
            coeffs: self.coeffs.iter().map(|p| p.scale(k)).collect(),
        }
    }

    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        debug_assert_eq!(self.qmax, other.qmax);
        let degmax = min_cap(self.degmax, other.degmax);
        let mut coeffs = vec![Polynomial::zero(); self.qmax + 1];
        let nz: Vec<usize> = (0..=other.qmax).filter(|&j| !other.coeffs[j].is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for &j in &nz {
                if i + j > self.qmax {
                    break;
                }
                let prod = a.mul_capped(&other.coeffs[j], degmax);
                coeffs[i + j].add_assign(&prod);
            }
        }
        TruncatedSeries {
            qmax: self.qmax,
            degmax,
            coeffs,
        }
    }

    /// Multiplies by `m * q^s`.
    pub fn mul_term(&self, m: &Monomial, s: usize) -> TruncatedSeries {
        let mut out = Self::zero(self.qmax, self.degmax);
        if s > self.qmax {
            return out;
        }
        for n in 0..=self.qmax - s {
            if !self.coeffs[n].is_zero() {
                out.coeffs[n + s] = self.coeffs[n].mul_monomial(m).truncate_degree(self.degmax);
            }
        }
        out
    }

    /// Multiplies by `c * m * q^s`.
    pub fn mul_scaled_term(&self, c: &BigInt, m: &Monomial, s: usize) -> TruncatedSeries {
        let mut out = self.mul_term(m, s);
        if !c.is_one() {
            out = out.scale(c);
        }
        out
    }

    /// Solves `E = y + m q^s E`, i.e. returns `y / (1 - m q^s)`.
    pub fn geometric_solve(y: &TruncatedSeries, m: &Monomial, s: usize) -> Result<TruncatedSeries, AlgebraError> {
        Self::geometric_solve_scaled(y, &BigInt::one(), m, s)
    }

    /// Solves `E = y + c m q^s E`. For `s = 0` the monomial must have positive
    /// degree and a degree cap must be set, otherwise the geometric series
    /// does not terminate.
    pub fn geometric_solve_scaled(
        y: &TruncatedSeries,
        c: &BigInt,
        m: &Monomial,
        s: usize,
    ) -> Result<TruncatedSeries, AlgebraError> {
        let mut e = y.clone();
        if s == 0 {
            let d = match (m.degree(), y.degmax) {
                (0, _) => return Err(AlgebraError::NonUnitFactor(format!("{c}*{m}"))),
                (_, None) => return Err(AlgebraError::DegreeCapRequired),
                (_, Some(d)) => d,
            };
            let mut term = y.clone();
            for _ in 0..=d / m.degree() {
                term = term.mul_scaled_term(c, m, 0);
                if term.is_zero() {
                    break;
                }
                e.add_assign(&term);
            }
            return Ok(e);
        }
        for n in s..=y.qmax {
            if e.coeffs[n - s].is_zero() {
                continue;
            }
            let mut prev = e.coeffs[n - s].mul_monomial(m).truncate_degree(y.degmax);
            if !c.is_one() {
                prev = prev.scale(c);
            }
            e.coeffs[n].add_assign(&prev);
        }
        Ok(e)
    }

    /// Multiplicative inverse. The constant coefficient must be `±1` plus
    /// terms of positive colour degree (the latter only under a degree cap).
    pub fn inverse(&self) -> Result<TruncatedSeries, AlgebraError> {
        let c0 = &self.coeffs[0];
        let unit = c0.constant_term();
        if !(unit.is_one() || unit == -BigInt::one()) {
            return Err(AlgebraError::NotInvertible(c0.to_string()));
        }
        let rest = c0.sub(&Polynomial::constant(unit.clone()));
        if !rest.is_zero() && self.degmax.is_none() {
            return Err(AlgebraError::DegreeCapRequired);
        }
        // inverse of c0 = unit * (1 + rest*unit)^{-1} in the degree-truncated ring
        let d = rest.scale(&unit);
        let mut g0 = Polynomial::one();
        let mut power = Polynomial::one();
        if !d.is_zero() {
            let cap = self.degmax.unwrap();
            for _ in 0..cap {
                power = power.mul_capped(&d.neg(), self.degmax);
                if power.is_zero() {
                    break;
                }
                g0.add_assign(&power);
            }
        }
        let g0 = g0.scale(&unit);
        let mut g = vec![Polynomial::zero(); self.qmax + 1];
        g[0] = g0.clone();
        for n in 1..=self.qmax {
            let mut acc = Polynomial::zero();
            for i in 1..=n {
                if self.coeffs[i].is_zero() || g[n - i].is_zero() {
                    continue;
                }
                acc.add_assign(&self.coeffs[i].mul_capped(&g[n - i], self.degmax));
            }
            g[n] = acc.mul_capped(&g0, self.degmax).neg();
        }
        Ok(TruncatedSeries {
            qmax: self.qmax,
            degmax: self.degmax,
            coeffs: g,
        })
    }

    pub fn pow(&self, e: u32) -> TruncatedSeries {
        let mut acc = Self::one(self.qmax, self.degmax);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Reduces the truncation order; coefficients above `qmax` are dropped.
    pub fn truncate(&self, qmax: usize) -> Result<TruncatedSeries, AlgebraError> {
        if qmax > self.qmax {
            return Err(AlgebraError::TruncationMismatch {
                left: self.qmax,
                right: qmax,
            });
        }
        Ok(TruncatedSeries {
            qmax,
            degmax: self.degmax,
            coeffs: self.coeffs[..=qmax].to_vec(),
        })
    }

    /// Reduces the degree cap.
    pub fn cap_degree(&self, degmax: Option<u32>) -> TruncatedSeries {
        let degmax = min_cap(self.degmax, degmax);
        TruncatedSeries {
            qmax: self.qmax,
            degmax,
            coeffs: self.coeffs.iter().map(|p| p.clone().truncate_degree(degmax)).collect(),
        }
    }

    /// Specializes the given variables to 1 (the degree cap is kept as is).
    pub fn erase(&self, vars: &[Var]) -> TruncatedSeries {
        TruncatedSeries {
            qmax: self.qmax,
            degmax: self.degmax,
            coeffs: self.coeffs.iter().map(|p| p.erase(vars)).collect(),
        }
    }

    /// Specializes every colour variable to 1.
    pub fn erase_all(&self) -> TruncatedSeries {
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| {
                let t = p.total();
                Polynomial::constant(t)
            })
            .collect();
        TruncatedSeries {
            qmax: self.qmax,
            degmax: self.degmax,
            coeffs,
        }
    }

    /// Integer coefficients after setting every colour to 1.
    pub fn counts(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(Polynomial::total).collect()
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .coeffs
            .iter()
            .flat_map(|p| p.terms().iter().flat_map(|(m, _)| m.vars()).collect::<Vec<_>>())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    /// First disagreement in `(n, monomial order)`, comparing up to the
    /// smaller of the two truncation orders and degree caps.
    pub fn first_difference(&self, other: &TruncatedSeries) -> Option<Mismatch> {
        let qmax = self.qmax.min(other.qmax);
        let cap = min_cap(self.degmax, other.degmax);
        for n in 0..=qmax {
            let a = self.coeffs[n].clone().truncate_degree(cap);
            let b = other.coeffs[n].clone().truncate_degree(cap);
            if a == b {
                continue;
            }
            let diff = a.sub(&b);
            let (m, _) = diff.leading_low().expect("nonzero difference").clone();
            return Some(Mismatch {
                n,
                lhs: a.coefficient(&m),
                rhs: b.coefficient(&m),
                monomial: m,
            });
        }
        None
    }

    pub fn agrees_with(&self, other: &TruncatedSeries) -> bool {
        self.first_difference(other).is_none()
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(Polynomial::all_nonnegative)
    }

    pub fn into_coeffs(self) -> Vec<Polynomial> {
        self.coeffs
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let body = if p.len() > 1 { format!("({p})") } else { p.to_string() };
            match n {
                0 => write!(f, "{body}")?,
                1 => write!(f, "{body}*q")?,
                _ => write!(f, "{body}*q^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.qmax + 1)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// JSON form of a series: the coefficient table plus truncation data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub qmax: usize,
    pub degmax: Option<u32>,
    pub coefficients: Vec<CoefficientRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub terms: Polynomial,
}

impl From<&TruncatedSeries> for SeriesRecord {
    fn from(s: &TruncatedSeries) -> Self {
        SeriesRecord {
            qmax: s.qmax,
            degmax: s.degmax,
            coefficients: s
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, p)| CoefficientRow { n, terms: p.clone() })
                .collect(),
        }
    }
}

impl From<SeriesRecord> for TruncatedSeries {
    fn from(r: SeriesRecord) -> Self {
        let mut coeffs = vec![Polynomial::zero(); r.qmax + 1];
        for row in r.coefficients {
            if row.n <= r.qmax {
                coeffs[row.n].add_assign(&row.terms);
            }
        }
        TruncatedSeries::from_coeffs(r.qmax, r.degmax, coeffs)
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesRecord::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(SeriesRecord::deserialize(d)?.into())
    }
}
