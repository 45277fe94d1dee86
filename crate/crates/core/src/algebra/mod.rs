//! Truncated power series in `q` with polynomial coefficients in colour
//! variables, q-Pochhammer products, substitutions and Euler factorization.

mod euler;
mod monomial;
mod poly;
mod product;
mod series;
mod subst;
mod var;

pub use euler::{euler_factorize, expand_euler, mul_binomial_power, EulerFactor};
pub use monomial::Monomial;
pub use poly::{Polynomial, TermRecord};
pub use product::{product_expand, ProductFactor, ProductSpec, SignedMonomial};
pub use series::{min_cap, series_combine, CoefficientRow, CombineKind, Mismatch, SeriesRecord, TruncatedSeries};
pub use subst::{substitute, substitute_unchecked, SubstitutionMap, VarImage};
pub use var::Var;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("incompatible truncation orders: q^{left} vs q^{right}")]
    TruncationMismatch { left: usize, right: usize },
    #[error("factor with colour-free constant term: {0}")]
    NonUnitFactor(String),
    #[error("a colour-degree cap is required for this operation")]
    DegreeCapRequired,
    #[error("series is not invertible (constant coefficient {0})")]
    NotInvertible(String),
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid product: {0}")]
    InvalidProduct(String),
    #[error("invalid dilation for this series: {monomial}*q^{n} maps to exponent {image}")]
    NegativeExponent { monomial: String, n: usize, image: i64 },
    #[error("truncation too low for substitution: {0}")]
    UndeterminedTruncation(String),
}

/// Serde adapter writing big integers as decimal strings.
pub mod bigint_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim()
            .parse()
            .map_err(|_| serde::de::Error::custom(format!("bad integer {s:?}")))
    }
}
