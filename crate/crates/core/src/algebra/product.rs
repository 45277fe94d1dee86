use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Monomial, TruncatedSeries};

/// `sign * vars`, the coefficient `c` of a factor `(1 - c q^n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedMonomial {
    pub sign: i8,
    pub vars: Monomial,
}

impl SignedMonomial {
    pub fn new(sign: i8, vars: Monomial) -> Self {
        SignedMonomial { sign, vars }
    }

    pub fn positive(vars: Monomial) -> Self {
        Self::new(1, vars)
    }

    pub fn negative(vars: Monomial) -> Self {
        Self::new(-1, vars)
    }

    pub fn sign_int(&self) -> BigInt {
        BigInt::from(self.sign)
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        write!(f, "{}", self.vars)
    }
}

/// One infinite (or, with `terms`, finite) product
/// `prod_{j >= 0} (1 - c q^{start + j*mod})^{-power}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFactor {
    pub coeff: SignedMonomial,
    pub start: u32,
    #[serde(rename = "mod")]
    pub modulus: u32,
    pub power: i64,
    /// Number of factors taken; absent means the product is infinite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<u32>,
}

impl ProductFactor {
    pub fn new(coeff: SignedMonomial, start: u32, modulus: u32, power: i64) -> Self {
        ProductFactor {
            coeff,
            start,
            modulus,
            power,
            terms: None,
        }
    }

    /// `(-m q^start; q^mod)_inf`, a product of distinct-part factors `1 + m q^n`.
    pub fn distinct(m: Monomial, start: u32, modulus: u32) -> Self {
        Self::new(SignedMonomial::negative(m), start, modulus, -1)
    }

    /// `1 / (m q^start; q^mod)_inf`, a product of repeatable-part factors.
    pub fn repeated(m: Monomial, start: u32, modulus: u32) -> Self {
        Self::new(SignedMonomial::positive(m), start, modulus, 1)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        if self.modulus == 0 {
            return Err(AlgebraError::InvalidProduct("modulus must be at least 1".into()));
        }
        if self.coeff.sign != 1 && self.coeff.sign != -1 {
            return Err(AlgebraError::InvalidProduct(format!("sign must be +1 or -1, got {}", self.coeff.sign)));
        }
        if self.start == 0 && self.coeff.vars.is_one() && self.power != 0 {
            return Err(AlgebraError::NonUnitFactor(format!("1 - ({})*q^0", self.coeff)));
        }
        Ok(())
    }

    fn exponents(&self, qmax: usize) -> impl Iterator<Item = usize> + '_ {
        let limit = self.terms.map(|t| t as usize).unwrap_or(usize::MAX);
        (0..limit)
            .map(move |j| self.start as usize + j * self.modulus as usize)
            .take_while(move |&n| n <= qmax)
    }
}

impl fmt::Display for ProductFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = match self.start {
            0 => format!("{}", self.coeff),
            1 => format!("{}*q", self.coeff).replace("1*q", "q"),
            s => format!("{}*q^{s}", self.coeff).replace(&format!("1*q^{s}"), &format!("q^{s}")),
        };
        let base = if self.modulus == 1 { "q".to_string() } else { format!("q^{}", self.modulus) };
        let n = match self.terms {
            Some(t) => t.to_string(),
            None => "inf".to_string(),
        };
        match -self.power {
            1 => write!(f, "({x};{base})_{n}"),
            e => write!(f, "({x};{base})_{n}^{e}"),
        }
    }
}

/// A finite list of q-Pochhammer-type factors; serialized as a JSON array.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProductSpec {
    pub factors: Vec<ProductFactor>,
}

impl ProductSpec {
    pub fn new(factors: Vec<ProductFactor>) -> Self {
        ProductSpec { factors }
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        self.factors.iter().try_for_each(ProductFactor::validate)
    }

    /// The same factors with every power negated (the multiplicative inverse).
    pub fn inverse(&self) -> ProductSpec {
        ProductSpec {
            factors: self
                .factors
                .iter()
                .map(|f| ProductFactor { power: -f.power, ..f.clone() })
                .collect(),
        }
    }

    pub fn concat(&self, other: &ProductSpec) -> ProductSpec {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        ProductSpec { factors }
    }
}

impl fmt::Display for ProductSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Multiplies `s` by `(1 - c m q^n)^{-power}`.
pub(crate) fn apply_binomial(
    s: &TruncatedSeries,
    c: &BigInt,
    m: &Monomial,
    n: usize,
    power: i64,
) -> Result<TruncatedSeries, AlgebraError> {
    let mut out = s.clone();
    if power > 0 {
        for _ in 0..power {
            out = TruncatedSeries::geometric_solve_scaled(&out, c, m, n)?;
        }
    } else {
        for _ in 0..(-power) {
            out = out.sub(&out.mul_scaled_term(c, m, n));
        }
    }
    Ok(out)
}

/// Expands a product specification to order `qmax` (and colour degree
/// `degmax`). The constant term of the result is 1.
pub fn product_expand(p: &ProductSpec, qmax: usize, degmax: Option<u32>) -> Result<TruncatedSeries, AlgebraError> {
    p.validate()?;
    let mut acc = TruncatedSeries::one(qmax, degmax);
    for factor in &p.factors {
        if factor.power == 0 {
            continue;
        }
        let c = factor.coeff.sign_int();
        for n in factor.exponents(qmax) {
            if n == 0 && degmax.is_none() && factor.power > 0 {
                return Err(AlgebraError::DegreeCapRequired);
            }
            if degmax.is_some_and(|d| factor.coeff.vars.degree() > d) {
                break;
            }
            acc = apply_binomial(&acc, &c, &factor.coeff.vars, n, factor.power)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;
    use num_traits::One;

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn schur_product() -> ProductSpec {
        ProductSpec::new(vec![ProductFactor::distinct(m("a"), 1, 1), ProductFactor::distinct(m("b"), 1, 1)])
    }

    #[test]
    fn first_order_of_distinct_products() {
        let s = product_expand(&schur_product(), 1, None).unwrap();
        assert!(s.coeff(0).is_one());
        assert_eq!(s.coeff(1).to_string(), "a + b");
    }

    #[test]
    fn empty_product_is_one() {
        assert!(product_expand(&ProductSpec::default(), 7, None).unwrap().is_one());
    }

    #[test]
    fn product_times_inverse_is_one() {
        let p = schur_product();
        let f = product_expand(&p, 12, None).unwrap();
        let g = product_expand(&p.inverse(), 12, None).unwrap();
        assert!(f.mul(&g).is_one());
        assert!(product_expand(&p.concat(&p.inverse()), 12, None).unwrap().is_one());
    }

    #[test]
    fn euler_function_inverse_counts_partitions() {
        let p = ProductSpec::new(vec![ProductFactor::repeated(Monomial::one(), 1, 1)]);
        let s = product_expand(&p, 10, None).unwrap();
        let counts: Vec<i64> = s.counts().iter().map(|c| i64::try_from(c).unwrap()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn colour_free_constant_factor_is_rejected() {
        let p = ProductSpec::new(vec![ProductFactor::repeated(Monomial::one(), 0, 1)]);
        assert!(matches!(product_expand(&p, 3, None), Err(AlgebraError::NonUnitFactor(_))));
    }

    #[test]
    fn size_zero_factor_needs_degree_cap() {
        let p = ProductSpec::new(vec![ProductFactor::repeated(m("t"), 0, 1)]);
        assert!(matches!(product_expand(&p, 3, None), Err(AlgebraError::DegreeCapRequired)));
        let s = product_expand(&p, 0, Some(3)).unwrap();
        assert_eq!(s.coeff(0), &Polynomial::from_terms((0..=3).map(|k| (m("t").pow(k), BigInt::one()))));
    }

    #[test]
    fn finite_factor_and_display() {
        let mut f = ProductFactor::distinct(m("a"), 2, 3);
        f.terms = Some(1);
        let s = product_expand(&ProductSpec::new(vec![f.clone()]), 10, None).unwrap();
        assert_eq!(s.coeff(2).to_string(), "a");
        assert!(s.coeff(5).is_zero());
        assert_eq!(ProductFactor::distinct(m("a"), 1, 4).to_string(), "(-a*q;q^4)_inf");
        assert_eq!(ProductFactor::repeated(Monomial::one(), 1, 1).to_string(), "(q;q)_inf^-1");
    }

    #[test]
    fn json_schema() {
        let text = r#"[{"coeff": {"sign": -1, "vars": {"a": 1}}, "start": 1, "mod": 1, "power": -1}]"#;
        let p: ProductSpec = serde_json::from_str(text).unwrap();
        assert_eq!(p.factors[0], ProductFactor::distinct(m("a"), 1, 1));
        let back = serde_json::to_value(&p).unwrap();
        assert_eq!(back, serde_json::from_str::<serde_json::Value>(text).unwrap());
    }
}
