use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Monomial, SignedMonomial, TruncatedSeries};

/// One factor `(1 - coeff q^n)^{-exponent}` of an Euler product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerFactor {
    pub coeff: SignedMonomial,
    pub n: usize,
    #[serde(with = "super::bigint_str")]
    pub exponent: BigInt,
}

/// Multiplies `f` by `(1 - c mu q^n)^kappa` for any integer `kappa`, using
/// the binomial series `sum_j binom(kappa, j) (-c mu q^n)^j`.
pub fn mul_binomial_power(
    f: &TruncatedSeries,
    c: &BigInt,
    mu: &Monomial,
    n: usize,
    kappa: &BigInt,
) -> Result<TruncatedSeries, AlgebraError> {
    if kappa.is_zero() {
        return Ok(f.clone());
    }
    let jmax = if n == 0 {
        match (mu.degree(), f.degmax()) {
            (0, _) => return Err(AlgebraError::NonUnitFactor(format!("{c}*{mu}"))),
            (_, None) if kappa.is_negative() => return Err(AlgebraError::DegreeCapRequired),
            (_, None) => kappa.try_into().map_err(|_| AlgebraError::DegreeCapRequired)?,
            (d, Some(cap)) => (cap / d) as usize,
        }
    } else {
        f.qmax() / n
    };
    let mut out = f.clone();
    let mut coef = BigInt::one();
    let mut power = f.clone();
    for j in 1..=jmax {
        // binom(kappa, j) (-c)^j from binom(kappa, j-1) (-c)^{j-1}
        coef = coef * (BigInt::from(j as u64 - 1) - kappa) * c / BigInt::from(j as u64);
        if coef.is_zero() {
            break;
        }
        power = power.mul_term(mu, n);
        if power.is_zero() {
            break;
        }
        out.add_assign(&power.scale(&coef));
    }
    Ok(out)
}

/// Greedy factorization `f = prod (1 - c q^n)^{-e}`: the lowest surviving
/// term, first by q-exponent then by monomial order, is cancelled each step.
/// The constant coefficient must be 1.
pub fn euler_factorize(f: &TruncatedSeries) -> Result<Vec<EulerFactor>, AlgebraError> {
    let c0 = f.coeff(0);
    if c0.constant_term() != BigInt::one() {
        return Err(AlgebraError::NotInvertible(c0.to_string()));
    }
    let mut g = f.clone();
    let mut table = Vec::new();
    for n in 0..=f.qmax() {
        loop {
            let lowest = g
                .coeff(n)
                .terms()
                .iter()
                .find(|(m, _)| n > 0 || !m.is_one())
                .cloned();
            let Some((mu, k)) = lowest else { break };
            g = mul_binomial_power(&g, &BigInt::one(), &mu, n, &k)?;
            table.push(EulerFactor {
                coeff: SignedMonomial::positive(mu),
                n,
                exponent: k,
            });
        }
    }
    Ok(table)
}

/// Re-expands an Euler factor table to the given truncation.
pub fn expand_euler(
    table: &[EulerFactor],
    qmax: usize,
    degmax: Option<u32>,
) -> Result<TruncatedSeries, AlgebraError> {
    let mut acc = TruncatedSeries::one(qmax, degmax);
    for fac in table {
        if fac.n > qmax {
            continue;
        }
        acc = mul_binomial_power(&acc, &fac.coeff.sign_int(), &fac.coeff.vars, fac.n, &-&fac.exponent)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{product_expand, ProductFactor, ProductSpec};

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    #[test]
    fn distinct_parts_table() {
        let f = product_expand(&ProductSpec::new(vec![ProductFactor::distinct(m("a"), 1, 1)]), 8, None).unwrap();
        let t = euler_factorize(&f).unwrap();
        let head: Vec<(String, usize, i64)> = t
            .iter()
            .take(3)
            .map(|e| (e.coeff.vars.to_string(), e.n, i64::try_from(&e.exponent).unwrap()))
            .collect();
        assert_eq!(
            head,
            vec![("a".into(), 1, 1), ("a".into(), 2, 1), ("a^2".into(), 2, -1)]
        );
        assert_eq!(expand_euler(&t, 8, None).unwrap(), f);
    }

    #[test]
    fn unit_series_has_empty_table() {
        assert!(euler_factorize(&TruncatedSeries::one(9, None)).unwrap().is_empty());
    }

    #[test]
    fn partition_function_factors() {
        let f = product_expand(&ProductSpec::new(vec![ProductFactor::repeated(Monomial::one(), 1, 1)]), 12, None)
            .unwrap();
        let t = euler_factorize(&f).unwrap();
        assert_eq!(t.len(), 12);
        for (i, e) in t.iter().enumerate() {
            assert_eq!((e.n, e.exponent.clone(), e.coeff.vars.is_one()), (i + 1, BigInt::one(), true));
        }
    }

    #[test]
    fn binomial_power_matches_repeated_products() {
        let f = TruncatedSeries::one(10, None);
        let g = mul_binomial_power(&f, &BigInt::one(), &m("a"), 2, &BigInt::from(-3)).unwrap();
        let spec = ProductSpec::new(vec![ProductFactor {
            terms: Some(1),
            ..ProductFactor::new(SignedMonomial::positive(m("a")), 2, 1, 3)
        }]);
        assert_eq!(g, product_expand(&spec, 10, None).unwrap());
    }

    #[test]
    fn rejects_non_unit_constant() {
        assert!(euler_factorize(&TruncatedSeries::zero(3, None)).is_err());
    }
}
