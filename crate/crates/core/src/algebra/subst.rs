use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{AlgebraError, Monomial, Polynomial, TruncatedSeries, Var};

/// Image of one colour variable: `v -> vars * q^shift`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarImage {
    pub vars: Monomial,
    pub shift: i64,
}

/// `q -> q^qpower` together with `v -> image(v)` for the listed variables;
/// unlisted variables are fixed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionMap {
    pub qpower: u32,
    #[serde(default)]
    pub images: BTreeMap<Var, VarImage>,
}

impl Default for SubstitutionMap {
    fn default() -> Self {
        Self::identity()
    }
}

impl SubstitutionMap {
    pub fn identity() -> Self {
        SubstitutionMap {
            qpower: 1,
            images: BTreeMap::new(),
        }
    }

    pub fn new(qpower: u32) -> Self {
        SubstitutionMap {
            qpower,
            images: BTreeMap::new(),
        }
    }

    pub fn with(mut self, v: Var, vars: Monomial, shift: i64) -> Self {
        self.images.insert(v, VarImage { vars, shift });
        self
    }

    pub fn is_identity(&self) -> bool {
        self.qpower == 1
            && self
                .images
                .iter()
                .all(|(v, img)| img.shift == 0 && img.vars == Monomial::var(*v))
    }

    /// Largest negative shift per unit of colour degree (0 if none).
    pub fn max_negative_shift(&self) -> u64 {
        self.images.values().map(|img| (-img.shift).max(0) as u64).max().unwrap_or(0)
    }

    /// True when every image is a single variable of degree one, so the
    /// colour degree of each monomial is preserved.
    pub fn preserves_degree(&self) -> bool {
        self.images.values().all(|img| img.vars.degree() == 1)
    }

    /// Image of `mu * q^n` as `(monomial, new exponent)`.
    pub fn map_term(&self, mu: &Monomial, n: usize) -> (Monomial, i64) {
        let mut shift = self.qpower as i64 * n as i64;
        let mut pairs: Vec<(Var, u32)> = Vec::with_capacity(mu.iter().count());
        for (v, e) in mu.iter() {
            match self.images.get(&v) {
                Some(img) => {
                    shift += img.shift * e as i64;
                    pairs.extend(img.vars.iter().map(|(w, k)| (w, k * e)));
                }
                None => pairs.push((v, e)),
            }
        }
        (Monomial::from_pairs(pairs), shift)
    }
}

/// Applies the substitution, keeping output exponents up to `new_qmax`.
///
/// Fails unless every retained output coefficient is determined by the
/// retained input coefficients: an unseen input term `mu q^n` with
/// `n > f.qmax` lands at exponent at least `m (f.qmax + 1) - s * deg(mu)`,
/// where `s` is the largest negative shift, so this must exceed `new_qmax`.
pub fn substitute(f: &TruncatedSeries, s: &SubstitutionMap, new_qmax: usize) -> Result<TruncatedSeries, AlgebraError> {
    let m = s.qpower as i64;
    let neg = s.max_negative_shift() as i64;
    let floor = match (neg, f.degmax()) {
        (0, _) => m * (f.qmax() as i64 + 1),
        (_, Some(d)) => m * (f.qmax() as i64 + 1) - neg * d as i64,
        (_, None) => {
            return Err(AlgebraError::UndeterminedTruncation(format!(
                "negative shifts need a degree cap on the input (q^{new_qmax} requested)"
            )))
        }
    };
    if floor <= new_qmax as i64 {
        return Err(AlgebraError::UndeterminedTruncation(format!(
            "input known to q^{} only determines output below q^{floor}, but q^{new_qmax} was requested",
            f.qmax()
        )));
    }
    substitute_unchecked(f, s, new_qmax)
}

/// Applies the substitution without the determinacy check. The caller is
/// responsible for knowing that the input order suffices.
pub fn substitute_unchecked(
    f: &TruncatedSeries,
    s: &SubstitutionMap,
    new_qmax: usize,
) -> Result<TruncatedSeries, AlgebraError> {
    if s.qpower == 0 {
        return Err(AlgebraError::Parse("substitution q-power must be positive".into()));
    }
    let degmax = if s.preserves_degree() { f.degmax() } else { None };
    let mut buckets: Vec<Vec<(Monomial, BigInt)>> = vec![Vec::new(); new_qmax + 1];
    for (n, p) in f.coeffs().iter().enumerate() {
        for (mu, c) in p.terms() {
            let (img, e) = s.map_term(mu, n);
            if e < 0 {
                return Err(AlgebraError::NegativeExponent {
                    monomial: mu.to_string(),
                    n,
                    image: e,
                });
            }
            if e as usize <= new_qmax {
                buckets[e as usize].push((img, c.clone()));
            }
        }
    }
    let coeffs = buckets.into_iter().map(Polynomial::from_terms).collect();
    Ok(TruncatedSeries::from_coeffs(new_qmax, degmax, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn single(mono: &str, n: usize, qmax: usize, degmax: Option<u32>) -> TruncatedSeries {
        TruncatedSeries::monomial_term(qmax, degmax, m(mono), n)
    }

    #[test]
    fn mod3_shift_keeps_part_one() {
        let s = SubstitutionMap::new(3).with(Var::named("a"), m("a"), -2);
        let out = substitute(&single("a", 1, 4, Some(4)), &s, 3).unwrap();
        assert_eq!(out.coeff(1), &Polynomial::monomial(m("a")));
    }

    #[test]
    fn mod4_sends_first_ab_part_to_zero() {
        let s = SubstitutionMap::new(4)
            .with(Var::named("a"), m("a"), -3)
            .with(Var::named("b"), m("b"), -1);
        let out = substitute_unchecked(&single("a*b", 1, 4, None), &s, 4).unwrap();
        assert_eq!(out.coeff(0), &Polynomial::monomial(m("a*b")));
    }

    #[test]
    fn identity_is_noop() {
        let f = single("a", 2, 5, None).add(&TruncatedSeries::one(5, None));
        assert_eq!(substitute(&f, &SubstitutionMap::identity(), 5).unwrap(), f);
        assert!(SubstitutionMap::identity().is_identity());
    }

    #[test]
    fn negative_exponent_is_an_error() {
        let s = SubstitutionMap::new(1).with(Var::named("a"), m("a"), -2);
        assert!(matches!(
            substitute_unchecked(&single("a", 1, 3, None), &s, 3),
            Err(AlgebraError::NegativeExponent { .. })
        ));
    }

    #[test]
    fn determinacy_check() {
        let s = SubstitutionMap::new(2).with(Var::named("a"), m("a"), -1);
        let f = TruncatedSeries::one(5, None);
        assert!(substitute(&f, &s, 5).is_err());
        let f = TruncatedSeries::one(5, Some(3));
        assert!(substitute(&f, &s, 8).is_ok());
        assert!(substitute(&f, &s, 9).is_err());
    }

    #[test]
    fn colour_swap_with_shift() {
        // a -> b, b -> a q
        let s = SubstitutionMap::new(1)
            .with(Var::named("a"), m("b"), 0)
            .with(Var::named("b"), m("a"), 1);
        let f = single("a*b^2", 1, 6, None);
        let out = substitute(&f, &s, 6).unwrap();
        assert_eq!(out.coeff(3).coefficient(&m("a^2*b")), BigInt::one());
    }
}
