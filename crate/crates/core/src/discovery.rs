//! Searching for colour relations that turn a series into an infinite
//! product, and recognizing periodic products from their Euler exponents.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    euler_factorize, product_expand, substitute_unchecked, Monomial, ProductFactor, ProductSpec, SignedMonomial,
    SubstitutionMap, TruncatedSeries, Var,
};
use crate::enumerate::enumerate_series;
use crate::error::{Error, Result};
use crate::systems::ColouredSystem;

pub const SEARCH_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    /// `(1 + mu q^n)^k`
    Distinct,
    /// `(1 - mu q^n)^-k`
    Repeated,
    /// `(1 - mu q^n)^k`
    Inverse,
    /// `(1 - mu q^n)^-k` too close to the truncation to tell apart from a
    /// distinct-part factor.
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CondensedFactor {
    pub kind: FactorKind,
    pub monomial: Monomial,
    #[serde(with = "crate::algebra::bigint_str")]
    pub multiplicity: BigInt,
}

/// Euler exponents grouped by `n`, with each pair `(1 - mu q^n)^-1`,
/// `(1 - mu^2 q^2n)` merged into `(1 + mu q^n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CondensedTable {
    pub qmax: usize,
    pub rows: BTreeMap<usize, Vec<CondensedFactor>>,
}

impl CondensedTable {
    /// No factor has a negative exponent.
    pub fn is_positive(&self) -> bool {
        self.rows.values().flatten().all(|f| f.kind != FactorKind::Inverse)
    }

    fn row(&self, n: usize) -> &[CondensedFactor] {
        self.rows.get(&n).map_or(&[], Vec::as_slice)
    }

    /// Smallest period `m`, then smallest initial segment `i0`, such that
    /// rows `i0+1 ..` repeat with period `m` across the reliable range
    /// `n <= qmax/2`, seeing the pattern at least twice.
    pub fn period(&self) -> Option<(usize, usize)> {
        let reliable = self.qmax / 2;
        for m in 1..=reliable / 2 {
            for i0 in 0..=m {
                if reliable < i0 + 2 * m {
                    continue;
                }
                if (i0 + 1..=reliable - m).all(|n| self.row(n) == self.row(n + m)) {
                    return Some((m, i0));
                }
            }
        }
        None
    }
}

/// Condenses the Euler factorization of `f`; fails on a constant term
/// other than 1 or on a factor at `q^0`.
pub fn condense(f: &TruncatedSeries) -> Result<CondensedTable> {
    let table = euler_factorize(f)?;
    let qmax = f.qmax();
    let mut exps: BTreeMap<(usize, Monomial), BigInt> = BTreeMap::new();
    for e in table {
        if e.n == 0 {
            return Err(Error::Input("series has factors at q^0".into()));
        }
        *exps.entry((e.n, e.coeff.vars)).or_default() += e.exponent;
    }
    let mut rows: BTreeMap<usize, Vec<CondensedFactor>> = BTreeMap::new();
    for n in 1..=qmax {
        let keys: Vec<Monomial> = exps.range((n, Monomial::one())..).take_while(|((k, _), _)| *k == n).map(|((_, m), _)| m.clone()).collect();
        for mu in keys {
            let e = exps[&(n, mu.clone())].clone();
            if e.is_zero() {
                continue;
            }
            let row = rows.entry(n).or_default();
            if e.is_negative() {
                row.push(CondensedFactor {
                    kind: FactorKind::Inverse,
                    monomial: mu,
                    multiplicity: -e,
                });
                continue;
            }
            if 2 * n > qmax {
                row.push(CondensedFactor {
                    kind: FactorKind::Undecided,
                    monomial: mu,
                    multiplicity: e,
                });
                continue;
            }
            let square = (2 * n, mu.pow(2));
            let e2 = exps.get(&square).cloned().unwrap_or_default();
            let paired = if e2.is_negative() { e.clone().min(-e2) } else { BigInt::zero() };
            if !paired.is_zero() {
                *exps.get_mut(&square).expect("negative entry exists") += &paired;
                row.push(CondensedFactor {
                    kind: FactorKind::Distinct,
                    monomial: mu.clone(),
                    multiplicity: paired.clone(),
                });
            }
            let rest = e - paired;
            if !rest.is_zero() {
                row.push(CondensedFactor {
                    kind: FactorKind::Repeated,
                    monomial: mu,
                    multiplicity: rest,
                });
            }
        }
        if let Some(r) = rows.get_mut(&n) {
            r.sort();
        }
    }
    rows.retain(|_, r| !r.is_empty());
    Ok(CondensedTable { qmax, rows })
}

fn to_factor(c: &CondensedFactor, start: usize, modulus: usize, terms: Option<u32>) -> Option<ProductFactor> {
    let k = c.multiplicity.to_i64()?;
    let (coeff, power) = match c.kind {
        FactorKind::Distinct => (SignedMonomial::negative(c.monomial.clone()), -k),
        FactorKind::Repeated | FactorKind::Undecided => (SignedMonomial::positive(c.monomial.clone()), k),
        FactorKind::Inverse => (SignedMonomial::positive(c.monomial.clone()), -k),
    };
    let mut f = ProductFactor::new(coeff, start as u32, modulus as u32, power);
    f.terms = terms;
    Some(f)
}

/// A periodic product shape for `f`: an initial run of single factors
/// followed by one infinite factor per residue class. The result always
/// re-expands to `f` through `q^qmax`; `None` when no period is found or
/// the guess does not re-expand.
pub fn recognize_periodic_product(f: &TruncatedSeries, qmax: usize) -> Option<ProductSpec> {
    let f = f.truncate(qmax.min(f.qmax())).ok()?;
    if !f.coeff(0).is_one() {
        return None;
    }
    let table = condense(&f).ok()?;
    let spec = if table.rows.is_empty() {
        ProductSpec::default()
    } else {
        let (m, i0) = table.period()?;
        let mut factors = Vec::new();
        for n in 1..=i0 {
            for c in table.row(n) {
                factors.push(to_factor(c, n, 1, Some(1))?);
            }
        }
        for n in i0 + 1..=i0 + m {
            for c in table.row(n) {
                factors.push(to_factor(c, n, m, None)?);
            }
        }
        ProductSpec::new(factors)
    };
    let back = product_expand(&spec, f.qmax(), f.degmax()).ok()?;
    back.agrees_with(&f).then_some(spec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCandidate {
    /// Image of each free colour, in the primary colours.
    pub substitution: BTreeMap<Var, Monomial>,
    pub product_like: bool,
    /// Distinct condensed factors in one period, when periodic.
    pub factors_per_period: Option<usize>,
    pub period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub product: Option<ProductSpec>,
}

impl RelationCandidate {
    fn rank_key(&self) -> (bool, usize) {
        (!self.product_like, self.factors_per_period.unwrap_or(usize::MAX))
    }
}

struct Search<'a> {
    series: &'a TruncatedSeries,
    free: Vec<(Var, usize)>,
    images: Vec<Monomial>,
    qmax: usize,
}

impl Search<'_> {
    fn apply(&self, assigned: &[(Var, Monomial)], upto: usize) -> Result<TruncatedSeries> {
        let f = self.series.truncate(upto)?;
        let s = assigned
            .iter()
            .fold(SubstitutionMap::new(1), |s, (v, m)| s.with(*v, m.clone(), 0));
        Ok(substitute_unchecked(&f, &s, upto)?)
    }

    /// Extends `assigned` with every image for the next free colour, pruning
    /// once the series below the following free colour already has a
    /// negative Euler exponent (no later choice can change those terms).
    fn walk(&self, assigned: &mut Vec<(Var, Monomial)>, out: &mut Vec<RelationCandidate>) -> Result<()> {
        let idx = assigned.len();
        if idx == self.free.len() {
            out.push(self.evaluate(assigned)?);
            return Ok(());
        }
        let limit = self.free.get(idx + 1).map_or(self.qmax, |(_, first)| (first - 1).min(self.qmax));
        for img in &self.images {
            assigned.push((self.free[idx].0, img.clone()));
            if condense(&self.apply(assigned, limit)?)?.is_positive() {
                self.walk(assigned, out)?;
            }
            assigned.pop();
        }
        Ok(())
    }

    fn evaluate(&self, assigned: &[(Var, Monomial)]) -> Result<RelationCandidate> {
        let f = self.apply(assigned, self.qmax)?;
        let table = condense(&f)?;
        let period = if table.is_positive() { table.period() } else { None };
        let product = period.and_then(|_| recognize_periodic_product(&f, self.qmax));
        let factors = period.map(|(m, i0)| (i0 + 1..=i0 + m).map(|n| table.row(n).len()).sum());
        Ok(RelationCandidate {
            substitution: assigned.iter().cloned().collect(),
            product_like: period.is_some(),
            factors_per_period: factors,
            period: period.map(|(m, _)| m),
            product,
        })
    }
}

/// Tries every image `prod p^e` (`0 <= e <= max_exponent` per primary `p`)
/// for each non-primary colour variable of `sys`. Returns the assignments
/// that survive pruning, product-like ones first, then by fewer factors per
/// period, ties kept in search order.
pub fn search_relations(sys: &ColouredSystem, primaries: &[Var], qmax: usize, max_exponent: u32) -> Result<Vec<RelationCandidate>> {
    let vars: Vec<Var> = sys.variables().into_iter().filter(|v| !sys.erased().contains(v)).collect();
    if let Some(p) = primaries.iter().find(|p| !vars.contains(p)) {
        return Err(Error::InvalidParameter(format!("{} is not a colour variable of {}", p.name(), sys.name())));
    }
    let firsts = sys.first_sizes();
    let mut free: Vec<(Var, usize)> = vars
        .iter()
        .filter(|v| !primaries.contains(v) && Some(**v) != sys.overline_marker())
        .map(|v| {
            let first = sys
                .colours()
                .iter()
                .zip(&firsts)
                .filter(|(c, _)| c.weight.exponent(*v) > 0)
                .filter_map(|(_, k)| *k)
                .min()
                .map_or(usize::MAX, |k| k as usize);
            (*v, first)
        })
        .collect();
    free.sort_by_key(|(v, first)| (*first, *v));

    let per = (max_exponent as u128 + 1).checked_pow(primaries.len() as u32).unwrap_or(u128::MAX);
    let size = per.checked_pow(free.len() as u32).unwrap_or(u128::MAX);
    if size > SEARCH_CAP {
        return Err(Error::SearchSpace { size, cap: SEARCH_CAP });
    }
    let mut images = vec![Monomial::one()];
    for p in primaries {
        images = images
            .iter()
            .flat_map(|m| (0..=max_exponent).map(move |e| m.mul(&Monomial::var_pow(*p, e))))
            .collect();
    }

    let series = enumerate_series(sys, qmax, None)?;
    let search = Search {
        series: &series,
        free,
        images,
        qmax,
    };
    let mut out = if search.free.is_empty() {
        vec![search.evaluate(&[])?]
    } else {
        let limit = search.free.get(1).map_or(qmax, |(_, first)| (first - 1).min(qmax));
        let branches: Vec<Vec<RelationCandidate>> = search
            .images
            .par_iter()
            .map(|img| {
                let mut assigned = vec![(search.free[0].0, img.clone())];
                let mut found = Vec::new();
                if condense(&search.apply(&assigned, limit)?)?.is_positive() {
                    search.walk(&mut assigned, &mut found)?;
                }
                Ok(found)
            })
            .collect::<Result<_>>()?;
        branches.into_iter().flatten().collect()
    };
    out.sort_by_key(RelationCandidate::rank_key);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{build_preset, PresetParams};

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn expand(p: &ProductSpec, qmax: usize) -> TruncatedSeries {
        product_expand(p, qmax, None).unwrap()
    }

    #[test]
    fn recognizes_distinct_parts() {
        let p = ProductSpec::new(vec![ProductFactor::distinct(m("a"), 1, 1), ProductFactor::distinct(m("b"), 1, 1)]);
        let f = expand(&p, 20);
        let got = recognize_periodic_product(&f, 20).unwrap();
        assert_eq!(got.factors.len(), 2);
        assert!(got.factors.iter().all(|x| x.modulus == 1 && x.power == -1));
        assert!(expand(&got, 20).agrees_with(&f));
    }

    #[test]
    fn recognizes_partitions() {
        let f = expand(&ProductSpec::new(vec![ProductFactor::repeated(Monomial::one(), 1, 1)]), 24);
        let got = recognize_periodic_product(&f, 24).unwrap();
        assert_eq!(got, ProductSpec::new(vec![ProductFactor::repeated(Monomial::one(), 1, 1)]));
    }

    #[test]
    fn constant_one_is_the_empty_product() {
        let got = recognize_periodic_product(&TruncatedSeries::one(10, None), 10).unwrap();
        assert!(got.factors.is_empty());
    }

    #[test]
    fn non_periodic_series_is_rejected() {
        // 1 + q + q^2 + 2q^3 + ... with exponents 1, 0, 1, 1, 0, 0, 1, ...
        let mut factors = Vec::new();
        for n in [1u32, 3, 4, 7, 8, 9, 13] {
            let mut f = ProductFactor::repeated(Monomial::one(), n, 1);
            f.terms = Some(1);
            factors.push(f);
        }
        let f = expand(&ProductSpec::new(factors), 16);
        assert!(recognize_periodic_product(&f, 16).is_none());
    }

    #[test]
    fn mod3_needs_c_equal_ab() {
        let sys = build_preset("schur-dilated-mod3", &PresetParams::default()).unwrap();
        let cands = search_relations(&sys, &[Var::named("a"), Var::named("b")], 18, 2).unwrap();
        let good: Vec<_> = cands.iter().filter(|c| c.product_like).collect();
        assert_eq!(good.len(), 1, "{good:?}");
        assert_eq!(good[0].substitution[&Var::named("c")], m("a*b"));
        assert_eq!(good[0].period, Some(3));
        assert!(good[0].product.is_some());
        assert_eq!(cands[0], *good[0]);
    }

    #[test]
    fn no_free_colours_gives_one_candidate() {
        let sys = build_preset("distinct-mod4", &PresetParams::default()).unwrap();
        let cands = search_relations(&sys, &[Var::named("a"), Var::named("b")], 16, 2).unwrap();
        assert_eq!(cands.len(), 1);
        assert!(cands[0].product_like && cands[0].substitution.is_empty());
    }

    #[test]
    fn search_space_is_capped() {
        let sys = build_preset("siladic-dilated", &PresetParams::default()).unwrap();
        let e = search_relations(&sys, &[Var::named("a"), Var::named("b")], 10, 4).unwrap_err();
        assert!(matches!(e, Error::SearchSpace { .. }));
    }

    #[test]
    fn primaries_must_be_colours() {
        let sys = build_preset("schur-dilated-mod3", &PresetParams::default()).unwrap();
        assert!(search_relations(&sys, &[Var::named("z")], 10, 1).is_err());
    }
}
