//! Shared oracles and generators. The oracles count partitions directly,
//! without going through the crate.
#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use wwords::algebra::{Monomial, ProductFactor, ProductSpec, SubstitutionMap, TruncatedSeries, Var};

pub fn m(s: &str) -> Monomial {
    Monomial::parse(s).unwrap()
}

/// `table[k][n]`: partitions of `n` into `k` distinct parts from `allowed`.
pub fn distinct_parts(allowed: impl Fn(usize) -> bool, nmax: usize) -> Vec<Vec<u64>> {
    let kmax = nmax + 1;
    let mut t = vec![vec![0u64; nmax + 1]; kmax + 1];
    t[0][0] = 1;
    for part in (1..=nmax).filter(|p| allowed(*p)) {
        for k in (1..=kmax).rev() {
            for n in (part..=nmax).rev() {
                t[k][n] += t[k - 1][n - part];
            }
        }
    }
    t
}

/// `table[k][n]`: partitions of `n` into `k` parts from `allowed`, repeats allowed.
pub fn repeated_parts(allowed: impl Fn(usize) -> bool, nmax: usize) -> Vec<Vec<u64>> {
    let kmax = nmax + 1;
    let mut t = vec![vec![0u64; nmax + 1]; kmax + 1];
    t[0][0] = 1;
    for part in (1..=nmax).filter(|p| allowed(*p)) {
        for k in 1..=kmax {
            for n in part..=nmax {
                t[k][n] += t[k - 1][n - part];
            }
        }
    }
    t
}

/// Number of partitions of `n`, counted by listing them one by one.
pub fn partitions_by_listing(n: usize) -> u64 {
    fn go(left: usize, max: usize) -> u64 {
        if left == 0 {
            return 1;
        }
        (1..=max.min(left)).map(|p| go(left - p, p)).sum()
    }
    go(n, n)
}

/// Product of independent factors, each a `(variable, table)` pair with
/// `table[k][n]` counting the objects of weight `variable^k q^n`.
pub fn combine(qmax: usize, factors: &[(&str, Vec<Vec<u64>>)]) -> TruncatedSeries {
    let mut acc: Vec<(usize, Monomial, u64)> = vec![(0, Monomial::one(), 1)];
    for (var, table) in factors {
        let mut next = Vec::new();
        for (n0, mu, c) in &acc {
            for (k, row) in table.iter().enumerate() {
                for (n, count) in row.iter().enumerate() {
                    if *count == 0 || n0 + n > qmax {
                        continue;
                    }
                    let w = if var.is_empty() { Monomial::one() } else { Monomial::var_pow(Var::named(var), k as u32) };
                    next.push((n0 + n, mu.mul(&w), c * count));
                }
            }
        }
        acc = next;
    }
    TruncatedSeries::from_terms(qmax, None, acc.into_iter().map(|(n, mu, c)| (n, mu, BigInt::from(c))))
}

fn monomial_ab() -> impl Strategy<Value = Monomial> {
    (0u32..3, 0u32..3).prop_map(|(i, j)| Monomial::var_pow(Var::named("a"), i).mul(&Monomial::var_pow(Var::named("b"), j)))
}

/// Sparse series in `a`, `b` with small coefficients and constant term 1.
pub fn unit_series() -> impl Strategy<Value = TruncatedSeries> {
    (3usize..9).prop_flat_map(|qmax| {
        prop::collection::vec((1..=qmax, monomial_ab(), -3i64..4), 0..8).prop_map(move |terms| {
            let terms = terms
                .into_iter()
                .map(|(n, mu, c)| (n, mu, BigInt::from(c)))
                .chain([(0, Monomial::one(), BigInt::from(1))]);
            TruncatedSeries::from_terms(qmax, None, terms)
        })
    })
}

/// Any sparse series at a fixed order.
pub fn series_at(qmax: usize) -> impl Strategy<Value = TruncatedSeries> {
    prop::collection::vec((0..=qmax, monomial_ab(), -3i64..4), 0..8).prop_map(move |terms| {
        TruncatedSeries::from_terms(qmax, None, terms.into_iter().map(|(n, mu, c)| (n, mu, BigInt::from(c))))
    })
}

/// `q -> q^m`, `a -> image q^s` with non-negative shifts.
pub fn substitution() -> impl Strategy<Value = SubstitutionMap> {
    (1u32..4, monomial_ab(), 0i64..3, monomial_ab(), 0i64..3).prop_map(|(qp, ia, sa, ib, sb)| {
        SubstitutionMap::new(qp).with(Var::named("a"), ia, sa).with(Var::named("b"), ib, sb)
    })
}

pub fn product_spec() -> impl Strategy<Value = ProductSpec> {
    let factor = (any::<bool>(), monomial_ab(), 1u32..4, 1u32..4, -2i64..3, prop::option::of(1u32..4)).prop_map(
        |(neg, mu, start, modulus, power, terms)| {
            let coeff = if neg {
                wwords::algebra::SignedMonomial::negative(mu)
            } else {
                wwords::algebra::SignedMonomial::positive(mu)
            };
            let mut f = ProductFactor::new(coeff, start, modulus, power);
            f.terms = terms;
            f
        },
    );
    prop::collection::vec(factor, 0..4).prop_map(ProductSpec::new)
}
