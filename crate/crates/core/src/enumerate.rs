//! Brute-force generation of coloured (over)partitions.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Monomial, TruncatedSeries, Var};
use crate::error::{Error, Result};
use crate::systems::{dilation_order_bound, ColouredPart, ColouredSystem, DilationSpec};

pub const DEFAULT_NODE_LIMIT: u64 = 10_000_000;

/// Largest `n` accepted by [`list_partitions`].
pub const LIST_BOUND: usize = 60;

/// Node limit from `WWORDS_NODE_LIMIT`, or [`DEFAULT_NODE_LIMIT`].
pub fn node_limit() -> u64 {
    std::env::var("WWORDS_NODE_LIMIT")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_LIMIT)
}

/// Outcome of [`is_valid_partition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validity {
    pub valid: bool,
    /// Index of the offending part (or of the upper part of the offending pair).
    pub position: Option<usize>,
    pub reason: Option<String>,
}

impl Validity {
    fn ok() -> Self {
        Validity {
            valid: true,
            position: None,
            reason: None,
        }
    }

    fn fail(position: usize, reason: String) -> Self {
        Validity {
            valid: false,
            position: Some(position),
            reason: Some(reason),
        }
    }
}

/// Checks domains, forbidden parts and consecutive gaps of a sequence given
/// largest part first.
pub fn is_valid_partition(sys: &ColouredSystem, parts: &[ColouredPart]) -> Validity {
    for (i, p) in parts.iter().enumerate() {
        if let Err(e) = sys.check_part(p) {
            return Validity::fail(i, e);
        }
    }
    for (i, w) in parts.windows(2).enumerate() {
        let (u, l) = (&w[0], &w[1]);
        let gap = sys.min_gap(u, l);
        let (lu, ll) = (sys.part_label(u), sys.part_label(l));
        if l.size > u.size {
            return Validity::fail(i, format!("{ll} follows the smaller part {lu}"));
        }
        let d = u.size - l.size;
        if d < gap {
            return Validity::fail(i, format!("{lu} then {ll}: difference {d} is below the minimum {gap}"));
        }
    }
    Validity::ok()
}

/// Packs exponent vectors of the tracked variables into a `u128`.
struct Packing {
    vars: Vec<Var>,
    shifts: Vec<u32>,
    widths: Vec<u32>,
}

impl Packing {
    fn new(vars: Vec<Var>, max_exponents: &[u64]) -> Result<Self> {
        let widths: Vec<u32> = max_exponents.iter().map(|e| (64 - e.leading_zeros()).max(1)).collect();
        let total: u32 = widths.iter().sum();
        if total > 128 {
            return Err(Error::InvalidParameter(format!(
                "too many colour variables to enumerate at this order ({total} bits of exponents)"
            )));
        }
        let mut shifts = Vec::with_capacity(widths.len());
        let mut at = 0;
        for w in &widths {
            shifts.push(at);
            at += w;
        }
        Ok(Packing { vars, shifts, widths })
    }

    fn pack(&self, m: &Monomial) -> u128 {
        self.vars
            .iter()
            .zip(&self.shifts)
            .map(|(v, s)| (m.exponent(*v) as u128) << s)
            .sum()
    }

    fn unpack(&self, x: u128) -> Monomial {
        Monomial::from_pairs(self.vars.iter().zip(self.shifts.iter().zip(&self.widths)).map(|(v, (s, w))| {
            let mask = (1u128 << w) - 1;
            (*v, ((x >> s) & mask) as u32)
        }))
    }
}

type Counts = HashMap<(u32, u128), u64>;

/// Depth-first generator over partitions, largest part first.
struct Walker<'a> {
    parts: Vec<ColouredPart>,
    cost: Vec<u32>,
    packed: Vec<u128>,
    degree: Vec<u32>,
    /// Admissible next (lower) parts, by increasing cost.
    lowers: Vec<Vec<usize>>,
    budget: u32,
    degmax: u32,
    limit: u64,
    nodes: &'a AtomicU64,
    stop: &'a AtomicBool,
}

impl Walker<'_> {
    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.stop.store(true, Ordering::Relaxed);
        }
        !self.stop.load(Ordering::Relaxed)
    }

    fn count(&self, i: usize, left: u32, deg_left: u32, acc: u128, out: &mut Counts) -> bool {
        if !self.tick() {
            return false;
        }
        *out.entry((self.budget - left, acc)).or_insert(0) += 1;
        for &j in &self.lowers[i] {
            if self.cost[j] > left {
                break;
            }
            if self.degree[j] > deg_left {
                continue;
            }
            if !self.count(j, left - self.cost[j], deg_left - self.degree[j], acc + self.packed[j], out) {
                return false;
            }
        }
        true
    }

    fn collect(&self, i: usize, left: u32, deg_left: u32, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> bool {
        if !self.tick() {
            return false;
        }
        stack.push(i);
        if left == 0 {
            out.push(stack.clone());
        }
        for &j in &self.lowers[i] {
            if self.cost[j] > left {
                break;
            }
            if self.degree[j] > deg_left {
                continue;
            }
            if !self.collect(j, left - self.cost[j], deg_left - self.degree[j], stack, out) {
                stack.pop();
                return false;
            }
        }
        stack.pop();
        true
    }
}

/// Parts, their costs and output weights, shared by the counting and
/// listing walks.
struct Setup {
    parts: Vec<ColouredPart>,
    cost: Vec<u32>,
    weights: Vec<Monomial>,
    packing: Packing,
    degmax: u32,
}

fn setup(
    sys: &ColouredSystem,
    budget: usize,
    degmax: Option<u32>,
    dilation: Option<&DilationSpec>,
) -> Result<Setup> {
    if sys.min_size() == 0 && degmax.is_none() {
        return Err(Error::DegreeCapRequired(format!(
            "{} has parts of size 0; pass a colour-degree cap",
            sys.name()
        )));
    }
    let max_size = match dilation {
        None => budget,
        Some(d) => {
            let worst = sys.colours().iter().map(|c| d.offset(&c.weight)).min().unwrap_or(0).min(0);
            (budget as i64 - worst) as usize / d.modulus.max(1) as usize + 1
        }
    };
    let erased = sys.erased();
    let vars: Vec<Var> = sys.variables().into_iter().filter(|v| !erased.contains(v)).collect();
    let mut parts = Vec::new();
    let mut cost = Vec::new();
    let mut weights = Vec::new();
    for p in sys.valid_parts(max_size as u32) {
        let c = match dilation {
            None => p.size as i64,
            Some(d) => d.image_size(p.size, &sys.colours()[p.colour].weight),
        };
        if c < 0 {
            return Err(Error::InvalidDilation(format!(
                "part {} maps to the negative size {c}",
                sys.part_label(&p)
            )));
        }
        if c > budget as i64 {
            continue;
        }
        let w = sys.part_weight(&p).erase(erased);
        if c == 0 && w.is_one() {
            return Err(Error::InvalidSystem(format!(
                "part {} has size 0 and no tracked weight, so partitions are unbounded",
                sys.part_label(&p)
            )));
        }
        parts.push(p);
        cost.push(c as u32);
        weights.push(w);
    }
    let max_parts: u64 = if cost.iter().all(|c| *c >= 1) {
        budget as u64
    } else {
        degmax.unwrap_or(0) as u64
    };
    let max_parts = match degmax {
        Some(d) => max_parts.min(d as u64),
        None => max_parts,
    };
    let max_exponents: Vec<u64> = vars
        .iter()
        .map(|v| weights.iter().map(|w| w.exponent(*v) as u64).max().unwrap_or(0) * max_parts)
        .collect();
    let packing = Packing::new(vars, &max_exponents)?;
    Ok(Setup {
        parts,
        cost,
        weights,
        packing,
        degmax: degmax.unwrap_or(u32::MAX),
    })
}

impl Setup {
    fn walker<'a>(&self, sys: &ColouredSystem, budget: u32, limit: u64, nodes: &'a AtomicU64, stop: &'a AtomicBool) -> Walker<'a> {
        let lowers = self
            .parts
            .iter()
            .map(|u| {
                let mut ls: Vec<usize> = (0..self.parts.len())
                    .filter(|&j| {
                        let l = &self.parts[j];
                        l.size <= u.size && u.size - l.size >= sys.min_gap(u, l)
                    })
                    .collect();
                ls.sort_by_key(|&j| (self.cost[j], j));
                ls
            })
            .collect();
        Walker {
            parts: self.parts.clone(),
            cost: self.cost.clone(),
            packed: self.weights.iter().map(|w| self.packing.pack(w)).collect(),
            degree: self.weights.iter().map(|w| w.degree()).collect(),
            lowers,
            budget,
            degmax: self.degmax,
            limit,
            nodes,
            stop,
        }
    }
}

fn count_all(sys: &ColouredSystem, budget: usize, degmax: Option<u32>, dilation: Option<&DilationSpec>, limit: u64) -> Result<(Counts, Packing)> {
    let s = setup(sys, budget, degmax, dilation)?;
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let w = s.walker(sys, budget as u32, limit, &nodes, &stop);
    let counts = (0..w.parts.len())
        .into_par_iter()
        .filter(|&i| w.degree[i] <= w.degmax)
        .map(|i| {
            let mut out = Counts::new();
            w.count(i, w.budget - w.cost[i], w.degmax - w.degree[i], w.packed[i], &mut out);
            out
        })
        .reduce(Counts::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    if stop.load(Ordering::Relaxed) {
        return Err(Error::NodeLimit { limit });
    }
    Ok((counts, s.packing))
}

fn to_series(counts: Counts, packing: &Packing, qmax: usize, degmax: Option<u32>) -> TruncatedSeries {
    let terms = counts
        .into_iter()
        .map(|((n, x), c)| (n as usize, packing.unpack(x), BigInt::from(c)))
        .chain(std::iter::once((0, Monomial::one(), BigInt::from(1))));
    TruncatedSeries::from_terms(qmax, degmax, terms)
}

/// Generating function of all valid partitions with `|lambda| <= qmax` (and
/// colour degree at most `degmax`), erased variables set to 1.
pub fn enumerate_series(sys: &ColouredSystem, qmax: usize, degmax: Option<u32>) -> Result<TruncatedSeries> {
    enumerate_series_limited(sys, qmax, degmax, node_limit())
}

pub fn enumerate_series_limited(sys: &ColouredSystem, qmax: usize, degmax: Option<u32>, limit: u64) -> Result<TruncatedSeries> {
    let (counts, packing) = count_all(sys, qmax, degmax, None, limit)?;
    Ok(to_series(counts, &packing, qmax, degmax))
}

/// Weighted generating function restricted to partitions whose image under
/// `d` has size at most `dilated_qmax`. Substituting the result gives the
/// dilated series to `q^dilated_qmax`; the dropped terms all map above it.
pub fn enumerate_below_dilation(sys: &ColouredSystem, d: &DilationSpec, dilated_qmax: usize) -> Result<TruncatedSeries> {
    let qmax = dilation_order_bound(sys, d, dilated_qmax)?;
    let (counts, packing) = count_all(sys, dilated_qmax, None, Some(d), node_limit())?;
    // keys hold the dilated size; recompute the weighted size from the weight
    let offsets: Vec<(Var, i64)> = d.shifts.iter().map(|(v, s)| (*v, *s)).collect();
    let terms = counts
        .into_iter()
        .map(|((n, x), c)| {
            let m = packing.unpack(x);
            let shift: i64 = offsets.iter().map(|(v, s)| m.exponent(*v) as i64 * s).sum();
            let weighted = (n as i64 - shift) / d.modulus as i64;
            (weighted as usize, m, BigInt::from(c))
        })
        .chain(std::iter::once((0, Monomial::one(), BigInt::from(1))));
    Ok(TruncatedSeries::from_terms(qmax, None, terms))
}

/// All valid partitions of `n`, largest part first, sorted by their rank
/// sequences.
pub fn list_partitions(sys: &ColouredSystem, n: usize, degmax: Option<u32>) -> Result<Vec<Vec<ColouredPart>>> {
    if n > LIST_BOUND {
        return Err(Error::InvalidParameter(format!("list_partitions is limited to n <= {LIST_BOUND}")));
    }
    let s = setup(sys, n, degmax, None)?;
    let nodes = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let limit = node_limit();
    let w = s.walker(sys, n as u32, limit, &nodes, &stop);
    let mut found = Vec::new();
    if n == 0 {
        found.push(Vec::new());
    }
    for i in 0..w.parts.len() {
        if w.degree[i] > w.degmax || w.cost[i] > w.budget {
            continue;
        }
        let mut stack = Vec::new();
        if !w.collect(i, w.budget - w.cost[i], w.degmax - w.degree[i], &mut stack, &mut found) {
            return Err(Error::NodeLimit { limit });
        }
    }
    let mut out: Vec<Vec<ColouredPart>> = found
        .into_iter()
        .map(|seq| seq.into_iter().map(|i| w.parts[i]).collect())
        .collect();
    out.sort_by_cached_key(|seq: &Vec<ColouredPart>| seq.iter().map(|p| (sys.raw_rank(p), p.overlined)).collect::<Vec<_>>());
    Ok(out)
}

/// Weight of a whole partition, erased variables removed.
pub fn partition_weight(sys: &ColouredSystem, parts: &[ColouredPart]) -> Monomial {
    parts
        .iter()
        .fold(Monomial::one(), |acc, p| acc.mul(&sys.part_weight(p)))
        .erase(sys.erased())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{build_preset, part, PresetParams};

    fn preset(name: &str) -> ColouredSystem {
        build_preset(name, &PresetParams::default()).unwrap()
    }

    fn m(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    #[test]
    fn siladic_gap_five() {
        let sys = preset("siladic-dilated");
        let p = |s: u32| sys.part_for_size(s).unwrap();
        assert!(is_valid_partition(&sys, &[p(9), p(4)]).valid);
        let bad = is_valid_partition(&sys, &[p(8), p(3)]);
        assert!(!bad.valid);
        assert_eq!(bad.position, Some(0));
        assert!(is_valid_partition(&sys, &[]).valid);
    }

    #[test]
    fn schur_first_terms() {
        let sys = preset("schur-dilated-mod3");
        let f = enumerate_series(&sys, 5, None).unwrap();
        let expect = ["1", "a", "b", "c", "a", "a^2"];
        for (n, e) in expect.iter().enumerate() {
            assert!(f.coeff(n).coefficient(&m(e)) == BigInt::from(1), "q^{n}");
        }
        assert_eq!(f.coeff(5).len(), 2);
        assert_eq!(f.coeff(5).coefficient(&m("b")), BigInt::from(1));
    }

    #[test]
    fn schur_weighted_q2() {
        let f = enumerate_series(&preset("schur-weighted"), 2, None).unwrap();
        let terms: Vec<String> = f.coeff(2).terms().iter().map(|(m, _)| m.to_string()).collect();
        assert_eq!(terms, vec!["a", "b", "a*b"]);
    }

    #[test]
    fn primc_lists() {
        let sys = preset("primc-weighted");
        let ones = list_partitions(&sys, 1, None).unwrap();
        let labels: Vec<String> = ones.iter().map(|s| sys.part_label(&s[0])).collect();
        assert_eq!(labels, vec!["1_a", "1_b", "1_c", "1_d"]);
        let twos = list_partitions(&sys, 2, None).unwrap();
        let bb = vec![part(&sys, 1, "b"), part(&sys, 1, "b")];
        assert!(twos.contains(&bb));
        let odd = preset("distinct-odd");
        let nines = list_partitions(&odd, 9, None).unwrap();
        let sizes: Vec<Vec<u32>> = nines.iter().map(|s| s.iter().map(|p| p.size).collect()).collect();
        assert_eq!(sizes, vec![vec![5, 3, 1], vec![9]]);
    }

    #[test]
    fn listing_matches_series() {
        for name in ["schur-weighted", "siladic-weighted", "primc-weighted"] {
            let sys = preset(name);
            let f = enumerate_series(&sys, 9, None).unwrap();
            for n in 0..=9 {
                let terms = list_partitions(&sys, n, None)
                    .unwrap()
                    .into_iter()
                    .map(|seq| (n, partition_weight(&sys, &seq), BigInt::from(1)));
                let g = TruncatedSeries::from_terms(9, None, terms);
                assert_eq!(g.coeff(n), f.coeff(n), "{name} q^{n}");
            }
        }
    }

    #[test]
    fn size_zero_needs_cap() {
        let sys = build_preset("andrews-overpartitions(1)", &PresetParams::default()).unwrap();
        assert!(matches!(enumerate_series(&sys, 3, None), Err(Error::DegreeCapRequired(_))));
        let f = enumerate_series(&sys, 3, Some(4)).unwrap();
        // empty, 0_u1 (t u1), ~0_u1 (u1)
        assert_eq!(f.coeff(0).len(), 5);
    }

    #[test]
    fn node_limit_is_enforced() {
        let sys = preset("primc-weighted");
        assert!(matches!(
            enumerate_series_limited(&sys, 12, None, 100),
            Err(Error::NodeLimit { limit: 100 })
        ));
    }

    #[test]
    fn parallel_runs_agree() {
        let sys = preset("siladic-weighted");
        let a = enumerate_series(&sys, 16, None).unwrap();
        let b = enumerate_series(&sys, 16, None).unwrap();
        assert_eq!(a, b);
        assert!(a.all_nonnegative());
    }
}
