//! Cross-checks the statistics of the refined identities, stated in words on
//! integer parts, against the weights the dilation produces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{Monomial, Var};
use crate::enumerate::{list_partitions, partition_weight};
use crate::error::{Error, Result};
use crate::systems::{ColouredPart, ColouredSystem};

use super::identity_case;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatisticFailure {
    pub partition: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatisticCheck {
    pub identity: String,
    pub seed: u64,
    pub samples: usize,
    /// Number of partitions sampled from (all of size at most `max_n`).
    pub population: usize,
    pub max_n: usize,
    pub failures: Vec<StatisticFailure>,
}

impl StatisticCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// An integer part, primed or not.
#[derive(Debug, Clone, Copy)]
struct Plain {
    size: i64,
    primed: bool,
}

type Rule = fn(&[Plain]) -> std::result::Result<(u32, u32), String>;

fn in_classes(x: i64, modulus: i64, classes: &[i64]) -> bool {
    classes.contains(&x.rem_euclid(modulus))
}

/// Parts at the mod-8 refinement: `u` counts parts 0,1 mod 4 plus twice the
/// parts 6 mod 8, `v` counts parts 0,3 mod 4 plus twice the parts 2 mod 8.
/// Consecutive parts differ by at least 5, with extra residue conditions at
/// differences 5 to 8, and 2 is never a part.
fn siladic_words(parts: &[Plain]) -> std::result::Result<(u32, u32), String> {
    let (mut u, mut v) = (0, 0);
    for p in parts {
        if p.size == 2 {
            return Err("2 is a part".into());
        }
        u += u32::from(in_classes(p.size, 4, &[0, 1])) + 2 * u32::from(in_classes(p.size, 8, &[6]));
        v += u32::from(in_classes(p.size, 4, &[0, 3])) + 2 * u32::from(in_classes(p.size, 8, &[2]));
    }
    for w in parts.windows(2) {
        let (hi, d) = (w[0].size, w[0].size - w[1].size);
        let ok = match d {
            i64::MIN..=4 => false,
            5 => in_classes(hi, 8, &[1, 4]),
            6 => in_classes(hi, 8, &[1, 3, 5, 7]),
            7 => in_classes(hi, 8, &[0, 1, 3, 4, 6, 7]),
            8 => in_classes(hi, 8, &[0, 1, 3, 4, 5, 7]),
            _ => true,
        };
        if !ok {
            return Err(format!("{} - {} = {d} is not allowed", w[0].size, w[1].size));
        }
    }
    Ok((u, v))
}

/// Ordinary and primed parts, only parts 1,5 mod 6 primed and 1' excluded.
/// `u` counts ordinary parts 0,1 mod 3 plus twice the primed parts 5 mod 6,
/// `v` counts ordinary parts 0,2 mod 3 plus twice the primed parts 1 mod 6.
/// A part is followed by a gap of 4, 5 or 6 (plus one before a primed part)
/// depending on its residue mod 6 and whether it is primed.
fn schur_companion_words(parts: &[Plain]) -> std::result::Result<(u32, u32), String> {
    let (mut u, mut v) = (0, 0);
    for p in parts {
        if p.primed {
            if !in_classes(p.size, 6, &[1, 5]) {
                return Err(format!("{}' is not 1 or 5 mod 6", p.size));
            }
            if p.size == 1 {
                return Err("1' is a part".into());
            }
            u += 2 * u32::from(in_classes(p.size, 6, &[5]));
            v += 2 * u32::from(in_classes(p.size, 6, &[1]));
        } else {
            u += u32::from(in_classes(p.size, 3, &[0, 1]));
            v += u32::from(in_classes(p.size, 3, &[0, 2]));
        }
    }
    for w in parts.windows(2) {
        let (hi, lo) = (w[0], w[1]);
        let base = if hi.primed {
            6
        } else if in_classes(hi.size, 6, &[0, 4]) {
            5
        } else {
            4
        };
        let need = base + i64::from(lo.primed);
        if hi.size - lo.size < need {
            return Err(format!("{} - {} is below {need}", show(hi), show(lo)));
        }
    }
    Ok((u, v))
}

fn show(p: Plain) -> String {
    format!("{}{}", p.size, if p.primed { "'" } else { "" })
}

/// Rule in words for the identities that state one, and whether it tells
/// primed parts apart.
fn rule_for(identity: &str) -> Option<(Rule, bool)> {
    match identity {
        "siladic-refined" => Some((siladic_words, false)),
        "schur-companion" => Some((schur_companion_words, true)),
        _ => None,
    }
}

/// Primed parts are the ones weighted by a square of a primary colour.
fn to_plain(sys: &ColouredSystem, p: &ColouredPart, primes: bool) -> Plain {
    let w = &sys.colours()[p.colour].weight;
    Plain {
        size: p.size as i64,
        primed: primes && w.iter().count() == 1 && w.degree() == 2,
    }
}

/// Samples `samples` valid partitions of size at most `max_n` (uniformly
/// among all of them, seeded) and checks that the rule in words accepts
/// each one with the same `u`, `v` as its weight `a^u b^v`.
pub fn sampled_statistic_check(identity: &str, samples: usize, seed: u64, max_n: usize) -> Result<StatisticCheck> {
    let case = identity_case(identity)?;
    let (rule, primes) = rule_for(&case.name).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{identity} has no statistic stated in words; try siladic-refined or schur-companion"
        ))
    })?;
    let sys = &case.side_b;
    let mut population: Vec<Vec<ColouredPart>> = Vec::new();
    for n in 1..=max_n {
        population.extend(list_partitions(sys, n, None)?);
    }
    let mut failures = Vec::new();
    if !population.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (Var::named("a"), Var::named("b"));
        for _ in 0..samples {
            let parts = &population[rng.gen_range(0..population.len())];
            let plain: Vec<Plain> = parts.iter().map(|p| to_plain(sys, p, primes)).collect();
            let label = plain.iter().map(|p| show(*p)).collect::<Vec<_>>().join("+");
            let weight: Monomial = partition_weight(sys, parts);
            match rule(&plain) {
                Err(reason) => failures.push(StatisticFailure { partition: label, reason }),
                Ok((u, v)) if (u, v) != (weight.exponent(a), weight.exponent(b)) => failures.push(StatisticFailure {
                    partition: label,
                    reason: format!("words give a^{u} b^{v}, weight is {weight}"),
                }),
                Ok(_) => {}
            }
        }
    }
    Ok(StatisticCheck {
        identity: case.name,
        seed,
        samples,
        population: population.len(),
        max_n,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_statistics_match() {
        for id in ["siladic-refined", "schur-companion"] {
            let r = sampled_statistic_check(id, 200, 7, 40).unwrap();
            assert!(r.population > 200, "{id}");
            assert!(r.passed(), "{id}: {:?}", &r.failures[..r.failures.len().min(3)]);
        }
    }

    /// The rules in words accept exactly the partitions the weighted systems
    /// produce: the counts per size agree.
    #[test]
    fn rules_in_words_count_the_same() {
        for (id, rule) in [("siladic-refined", siladic_words as Rule), ("schur-companion", schur_companion_words)] {
            let case = identity_case(id).unwrap();
            let sys = &case.side_b;
            // every integer, and primed copies where the words could allow them
            let primes = id == "schur-companion";
            let candidates: Vec<Plain> = (1..=24)
                .flat_map(|size| [Plain { size, primed: false }, Plain { size, primed: true }])
                .filter(|p| !p.primed || primes)
                .collect();
            for n in 1..=24usize {
                let expected = list_partitions(sys, n, None).unwrap().len();
                let mut found = 0;
                let mut stack = Vec::new();
                count_words(&candidates, n as i64, usize::MAX, &mut stack, rule, &mut found);
                assert_eq!(found, expected, "{id} n={n}");
            }
        }
    }

    fn count_words(cands: &[Plain], left: i64, below: usize, stack: &mut Vec<Plain>, rule: Rule, found: &mut usize) {
        if left == 0 {
            if rule(stack).is_ok() {
                *found += 1;
            }
            return;
        }
        for (i, p) in cands.iter().enumerate() {
            if i >= below || p.size > left || p.size <= 0 {
                continue;
            }
            stack.push(*p);
            if rule(stack).is_ok() {
                count_words(cands, left - p.size, i, stack, rule, found);
            }
            stack.pop();
        }
    }

    #[test]
    fn other_identities_have_no_rule_in_words() {
        assert!(sampled_statistic_check("alladi-gordon", 10, 1, 5).is_err());
    }
}
