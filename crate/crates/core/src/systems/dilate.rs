use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, SubstitutionMap, Var};
use crate::error::{Error, Result};

use super::{ColourDef, ColouredPart, ColouredSystem, GapMatrix, GapRule, RankRule, SizeDomain};

/// `q -> q^modulus` and `v -> v q^shift`. A part `k_x` becomes the integer
/// `modulus * k + offset(x)`, where the offset is read off the weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DilationSpec {
    pub modulus: u32,
    #[serde(default)]
    pub shifts: BTreeMap<Var, i64>,
}

impl DilationSpec {
    pub fn new(modulus: u32) -> Self {
        DilationSpec {
            modulus,
            shifts: BTreeMap::new(),
        }
    }

    pub fn shift(mut self, v: Var, shift: i64) -> Self {
        self.shifts.insert(v, shift);
        self
    }

    /// Sum of `exponent * shift` over the variables of `weight`.
    pub fn offset(&self, weight: &Monomial) -> i64 {
        weight
            .iter()
            .map(|(v, e)| e as i64 * self.shifts.get(&v).copied().unwrap_or(0))
            .sum()
    }

    pub fn image_size(&self, size: u32, weight: &Monomial) -> i64 {
        self.modulus as i64 * size as i64 + self.offset(weight)
    }
}

/// The series map matching a dilation.
pub fn statistic_substitution(d: &DilationSpec) -> SubstitutionMap {
    d.shifts
        .iter()
        .fold(SubstitutionMap::new(d.modulus), |s, (v, shift)| s.with(*v, Monomial::var(*v), *shift))
}

/// Truncation of the undilated series that determines the dilated one up to
/// `q^qmax`: every part `k_x` maps to size at least `rho * k`, with `rho` the
/// smallest ratio `(m k + o) / k` over the first valid size of colours with a
/// negative offset.
pub fn dilation_order_bound(sys: &ColouredSystem, d: &DilationSpec, qmax: usize) -> Result<usize> {
    let m = d.modulus as i64;
    // rho = num / den, starting from m / 1
    let (mut num, mut den) = (m, 1i64);
    for (c, first) in sys.colours().iter().zip(sys.first_sizes()) {
        let o = d.offset(&c.weight);
        let Some(k) = first else { continue };
        if o >= 0 || k == 0 {
            continue;
        }
        let image = m * k as i64 + o;
        if image <= 0 {
            return Err(Error::InvalidDilation(format!(
                "part {k}_{} maps to the non-positive size {image}",
                c.label
            )));
        }
        if image * den < num * k as i64 {
            num = image;
            den = k as i64;
        }
    }
    Ok((qmax as i64 * den / num) as usize)
}

/// Applies a dilation to a system with a gap matrix. Ranks are preserved:
/// the new rank rule evaluated on `m k + o_x` gives the old rank of `k_x`.
pub fn dilate_system(sys: &ColouredSystem, d: &DilationSpec) -> Result<ColouredSystem> {
    let m = d.modulus;
    if m == 0 {
        return Err(Error::InvalidDilation("modulus must be positive".into()));
    }
    let GapRule::Matrix(g) = sys.gap_rule() else {
        return Err(Error::InvalidDilation(format!(
            "{} has no gap matrix to dilate",
            sys.name()
        )));
    };
    let mi = m as i64;
    let offsets: Vec<i64> = sys.colours().iter().map(|c| d.offset(&c.weight)).collect();
    let first = sys.first_sizes();

    let mut colours = Vec::new();
    for (ci, c) in sys.colours().iter().enumerate() {
        let o = offsets[ci];
        let big = m * c.domain.modulus;
        let residues: Vec<u32> = if c.domain.residues.is_empty() {
            vec![o.rem_euclid(mi) as u32]
        } else {
            c.domain.residues.iter().map(|r| (mi * *r as i64 + o).rem_euclid(big as i64) as u32).collect()
        };
        if let Some(k) = first[ci] {
            let image = mi * k as i64 + o;
            if image < sys.min_size() as i64 {
                return Err(Error::InvalidDilation(format!(
                    "part {k}_{} maps to size {image}, below the minimum {}",
                    c.label,
                    sys.min_size()
                )));
            }
        }
        let k0 = c.domain.min.max(sys.min_size()) as i64;
        let min = (mi * k0 + o).max(0) as u32;
        let domain = if big == 1 {
            SizeDomain::all(min)
        } else {
            SizeDomain::residues(big, &residues, min)
        };
        colours.push(ColourDef { domain, ..c.clone() });
    }

    let old_rank = sys.rank_rule();
    let rank = RankRule {
        scale: mi * old_rank.scale,
        terms: old_rank
            .terms
            .iter()
            .zip(&offsets)
            .map(|((mul, off), o)| (*mul, mi * off - mul * o))
            .collect(),
    };

    let row_modulus = m * g.row_modulus;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut row_of = vec![vec![None; row_modulus as usize]; colours.len()];
    for (ci, classes) in row_of.iter_mut().enumerate() {
        for (rho, slot) in classes.iter_mut().enumerate() {
            let diff = rho as i64 - offsets[ci];
            if diff.rem_euclid(mi) != 0 {
                continue;
            }
            let k_class = (diff.div_euclid(mi)).rem_euclid(g.row_modulus as i64) as u32;
            let Some(old_row) = g.row(k_class, ci) else { continue };
            let idx = match pairs.iter().position(|p| *p == (old_row, ci)) {
                Some(i) => i,
                None => {
                    pairs.push((old_row, ci));
                    pairs.len() - 1
                }
            };
            *slot = Some(idx);
        }
    }
    // keep new rows in the order of the old ones
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by_key(|i| pairs[*i]);
    let mut position = vec![0; pairs.len()];
    for (new, old) in order.iter().enumerate() {
        position[*old] = new;
    }
    for slot in row_of.iter_mut().flatten().flatten() {
        *slot = position[*slot];
    }
    pairs.sort_unstable();
    let map_entries = |table: &Vec<Vec<u32>>| -> Result<Vec<Vec<u32>>> {
        pairs
            .iter()
            .map(|(old_row, x)| {
                (0..colours.len())
                    .map(|y| {
                        let e = mi * table[*old_row][y] as i64 + offsets[*x] - offsets[y];
                        u32::try_from(e).map_err(|_| {
                            Error::InvalidDilation(format!(
                                "gap from colour {} to {} becomes negative ({e})",
                                colours[*x].label, colours[y].label
                            ))
                        })
                    })
                    .collect()
            })
            .collect()
    };
    let entries = map_entries(&g.entries)?;
    let overlined_entries = g.overlined_entries.as_ref().map(map_entries).transpose()?;
    let row_labels = pairs
        .iter()
        .map(|(old_row, x)| {
            let shared = pairs.iter().filter(|(r, _)| r == old_row).count() > 1;
            if shared {
                format!("{}/{}", g.row_labels[*old_row], colours[*x].label)
            } else {
                g.row_labels[*old_row].clone()
            }
        })
        .collect();

    let forbidden = sys
        .forbidden()
        .iter()
        .filter_map(|(k, c)| {
            let s = mi * *k as i64 + offsets[*c];
            (s >= 0).then_some((s as u32, *c))
        })
        .collect();

    let mut spec = sys.to_spec();
    spec.name = format!("{}-dilated-{m}", sys.name());
    spec.colours = colours;
    spec.rank = rank;
    spec.gap = GapRule::Matrix(GapMatrix {
        row_modulus,
        row_labels,
        row_of,
        entries,
        overlined_entries,
    });
    spec.forbidden = forbidden;
    let shifts: Vec<String> = d.shifts.iter().map(|(v, s)| format!("{v}->{v}q^{s}")).collect();
    spec.conventions
        .insert("dilation".into(), format!("q->q^{m}, {}", shifts.join(", ")));
    ColouredSystem::build(spec)
}

/// Image of a part under a dilation.
pub fn dilate_part(sys: &ColouredSystem, d: &DilationSpec, p: &ColouredPart) -> ColouredPart {
    let s = d.image_size(p.size, &sys.colours()[p.colour].weight);
    ColouredPart { size: s as u32, ..*p }
}
