//! Generating functions through the E/G recurrences: `E_p` counts partitions
//! whose largest (or smallest) part is exactly `p`, `G_p` those whose largest
//! part is at most `p`.

mod builtins;
mod equation;

use std::collections::BTreeMap;

use crate::algebra::TruncatedSeries;
use crate::error::{Error, Result};
use crate::systems::{ColouredPart, ColouredSystem, Direction, GapRule};

pub use builtins::builtin_equations;
pub use equation::{check_equation, Coefficient, EqTerm, EquationFailure, EquationReport, EquationSpec, Func, KTerm};

/// Parts of one colour and overline state (and, for the mirrored engine, one
/// size class of the upper part), in processing order, with running sums of
/// their `E` series.
struct Group {
    sizes: Vec<u32>,
    cumulative: Vec<TruncatedSeries>,
}

impl Group {
    fn computed(&self) -> usize {
        self.cumulative.len()
    }

    fn push(&mut self, e: &TruncatedSeries) {
        let next = match self.cumulative.last() {
            Some(c) => c.add(e),
            None => e.clone(),
        };
        self.cumulative.push(next);
    }
}

/// E and G series of every part up to a rank bound, computed from the
/// largest part down.
#[derive(Clone)]
pub struct RecurrenceState {
    qmax: usize,
    degmax: Option<u32>,
    parts: Vec<ColouredPart>,
    ranks: Vec<i64>,
    e: Vec<TruncatedSeries>,
    g: Vec<TruncatedSeries>,
    max_rank: Option<i64>,
    labels: Vec<String>,
}

fn check_cap(sys: &ColouredSystem, degmax: Option<u32>) -> Result<()> {
    if sys.min_size() == 0 && degmax.is_none() {
        return Err(Error::DegreeCapRequired(format!(
            "{} has parts of size 0; pass a colour-degree cap",
            sys.name()
        )));
    }
    Ok(())
}

fn lower_probe(colour: usize, overlined: bool) -> ColouredPart {
    ColouredPart { size: 0, colour, overlined }
}

impl RecurrenceState {
    /// Computes `E_p` for every valid part with size at most `qmax` and, if
    /// given, rank at most `max_rank`.
    pub fn build(sys: &ColouredSystem, qmax: usize, degmax: Option<u32>, max_rank: Option<i64>) -> Result<Self> {
        check_cap(sys, degmax)?;
        let parts: Vec<ColouredPart> = sys
            .valid_parts(qmax as u32)
            .into_iter()
            .filter(|p| max_rank.map_or(true, |r| sys.raw_rank(p) <= r))
            .collect();
        let mut groups: BTreeMap<(usize, bool), Group> = BTreeMap::new();
        for p in &parts {
            groups
                .entry((p.colour, p.overlined))
                .or_insert_with(|| Group {
                    sizes: Vec::new(),
                    cumulative: Vec::new(),
                })
                .sizes
                .push(p.size);
        }
        let mut e_all = Vec::with_capacity(parts.len());
        let mut g_all = Vec::with_capacity(parts.len());
        let mut g = TruncatedSeries::one(qmax, degmax);
        for p in &parts {
            let mut acc = TruncatedSeries::one(qmax, degmax);
            let mut self_loop = false;
            for (&(y, o), grp) in &groups {
                let gap = sys.min_gap(p, &lower_probe(y, o));
                if gap > p.size {
                    continue;
                }
                let need = grp.sizes.partition_point(|s| *s <= p.size - gap);
                if need == 0 {
                    continue;
                }
                let done = grp.computed();
                if need > done {
                    let is_self = (y, o) == (p.colour, p.overlined) && need == done + 1 && grp.sizes[done] == p.size;
                    if !is_self {
                        let missing = ColouredPart {
                            size: grp.sizes[done],
                            colour: y,
                            overlined: o,
                        };
                        return Err(Error::RankInconsistency {
                            upper: sys.part_label(p),
                            lower: sys.part_label(&missing),
                        });
                    }
                    self_loop = true;
                }
                let upto = need.min(done);
                if upto > 0 {
                    acc.add_assign(&grp.cumulative[upto - 1]);
                }
            }
            let w = sys.part_weight(p).erase(sys.erased());
            let y = acc.mul_term(&w, p.size as usize);
            let e = if self_loop {
                TruncatedSeries::geometric_solve(&y, &w, p.size as usize)?
            } else {
                y
            };
            groups.get_mut(&(p.colour, p.overlined)).unwrap().push(&e);
            g.add_assign(&e);
            e_all.push(e);
            g_all.push(g.clone());
        }
        Ok(RecurrenceState {
            qmax,
            degmax,
            ranks: parts.iter().map(|p| sys.raw_rank(p)).collect(),
            parts,
            e: e_all,
            g: g_all,
            max_rank,
            labels: sys.colours().iter().map(|c| c.label.clone()).collect(),
        })
    }

    pub fn qmax(&self) -> usize {
        self.qmax
    }

    pub fn degmax(&self) -> Option<u32> {
        self.degmax
    }

    pub fn parts(&self) -> &[ColouredPart] {
        &self.parts
    }

    /// The full generating function (all parts up to `qmax`).
    pub fn total(&self) -> TruncatedSeries {
        self.g.last().cloned().unwrap_or_else(|| TruncatedSeries::one(self.qmax, self.degmax))
    }

    fn check_rank(&self, rank: i64, what: &str) -> Result<()> {
        match self.max_rank {
            Some(r) if rank > r => Err(Error::InvalidParameter(format!(
                "{what} lies beyond the computed table (rank {rank} > {r})"
            ))),
            _ => Ok(()),
        }
    }

    /// `G` at the coloured integer `size_colour`: 0 for negative sizes,
    /// otherwise the generating function of partitions whose largest part
    /// comes no later than `size_colour` in the order.
    pub fn g(&self, sys: &ColouredSystem, size: i64, colour: usize) -> Result<TruncatedSeries> {
        if size < 0 {
            return Ok(TruncatedSeries::zero(self.qmax, self.degmax));
        }
        let rank = sys.rank_of(size, colour);
        self.check_rank(rank, &format!("G_{{{size}_{}}}", self.labels[colour]))?;
        let at = self.ranks.partition_point(|r| *r <= rank);
        Ok(if at == 0 {
            TruncatedSeries::one(self.qmax, self.degmax)
        } else {
            self.g[at - 1].clone()
        })
    }

    /// `E` at a non-overlined part: 0 unless it is a valid part.
    pub fn e(&self, sys: &ColouredSystem, size: i64, colour: usize) -> Result<TruncatedSeries> {
        if size < 0 {
            return Ok(TruncatedSeries::zero(self.qmax, self.degmax));
        }
        let p = ColouredPart::new(size as u32, colour);
        self.check_rank(sys.rank_of(size, colour), &format!("E_{{{size}_{}}}", self.labels[colour]))?;
        Ok(match self.parts.iter().position(|q| *q == p) {
            Some(i) => self.e[i].clone(),
            None => TruncatedSeries::zero(self.qmax, self.degmax),
        })
    }
}

/// The mirrored recursion: `E_p` counts partitions whose smallest part is
/// exactly `p`, computed from the largest rank down.
fn smallest_part_series(sys: &ColouredSystem, qmax: usize, degmax: Option<u32>) -> Result<TruncatedSeries> {
    let parts = sys.valid_parts(qmax as u32);
    let row_modulus = match sys.gap_rule() {
        GapRule::Matrix(g) => g.row_modulus,
        GapRule::Andrews { .. } => 1,
    };
    let mut groups: BTreeMap<(usize, bool, u32), Group> = BTreeMap::new();
    for p in parts.iter().rev() {
        groups
            .entry((p.colour, p.overlined, p.size % row_modulus))
            .or_insert_with(|| Group {
                sizes: Vec::new(),
                cumulative: Vec::new(),
            })
            .sizes
            .push(p.size);
    }
    let mut total = TruncatedSeries::one(qmax, degmax);
    for p in parts.iter().rev() {
        let mut acc = TruncatedSeries::one(qmax, degmax);
        let mut self_loop = false;
        for (&(y, o, class), grp) in &groups {
            let upper = ColouredPart {
                size: class,
                colour: y,
                overlined: o,
            };
            let threshold = p.size + sys.min_gap(&upper, p);
            // sizes are in decreasing order
            let need = grp.sizes.partition_point(|s| *s >= threshold);
            if need == 0 {
                continue;
            }
            let done = grp.computed();
            if need > done {
                let is_self = (y, o) == (p.colour, p.overlined) && need == done + 1 && grp.sizes[done] == p.size;
                if !is_self {
                    let missing = ColouredPart {
                        size: grp.sizes[done],
                        colour: y,
                        overlined: o,
                    };
                    return Err(Error::RankInconsistency {
                        upper: sys.part_label(&missing),
                        lower: sys.part_label(p),
                    });
                }
                self_loop = true;
            }
            let upto = need.min(done);
            if upto > 0 {
                acc.add_assign(&grp.cumulative[upto - 1]);
            }
        }
        let w = sys.part_weight(p).erase(sys.erased());
        let y = acc.mul_term(&w, p.size as usize);
        let e = if self_loop {
            TruncatedSeries::geometric_solve(&y, &w, p.size as usize)?
        } else {
            y
        };
        groups
            .get_mut(&(p.colour, p.overlined, p.size % row_modulus))
            .unwrap()
            .push(&e);
        total.add_assign(&e);
    }
    Ok(total)
}

/// Generating function of all valid partitions through the recurrences, in
/// the system's preferred direction.
pub fn dp_series(sys: &ColouredSystem, qmax: usize, degmax: Option<u32>) -> Result<TruncatedSeries> {
    dp_series_directed(sys, qmax, degmax, sys.direction())
}

pub fn dp_series_directed(
    sys: &ColouredSystem,
    qmax: usize,
    degmax: Option<u32>,
    direction: Direction,
) -> Result<TruncatedSeries> {
    check_cap(sys, degmax)?;
    match direction {
        Direction::LargestPart => Ok(RecurrenceState::build(sys, qmax, degmax, None)?.total()),
        Direction::SmallestPart => smallest_part_series(sys, qmax, degmax),
    }
}
