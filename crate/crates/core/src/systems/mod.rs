//! Coloured-integer systems: colours with weight monomials, a total order on
//! coloured parts, difference rules and part domains.

mod andrews;
mod dilate;
mod file;
mod presets;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Var};
use crate::error::{Error, Result};

pub use andrews::{andrews_colour_data, AndrewsColour};
pub use dilate::{dilate_part, dilate_system, dilation_order_bound, statistic_substitution, DilationSpec};
pub use file::{ColourFile, GapFile, OrderFile, PartFile, RowFile, SystemFile};
pub use presets::{
    build_preset, part, preset_names, primc_dilation, schur_dilation, siladic_assignment, siladic_dilation, PresetParams,
    SmallPartConvention,
};

/// Sizes allowed for one colour: `size >= min` and, when `residues` is
/// nonempty, `size mod modulus` in `residues`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeDomain {
    pub modulus: u32,
    #[serde(default)]
    pub residues: Vec<u32>,
    pub min: u32,
}

impl SizeDomain {
    pub fn all(min: u32) -> Self {
        SizeDomain {
            modulus: 1,
            residues: Vec::new(),
            min,
        }
    }

    pub fn residues(modulus: u32, residues: &[u32], min: u32) -> Self {
        let mut residues: Vec<u32> = residues.iter().map(|r| r % modulus).collect();
        residues.sort_unstable();
        residues.dedup();
        SizeDomain { modulus, residues, min }
    }

    pub fn contains(&self, size: u32) -> bool {
        size >= self.min && (self.residues.is_empty() || self.residues.contains(&(size % self.modulus)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourDef {
    pub label: String,
    pub weight: Monomial,
    pub domain: SizeDomain,
    pub overline_allowed: bool,
}

impl ColourDef {
    pub fn new(label: &str, weight: Monomial, domain: SizeDomain) -> Self {
        ColourDef {
            label: label.to_string(),
            weight,
            domain,
            overline_allowed: false,
        }
    }
}

/// A part: size, colour index into the system's colour list, overline flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColouredPart {
    pub size: u32,
    pub colour: usize,
    pub overlined: bool,
}

impl ColouredPart {
    pub fn new(size: u32, colour: usize) -> Self {
        ColouredPart {
            size,
            colour,
            overlined: false,
        }
    }

    pub fn overlined(size: u32, colour: usize) -> Self {
        ColouredPart {
            size,
            colour,
            overlined: true,
        }
    }
}

/// Linear order rule: `rank(k_x) = (mul_x * k + off_x) / scale`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankRule {
    pub scale: i64,
    pub terms: Vec<(i64, i64)>,
}

impl RankRule {
    /// The natural order on sizes, one colour per size.
    pub fn by_size(colours: usize) -> Self {
        RankRule {
            scale: 1,
            terms: vec![(1, 0); colours],
        }
    }

    /// `rank(k_x) = stride * k + offset_x`.
    pub fn interleaved(stride: i64, offsets: &[i64]) -> Self {
        RankRule {
            scale: 1,
            terms: offsets.iter().map(|o| (stride, *o)).collect(),
        }
    }

    /// Rank of `size_colour`, or `None` if it is not an integer.
    pub fn rank(&self, size: i64, colour: usize) -> Option<i64> {
        let (mul, off) = self.terms[colour];
        let num = mul * size + off;
        (num % self.scale == 0).then(|| num / self.scale)
    }
}

/// Minimal difference table. Rows are classes of the upper part, chosen by
/// `(colour, size mod row_modulus)`; columns are colours of the lower part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapMatrix {
    pub row_modulus: u32,
    pub row_labels: Vec<String>,
    /// `row_of[colour][size mod row_modulus]`
    pub row_of: Vec<Vec<Option<usize>>>,
    pub entries: Vec<Vec<u32>>,
    /// Used instead of `entries` when the lower part is overlined.
    pub overlined_entries: Option<Vec<Vec<u32>>>,
}

impl GapMatrix {
    /// One row per colour, independent of the size.
    pub fn per_colour(labels: &[&str], entries: Vec<Vec<u32>>) -> Self {
        GapMatrix {
            row_modulus: 1,
            row_labels: labels.iter().map(|s| s.to_string()).collect(),
            row_of: (0..labels.len()).map(|i| vec![Some(i)]).collect(),
            entries,
            overlined_entries: None,
        }
    }

    pub fn row(&self, size: u32, colour: usize) -> Option<usize> {
        self.row_of[colour][(size % self.row_modulus) as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GapRule {
    Matrix(GapMatrix),
    /// `w(lower) + chi(lower overlined) - 1 + delta(upper, lower)` on the
    /// `2^r - 1` colours built from `r` primary colours.
    Andrews { r: u32 },
}

/// Which end of the partition the recurrence engine indexes by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    #[default]
    LargestPart,
    SmallestPart,
}

/// Everything needed to build a [`ColouredSystem`]; checked by
/// [`ColouredSystem::build`].
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub name: String,
    pub colours: Vec<ColourDef>,
    pub rank: RankRule,
    pub gap: GapRule,
    pub min_size: u32,
    pub forbidden: Vec<(u32, usize)>,
    pub overline_marker: Option<Var>,
    pub erased: Vec<Var>,
    pub direction: Direction,
    pub conventions: BTreeMap<String, String>,
}

/// Sizes up to which order consistency and rank injectivity are checked.
pub const CHECK_SIZE: u32 = 40;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredSystem {
    name: String,
    colours: Vec<ColourDef>,
    rank: RankRule,
    gap: GapRule,
    min_size: u32,
    forbidden: Vec<(u32, usize)>,
    overline_marker: Option<Var>,
    erased: Vec<Var>,
    direction: Direction,
    conventions: BTreeMap<String, String>,
    andrews: Vec<AndrewsColour>,
}

impl ColouredSystem {
    pub fn build(spec: SystemSpec) -> Result<Self> {
        let andrews = match &spec.gap {
            GapRule::Andrews { r } => {
                let k = (1usize << r) - 1;
                (1..=k as u32)
                    .map(|i| andrews_colour_data(i, *r))
                    .collect::<Result<Vec<_>>>()?
            }
            GapRule::Matrix(_) => Vec::new(),
        };
        let mut forbidden = spec.forbidden;
        forbidden.sort_unstable();
        forbidden.dedup();
        let sys = ColouredSystem {
            name: spec.name,
            colours: spec.colours,
            rank: spec.rank,
            gap: spec.gap,
            min_size: spec.min_size,
            forbidden,
            overline_marker: spec.overline_marker,
            erased: spec.erased,
            direction: spec.direction,
            conventions: spec.conventions,
            andrews,
        };
        sys.check_shape()?;
        sys.check_order()?;
        Ok(sys)
    }

    fn invalid(&self, msg: String) -> Error {
        Error::InvalidSystem(format!("{}: {msg}", self.name))
    }

    fn check_shape(&self) -> Result<()> {
        let nc = self.colours.len();
        if nc == 0 {
            return Err(self.invalid("no colours".into()));
        }
        if self.min_size > 1 {
            return Err(self.invalid("min_size must be 0 or 1".into()));
        }
        for (i, c) in self.colours.iter().enumerate() {
            if self.colours[..i].iter().any(|d| d.label == c.label) {
                return Err(self.invalid(format!("duplicate colour label {}", c.label)));
            }
            if c.weight.is_one() {
                return Err(self.invalid(format!("colour {} has an empty weight", c.label)));
            }
            if c.domain.modulus == 0 || c.domain.residues.iter().any(|r| *r >= c.domain.modulus) {
                return Err(self.invalid(format!("colour {} has a bad size domain", c.label)));
            }
            if c.overline_allowed && self.overline_marker.is_none() {
                return Err(self.invalid(format!("colour {} allows overlines but there is no marker", c.label)));
            }
        }
        if self.rank.scale < 1 || self.rank.terms.len() != nc || self.rank.terms.iter().any(|(m, _)| *m <= 0) {
            return Err(self.invalid("rank rule needs one positive multiplier per colour".into()));
        }
        if let Some((s, c)) = self.forbidden.iter().find(|(_, c)| *c >= nc) {
            return Err(self.invalid(format!("forbidden part {s} has unknown colour {c}")));
        }
        match &self.gap {
            GapRule::Matrix(g) => {
                if g.row_modulus == 0 || g.row_of.len() != nc {
                    return Err(self.invalid("row classifier must list every colour".into()));
                }
                let rows = g.row_labels.len();
                if g.entries.len() != rows || g.entries.iter().any(|r| r.len() != nc) {
                    return Err(self.invalid(format!("gap matrix must be {rows} x {nc}")));
                }
                if let Some(ov) = &g.overlined_entries {
                    if ov.len() != rows || ov.iter().any(|r| r.len() != nc) {
                        return Err(self.invalid(format!("overlined gap matrix must be {rows} x {nc}")));
                    }
                } else if self.colours.iter().any(|c| c.overline_allowed) {
                    return Err(self.invalid("overlined parts need overlined gap entries".into()));
                }
                for (c, classes) in g.row_of.iter().enumerate() {
                    if classes.len() != g.row_modulus as usize {
                        return Err(self.invalid(format!("row classifier for colour {c} needs {} residues", g.row_modulus)));
                    }
                    if classes.iter().flatten().any(|r| *r >= rows) {
                        return Err(self.invalid(format!("row classifier for colour {c} names a missing row")));
                    }
                }
                for s in 0..=CHECK_SIZE + g.row_modulus {
                    for c in 0..nc {
                        let p = ColouredPart::new(s, c);
                        if self.check_part(&p).is_ok() && g.row(s, c).is_none() {
                            return Err(self.invalid(format!("no gap row for part {}", self.part_label(&p))));
                        }
                    }
                }
            }
            GapRule::Andrews { r } => {
                if *r < 1 || self.colours.len() != (1usize << r) - 1 {
                    return Err(self.invalid(format!("the andrews rule with r={r} needs 2^r-1 colours")));
                }
            }
        }
        Ok(())
    }

    /// Rank injectivity and "gap implies order" on all parts of size up to
    /// [`CHECK_SIZE`].
    fn check_order(&self) -> Result<()> {
        let parts = self.valid_parts(CHECK_SIZE);
        let mut seen: BTreeMap<i64, ColouredPart> = BTreeMap::new();
        for p in parts.iter().filter(|p| !p.overlined) {
            let r = self
                .rank
                .rank(p.size as i64, p.colour)
                .ok_or_else(|| self.invalid(format!("rank of {} is not an integer", self.part_label(p))))?;
            if let Some(q) = seen.insert(r, *p) {
                return Err(self.invalid(format!(
                    "parts {} and {} share rank {r}",
                    self.part_label(&q),
                    self.part_label(p)
                )));
            }
        }
        for u in &parts {
            let ru = self.raw_rank(u);
            for l in &parts {
                if l.size > u.size {
                    continue;
                }
                if u.size - l.size >= self.min_gap(u, l) && self.raw_rank(l) > ru {
                    return Err(Error::RankInconsistency {
                        upper: self.part_label(u),
                        lower: self.part_label(l),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn colours(&self) -> &[ColourDef] {
        &self.colours
    }

    pub fn rank_rule(&self) -> &RankRule {
        &self.rank
    }

    pub fn gap_rule(&self) -> &GapRule {
        &self.gap
    }

    pub fn min_size(&self) -> u32 {
        self.min_size
    }

    pub fn forbidden(&self) -> &[(u32, usize)] {
        &self.forbidden
    }

    pub fn overline_marker(&self) -> Option<Var> {
        self.overline_marker
    }

    /// Variables specialized to 1 on output.
    pub fn erased(&self) -> &[Var] {
        &self.erased
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn conventions(&self) -> &BTreeMap<String, String> {
        &self.conventions
    }

    pub fn has_overlines(&self) -> bool {
        self.colours.iter().any(|c| c.overline_allowed)
    }

    pub(crate) fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub(crate) fn to_spec(&self) -> SystemSpec {
        SystemSpec {
            name: self.name.clone(),
            colours: self.colours.clone(),
            rank: self.rank.clone(),
            gap: self.gap.clone(),
            min_size: self.min_size,
            forbidden: self.forbidden.clone(),
            overline_marker: self.overline_marker,
            erased: self.erased.clone(),
            direction: self.direction,
            conventions: self.conventions.clone(),
        }
    }

    pub fn colour_index(&self, label: &str) -> Option<usize> {
        self.colours.iter().position(|c| c.label == label)
    }

    /// Colour variables appearing in weights, plus the overline marker.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.colours.iter().flat_map(|c| c.weight.vars().collect::<Vec<_>>()).collect();
        vs.extend(self.overline_marker);
        vs.sort();
        vs.dedup();
        vs
    }

    /// Checks a single part against domains, forbidden list and overlines.
    pub fn check_part(&self, p: &ColouredPart) -> std::result::Result<(), String> {
        let Some(c) = self.colours.get(p.colour) else {
            return Err(format!("unknown colour index {}", p.colour));
        };
        if p.size < self.min_size {
            return Err(format!("size {} is below the minimum {}", p.size, self.min_size));
        }
        if !c.domain.contains(p.size) {
            return Err(format!("size {} is not allowed for colour {}", p.size, c.label));
        }
        if p.overlined && !c.overline_allowed {
            return Err(format!("colour {} cannot be overlined", c.label));
        }
        if self.forbidden.binary_search(&(p.size, p.colour)).is_ok() {
            return Err(format!("part {} is forbidden", self.part_label(p)));
        }
        Ok(())
    }

    pub fn is_valid_part(&self, p: &ColouredPart) -> bool {
        self.check_part(p).is_ok()
    }

    /// Weight of one part: the colour weight, times the overline marker for a
    /// non-overlined part when the system has one.
    pub fn part_weight(&self, p: &ColouredPart) -> Monomial {
        let w = &self.colours[p.colour].weight;
        match (self.overline_marker, p.overlined) {
            (Some(t), false) => w.mul(&Monomial::var(t)),
            _ => w.clone(),
        }
    }

    /// Position in the total order. Fails on invalid parts.
    pub fn part_rank(&self, p: &ColouredPart) -> Result<i64> {
        self.check_part(p).map_err(Error::InvalidParameter)?;
        Ok(self.raw_rank(p))
    }

    /// Rank from the order rule without validity checks, rounding down when
    /// the rule is not integral at this size.
    pub fn raw_rank(&self, p: &ColouredPart) -> i64 {
        let (mul, off) = self.rank.terms[p.colour];
        (mul * p.size as i64 + off).div_euclid(self.rank.scale)
    }

    /// Rank of `size_colour` for any integer size (valid part or not).
    pub fn rank_of(&self, size: i64, colour: usize) -> i64 {
        let (mul, off) = self.rank.terms[colour];
        (mul * size + off).div_euclid(self.rank.scale)
    }

    /// Minimal allowed `size(upper) - size(lower)` for adjacent parts.
    pub fn min_gap(&self, upper: &ColouredPart, lower: &ColouredPart) -> u32 {
        match &self.gap {
            GapRule::Matrix(g) => {
                let row = g.row(upper.size, upper.colour).unwrap_or(0);
                match (&g.overlined_entries, lower.overlined) {
                    (Some(ov), true) => ov[row][lower.colour],
                    _ => g.entries[row][lower.colour],
                }
            }
            GapRule::Andrews { .. } => {
                let up = &self.andrews[upper.colour];
                let lo = &self.andrews[lower.colour];
                let delta = u32::from(up.z < lo.v);
                lo.w + u32::from(lower.overlined) + delta - 1
            }
        }
    }

    /// All valid parts with size at most `max_size`, sorted by rank with the
    /// non-overlined copy first.
    pub fn valid_parts(&self, max_size: u32) -> Vec<ColouredPart> {
        let mut parts = Vec::new();
        for s in self.min_size..=max_size {
            for c in 0..self.colours.len() {
                for ov in [false, true] {
                    let p = ColouredPart {
                        size: s,
                        colour: c,
                        overlined: ov,
                    };
                    if self.is_valid_part(&p) {
                        parts.push(p);
                    }
                }
            }
        }
        parts.sort_by_key(|p| (self.raw_rank(p), p.overlined));
        parts
    }

    /// The unique non-overlined part of the given size, for systems where the
    /// size determines the colour.
    pub fn part_for_size(&self, size: u32) -> Option<ColouredPart> {
        let mut found = (0..self.colours.len())
            .map(|c| ColouredPart::new(size, c))
            .filter(|p| self.colours[p.colour].domain.contains(size) && size >= self.min_size);
        let first = found.next()?;
        found.next().is_none().then_some(first)
    }

    /// `3_ab`, with a leading `~` for overlined parts.
    pub fn part_label(&self, p: &ColouredPart) -> String {
        let label = self.colours.get(p.colour).map(|c| c.label.as_str()).unwrap_or("?");
        let bar = if p.overlined { "~" } else { "" };
        format!("{bar}{}_{label}", p.size)
    }

    /// Parses `3_ab` or `~0_u1` (the inverse of [`Self::part_label`]).
    pub fn parse_part(&self, text: &str) -> Result<ColouredPart> {
        let text = text.trim();
        let (overlined, rest) = match text.strip_prefix('~') {
            Some(r) => (true, r),
            None => (false, text),
        };
        let bad = || Error::Input(format!("cannot parse part {text:?} (expected size_colour)"));
        let (size, label) = rest.split_once('_').ok_or_else(bad)?;
        let size: u32 = size.parse().map_err(|_| bad())?;
        let colour = self
            .colour_index(label)
            .ok_or_else(|| Error::Input(format!("unknown colour {label:?} in {}", self.name)))?;
        Ok(ColouredPart { size, colour, overlined })
    }

    /// Smallest valid size of each colour (`None` if the colour never occurs
    /// up to [`CHECK_SIZE`]).
    pub fn first_sizes(&self) -> Vec<Option<u32>> {
        (0..self.colours.len())
            .map(|c| (self.min_size..=CHECK_SIZE).find(|s| self.is_valid_part(&ColouredPart::new(*s, c))))
            .collect()
    }
}

impl fmt::Display for ColouredSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "system {}", self.name)?;
        for c in &self.colours {
            let dom = if c.domain.residues.is_empty() {
                format!("sizes >= {}", c.domain.min)
            } else {
                let r: Vec<String> = c.domain.residues.iter().map(|r| r.to_string()).collect();
                format!("sizes >= {} with size mod {} in {{{}}}", c.domain.min, c.domain.modulus, r.join(","))
            };
            let ov = if c.overline_allowed { ", overlines allowed" } else { "" };
            writeln!(f, "  colour {}: weight {}, {dom}{ov}", c.label, c.weight)?;
        }
        if !self.forbidden.is_empty() {
            let parts: Vec<String> = self
                .forbidden
                .iter()
                .map(|(s, c)| self.part_label(&ColouredPart::new(*s, *c)))
                .collect();
            writeln!(f, "  forbidden: {}", parts.join(", "))?;
        }
        match &self.gap {
            GapRule::Matrix(g) => {
                let width = g.row_labels.iter().map(|l| l.len()).max().unwrap_or(1).max(3);
                let header: Vec<String> = self.colours.iter().map(|c| format!("{:>4}", c.label)).collect();
                writeln!(f, "  gap matrix (rows: upper class, columns: lower colour)")?;
                writeln!(f, "  {:width$} {}", "", header.join(""))?;
                for (label, row) in g.row_labels.iter().zip(&g.entries) {
                    let cells: Vec<String> = row.iter().map(|e| format!("{e:>4}")).collect();
                    writeln!(f, "  {label:width$} {}", cells.join(""))?;
                }
                if let Some(ov) = &g.overlined_entries {
                    writeln!(f, "  gap matrix for an overlined lower part")?;
                    for (label, row) in g.row_labels.iter().zip(ov) {
                        let cells: Vec<String> = row.iter().map(|e| format!("{e:>4}")).collect();
                        writeln!(f, "  {label:width$} {}", cells.join(""))?;
                    }
                }
            }
            GapRule::Andrews { r } => writeln!(f, "  gap: w(lower) + overline - 1 + delta, r = {r}")?,
        }
        Ok(())
    }
}
