use std::collections::BTreeMap;

use crate::algebra::{Monomial, Var};
use crate::error::{Error, Result};

use super::andrews::{andrews_colour_data, primary_var};
use super::{
    dilate_system, ColourDef, ColouredPart, ColouredSystem, DilationSpec, Direction, GapMatrix, GapRule, RankRule,
    SizeDomain, SystemSpec,
};

/// The two readings of which size-1 parts the weighted Siladić system allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmallPartConvention {
    /// Forbid `1_ab`, `1_b2`, `1_a2`; `1_a` and `1_b` allowed.
    #[default]
    AllowOneB,
    /// Also forbid `1_b`, so that 1 only appears with colour `a`.
    OnlyOneA,
}

impl SmallPartConvention {
    pub const ALL: [SmallPartConvention; 2] = [SmallPartConvention::AllowOneB, SmallPartConvention::OnlyOneA];

    pub fn forbidden_labels(&self) -> &'static [&'static str] {
        match self {
            SmallPartConvention::AllowOneB => &["ab", "b2", "a2"],
            SmallPartConvention::OnlyOneA => &["ab", "b2", "a2", "b"],
        }
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.forbidden_labels().iter().map(|l| format!("1_{l}")).collect();
        format!("forbid {}", parts.join(","))
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "allow-1b" => Ok(SmallPartConvention::AllowOneB),
            "only-1a" => Ok(SmallPartConvention::OnlyOneA),
            _ => Err(Error::InvalidParameter(format!(
                "unknown small-part convention {text:?} (expected allow-1b or only-1a)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SmallPartConvention::AllowOneB => "allow-1b",
            SmallPartConvention::OnlyOneA => "only-1a",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PresetParams {
    pub r: Option<u32>,
    pub convention: SmallPartConvention,
}

impl PresetParams {
    pub fn with_r(r: u32) -> Self {
        PresetParams {
            r: Some(r),
            ..Default::default()
        }
    }

    pub fn with_convention(convention: SmallPartConvention) -> Self {
        PresetParams {
            convention,
            ..Default::default()
        }
    }
}

const PRESETS: [&str; 12] = [
    "schur-weighted",
    "schur-dilated-mod3",
    "siladic-weighted",
    "siladic-dilated",
    "schur-companion",
    "primc-weighted",
    "primc-dilated",
    "andrews-overpartitions",
    "distinct-odd",
    "distinct-mod3",
    "distinct-mod4",
    "primary-overpartitions",
];

pub fn preset_names() -> &'static [&'static str] {
    &PRESETS
}

fn v(name: &str) -> Var {
    Var::named(name)
}

fn m(text: &str) -> Monomial {
    Monomial::parse(text).expect("built-in monomial")
}

/// Builds a preset by name. `andrews-overpartitions(2)` style names carry
/// `r` inline; otherwise it comes from `params`.
pub fn build_preset(name: &str, params: &PresetParams) -> Result<ColouredSystem> {
    let (base, inline_r) = match name.split_once('(') {
        Some((b, rest)) => {
            let r = rest
                .strip_suffix(')')
                .and_then(|x| x.trim().parse::<u32>().ok())
                .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
            (b, Some(r))
        }
        None => (name, None),
    };
    let r = inline_r.or(params.r);
    let need_r = || -> Result<u32> {
        match r {
            Some(r) if (1..=7).contains(&r) => Ok(r),
            Some(r) => Err(Error::InvalidParameter(format!("r must be between 1 and 7, got {r}"))),
            None => Err(Error::InvalidParameter(format!("{base} needs a parameter r"))),
        }
    };
    match base {
        "schur-weighted" => schur_weighted(),
        "schur-dilated-mod3" => schur_dilated_mod3(),
        "siladic-weighted" => siladic_weighted(params.convention),
        "siladic-dilated" => siladic_dilated(),
        "schur-companion" => schur_companion(params.convention),
        "primc-weighted" => primc_weighted(),
        "primc-dilated" => primc_dilated(),
        "andrews-overpartitions" => andrews_overpartitions(need_r()?),
        "distinct-odd" => residue_system("distinct-odd", 2, &[(1, "odd", "a")], &[], |_, _, d| d >= 1),
        "distinct-mod3" => residue_system("distinct-mod3", 3, &[(1, "r1", "a"), (2, "r2", "b")], &[], |_, _, d| d >= 1),
        "distinct-mod4" => residue_system("distinct-mod4", 4, &[(1, "r1", "a"), (3, "r3", "b")], &[], |_, _, d| d >= 1),
        "primary-overpartitions" => primary_overpartitions(need_r()?),
        _ => Err(Error::UnknownPreset(name.to_string())),
    }
}

fn spec(name: &str, colours: Vec<ColourDef>, rank: RankRule, gap: GapRule) -> SystemSpec {
    SystemSpec {
        name: name.to_string(),
        colours,
        rank,
        gap,
        min_size: 1,
        forbidden: Vec::new(),
        overline_marker: None,
        erased: Vec::new(),
        direction: Direction::LargestPart,
        conventions: BTreeMap::new(),
    }
}

fn schur_weighted() -> Result<ColouredSystem> {
    let colours = vec![
        ColourDef::new("ab", m("a*b"), SizeDomain::all(1)),
        ColourDef::new("a", m("a"), SizeDomain::all(1)),
        ColourDef::new("b", m("b"), SizeDomain::all(1)),
    ];
    // gap 2 after an ab part or when the upper colour is smaller (ab < a < b)
    let entries = vec![vec![2, 2, 2], vec![1, 1, 2], vec![1, 1, 1]];
    let mut s = spec(
        "schur-weighted",
        colours,
        RankRule::interleaved(3, &[-3, -2, -1]),
        GapRule::Matrix(GapMatrix::per_colour(&["ab", "a", "b"], entries)),
    );
    s.forbidden = vec![(1, 0)];
    ColouredSystem::build(s)
}

/// Builds a system with one colour per residue class mod `modulus`; the
/// adjacency rule `allowed(upper residue, lower residue, difference)` must be
/// upward closed within each residue class of differences, and is stored as
/// its minimal-gap matrix.
fn residue_system<F>(
    name: &str,
    modulus: u32,
    classes: &[(u32, &str, &str)],
    forbidden_sizes: &[u32],
    allowed: F,
) -> Result<ColouredSystem>
where
    F: Fn(u32, u32, u32) -> bool,
{
    let colours: Vec<ColourDef> = classes
        .iter()
        .map(|(r, label, w)| ColourDef::new(label, m(w), SizeDomain::residues(modulus, &[*r], 1)))
        .collect();
    let mut entries = Vec::new();
    for (ru, ..) in classes {
        let mut row = Vec::new();
        for (rl, ..) in classes {
            let start = (ru + modulus - rl) % modulus;
            let gap = (0..8)
                .map(|j| start + j * modulus)
                .find(|d| allowed(*ru, *rl, *d))
                .ok_or_else(|| Error::InvalidSystem(format!("{name}: no admissible difference from {ru} to {rl}")))?;
            if (1..4).any(|j| !allowed(*ru, *rl, gap + j * modulus)) {
                return Err(Error::InvalidSystem(format!(
                    "{name}: the rule from residue {ru} to {rl} is not a minimal-difference rule"
                )));
            }
            row.push(gap);
        }
        entries.push(row);
    }
    let labels: Vec<&str> = classes.iter().map(|(_, l, _)| *l).collect();
    let mut s = spec(name, colours, RankRule::by_size(classes.len()), GapRule::Matrix(GapMatrix::per_colour(&labels, entries)));
    for size in forbidden_sizes {
        let c = classes
            .iter()
            .position(|(r, ..)| *r == size % modulus)
            .ok_or_else(|| Error::InvalidSystem(format!("{name}: forbidden size {size} has no colour")))?;
        s.forbidden.push((*size, c));
    }
    ColouredSystem::build(s)
}

fn schur_dilated_mod3() -> Result<ColouredSystem> {
    residue_system(
        "schur-dilated-mod3",
        3,
        &[(1, "a", "a"), (2, "b", "b"), (0, "c", "c")],
        &[],
        |ru, rl, d| d >= 3 && !(ru == 0 && rl == 0 && d < 6),
    )
}

/// Siladić's conditions on plain integers, one colour per class mod 8:
/// class 1 weighs `a`, class 3 weighs `b`, the others carry free colours
/// `c0, c2, c4, c5, c6, c7`.
fn siladic_dilated() -> Result<ColouredSystem> {
    let classes = [
        (0, "r0", "c0"),
        (1, "r1", "a"),
        (2, "r2", "c2"),
        (3, "r3", "b"),
        (4, "r4", "c4"),
        (5, "r5", "c5"),
        (6, "r6", "c6"),
        (7, "r7", "c7"),
    ];
    residue_system("siladic-dilated", 8, &classes, &[2], |ru, _, d| match d {
        0..=4 => false,
        5 => ru == 1 || ru == 4,
        6 => ru % 2 == 1,
        7 => ![2, 5].contains(&ru),
        8 => ![2, 6].contains(&ru),
        _ => true,
    })
}

/// Colour assignment mod 8 that turns `siladic-dilated` into the refined
/// statistic `a^u b^v`.
pub fn siladic_assignment() -> Vec<(Var, Monomial)> {
    vec![
        (v("c0"), m("a*b")),
        (v("c4"), m("a*b")),
        (v("c5"), m("a")),
        (v("c7"), m("b")),
        (v("c2"), m("b^2")),
        (v("c6"), m("a^2")),
    ]
}

fn siladic_weighted(convention: SmallPartConvention) -> Result<ColouredSystem> {
    let labels = ["a", "b", "ab", "a2", "b2"];
    let odd = SizeDomain::residues(2, &[1], 1);
    let colours = vec![
        ColourDef::new("a", m("a"), SizeDomain::all(1)),
        ColourDef::new("b", m("b"), SizeDomain::all(1)),
        ColourDef::new("ab", m("a*b"), SizeDomain::all(1)),
        ColourDef::new("a2", m("a^2"), odd.clone()),
        ColourDef::new("b2", m("b^2"), odd),
    ];
    let rows = ["a_odd", "b2", "b_odd", "ab_even", "a_even", "a2", "b_even", "ab_odd"];
    let entries = vec![
        vec![2, 2, 1, 2, 2],
        vec![2, 3, 2, 2, 4],
        vec![1, 2, 1, 2, 2],
        vec![2, 2, 2, 3, 3],
        vec![2, 2, 2, 3, 3],
        vec![3, 3, 3, 4, 4],
        vec![1, 2, 1, 1, 3],
        vec![2, 3, 2, 2, 3],
    ];
    let row = |l: &str| Some(rows.iter().position(|r| *r == l).unwrap());
    // indexed by size mod 2
    let row_of = vec![
        vec![row("a_even"), row("a_odd")],
        vec![row("b_even"), row("b_odd")],
        vec![row("ab_even"), row("ab_odd")],
        vec![None, row("a2")],
        vec![None, row("b2")],
    ];
    let gap = GapMatrix {
        row_modulus: 2,
        row_labels: rows.iter().map(|s| s.to_string()).collect(),
        row_of,
        entries,
        overlined_entries: None,
    };
    // rank is the size after q -> q^4, a -> a q^-3, b -> b q^-1
    let mut s = spec(
        "siladic-weighted",
        colours,
        RankRule::interleaved(4, &[-3, -1, -4, -6, -2]),
        GapRule::Matrix(gap),
    );
    s.forbidden = convention
        .forbidden_labels()
        .iter()
        .map(|l| (1, labels.iter().position(|x| x == l).unwrap()))
        .collect();
    s.conventions.insert("small_parts".into(), convention.describe());
    let sys = ColouredSystem::build(s)?;
    check_siladic_segment(&sys)?;
    Ok(sys)
}

/// The displayed start of the weighted order must match the rank rule.
fn check_siladic_segment(sys: &ColouredSystem) -> Result<()> {
    let segment = [
        (1, "ab"),
        (1, "a"),
        (1, "b2"),
        (1, "b"),
        (2, "ab"),
        (2, "a"),
        (3, "a2"),
        (2, "b"),
        (3, "ab"),
        (3, "a"),
        (3, "b2"),
        (3, "b"),
    ];
    let ranks: Vec<i64> = segment
        .iter()
        .map(|(s, l)| sys.rank_of(*s, sys.colour_index(l).unwrap()))
        .collect();
    if ranks.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::InvalidSystem(format!("{}: weighted order does not match its displayed segment", sys.name())))
    }
}

pub fn siladic_dilation() -> DilationSpec {
    DilationSpec::new(4).shift(v("a"), -3).shift(v("b"), -1)
}

pub fn schur_dilation() -> DilationSpec {
    DilationSpec::new(3).shift(v("a"), -2).shift(v("b"), -1)
}

pub fn primc_dilation() -> DilationSpec {
    DilationSpec::new(2).shift(v("a"), -1).shift(v("b"), 0).shift(v("c"), 0).shift(v("d"), 1)
}

fn schur_companion(convention: SmallPartConvention) -> Result<ColouredSystem> {
    Ok(dilate_system(&siladic_weighted(convention)?, &schur_dilation())?.with_name("schur-companion"))
}

/// Primc's four colours. The colour `b` is specialized to 1: its weight is
/// the marker `b`, erased from every output.
fn primc_weighted() -> Result<ColouredSystem> {
    let colours = vec![
        ColourDef::new("a", m("a"), SizeDomain::all(1)),
        ColourDef::new("b", m("b"), SizeDomain::all(1)),
        ColourDef::new("c", m("c"), SizeDomain::all(1)),
        ColourDef::new("d", m("d"), SizeDomain::all(1)),
    ];
    let entries = vec![vec![2, 1, 2, 2], vec![1, 0, 1, 1], vec![0, 1, 0, 2], vec![0, 1, 0, 2]];
    let mut s = spec(
        "primc-weighted",
        colours,
        RankRule::interleaved(4, &[-4, -3, -2, -1]),
        GapRule::Matrix(GapMatrix::per_colour(&["a", "b", "c", "d"], entries)),
    );
    s.erased = vec![v("b")];
    ColouredSystem::build(s)
}

fn primc_dilated() -> Result<ColouredSystem> {
    Ok(dilate_system(&primc_weighted()?, &primc_dilation())?.with_name("primc-dilated"))
}

fn overline_spec(name: &str, colours: Vec<ColourDef>, rank: RankRule, gap: GapRule) -> SystemSpec {
    let mut s = spec(name, colours, rank, gap);
    s.min_size = 0;
    s.overline_marker = Some(v("t"));
    s.direction = Direction::SmallestPart;
    s.conventions
        .insert("zero_parts".into(), "non-overlined and overlined parts 0 allowed".into());
    s
}

fn andrews_overpartitions(r: u32) -> Result<ColouredSystem> {
    let k = (1u32 << r) - 1;
    let mut colours = Vec::new();
    for i in 1..=k {
        let data = andrews_colour_data(i, r)?;
        let label: String = data.weight.vars().map(|x| x.name()).collect();
        let mut c = ColourDef::new(&label, data.weight, SizeDomain::all(0));
        c.overline_allowed = true;
        colours.push(c);
    }
    let offsets: Vec<i64> = (0..k as i64).collect();
    let s = overline_spec(
        &format!("andrews-overpartitions({r})"),
        colours,
        RankRule::interleaved(k as i64, &offsets),
        GapRule::Andrews { r },
    );
    ColouredSystem::build(s)
}

/// Overpartitions into parts coloured `u1..ur`: parts of one coloured size
/// repeat freely, with at most one overlined copy.
fn primary_overpartitions(r: u32) -> Result<ColouredSystem> {
    let mut colours = Vec::new();
    for k in 1..=r {
        let mut c = ColourDef::new(&format!("u{k}"), Monomial::var(primary_var(k)), SizeDomain::all(0));
        c.overline_allowed = true;
        colours.push(c);
    }
    let n = r as usize;
    let plain = (0..n).map(|i| (0..n).map(|j| u32::from(j > i)).collect()).collect();
    let over = (0..n).map(|i| (0..n).map(|j| u32::from(j >= i)).collect()).collect();
    let labels: Vec<String> = (1..=r).map(|k| format!("u{k}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut gap = GapMatrix::per_colour(&label_refs, plain);
    gap.overlined_entries = Some(over);
    let offsets: Vec<i64> = (0..r as i64).collect();
    let s = overline_spec(
        &format!("primary-overpartitions({r})"),
        colours,
        RankRule::interleaved(r as i64, &offsets),
        GapRule::Matrix(gap),
    );
    ColouredSystem::build(s)
}

/// Part of `sys` with the given size and colour label.
pub fn part(sys: &ColouredSystem, size: u32, label: &str) -> ColouredPart {
    ColouredPart::new(size, sys.colour_index(label).expect("known colour"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset(name: &str) -> ColouredSystem {
        build_preset(name, &PresetParams::default()).unwrap()
    }

    #[test]
    fn every_preset_builds() {
        for name in preset_names() {
            let params = PresetParams::with_r(2);
            build_preset(name, &params).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(matches!(build_preset("nope", &PresetParams::default()), Err(Error::UnknownPreset(_))));
        assert!(build_preset("andrews-overpartitions(0)", &PresetParams::default()).is_err());
        assert!(build_preset("andrews-overpartitions", &PresetParams::default()).is_err());
    }

    #[test]
    fn primc_gaps() {
        let sys = preset("primc-weighted");
        assert_eq!(sys.colours().len(), 4);
        assert_eq!(sys.min_gap(&part(&sys, 5, "c"), &part(&sys, 1, "d")), 2);
        assert_eq!(sys.part_rank(&part(&sys, 3, "d")).unwrap(), 4 * 2 + 3);
    }

    #[test]
    fn siladic_gaps_and_ranks() {
        let sys = preset("siladic-weighted");
        assert_eq!(sys.colours().len(), 5);
        assert_eq!(sys.min_gap(&part(&sys, 3, "a2"), &part(&sys, 1, "a")), 3);
        assert_eq!(sys.part_rank(&part(&sys, 3, "a2")).unwrap(), 6);
        assert_eq!(sys.part_rank(&part(&sys, 2, "a")).unwrap(), 5);
        assert_eq!(sys.part_rank(&part(&sys, 2, "b")).unwrap(), 7);
        assert!(!sys.is_valid_part(&part(&sys, 1, "a2")));
        assert!(!sys.is_valid_part(&part(&sys, 4, "b2")));
        assert!(sys.is_valid_part(&part(&sys, 1, "b")));
        let strict = build_preset("siladic-weighted", &PresetParams::with_convention(SmallPartConvention::OnlyOneA)).unwrap();
        assert!(!strict.is_valid_part(&part(&strict, 1, "b")));
    }

    #[test]
    fn schur_order() {
        let sys = preset("schur-weighted");
        let ranks: Vec<i64> = ["ab", "a", "b"].iter().map(|l| sys.rank_of(1, sys.colour_index(l).unwrap())).collect();
        assert_eq!(ranks, vec![0, 1, 2]);
    }

    #[test]
    fn andrews_gap_formula() {
        let sys = build_preset("andrews-overpartitions(2)", &PresetParams::default()).unwrap();
        assert_eq!(sys.colours().len(), 3);
        let labels: Vec<&str> = sys.colours().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, vec!["u1", "u2", "u1u2"]);
        assert_eq!(sys.min_gap(&part(&sys, 3, "u1"), &part(&sys, 1, "u2")), 1);
        let p = ColouredPart::overlined(0, 2);
        assert_eq!(sys.min_gap(&part(&sys, 3, "u2"), &p), 2);
        assert_eq!(sys.min_gap(&part(&sys, 3, "u1u2"), &part(&sys, 1, "u1")), 0);
    }

    #[test]
    fn andrews_rule_is_overline_gap_for_one_colour() {
        let sys = build_preset("andrews-overpartitions(1)", &PresetParams::default()).unwrap();
        let a = build_preset("primary-overpartitions(1)", &PresetParams::default()).unwrap();
        for s in 0..6 {
            for t in 0..=s {
                for ov in [false, true] {
                    let up = ColouredPart::new(s, 0);
                    let lo = ColouredPart { size: t, colour: 0, overlined: ov };
                    assert_eq!(sys.min_gap(&up, &lo), u32::from(ov));
                    assert_eq!(a.min_gap(&up, &lo), u32::from(ov));
                }
            }
        }
    }

    #[test]
    fn residue_rules() {
        let sys = preset("siladic-dilated");
        let p = |s| sys.part_for_size(s).unwrap();
        assert_eq!(sys.min_gap(&p(9), &p(4)), 5);
        assert!(sys.min_gap(&p(8), &p(3)) > 5);
        assert!(!sys.is_valid_part(&p(2)));
        let s3 = preset("schur-dilated-mod3");
        let q = |s| s3.part_for_size(s).unwrap();
        assert_eq!(s3.min_gap(&q(6), &q(3)), 6);
        assert_eq!(s3.min_gap(&q(6), &q(2)), 4);
        assert_eq!(s3.min_gap(&q(4), &q(1)), 3);
        let odd = preset("distinct-odd");
        assert_eq!(odd.min_gap(&odd.part_for_size(5).unwrap(), &odd.part_for_size(3).unwrap()), 2);
    }
}
