//! JSON description of a system, for user-defined systems.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Monomial, Var};
use crate::error::{Error, Result};

use super::{ColourDef, ColouredSystem, Direction, GapMatrix, GapRule, RankRule, SizeDomain, SystemSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColourFile {
    pub label: String,
    /// Monomial such as `a*b^2`.
    pub weight: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<SizeDomain>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub overline: bool,
}

fn linear() -> String {
    "linear".into()
}

fn one_i64() -> i64 {
    1
}

fn one_u32() -> u32 {
    1
}

/// `rank(k_x) = (mul * k + off) / scale` with `terms[label] = [mul, off]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderFile {
    #[serde(default = "linear")]
    pub rule: String,
    #[serde(default = "one_i64")]
    pub scale: i64,
    pub terms: BTreeMap<String, (i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowFile {
    pub label: String,
    /// `[colour label, size mod row_modulus]` pairs using this row.
    pub classes: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GapFile {
    Matrix {
        #[serde(default = "one_u32")]
        row_modulus: u32,
        /// Defaults to one row per colour, in colour order.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        rows: Vec<RowFile>,
        entries: Vec<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        overlined_entries: Option<Vec<Vec<u32>>>,
    },
    Andrews {
        r: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartFile {
    pub size: u32,
    pub colour: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub name: String,
    pub colours: Vec<ColourFile>,
    pub order: OrderFile,
    pub gap: GapFile,
    #[serde(default = "one_u32")]
    pub min_size: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forbidden: Vec<PartFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overline_marker: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub erased: Vec<String>,
    #[serde(default)]
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub conventions: BTreeMap<String, String>,
}

fn input(msg: String) -> Error {
    Error::InvalidSystem(msg)
}

impl SystemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("bad system file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system file serializes")
    }

    pub fn from_system(sys: &ColouredSystem) -> Self {
        let colours = sys
            .colours()
            .iter()
            .map(|c| ColourFile {
                label: c.label.clone(),
                weight: c.weight.to_string(),
                domain: Some(c.domain.clone()),
                overline: c.overline_allowed,
            })
            .collect();
        let label = |c: usize| sys.colours()[c].label.clone();
        let order = OrderFile {
            rule: linear(),
            scale: sys.rank_rule().scale,
            terms: sys.rank_rule().terms.iter().enumerate().map(|(c, t)| (label(c), *t)).collect(),
        };
        let gap = match sys.gap_rule() {
            GapRule::Andrews { r } => GapFile::Andrews { r: *r },
            GapRule::Matrix(g) => {
                let rows = g
                    .row_labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| RowFile {
                        label: l.clone(),
                        classes: g
                            .row_of
                            .iter()
                            .enumerate()
                            .flat_map(|(c, cls)| {
                                cls.iter()
                                    .enumerate()
                                    .filter(move |(_, r)| **r == Some(i))
                                    .map(move |(res, _)| (c, res as u32))
                            })
                            .map(|(c, res)| (label(c), res))
                            .collect(),
                    })
                    .collect();
                GapFile::Matrix {
                    row_modulus: g.row_modulus,
                    rows,
                    entries: g.entries.clone(),
                    overlined_entries: g.overlined_entries.clone(),
                }
            }
        };
        SystemFile {
            name: sys.name().to_string(),
            colours,
            order,
            gap,
            min_size: sys.min_size(),
            forbidden: sys
                .forbidden()
                .iter()
                .map(|(s, c)| PartFile { size: *s, colour: label(*c) })
                .collect(),
            overline_marker: sys.overline_marker().map(|v| v.name()),
            erased: sys.erased().iter().map(|v| v.name()).collect(),
            direction: sys.direction(),
            conventions: sys.conventions().clone(),
        }
    }

    pub fn build(&self) -> Result<ColouredSystem> {
        let parse_var = |s: &str| Var::new(s).map_err(Error::from);
        let mut colours = Vec::new();
        for c in &self.colours {
            let weight = Monomial::parse(&c.weight)?;
            let domain = c.domain.clone().unwrap_or_else(|| SizeDomain::all(self.min_size));
            colours.push(ColourDef {
                label: c.label.clone(),
                weight,
                domain,
                overline_allowed: c.overline,
            });
        }
        let index = |label: &str| {
            colours
                .iter()
                .position(|c| c.label == label)
                .ok_or_else(|| input(format!("{}: unknown colour {label:?}", self.name)))
        };
        if self.order.rule != "linear" {
            return Err(input(format!("{}: unsupported order rule {:?}", self.name, self.order.rule)));
        }
        let mut terms = Vec::new();
        for c in &colours {
            let t = self
                .order
                .terms
                .get(&c.label)
                .ok_or_else(|| input(format!("{}: order has no term for colour {}", self.name, c.label)))?;
            terms.push(*t);
        }
        if let Some(extra) = self.order.terms.keys().find(|k| index(k).is_err()) {
            return Err(input(format!("{}: order names unknown colour {extra:?}", self.name)));
        }
        let gap = match &self.gap {
            GapFile::Andrews { r } => GapRule::Andrews { r: *r },
            GapFile::Matrix {
                row_modulus,
                rows,
                entries,
                overlined_entries,
            } => {
                let rm = (*row_modulus).max(1);
                let (row_labels, row_of) = if rows.is_empty() {
                    if rm != 1 {
                        return Err(input(format!("{}: rows are required when row_modulus > 1", self.name)));
                    }
                    (
                        colours.iter().map(|c| c.label.clone()).collect(),
                        (0..colours.len()).map(|i| vec![Some(i)]).collect(),
                    )
                } else {
                    let mut row_of = vec![vec![None; rm as usize]; colours.len()];
                    for (i, row) in rows.iter().enumerate() {
                        for (label, res) in &row.classes {
                            let c = index(label)?;
                            let slot = row_of[c]
                                .get_mut(*res as usize)
                                .ok_or_else(|| input(format!("{}: residue {res} is not below {rm}", self.name)))?;
                            if slot.is_some() {
                                return Err(input(format!("{}: class ({label}, {res}) has two rows", self.name)));
                            }
                            *slot = Some(i);
                        }
                    }
                    (rows.iter().map(|r| r.label.clone()).collect(), row_of)
                };
                GapRule::Matrix(GapMatrix {
                    row_modulus: rm,
                    row_labels,
                    row_of,
                    entries: entries.clone(),
                    overlined_entries: overlined_entries.clone(),
                })
            }
        };
        let forbidden = self
            .forbidden
            .iter()
            .map(|p| Ok((p.size, index(&p.colour)?)))
            .collect::<Result<Vec<_>>>()?;
        let spec = SystemSpec {
            name: self.name.clone(),
            colours,
            rank: RankRule {
                scale: self.order.scale,
                terms,
            },
            gap,
            min_size: self.min_size,
            forbidden,
            overline_marker: self.overline_marker.as_deref().map(parse_var).transpose()?,
            erased: self.erased.iter().map(|s| parse_var(s)).collect::<Result<_>>()?,
            direction: self.direction,
            conventions: self.conventions.clone(),
        };
        ColouredSystem::build(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systems::{build_preset, preset_names, PresetParams};

    #[test]
    fn presets_round_trip() {
        for name in preset_names() {
            let sys = build_preset(name, &PresetParams::with_r(2)).unwrap();
            let file = SystemFile::from_system(&sys);
            let back = SystemFile::from_json(&file.to_json()).unwrap().build().unwrap();
            assert_eq!(back, sys, "{name}");
        }
    }

    #[test]
    fn minimal_file() {
        let text = r#"{
            "name": "distinct",
            "colours": [{"label": "a", "weight": "a"}],
            "order": {"terms": {"a": [1, 0]}},
            "gap": {"kind": "matrix", "entries": [[1]]}
        }"#;
        let sys = SystemFile::from_json(text).unwrap().build().unwrap();
        assert_eq!(sys.colours().len(), 1);
        assert_eq!(sys.min_size(), 1);
    }

    #[test]
    fn inconsistent_order_is_rejected() {
        let text = r#"{
            "name": "bad",
            "colours": [{"label": "a", "weight": "a"}, {"label": "b", "weight": "b"}],
            "order": {"terms": {"a": [2, 0], "b": [2, 1]}},
            "gap": {"kind": "matrix", "entries": [[1, 0], [1, 1]]}
        }"#;
        let err = SystemFile::from_json(text).unwrap().build().unwrap_err();
        assert!(matches!(err, Error::RankInconsistency { .. }), "{err}");
    }
}
