//! Identity verification: the same generating function computed by several
//! independent engines, compared coefficient by coefficient.

mod cases;
mod statistics;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{product_expand, substitute_unchecked, Mismatch, Monomial, ProductSpec, SubstitutionMap, TruncatedSeries, Var};
use crate::enumerate::{enumerate_below_dilation, enumerate_series};
use crate::error::{Error, Result};
use crate::recurrence::dp_series;
use crate::systems::{statistic_substitution, ColouredSystem, DilationSpec};

pub use cases::{identity_case, identity_cases, identity_names};
pub use statistics::{sampled_statistic_check, StatisticCheck, StatisticFailure};
pub use table::{coefficient_table, CoefficientTable, TableRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Enum,
    Recurrence,
    Product,
    Dilation,
}

impl Engine {
    pub const ALL: [Engine; 4] = [Engine::Enum, Engine::Recurrence, Engine::Product, Engine::Dilation];

    pub fn name(&self) -> &'static str {
        match self {
            Engine::Enum => "enum",
            Engine::Recurrence => "recurrence",
            Engine::Product => "product",
            Engine::Dilation => "dilation",
        }
    }

    /// Parses a comma separated list such as `enum,product`.
    pub fn parse_list(text: &str) -> Result<Vec<Engine>> {
        let mut out: Vec<Engine> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::Input("no engines given".into()));
        }
        Ok(out)
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown engine {s:?}; expected enum, recurrence, product or dilation")))
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How one side's variables are brought onto the common statistics.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alignment {
    pub subst: Option<SubstitutionMap>,
    pub erase_all: bool,
}

impl Alignment {
    pub fn identity() -> Self {
        Alignment::default()
    }

    pub fn erase_all() -> Self {
        Alignment {
            subst: None,
            erase_all: true,
        }
    }

    pub fn substitute(pairs: &[(Var, Monomial)]) -> Self {
        let s = pairs
            .iter()
            .fold(SubstitutionMap::new(1), |s, (v, m)| s.with(*v, m.clone(), 0));
        Alignment {
            subst: Some(s),
            erase_all: false,
        }
    }

    fn apply(&self, f: TruncatedSeries, degmax: Option<u32>) -> Result<TruncatedSeries> {
        let f = match &self.subst {
            // shifts are zero and q is untouched, so no order is lost
            Some(s) => substitute_unchecked(&f, s, f.qmax())?,
            None => f,
        };
        let f = if self.erase_all { f.erase_all() } else { f };
        Ok(f.cap_degree(degmax))
    }

    /// Variables left after aligning a series in `vars`.
    pub fn image_variables(&self, vars: &[Var]) -> Vec<Var> {
        if self.erase_all {
            return Vec::new();
        }
        let mut out: Vec<Var> = vars
            .iter()
            .flat_map(|v| match self.subst.as_ref().and_then(|s| s.images.get(v)) {
                Some(img) => img.vars.vars().collect::<Vec<_>>(),
                None => vec![*v],
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone)]
pub enum SideA {
    Product(ProductSpec),
    System(ColouredSystem),
}

/// A weighted system whose dilation is the B side.
#[derive(Debug, Clone)]
pub struct DilationLink {
    pub weighted: ColouredSystem,
    pub spec: DilationSpec,
}

#[derive(Debug, Clone)]
pub struct IdentityCase {
    pub name: String,
    pub description: String,
    pub side_a: SideA,
    pub side_b: ColouredSystem,
    pub align_a: Alignment,
    pub align_b: Alignment,
    pub dilation: Option<DilationLink>,
    pub qmax: usize,
    pub degmax: Option<u32>,
    /// Too slow for routine runs.
    pub extended: bool,
    pub conventions: BTreeMap<String, String>,
    /// Variants of which exactly one is expected to hold, e.g. competing
    /// readings of the small-part restrictions.
    pub alternatives: Vec<(String, IdentityCase)>,
}

impl IdentityCase {
    pub fn applicable_engines(&self) -> Vec<Engine> {
        if let Some((_, first)) = self.alternatives.first() {
            return first.applicable_engines();
        }
        let mut out = vec![Engine::Enum, Engine::Recurrence];
        if matches!(self.side_a, SideA::Product(_)) {
            out.push(Engine::Product);
        }
        if self.dilation.is_some() {
            out.push(Engine::Dilation);
        }
        out
    }

    fn a_variables(&self) -> Vec<Var> {
        let raw = match &self.side_a {
            SideA::Product(p) => {
                let mut vs: Vec<Var> = p.factors.iter().flat_map(|f| f.coeff.vars.vars().collect::<Vec<_>>()).collect();
                vs.sort();
                vs.dedup();
                vs
            }
            SideA::System(s) => tracked(s),
        };
        self.align_a.image_variables(&raw)
    }

    /// Both sides must end up on the same statistics.
    pub fn check_alignment(&self) -> Result<()> {
        let a = self.a_variables();
        let b = self.align_b.image_variables(&tracked(&self.side_b));
        if a != b {
            let show = |vs: &[Var]| vs.iter().map(|v| v.name()).collect::<Vec<_>>().join(",");
            return Err(Error::InvalidSystem(format!(
                "{}: sides track different statistics ({{{}}} vs {{{}}})",
                self.name,
                show(&a),
                show(&b)
            )));
        }
        Ok(())
    }
}

fn tracked(sys: &ColouredSystem) -> Vec<Var> {
    sys.variables().into_iter().filter(|v| !sys.erased().contains(v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub identity: String,
    pub qmax: usize,
    pub degmax: Option<u32>,
    pub engines: Vec<Engine>,
    pub equal: bool,
    pub first_mismatch: Option<Mismatch>,
    /// Labels of the two computations that disagree, when they do.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mismatch_between: Option<(String, String)>,
    pub conventions: BTreeMap<String, String>,
    pub ms: u64,
}

struct Computed {
    label: String,
    series: TruncatedSeries,
}

#[derive(Clone, Copy)]
enum Task {
    EnumB,
    EnumA,
    DpB,
    DpA,
    Product,
    Dilation,
}

impl Task {
    fn label(&self) -> &'static str {
        match self {
            Task::EnumB => "enum:B",
            Task::EnumA => "enum:A",
            Task::DpB => "recurrence:B",
            Task::DpA => "recurrence:A",
            Task::Product => "product:A",
            Task::Dilation => "dilation:B",
        }
    }
}

fn run_task(case: &IdentityCase, t: Task, qmax: usize, degmax: Option<u32>) -> Result<TruncatedSeries> {
    let a_sys = || match &case.side_a {
        SideA::System(s) => s,
        SideA::Product(_) => unreachable!("tasks are planned from the case shape"),
    };
    match t {
        Task::EnumB => case.align_b.apply(enumerate_series(&case.side_b, qmax, degmax)?, degmax),
        Task::DpB => case.align_b.apply(dp_series(&case.side_b, qmax, degmax)?, degmax),
        Task::EnumA => case.align_a.apply(enumerate_series(a_sys(), qmax, degmax)?, degmax),
        Task::DpA => case.align_a.apply(dp_series(a_sys(), qmax, degmax)?, degmax),
        Task::Product => {
            let SideA::Product(p) = &case.side_a else { unreachable!() };
            case.align_a.apply(product_expand(p, qmax, degmax)?, degmax)
        }
        Task::Dilation => {
            let link = case.dilation.as_ref().expect("planned only with a dilation");
            let w = enumerate_below_dilation(&link.weighted, &link.spec, qmax)?;
            let f = substitute_unchecked(&w, &statistic_substitution(&link.spec), qmax)?;
            case.align_b.apply(f, degmax)
        }
    }
}

/// Computes every requested side to `(qmax, degmax)` and compares them all
/// against the first.
pub fn verify_identity(case: &IdentityCase, qmax: usize, degmax: Option<u32>, engines: &[Engine]) -> Result<Report> {
    let applicable = case.applicable_engines();
    if let Some(bad) = engines.iter().find(|e| !applicable.contains(e)) {
        return Err(Error::EngineInapplicable {
            engine: bad.name().to_string(),
            identity: case.name.clone(),
            applicable: applicable.iter().map(|e| e.name()).collect::<Vec<_>>().join(", "),
        });
    }
    if engines.is_empty() {
        return Err(Error::Input("no engines requested".into()));
    }
    let mut engines = engines.to_vec();
    engines.sort();
    engines.dedup();
    if !case.alternatives.is_empty() {
        return verify_alternatives(case, qmax, degmax, &engines);
    }
    case.check_alignment()?;

    let start = Instant::now();
    let a_is_system = matches!(case.side_a, SideA::System(_));
    let mut tasks = Vec::new();
    for e in &engines {
        match e {
            Engine::Enum => {
                tasks.push(Task::EnumB);
                if a_is_system {
                    tasks.push(Task::EnumA);
                }
            }
            Engine::Recurrence => {
                tasks.push(Task::DpB);
                if a_is_system {
                    tasks.push(Task::DpA);
                }
            }
            Engine::Product => tasks.push(Task::Product),
            Engine::Dilation => tasks.push(Task::Dilation),
        }
    }
    let computed: Vec<Computed> = tasks
        .par_iter()
        .map(|t| {
            run_task(case, *t, qmax, degmax).map(|series| Computed {
                label: t.label().to_string(),
                series,
            })
        })
        .collect::<Result<_>>()?;

    let mut first_mismatch = None;
    let mut mismatch_between = None;
    if let Some((base, rest)) = computed.split_first() {
        for other in rest {
            if let Some(m) = base.series.first_difference(&other.series) {
                first_mismatch = Some(m);
                mismatch_between = Some((base.label.clone(), other.label.clone()));
                break;
            }
        }
    }
    let mut conventions = case.conventions.clone();
    for sys in [Some(&case.side_b), match &case.side_a {
        SideA::System(s) => Some(s),
        SideA::Product(_) => None,
    }]
    .into_iter()
    .flatten()
    {
        for (k, v) in sys.conventions() {
            conventions.entry(k.clone()).or_insert_with(|| v.clone());
        }
    }
    Ok(Report {
        identity: case.name.clone(),
        qmax,
        degmax,
        engines,
        equal: first_mismatch.is_none(),
        first_mismatch,
        mismatch_between,
        conventions,
        ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs every variant; the identity holds when exactly one of them does.
fn verify_alternatives(case: &IdentityCase, qmax: usize, degmax: Option<u32>, engines: &[Engine]) -> Result<Report> {
    let start = Instant::now();
    let reports: Vec<(String, Report)> = case
        .alternatives
        .iter()
        .map(|(label, c)| verify_identity(c, qmax, degmax, engines).map(|r| (label.clone(), r)))
        .collect::<Result<_>>()?;
    let holding: Vec<&(String, Report)> = reports.iter().filter(|(_, r)| r.equal).collect();
    let mut conventions = case.conventions.clone();
    for (label, r) in &reports {
        let verdict = match &r.first_mismatch {
            None => "equal".to_string(),
            Some(m) => format!("fails at q^{}: coefficient of {} is {} vs {}", m.n, m.monomial, m.lhs, m.rhs),
        };
        conventions.insert(format!("variant {label}"), verdict);
    }
    let equal = holding.len() == 1;
    if let [(label, r)] = holding.as_slice() {
        conventions.insert("verified".into(), label.clone());
        for (k, v) in &r.conventions {
            conventions.entry(k.clone()).or_insert_with(|| v.clone());
        }
    } else {
        conventions.insert("verified".into(), format!("{} variants hold, expected exactly one", holding.len()));
    }
    // when nothing holds, report the first variant's disagreement
    let failing = reports.iter().find(|(_, r)| !r.equal);
    let (first_mismatch, mismatch_between) = match (equal, failing) {
        (false, Some((_, r))) => (r.first_mismatch.clone(), r.mismatch_between.clone()),
        _ => (None, None),
    };
    Ok(Report {
        identity: case.name.clone(),
        qmax,
        degmax,
        engines: engines.to_vec(),
        equal,
        first_mismatch,
        mismatch_between,
        conventions,
        ms: start.elapsed().as_millis() as u64,
    })
}

/// Verifies a registered identity at its default order with every engine
/// that applies.
pub fn verify_default(name: &str) -> Result<Report> {
    let case = identity_case(name)?;
    let engines = case.applicable_engines();
    verify_identity(&case, case.qmax, case.degmax, &engines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Polynomial;
    use crate::systems::{GapRule, SystemFile};

    #[test]
    fn alladi_gordon_all_engines() {
        let r = verify_default("alladi-gordon").unwrap();
        assert!(r.equal, "{r:?}");
        assert_eq!(r.identity, "alladi-gordon");
        assert_eq!(r.engines, vec![Engine::Enum, Engine::Recurrence, Engine::Product]);
        assert_eq!(r.qmax, 30);
    }

    #[test]
    fn product_does_not_apply_to_overpartitions() {
        let c = identity_case("overpartitions-r1").unwrap();
        let e = verify_identity(&c, 6, Some(4), &[Engine::Product]).unwrap_err();
        match e {
            Error::EngineInapplicable { applicable, .. } => assert_eq!(applicable, "enum, recurrence"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn corrupted_matrix_is_caught() {
        let mut c = identity_case("alladi-gordon").unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&SystemFile::from_system(&c.side_b).to_json()).unwrap();
        v["gap"]["entries"][0][1] = 1.into();
        c.side_b = SystemFile::from_json(&v.to_string()).unwrap().build().unwrap();
        assert!(matches!(c.side_b.gap_rule(), GapRule::Matrix(_)));
        let r = verify_identity(&c, 12, None, &[Engine::Enum, Engine::Product]).unwrap();
        assert!(!r.equal);
        let m = r.first_mismatch.unwrap();
        assert!(m.n > 0 && m.lhs != m.rhs);
    }

    #[test]
    fn overpartitions_small() {
        let c = identity_case("overpartitions-r2").unwrap();
        let r = verify_identity(&c, 6, Some(4), &c.applicable_engines()).unwrap();
        assert!(r.equal, "{r:?}");
        assert!(r.conventions.contains_key("zero_parts"), "{:?}", r.conventions);
    }

    #[test]
    fn small_part_readings_single_out_one() {
        let c = identity_case("siladic-weighted").unwrap();
        let r = verify_identity(&c, 12, None, &[Engine::Enum, Engine::Product]).unwrap();
        assert!(r.equal, "{r:?}");
        assert_eq!(r.conventions["verified"], "allow-1b");
        assert!(r.conventions["variant only-1a"].starts_with("fails at q^1"), "{:?}", r.conventions);
    }

    #[test]
    fn every_case_is_aligned() {
        for c in identity_cases().unwrap() {
            if c.alternatives.is_empty() {
                c.check_alignment().unwrap();
            }
            for (_, alt) in &c.alternatives {
                alt.check_alignment().unwrap();
            }
        }
    }

    #[test]
    fn engine_lists() {
        assert_eq!(Engine::parse_list("product, enum").unwrap(), vec![Engine::Enum, Engine::Product]);
        assert!(Engine::parse_list("enum,magic").is_err());
        assert!(Engine::parse_list("").is_err());
    }

    #[test]
    fn table_of_the_schur_product() {
        let c = identity_case("alladi-gordon").unwrap();
        let SideA::Product(p) = &c.side_a else { panic!() };
        let f = product_expand(p, 4, None).unwrap();
        let t = coefficient_table(&f, 2);
        let shown: Vec<String> = t.rows.iter().map(|r| r.coefficient.to_string()).collect();
        assert_eq!(shown, vec!["1", "a + b", "a + b + a*b"]);
        let z = coefficient_table(&TruncatedSeries::zero(3, None), 3);
        assert!(z.rows.iter().all(|r| r.coefficient == Polynomial::zero()));
        assert_eq!(z.rows.len(), 4);
    }

    #[test]
    fn table_of_the_mod3_system() {
        let sys = crate::systems::build_preset("schur-dilated-mod3", &Default::default()).unwrap();
        let f = enumerate_series(&sys, 5, None).unwrap();
        let rows: Vec<Polynomial> = coefficient_table(&f, 5).rows.into_iter().map(|r| r.coefficient).collect();
        let expected: Vec<Polynomial> = ["1", "a", "b", "c", "a"]
            .iter()
            .map(|s| Polynomial::monomial(Monomial::parse(s).unwrap()))
            .chain([Polynomial::from_terms([(Monomial::parse("a^2").unwrap(), 1.into()), (Monomial::parse("b").unwrap(), 1.into())])])
            .collect();
        assert_eq!(rows, expected);
    }

    #[test]
    fn reports_repeat_exactly() {
        let c = identity_case("schur-dilated").unwrap();
        let mut a = verify_identity(&c, 20, None, &c.applicable_engines()).unwrap();
        let mut b = verify_identity(&c, 20, None, &c.applicable_engines()).unwrap();
        assert!(a.equal);
        a.ms = 0;
        b.ms = 0;
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
