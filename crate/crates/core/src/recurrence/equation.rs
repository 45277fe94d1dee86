use serde::{Deserialize, Serialize};

use crate::algebra::{substitute, Mismatch, Monomial, Polynomial, SubstitutionMap, TruncatedSeries};
use crate::error::{Error, Result};
use crate::systems::ColouredSystem;

use super::RecurrenceState;

fn one_i64() -> i64 {
    1
}

fn unit() -> String {
    "1".into()
}

/// `c * vars * q^(q[0] * k + q[1])`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTerm {
    #[serde(default = "one_i64")]
    pub c: i64,
    #[serde(default = "unit")]
    pub vars: String,
    #[serde(default)]
    pub q: (i64, i64),
}

impl KTerm {
    pub fn new(c: i64, vars: &str, q: (i64, i64)) -> Self {
        KTerm {
            c,
            vars: vars.to_string(),
            q,
        }
    }

    pub fn constant(c: i64) -> Self {
        Self::new(c, "1", (0, 0))
    }
}

/// `sum(num) / sum(den)`; an empty denominator means 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coefficient {
    #[serde(default = "one_term")]
    pub num: Vec<KTerm>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub den: Vec<KTerm>,
}

fn one_term() -> Vec<KTerm> {
    vec![KTerm::constant(1)]
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient {
            num: one_term(),
            den: Vec::new(),
        }
    }
}

impl Coefficient {
    pub fn poly(num: Vec<KTerm>) -> Self {
        Coefficient { num, den: Vec::new() }
    }

    pub fn ratio(num: Vec<KTerm>, den: Vec<KTerm>) -> Self {
        Coefficient { num, den }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Func {
    One,
    G,
    E,
}

/// `coeff * F_{(index[0] * k + index[1])_colour}` with an optional
/// substitution applied to `F`. The colour `*` makes the equation a family
/// over all colours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqTerm {
    #[serde(default)]
    pub coeff: Coefficient,
    pub func: Func,
    #[serde(default)]
    pub index: (i64, i64),
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colour: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subst: Option<SubstitutionMap>,
}

impl EqTerm {
    pub fn g(colour: &str, index: (i64, i64)) -> Self {
        Self::func(Func::G, colour, index)
    }

    pub fn e(colour: &str, index: (i64, i64)) -> Self {
        Self::func(Func::E, colour, index)
    }

    pub fn one() -> Self {
        EqTerm {
            coeff: Coefficient::default(),
            func: Func::One,
            index: (0, 0),
            colour: None,
            subst: None,
        }
    }

    fn func(func: Func, colour: &str, index: (i64, i64)) -> Self {
        EqTerm {
            coeff: Coefficient::default(),
            func,
            index,
            colour: Some(colour.to_string()),
            subst: None,
        }
    }

    pub fn times(mut self, coeff: Coefficient) -> Self {
        self.coeff = coeff;
        self
    }

    pub fn with_subst(mut self, s: SubstitutionMap) -> Self {
        self.subst = Some(s);
        self
    }
}

/// A linear relation `sum(lhs) = sum(rhs)` among `G`/`E` values, claimed for
/// `kmin <= k <= kmax`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSpec {
    pub name: String,
    pub system: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub kmin: i64,
    pub kmax: i64,
    pub lhs: Vec<EqTerm>,
    pub rhs: Vec<EqTerm>,
}

impl EquationSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("bad equation file: {e}")))
    }

    fn is_family(&self) -> bool {
        self.lhs.iter().chain(&self.rhs).any(|t| t.colour.as_deref() == Some("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationFailure {
    pub k: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub colour: Option<String>,
    pub mismatch: Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationReport {
    pub name: String,
    pub system: String,
    pub kmin: i64,
    pub kmax: i64,
    pub qmax: usize,
    pub holds: bool,
    /// Number of `(k, colour)` instances compared.
    pub instances: usize,
    pub failure: Option<EquationFailure>,
}

fn err(spec: &EquationSpec, reason: String) -> Error {
    Error::Equation {
        name: spec.name.clone(),
        reason,
    }
}

fn kterm_series(spec: &EquationSpec, t: &KTerm, k: i64, qmax: usize, degmax: Option<u32>) -> Result<TruncatedSeries> {
    let e = t.q.0 * k + t.q.1;
    if e < 0 {
        return Err(err(spec, format!("coefficient term has exponent q^{e} at k={k}")));
    }
    let m = Monomial::parse(&t.vars)?;
    Ok(TruncatedSeries::monomial_term(qmax, degmax, m, e as usize).scale(&num_bigint::BigInt::from(t.c)))
}

fn coefficient_series(spec: &EquationSpec, c: &Coefficient, k: i64, qmax: usize, degmax: Option<u32>) -> Result<TruncatedSeries> {
    let mut num = TruncatedSeries::zero(qmax, degmax);
    for t in &c.num {
        num.add_assign(&kterm_series(spec, t, k, qmax, degmax)?);
    }
    if c.den.is_empty() {
        return Ok(num);
    }
    let mut den = TruncatedSeries::zero(qmax, degmax);
    for t in &c.den {
        den.add_assign(&kterm_series(spec, t, k, qmax, degmax)?);
    }
    let c0 = den.coeff(0);
    let unit = c0.len() == 1 && (c0 == &Polynomial::one() || c0 == &Polynomial::one().neg());
    if !unit {
        return Err(err(
            spec,
            format!("denominator has constant term {c0} at k={k}; restrict the k range so it is 1 or -1"),
        ));
    }
    Ok(num.mul(&den.inverse()?))
}

fn side(
    spec: &EquationSpec,
    terms: &[EqTerm],
    st: &RecurrenceState,
    sys: &ColouredSystem,
    k: i64,
    family: Option<usize>,
) -> Result<TruncatedSeries> {
    let (qmax, degmax) = (st.qmax(), st.degmax());
    let mut total = TruncatedSeries::zero(qmax, degmax);
    for t in terms {
        let coeff = coefficient_series(spec, &t.coeff, k, qmax, degmax)?;
        let size = t.index.0 * k + t.index.1;
        let colour = || -> Result<usize> {
            match t.colour.as_deref() {
                Some("*") => Ok(family.expect("family colour")),
                Some(l) => sys
                    .colour_index(l)
                    .ok_or_else(|| err(spec, format!("unknown colour {l:?} in {}", sys.name()))),
                None => Err(err(spec, "G and E terms need a colour".into())),
            }
        };
        let mut f = match t.func {
            Func::One => TruncatedSeries::one(qmax, degmax),
            Func::G => st.g(sys, size, colour()?)?,
            Func::E => st.e(sys, size, colour()?)?,
        };
        if let Some(s) = &t.subst {
            f = substitute(&f, s, qmax)?;
        }
        total.add_assign(&coeff.mul(&f));
    }
    Ok(total)
}

/// Checks the equation for `kmin <= k <= kmax` (the spec's own bound unless
/// `kmax` is given) on series truncated at `q^qmax`.
pub fn check_equation(spec: &EquationSpec, sys: &ColouredSystem, kmax: Option<i64>, qmax: usize) -> Result<EquationReport> {
    check_equation_capped(spec, sys, kmax, qmax, None)
}

pub fn check_equation_capped(
    spec: &EquationSpec,
    sys: &ColouredSystem,
    kmax: Option<i64>,
    qmax: usize,
    degmax: Option<u32>,
) -> Result<EquationReport> {
    let kmax = kmax.unwrap_or(spec.kmax);
    let colours: Vec<Option<usize>> = if spec.is_family() {
        (0..sys.colours().len()).map(Some).collect()
    } else {
        vec![None]
    };
    // every referenced coloured integer bounds the table we need
    let mut max_rank: Option<i64> = None;
    for k in spec.kmin..=kmax {
        for t in spec.lhs.iter().chain(&spec.rhs) {
            if t.func == Func::One {
                continue;
            }
            let size = t.index.0 * k + t.index.1;
            let cols: Vec<usize> = match t.colour.as_deref() {
                Some("*") => (0..sys.colours().len()).collect(),
                Some(l) => vec![sys
                    .colour_index(l)
                    .ok_or_else(|| err(spec, format!("unknown colour {l:?} in {}", sys.name())))?],
                None => return Err(err(spec, "G and E terms need a colour".into())),
            };
            for c in cols {
                let r = sys.rank_of(size.max(0), c);
                max_rank = Some(max_rank.map_or(r, |m: i64| m.max(r)));
            }
        }
    }
    let st = RecurrenceState::build(sys, qmax, degmax, max_rank)?;
    let mut instances = 0;
    for k in spec.kmin..=kmax {
        for fam in &colours {
            let lhs = side(spec, &spec.lhs, &st, sys, k, *fam)?;
            let rhs = side(spec, &spec.rhs, &st, sys, k, *fam)?;
            instances += 1;
            if let Some(mismatch) = lhs.first_difference(&rhs) {
                return Ok(EquationReport {
                    name: spec.name.clone(),
                    system: sys.name().to_string(),
                    kmin: spec.kmin,
                    kmax,
                    qmax,
                    holds: false,
                    instances,
                    failure: Some(EquationFailure {
                        k,
                        colour: fam.map(|c| sys.colours()[c].label.clone()),
                        mismatch,
                    }),
                });
            }
        }
    }
    Ok(EquationReport {
        name: spec.name.clone(),
        system: sys.name().to_string(),
        kmin: spec.kmin,
        kmax,
        qmax,
        holds: true,
        instances,
        failure: None,
    })
}
