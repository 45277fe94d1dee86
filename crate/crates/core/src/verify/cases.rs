use std::collections::BTreeMap;

use crate::algebra::{Monomial, ProductFactor, ProductSpec, Var};
use crate::error::{Error, Result};
use crate::systems::{
    build_preset, dilate_system, primc_dilation, schur_dilation, siladic_dilation, ColouredSystem, PresetParams,
    SmallPartConvention,
};

use super::{Alignment, DilationLink, IdentityCase, SideA};

const NAMES: [&str; 13] = [
    "alladi-gordon",
    "schur-dilated",
    "siladic-distinct-odd",
    "siladic-weighted",
    "siladic-refined",
    "schur-companion",
    "primc-weighted",
    "primc-dilated",
    "primc-conjecture",
    "overpartitions-r1",
    "overpartitions-r2",
    "overpartitions-r3",
    "overpartitions-r4",
];

/// Alternative names following the numbering of the source article.
const ALIASES: [(&str, &str); 11] = [
    ("theorem-1", "siladic-distinct-odd"),
    ("theorem-2", "alladi-gordon"),
    ("theorem-3", "siladic-weighted"),
    ("theorem-4", "siladic-refined"),
    ("theorem-5", "schur-companion"),
    ("theorem-6", "primc-weighted"),
    ("theorem-7", "primc-dilated"),
    ("theorem-8-r1", "overpartitions-r1"),
    ("theorem-8-r2", "overpartitions-r2"),
    ("theorem-8-r3", "overpartitions-r3"),
    ("theorem-8-r4", "overpartitions-r4"),
];

pub fn identity_names() -> Vec<&'static str> {
    NAMES.to_vec()
}

/// Resolves aliases and builds the case.
pub fn identity_case(name: &str) -> Result<IdentityCase> {
    let canonical = ALIASES.iter().find(|(a, _)| *a == name).map_or(name, |(_, c)| *c);
    build(canonical).ok_or_else(|| Error::UnknownPreset(name.to_string()))?
}

pub fn identity_cases() -> Result<Vec<IdentityCase>> {
    NAMES.iter().map(|n| identity_case(n)).collect()
}

fn m(s: &str) -> Monomial {
    Monomial::parse(s).expect("built-in monomial")
}

fn preset(name: &str) -> Result<ColouredSystem> {
    build_preset(name, &PresetParams::default())
}

fn product(factors: Vec<ProductFactor>) -> SideA {
    SideA::Product(ProductSpec::new(factors))
}

fn case(name: &str, description: &str, side_a: SideA, side_b: ColouredSystem, qmax: usize) -> IdentityCase {
    IdentityCase {
        name: name.to_string(),
        description: description.to_string(),
        side_a,
        side_b,
        align_a: Alignment::identity(),
        align_b: Alignment::identity(),
        dilation: None,
        qmax,
        degmax: None,
        extended: false,
        conventions: BTreeMap::new(),
        alternatives: Vec::new(),
    }
}

fn distinct_ab() -> SideA {
    product(vec![
        ProductFactor::distinct(m("a"), 1, 1),
        ProductFactor::distinct(m("b"), 1, 1),
    ])
}

fn build(name: &str) -> Option<Result<IdentityCase>> {
    let r = match name {
        "alladi-gordon" => alladi_gordon(),
        "schur-dilated" => schur_dilated(),
        "siladic-distinct-odd" => siladic_distinct_odd(),
        "siladic-weighted" => siladic_weighted(),
        "siladic-refined" => siladic_refined(),
        "schur-companion" => schur_companion(),
        "primc-weighted" => primc_weighted(),
        "primc-dilated" => primc_dilated(),
        "primc-conjecture" => primc_conjecture(),
        _ => {
            let r: u32 = name.strip_prefix("overpartitions-r")?.parse().ok()?;
            if !(1..=4).contains(&r) {
                return None;
            }
            overpartitions(r)
        }
    };
    Some(r)
}

fn alladi_gordon() -> Result<IdentityCase> {
    Ok(case(
        "alladi-gordon",
        "Schur's difference conditions with colours a < b and ab, against (-aq;q)(-bq;q)",
        distinct_ab(),
        preset("schur-weighted")?,
        30,
    ))
}

fn schur_dilated() -> Result<IdentityCase> {
    let mut c = case(
        "schur-dilated",
        "Integers with colour by residue mod 3 and c = ab, against (-aq;q^3)(-bq^2;q^3)",
        product(vec![
            ProductFactor::distinct(m("a"), 1, 3),
            ProductFactor::distinct(m("b"), 2, 3),
        ]),
        preset("schur-dilated-mod3")?,
        30,
    );
    c.align_b = Alignment::substitute(&[(Var::named("c"), m("a*b"))]);
    c.dilation = Some(DilationLink {
        weighted: preset("schur-weighted")?,
        spec: schur_dilation(),
    });
    c.conventions.insert("relation".into(), "c = ab".into());
    Ok(c)
}

fn siladic_distinct_odd() -> Result<IdentityCase> {
    let mut c = case(
        "siladic-distinct-odd",
        "Siladić's conditions on plain integers, against partitions into distinct odd parts",
        SideA::System(preset("distinct-odd")?),
        preset("siladic-dilated")?,
        60,
    );
    c.align_a = Alignment::erase_all();
    c.align_b = Alignment::erase_all();
    c.dilation = Some(DilationLink {
        weighted: preset("siladic-weighted")?,
        spec: siladic_dilation(),
    });
    Ok(c)
}

fn siladic_weighted() -> Result<IdentityCase> {
    let alternatives = SmallPartConvention::ALL
        .iter()
        .map(|conv| {
            let sys = build_preset("siladic-weighted", &PresetParams::with_convention(*conv))?;
            let c = case(
                "siladic-weighted",
                "Weighted Siladić system, one reading of the small-part restrictions",
                distinct_ab(),
                sys,
                30,
            );
            Ok((conv.name().to_string(), c))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut c = case(
        "siladic-weighted",
        "Weighted Siladić system (matrix A) against (-aq;q)(-bq;q); both small-part readings are tried",
        distinct_ab(),
        preset("siladic-weighted")?,
        30,
    );
    c.alternatives = alternatives;
    Ok(c)
}

fn siladic_refined() -> Result<IdentityCase> {
    let weighted = preset("siladic-weighted")?;
    let d = siladic_dilation();
    let mut c = case(
        "siladic-refined",
        "Dilation q -> q^4, a -> a q^-3, b -> b q^-1 of the weighted Siladić system, against (-aq;q^4)(-bq^3;q^4)",
        product(vec![
            ProductFactor::distinct(m("a"), 1, 4),
            ProductFactor::distinct(m("b"), 3, 4),
        ]),
        dilate_system(&weighted, &d)?,
        60,
    );
    c.dilation = Some(DilationLink { weighted, spec: d });
    Ok(c)
}

fn schur_companion() -> Result<IdentityCase> {
    let mut c = case(
        "schur-companion",
        "Dilation q -> q^3, a -> a q^-2, b -> b q^-1 of the weighted Siladić system, against (-aq;q^3)(-bq^2;q^3)",
        product(vec![
            ProductFactor::distinct(m("a"), 1, 3),
            ProductFactor::distinct(m("b"), 2, 3),
        ]),
        preset("schur-companion")?,
        60,
    );
    c.dilation = Some(DilationLink {
        weighted: preset("siladic-weighted")?,
        spec: schur_dilation(),
    });
    Ok(c)
}

fn primc_product() -> SideA {
    product(vec![
        ProductFactor::distinct(m("a"), 1, 2),
        ProductFactor::distinct(m("d"), 1, 2),
        ProductFactor::repeated(Monomial::one(), 1, 1),
        ProductFactor::repeated(m("c"), 1, 2),
    ])
}

fn primc_weighted() -> Result<IdentityCase> {
    let mut c = case(
        "primc-weighted",
        "Primc's four colours with matrix B, b = 1, against (-aq;q^2)(-dq;q^2)/((q;q)(cq;q^2))",
        primc_product(),
        preset("primc-weighted")?,
        25,
    );
    c.degmax = Some(25);
    Ok(c)
}

fn primc_dilated() -> Result<IdentityCase> {
    let mut c = case(
        "primc-dilated",
        "Dilation q -> q^2, a -> a/q, d -> dq of Primc's system (matrix B2), against (-aq;q^4)(-dq^3;q^4)/((q^2;q^2)(cq^2;q^4))",
        product(vec![
            ProductFactor::distinct(m("a"), 1, 4),
            ProductFactor::distinct(m("d"), 3, 4),
            ProductFactor::repeated(Monomial::one(), 2, 2),
            ProductFactor::repeated(m("c"), 2, 4),
        ]),
        preset("primc-dilated")?,
        50,
    );
    c.dilation = Some(DilationLink {
        weighted: preset("primc-weighted")?,
        spec: primc_dilation(),
    });
    Ok(c)
}

fn primc_conjecture() -> Result<IdentityCase> {
    let mut c = case(
        "primc-conjecture",
        "Dilated Primc system with every colour set to 1, against 1/(q;q)",
        product(vec![ProductFactor::repeated(Monomial::one(), 1, 1)]),
        preset("primc-dilated")?,
        40,
    );
    c.align_b = Alignment::erase_all();
    c.dilation = Some(DilationLink {
        weighted: preset("primc-weighted")?,
        spec: primc_dilation(),
    });
    Ok(c)
}

fn overpartitions(r: u32) -> Result<IdentityCase> {
    let params = PresetParams::with_r(r);
    let (qmax, degmax) = match r {
        1 | 2 => (12, 8),
        3 => (10, 6),
        _ => (8, 5),
    };
    let mut c = case(
        &format!("overpartitions-r{r}"),
        "Andrews-type difference conditions on overpartitions coloured by products of primary colours, against overpartitions into primary colours",
        SideA::System(build_preset("primary-overpartitions", &params)?),
        build_preset("andrews-overpartitions", &params)?,
        qmax,
    );
    c.degmax = Some(degmax);
    c.extended = r >= 4;
    Ok(c)
}
