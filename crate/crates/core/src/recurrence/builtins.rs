use crate::algebra::{Monomial, SubstitutionMap, Var};

use super::equation::{Coefficient, EqTerm, EquationSpec, KTerm};

fn m(s: &str) -> Monomial {
    Monomial::parse(s).expect("built-in monomial")
}

fn v(s: &str) -> Var {
    Var::named(s)
}

fn eq(name: &str, system: &str, description: &str, k: (i64, i64), lhs: Vec<EqTerm>, rhs: Vec<EqTerm>) -> EquationSpec {
    EquationSpec {
        name: name.to_string(),
        system: system.to_string(),
        description: description.to_string(),
        kmin: k.0,
        kmax: k.1,
        lhs,
        rhs,
    }
}

fn times(c: i64, vars: &str, q: (i64, i64)) -> Coefficient {
    Coefficient::poly(vec![KTerm::new(c, vars, q)])
}

/// `1 + vars * q^shift`.
fn one_plus(vars: &str, shift: i64) -> Vec<KTerm> {
    vec![KTerm::constant(1), KTerm::new(1, vars, (0, shift))]
}

fn schur() -> Vec<EquationSpec> {
    let sys = "schur-weighted";
    // (a, b) -> (aq, bq)
    let shift_both = SubstitutionMap::new(1).with(v("a"), m("a"), 1).with(v("b"), m("b"), 1);
    let ab_factor = Coefficient::poly(vec![
        KTerm::constant(1),
        KTerm::new(1, "a", (0, 1)),
        KTerm::new(1, "b", (0, 1)),
        KTerm::new(1, "a*b", (0, 2)),
    ]);
    vec![
        eq(
            "schur-rec-a",
            sys,
            "G_{k_a} = G_{k_ab} + a q^k G_{(k-1)_a}",
            (1, 15),
            vec![EqTerm::g("a", (1, 0))],
            vec![EqTerm::g("ab", (1, 0)), EqTerm::g("a", (1, -1)).times(times(1, "a", (1, 0)))],
        ),
        eq(
            "schur-rec-b",
            sys,
            "G_{k_b} = G_{k_a} + b q^k G_{(k-1)_b}",
            (1, 15),
            vec![EqTerm::g("b", (1, 0))],
            vec![EqTerm::g("a", (1, 0)), EqTerm::g("b", (1, -1)).times(times(1, "b", (1, 0)))],
        ),
        eq(
            "schur-rec-ab",
            sys,
            "G_{k_ab} = G_{(k-1)_b} + ab q^k G_{(k-2)_b}",
            (1, 15),
            vec![EqTerm::g("ab", (1, 0))],
            vec![EqTerm::g("b", (1, -1)), EqTerm::g("b", (1, -2)).times(times(1, "a*b", (1, 0)))],
        ),
        eq(
            "schur-init-zero",
            sys,
            "G_{0_x} = 1 for every colour x",
            (0, 0),
            vec![EqTerm::g("*", (0, 0))],
            vec![EqTerm::one()],
        ),
        eq(
            "schur-init-negative",
            sys,
            "G_{-1_x} = 0 for every colour x",
            (0, 0),
            vec![EqTerm::g("*", (0, -1))],
            vec![],
        ),
        eq(
            "schur-functional",
            sys,
            "G_{(k+2)_ab}(q;a,b) = (1+aq)(1+bq) G_{k_b}(q;aq,bq)",
            (0, 12),
            vec![EqTerm::g("ab", (1, 2))],
            vec![EqTerm::g("b", (1, 0)).times(ab_factor).with_subst(shift_both)],
        ),
    ]
}

fn siladic() -> Vec<EquationSpec> {
    let sys = "siladic-weighted";
    // (a, b) -> (b, aq)
    let swap = SubstitutionMap::new(1).with(v("a"), m("b"), 0).with(v("b"), m("a"), 1);
    let f = || Coefficient::poly(one_plus("a", 1));
    vec![
        eq(
            "siladic-rec",
            sys,
            "G_{(2k+1)_ab} = G_{2k_b} + ab q^{2k+1} G_{(2k-1)_a}",
            (1, 12),
            vec![EqTerm::g("ab", (2, 1))],
            vec![EqTerm::g("b", (2, 0)), EqTerm::g("a", (2, -1)).times(times(1, "a*b", (2, 1)))],
        ),
        eq(
            "siladic-proof-ab-odd",
            sys,
            "G_{(2k+1)_ab}(q;a,b) = (1+aq) G_{2k_a}(q;b,aq)",
            (1, 12),
            vec![EqTerm::g("ab", (2, 1))],
            vec![EqTerm::g("a", (2, 0)).times(f()).with_subst(swap.clone())],
        ),
        eq(
            "siladic-proof-b2",
            sys,
            "G_{(2k+1)_b2}(q;a,b) = (1+aq) G_{2k_b}(q;b,aq)",
            (1, 12),
            vec![EqTerm::g("b2", (2, 1))],
            vec![EqTerm::g("b", (2, 0)).times(f()).with_subst(swap.clone())],
        ),
        eq(
            "siladic-proof-ab-even",
            sys,
            "G_{(2k+2)_ab}(q;a,b) = (1+aq) G_{(2k+1)_a}(q;b,aq)",
            (1, 12),
            vec![EqTerm::g("ab", (2, 2))],
            vec![EqTerm::g("a", (2, 1)).times(f()).with_subst(swap.clone())],
        ),
        eq(
            "siladic-proof-a2",
            sys,
            "G_{(2k+1)_a2}(q;a,b) = (1+aq) G_{(2k-1)_b}(q;b,aq)",
            (1, 12),
            vec![EqTerm::g("a2", (2, 1))],
            vec![EqTerm::g("b", (2, -1)).times(f()).with_subst(swap)],
        ),
    ]
}

fn primc() -> Vec<EquationSpec> {
    let sys = "primc-weighted";
    let qdiff_lhs = Coefficient::poly(vec![KTerm::constant(1), KTerm::new(-1, "c", (1, 0))]);
    let c1 = Coefficient::ratio(
        vec![KTerm::constant(1), KTerm::new(-1, "c", (2, 0))],
        vec![KTerm::constant(1), KTerm::new(-1, "1", (1, 0))],
    );
    let c2 = Coefficient::ratio(
        vec![KTerm::new(1, "a", (1, 0)), KTerm::new(1, "d", (1, 0)), KTerm::new(1, "a*d", (2, 0))],
        vec![KTerm::constant(1), KTerm::new(-1, "1", (1, -1))],
    );
    let c3 = Coefficient::ratio(
        vec![KTerm::new(1, "a*d", (2, -1))],
        vec![KTerm::constant(1), KTerm::new(-1, "1", (1, -2))],
    );
    vec![
        eq(
            "primc-g-e",
            sys,
            "G_{k_a} - G_{(k-1)_d} = E_{k_a}",
            (1, 15),
            vec![EqTerm::g("a", (1, 0)), EqTerm::g("d", (1, -1)).times(times(-1, "1", (0, 0)))],
            vec![EqTerm::e("a", (1, 0))],
        ),
        eq(
            "primc-e-rec",
            sys,
            "E_{k_a} = a q^k (E_{(k-1)_b} + G_{(k-2)_d})",
            (2, 15),
            vec![EqTerm::e("a", (1, 0))],
            vec![
                EqTerm::e("b", (1, -1)).times(times(1, "a", (1, 0))),
                EqTerm::g("d", (1, -2)).times(times(1, "a", (1, 0))),
            ],
        ),
        eq(
            "primc-qdiff",
            sys,
            "(1-cq^k) G_{k_d} = (1-cq^{2k})/(1-q^k) G_{(k-1)_d} + (aq^k+dq^k+adq^{2k})/(1-q^{k-1}) G_{(k-2)_d} + adq^{2k-1}/(1-q^{k-2}) G_{(k-3)_d}",
            (3, 15),
            vec![EqTerm::g("d", (1, 0)).times(qdiff_lhs)],
            vec![
                EqTerm::g("d", (1, -1)).times(c1),
                EqTerm::g("d", (1, -2)).times(c2),
                EqTerm::g("d", (1, -3)).times(c3),
            ],
        ),
    ]
}

/// Every relation stated for the Schur, Siladić and Primc systems, each with
/// the system it lives on and its k range.
pub fn builtin_equations() -> Vec<EquationSpec> {
    let mut all = schur();
    all.extend(siladic());
    all.extend(primc());
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::recurrence::check_equation;
    use crate::systems::{build_preset, PresetParams};

    fn check(name: &str, qmax: usize) -> crate::recurrence::EquationReport {
        let spec = builtin_equations().into_iter().find(|e| e.name == name).unwrap();
        let sys = build_preset(&spec.system, &PresetParams::default()).unwrap();
        check_equation(&spec, &sys, None, qmax).unwrap()
    }

    #[test]
    fn registry_shape() {
        let all = builtin_equations();
        let count = |p: &str| all.iter().filter(|e| e.name.starts_with(p)).count();
        assert_eq!(count("schur-rec"), 3);
        assert_eq!(count("schur-init"), 2);
        assert_eq!(count("schur-functional"), 1);
        assert_eq!(count("siladic-proof"), 4);
        assert_eq!(all.iter().find(|e| e.name == "primc-qdiff").unwrap().kmin, 3);
    }

    #[test]
    fn schur_equations_hold() {
        for name in ["schur-rec-a", "schur-rec-b", "schur-rec-ab", "schur-init-zero", "schur-init-negative", "schur-functional"] {
            let r = check(name, 20);
            assert!(r.holds, "{name}: {:?}", r.failure);
        }
    }

    #[test]
    fn siladic_and_primc_equations_hold() {
        for spec in builtin_equations().iter().filter(|e| !e.name.starts_with("schur")) {
            let r = check(&spec.name, 24);
            assert!(r.holds, "{}: {:?}", spec.name, r.failure);
        }
    }

    #[test]
    fn broken_equation_is_reported() {
        let mut spec = builtin_equations().into_iter().find(|e| e.name == "schur-rec-a").unwrap();
        spec.rhs.pop();
        let sys = build_preset("schur-weighted", &PresetParams::default()).unwrap();
        let r = check_equation(&spec, &sys, Some(4), 10).unwrap();
        assert!(!r.holds);
        assert_eq!(r.failure.unwrap().k, 1);
    }

    #[test]
    fn vanishing_denominator_is_an_error() {
        let mut spec = builtin_equations().into_iter().find(|e| e.name == "primc-qdiff").unwrap();
        spec.kmin = 2;
        let sys = build_preset("primc-weighted", &PresetParams::default()).unwrap();
        let e = check_equation(&spec, &sys, Some(4), 8).unwrap_err();
        assert!(matches!(e, Error::Equation { .. }), "{e}");
    }

    #[test]
    fn json_round_trip() {
        for spec in builtin_equations() {
            let text = serde_json::to_string(&spec).unwrap();
            assert_eq!(EquationSpec::from_json(&text).unwrap(), spec);
        }
    }
}
