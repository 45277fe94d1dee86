//! The acceptance criteria, one PASS/FAIL line each; exits non-zero if any
//! fails.

mod common;

use std::time::Instant;

use common::*;
use num_bigint::BigInt;
use proptest::test_runner::{Config, TestRunner};
use wwords::algebra::{
    euler_factorize, expand_euler, product_expand, substitute, substitute_unchecked, ProductSpec, TruncatedSeries, Var,
};
use wwords::discovery::{recognize_periodic_product, search_relations};
use wwords::enumerate::{enumerate_below_dilation, enumerate_series};
use wwords::recurrence::{builtin_equations, check_equation, dp_series};
use wwords::systems::{
    build_preset, dilate_system, preset_names, primc_dilation, schur_dilation, siladic_dilation, GapRule, PresetParams,
    SmallPartConvention,
};
use wwords::verify::{identity_case, identity_names, verify_identity, Engine, SideA};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(label: &str, a: &TruncatedSeries, b: &TruncatedSeries) -> Result<(), String> {
    match a.first_difference(b) {
        None => Ok(()),
        Some(m) => Err(format!("{label}: q^{} {} {} vs {}", m.n, m.monomial, m.lhs, m.rhs)),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn preset(name: &str) -> Result<wwords::systems::ColouredSystem, String> {
    build_preset(name, &PresetParams::default()).map_err(err)
}

fn ab_product_oracle(qmax: usize, ra: impl Fn(usize) -> bool, rb: impl Fn(usize) -> bool) -> TruncatedSeries {
    combine(qmax, &[("a", distinct_parts(ra, qmax)), ("b", distinct_parts(rb, qmax))])
}

fn ac1() -> Outcome {
    let sys = preset("schur-weighted")?;
    let oracle = ab_product_oracle(30, |_| true, |_| true);
    let p = ProductSpec::new(vec![
        wwords::algebra::ProductFactor::distinct(m("a"), 1, 1),
        wwords::algebra::ProductFactor::distinct(m("b"), 1, 1),
    ]);
    same("enumeration", &enumerate_series(&sys, 30, None).map_err(err)?, &oracle)?;
    same("recurrence", &dp_series(&sys, 30, None).map_err(err)?, &oracle)?;
    same("product", &product_expand(&p, 30, None).map_err(err)?, &oracle)?;
    Ok("enumeration, recurrence and product agree with distinct-part counts to q^30".into())
}

fn ac2() -> Outcome {
    let sys = preset("schur-dilated-mod3")?;
    let f = enumerate_series(&sys, 30, None).map_err(err)?;
    let expected = ["1", "a", "b", "c", "a"];
    for (n, e) in expected.iter().enumerate() {
        let want = wwords::algebra::Polynomial::monomial(m(e));
        check(f.coeff(n) == &want, || format!("q^{n}: {} instead of {e}", f.coeff(n)))?;
    }
    let want5 = wwords::algebra::Polynomial::from_terms([(m("a^2"), BigInt::from(1)), (m("b"), BigInt::from(1))]);
    check(f.coeff(5) == &want5, || format!("q^5: {}", f.coeff(5)))?;
    let c_ab = wwords::algebra::SubstitutionMap::new(1).with(Var::named("c"), m("a*b"), 0);
    let g = substitute(&f, &c_ab, 30).map_err(err)?;
    let oracle = ab_product_oracle(30, |p| p % 3 == 1, |p| p % 3 == 2);
    same("c = ab", &g, &oracle)?;
    Ok("prefix 1, a, b, c, a, a^2+b; with c = ab equals (-aq;q^3)(-bq^2;q^3) to q^30".into())
}

fn ac3() -> Outcome {
    let oracle = ab_product_oracle(30, |_| true, |_| true);
    let mut holding = Vec::new();
    let mut notes = Vec::new();
    for conv in SmallPartConvention::ALL {
        let sys = build_preset("siladic-weighted", &PresetParams::with_convention(conv)).map_err(err)?;
        let e = enumerate_series(&sys, 30, None).map_err(err)?;
        let d = dp_series(&sys, 30, None).map_err(err)?;
        let ok = e.agrees_with(&oracle) && d.agrees_with(&oracle);
        match e.first_difference(&oracle) {
            Some(mm) => notes.push(format!("{} fails at q^{} ({} vs {})", conv.name(), mm.n, mm.lhs, mm.rhs)),
            None => notes.push(format!("{} holds", conv.name())),
        }
        if ok {
            holding.push(conv.name());
        }
    }
    check(holding.len() == 1, || format!("{} conventions hold: {notes:?}", holding.len()))?;
    // the registry must resolve it the same way
    let c = identity_case("siladic-weighted").map_err(err)?;
    let r = verify_identity(&c, 30, None, &[Engine::Enum, Engine::Recurrence, Engine::Product]).map_err(err)?;
    check(r.equal && r.conventions["verified"] == holding[0], || format!("registry report: {r:?}"))?;
    Ok(format!("exactly one reading holds: {} ({})", holding[0], notes.join("; ")))
}

/// Siladić's conditions checked on plain integers, straight from the words.
fn siladic_counts(nmax: usize) -> Vec<u64> {
    fn allowed(hi: usize, lo: usize) -> bool {
        let (d, r) = (hi - lo, hi % 8);
        match d {
            0..=4 => false,
            5 => r == 1 || r == 4,
            6 => r % 2 == 1,
            7 => ![2, 5].contains(&r),
            8 => ![2, 6].contains(&r),
            _ => true,
        }
    }
    fn go(left: usize, last: usize, counts: &mut [u64], total: usize) {
        counts[total] += 1;
        for p in 1..=left {
            if p == 2 || (last > 0 && (p >= last || !allowed(last, p))) {
                continue;
            }
            go(left - p, p, counts, total + p);
        }
    }
    let mut counts = vec![0; nmax + 1];
    go(nmax, 0, &mut counts, 0);
    counts
}

fn ac4() -> Outcome {
    let n = 60;
    let odd = distinct_parts(|p| p % 2 == 1, n);
    let direct: Vec<u64> = (0..=n).map(|k| odd.iter().map(|row| row[k]).sum()).collect();
    let words = siladic_counts(n);
    let by_preset = enumerate_series(&preset("distinct-odd")?, n, None).map_err(err)?.counts();
    let sys = preset("siladic-dilated")?;
    let b_enum = enumerate_series(&sys, n, None).map_err(err)?.counts();
    let b_dp = dp_series(&sys, n, None).map_err(err)?.counts();
    for k in 0..=n {
        let d = BigInt::from(direct[k]);
        check(by_preset[k] == d, || format!("distinct-odd preset at n={k}: {} vs {d}", by_preset[k]))?;
        check(BigInt::from(words[k]) == d, || format!("conditions in words at n={k}: {} vs {d}", words[k]))?;
        check(b_enum[k] == d && b_dp[k] == d, || format!("B side at n={k}: {} / {} vs {d}", b_enum[k], b_dp[k]))?;
    }
    Ok(format!("B(n) = A(n) for n <= {n} (A({n}) = {})", direct[n]))
}

fn ac5() -> Outcome {
    let weighted_siladic = preset("siladic-weighted")?;
    let weighted_primc = preset("primc-weighted")?;
    let cases = [
        ("q->q^3 on the Siladić system", &weighted_siladic, schur_dilation(), 60),
        ("q->q^4 on the Siladić system", &weighted_siladic, siladic_dilation(), 60),
        ("q->q^2 on Primc's system", &weighted_primc, primc_dilation(), 50),
    ];
    for (label, w, d, qmax) in cases {
        let dilated = dilate_system(w, &d).map_err(err)?;
        let direct = enumerate_series(&dilated, qmax, None).map_err(err)?;
        let below = enumerate_below_dilation(w, &d, qmax).map_err(err)?;
        let image = substitute_unchecked(&below, &wwords::systems::statistic_substitution(&d), qmax).map_err(err)?;
        same(label, &direct, &image)?;
    }
    let b2 = dilate_system(&weighted_primc, &primc_dilation()).map_err(err)?;
    let GapRule::Matrix(g) = b2.gap_rule() else {
        return Err("dilated Primc system lost its matrix".into());
    };
    let expected = vec![vec![4, 1, 3, 2], vec![3, 0, 2, 1], vec![1, 2, 0, 3], vec![2, 3, 1, 4]];
    check(g.row_labels == ["a", "b", "c", "d"] && g.entries == expected, || format!("B2 = {:?} {:?}", g.row_labels, g.entries))?;
    Ok("three dilations commute with enumeration (q^60, q^60, q^50); B2 reproduced".into())
}

fn ac6() -> Outcome {
    let sys = preset("primc-weighted")?;
    let qmax = 25;
    let odd = |p: usize| p % 2 == 1;
    let oracle = combine(
        qmax,
        &[
            ("a", distinct_parts(odd, qmax)),
            ("d", distinct_parts(odd, qmax)),
            ("c", repeated_parts(odd, qmax)),
            ("", repeated_parts(|_| true, qmax)),
        ],
    )
    .cap_degree(Some(25));
    same("enumeration", &enumerate_series(&sys, qmax, Some(25)).map_err(err)?, &oracle)?;
    same("recurrence", &dp_series(&sys, qmax, Some(25)).map_err(err)?, &oracle)?;
    let c = identity_case("primc-weighted").map_err(err)?;
    let SideA::Product(p) = &c.side_a else { return Err("no product".into()) };
    same("product", &product_expand(p, qmax, Some(25)).map_err(err)?, &oracle)?;

    let dilated = preset("primc-dilated")?;
    let e = enumerate_series(&dilated, 40, None).map_err(err)?.erase_all().counts();
    let d = dp_series(&dilated, 40, None).map_err(err)?.erase_all().counts();
    for n in 0..=40 {
        let p = BigInt::from(partitions_by_listing(n));
        check(e[n] == p && d[n] == p, || format!("n={n}: {} / {} vs p(n) = {p}", e[n], d[n]))?;
    }
    Ok("both engines equal the four-colour product to q^25; a=c=d=1 gives p(n) to q^40".into())
}

fn ac7() -> Outcome {
    let mut names = Vec::new();
    for spec in builtin_equations() {
        let sys = preset(&spec.system)?;
        let r = check_equation(&spec, &sys, None, 40).map_err(err)?;
        check(r.holds, || format!("{} fails: {:?}", spec.name, r.failure))?;
        names.push(spec.name);
    }
    let qdiff = builtin_equations().into_iter().find(|e| e.name == "primc-qdiff").ok_or("q-difference equation missing")?;
    check((qdiff.kmin, qdiff.kmax) == (3, 15), || format!("q-difference range {}..{}", qdiff.kmin, qdiff.kmax))?;
    Ok(format!("{} equations hold at q^40", names.len()))
}

fn ac8() -> Outcome {
    let mut done = Vec::new();
    for (r, qmax, cap) in [(1u32, 12usize, 8u32), (2, 12, 8), (3, 10, 6)] {
        let params = PresetParams::with_r(r);
        let a = build_preset("primary-overpartitions", &params).map_err(err)?;
        let b = build_preset("andrews-overpartitions", &params).map_err(err)?;
        let a_enum = enumerate_series(&a, qmax, Some(cap)).map_err(err)?;
        let b_enum = enumerate_series(&b, qmax, Some(cap)).map_err(err)?;
        let b_dp = dp_series(&b, qmax, Some(cap)).map_err(err)?;
        // overpartitions into r colours: prod_i prod_{n>=0} (1 + u_i q^n) / (1 - t u_i q^n)
        let mut factors = Vec::new();
        for i in 1..=r {
            let u = m(&format!("u{i}"));
            factors.push(wwords::algebra::ProductFactor::distinct(u.clone(), 0, 1));
            factors.push(wwords::algebra::ProductFactor::repeated(u.mul(&m("t")), 0, 1));
        }
        let direct = product_expand(&ProductSpec::new(factors), qmax, Some(cap)).map_err(err)?;
        same(&format!("r={r} A side"), &a_enum, &direct)?;
        same(&format!("r={r} B enumeration"), &b_enum, &a_enum)?;
        same(&format!("r={r} B recurrence"), &b_dp, &a_enum)?;
        done.push(format!("r={r} to q^{qmax} degree {cap}"));
    }
    Ok(format!("graded counts agree: {}", done.join(", ")))
}

fn ac9() -> Outcome {
    let (a, b) = (Var::named("a"), Var::named("b"));
    let mod3 = preset("schur-dilated-mod3")?;
    let cands = search_relations(&mod3, &[a, b], 18, 2).map_err(err)?;
    let good: Vec<_> = cands.iter().filter(|c| c.product_like).collect();
    check(good.len() == 1 && good[0].substitution[&Var::named("c")] == m("a*b"), || format!("mod 3 candidates: {good:?}"))?;

    let sil = preset("siladic-dilated")?;
    let cands = search_relations(&sil, &[a, b], 16, 2).map_err(err)?;
    let good: Vec<_> = cands.iter().filter(|c| c.product_like).collect();
    let want: Vec<(&str, &str)> = vec![("c0", "a*b"), ("c2", "b^2"), ("c4", "a*b"), ("c5", "a"), ("c6", "a^2"), ("c7", "b")];
    let found = good.first().map(|c| want.iter().all(|(v, img)| c.substitution[&Var::named(v)] == m(img)));
    check(good.len() == 1 && found == Some(true), || format!("mod 8 candidates: {good:?}"))?;

    let mut products = 0;
    for name in identity_names() {
        let c = identity_case(name).map_err(err)?;
        for case in std::iter::once(&c).chain(c.alternatives.iter().map(|(_, x)| x)) {
            let SideA::Product(p) = &case.side_a else { continue };
            let f = product_expand(p, 40, None).map_err(err)?;
            let got = recognize_periodic_product(&f, 40).ok_or_else(|| format!("{name}: product not recognized"))?;
            same(name, &product_expand(&got, 40, None).map_err(err)?, &f)?;
            products += 1;
        }
    }
    Ok(format!("c = ab unique; mod-8 assignment recovered; {products} preset products round-trip"))
}

fn ac10() -> Outcome {
    let mut checked = 0;
    for name in preset_names() {
        let runs: Vec<(PresetParams, usize, Option<u32>)> = match *name {
            "andrews-overpartitions" | "primary-overpartitions" => vec![
                (PresetParams::with_r(1), 20, Some(8)),
                (PresetParams::with_r(2), 20, Some(6)),
                (PresetParams::with_r(3), 10, Some(6)),
            ],
            _ => vec![(PresetParams::default(), 20, None)],
        };
        for (params, qmax, cap) in runs {
            let sys = build_preset(name, &params).map_err(err)?;
            let e = enumerate_series(&sys, qmax, cap).map_err(err)?;
            let d = dp_series(&sys, qmax, cap).map_err(err)?;
            same(sys.name(), &e, &d)?;
            checked += 1;
        }
    }

    let mut runner = TestRunner::new(Config {
        cases: 100,
        failure_persistence: None,
        ..Config::default()
    });
    let hom = (series_at(6), series_at(6), substitution());
    runner
        .run(&hom, |(f, g, s)| {
            let top = s.qpower as usize * 7 - 1;
            let lhs = substitute(&f.mul(&g), &s, top).unwrap();
            let rhs = substitute(&f, &s, top).unwrap().mul(&substitute(&g, &s, top).unwrap());
            proptest::prop_assert!(lhs.agrees_with(&rhs));
            let sum = substitute(&f.add(&g), &s, top).unwrap();
            proptest::prop_assert!(sum.agrees_with(&substitute(&f, &s, top).unwrap().add(&substitute(&g, &s, top).unwrap())));
            Ok(())
        })
        .map_err(|e| format!("substitution homomorphism: {e}"))?;
    runner
        .run(&product_spec(), |p| {
            let one = product_expand(&p, 12, None).unwrap().mul(&product_expand(&p.inverse(), 12, None).unwrap());
            proptest::prop_assert!(one.is_one());
            Ok(())
        })
        .map_err(|e| format!("product times inverse: {e}"))?;
    runner
        .run(&unit_series(), |f| {
            let t = euler_factorize(&f).unwrap();
            proptest::prop_assert!(expand_euler(&t, f.qmax(), None).unwrap().agrees_with(&f));
            Ok(())
        })
        .map_err(|e| format!("Euler round trip: {e}"))?;
    Ok(format!("recurrence = enumeration on {checked} preset instances; 3 x 100 randomized algebra properties"))
}

/// Runs without the libtest harness so the per-criterion lines always show.
fn main() {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("AC-1", ac1),
        ("AC-2", ac2),
        ("AC-3", ac3),
        ("AC-4", ac4),
        ("AC-5", ac5),
        ("AC-6", ac6),
        ("AC-7", ac7),
        ("AC-8", ac8),
        ("AC-9", ac9),
        ("AC-10", ac10),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{id} PASS ({secs:.1}s): {detail}"),
            Err(why) => {
                println!("{id} FAIL ({secs:.1}s): {why}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria pass", criteria.len(), criteria.len());
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::exit(1);
    }
}
