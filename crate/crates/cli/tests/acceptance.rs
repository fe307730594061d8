use std::collections::{BTreeSet, HashMap};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_rational::Ratio;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;

use simplest_cubic::apps::{pythagoras, uqf_bounds, NONCLASSICAL_MIN_N};
use simplest_cubic::classify::{classify, kl_solutions, BasisKind, EXCEPTIONAL_A};
use simplest_cubic::codifferent::Codifferent;
use simplest_cubic::indecomposables::{
    first_par_indec_table, generate_theorem_list, norm_extremes, verify_a41, verify_classification, Family,
    DEFAULT_MAX_A_ORACLE,
};
use simplest_cubic::lattice::{second_parallelepiped_points_bruteforce, second_parallelepiped_points_p3, t1_image, t1_region_lemmas};
use simplest_cubic::regions::{admissible, regions_containing};
use simplest_cubic::{make_context, Context, Elem, Rat};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Check {
    ensure(start.elapsed() < limit, || format!("{what} took {:?}, limit {limit:?}", start.elapsed()))
}

fn scf(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_scf")).args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn ctx(a: i64) -> &'static Context {
    static CACHE: OnceLock<Mutex<HashMap<i64, &'static Context>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(a).or_insert_with(|| Box::leak(Box::new(make_context(a).unwrap())))
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for a in [21, 48, 75, 102, 129, 156] {
        let c = classify(a).map_err(|e| e.to_string())?;
        if c.in_p3_family {
            ensure(c.module_index == 3 && c.basis.label() == "B3(1,1)", || format!("a={a}: {c:?}"))?;
        }
    }
    for (a, conductor) in [(41, 259), (90, 1197)] {
        let c = classify(a).map_err(|e| e.to_string())?;
        ensure(c.module_index == 7 && c.basis.label() == "B7(4,3)" && c.conductor == conductor, || format!("a={a}: {c:?}"))?;
    }
    for a in EXCEPTIONAL_A {
        ensure(classify(a).map_err(|e| e.to_string())?.monogenic, || format!("a={a} not monogenic"))?;
    }
    within(start, Duration::from_secs(1), "classification")
}

const TABLE1: [(i64, i64, i64, i64); 24] = [
    (7, 5, 2, 6),
    (7, 41, 4, 3),
    (13, 66, 3, 8),
    (13, 100, 9, 7),
    (19, 154, 11, 5),
    (19, 204, 7, 16),
    (31, 356, 25, 21),
    (31, 602, 5, 12),
    (37, 374, 10, 22),
    (37, 992, 26, 17),
    (43, 577, 36, 31),
    (43, 1269, 6, 14),
    (61, 1259, 47, 35),
    (61, 2459, 13, 28),
    (67, 2097, 37, 9),
    (67, 2389, 29, 60),
    (73, 1265, 64, 57),
    (73, 4061, 8, 18),
    (79, 1096, 55, 33),
    (79, 5142, 23, 48),
    (97, 4451, 35, 72),
    (97, 4955, 61, 27),
    (103, 271, 46, 94),
    (103, 10335, 56, 11),
];

fn criterion_2() -> Check {
    let start = Instant::now();
    let (code, json) = scf(&["table1", "--pmax", "103"]);
    ensure(code == 0, || format!("exit {code}"))?;
    let got: Vec<(i64, i64, i64, i64)> = json
        .as_array()
        .ok_or("table1 output is not an array")?
        .iter()
        .map(|r| (r["p"].as_i64().unwrap(), r["a"].as_i64().unwrap(), r["k"].as_i64().unwrap(), r["l"].as_i64().unwrap()))
        .collect();
    ensure(got == TABLE1, || format!("got {got:?}"))?;
    within(start, Duration::from_secs(5), "table1")
}

fn criterion_3() -> Check {
    let mut fields = 0;
    for a in -1..=300 {
        let c = classify(a).map_err(|e| e.to_string())?;
        if c.basis.kind == BasisKind::Unsupported {
            continue;
        }
        let ctx = make_context(a).map_err(|e| e.to_string())?;
        let cod = Codifferent::new(&ctx).map_err(|e| e.to_string())?;
        ensure(cod.duality_holds(&ctx), || format!("duality fails at a={a}"))?;
        if c.in_p3_family {
            ensure(cod.matches_closed_form(&ctx), || format!("closed form fails at a={a}"))?;
        }
        fields += 1;
    }
    ensure(fields > 250, || format!("only {fields} fields tested"))
}

fn criterion_4() -> Check {
    for a in [21, 30, 48] {
        let start = Instant::now();
        let ctx = ctx(a);
        let closed: BTreeSet<[i128; 3]> =
            second_parallelepiped_points_p3(ctx).map_err(|e| e.to_string())?.iter().map(|c| c.integral).collect();
        let brute: BTreeSet<[i128; 3]> =
            second_parallelepiped_points_bruteforce(ctx).map_err(|e| e.to_string())?.iter().map(|c| c.integral).collect();
        ensure(closed == brute, || format!("a={a}: closed form and brute force differ"))?;
        for s in 0..3 {
            for v in 0..=a + 1 {
                for r in 0..=a + 1 {
                    let hits = regions_containing(a, s, v, r).map_err(|e| e.to_string())?.len();
                    let want = usize::from(admissible(a, s, v, r) || (s, v, r) == (0, 0, 0));
                    ensure(hits == want, || format!("a={a}: ({s},{v},{r}) lies in {hits} regions"))?;
                }
            }
        }
        within(start, Duration::from_secs(60), &format!("enumeration at a={a}"))?;
    }
    Ok(())
}

fn criterion_5() -> Check {
    for (a, count, limit) in [(21, 72, 120), (30, 117, 600)] {
        let start = Instant::now();
        let rep = verify_classification(ctx(a), DEFAULT_MAX_A_ORACLE, None).map_err(|e| e.to_string())?;
        ensure(rep.ok(), || format!("a={a}: {} mismatches", rep.mismatches.len()))?;
        ensure(rep.records == count && rep.expected_count == ((a * a + 3 * a) / 18 + 2 * a + 2), || format!("a={a}: {} records", rep.records))?;
        ensure(rep.witnesses.len() == rep.candidates - rep.oracle_indecomposable, || format!("a={a}: missing witnesses"))?;
        within(start, Duration::from_secs(limit), &format!("verify a={a}"))?;
    }
    let (code, json) = scf(&["verify", "--a", "21"]);
    ensure(code == 0 && json["summary"] == "72 indecomposables verified", || format!("cli verify: exit {code}, {}", json["summary"]))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let ctx = ctx(21);
    let cod = Codifferent::new(ctx).map_err(|e| e.to_string())?;
    for r in generate_theorem_list(ctx).map_err(|e| e.to_string())? {
        let want = match r.family {
            Family::II | Family::III | Family::IV => 2,
            _ => 1,
        };
        let mt = cod.minimal_trace(ctx, &r.elem, true).map_err(|e| e.to_string())?;
        ensure(mt.certified && mt.value == want, || format!("{} (v,r)=({:?},{:?}): {}", r.family, r.v, r.r, mt.value))?;
    }
    within(start, Duration::from_secs(300), "certified traces")
}

fn criterion_7() -> Check {
    let cube = |a: i128| (2 * a * a * a + 9 * a * a + 27 * a + 27) / 27;
    let delta57: i128 = 57 * 57 + 3 * 57 + 9;
    for (a, lo, hi) in [(21, 19, 855), (30, 999 / 27, cube(30)), (57, 117, delta57 * delta57 / 729)] {
        let n = norm_extremes(ctx(a)).map_err(|e| e.to_string())?;
        ensure(n.matches && (n.min_nonrational, n.max_indec) == (lo, hi), || format!("a={a}: {n:?}"))?;
    }
    Ok(())
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let rep = verify_a41(ctx(41), true, None).map_err(|e| e.to_string())?;
    ensure(rep.ok(), || format!("{:?}", rep.mismatches))?;
    ensure(rep.items.len() == 14, || format!("{} items", rep.items.len()))?;
    let strata: BTreeSet<i64> = rep.items.iter().map(|i| i.min_trace).collect();
    ensure(strata == [1, 2, 3].into(), || format!("trace strata {strata:?}"))?;
    within(start, Duration::from_secs(900), "a=41")
}

fn criterion_9() -> Check {
    let mut sizes = Vec::new();
    for p in [7, 13, 19, 31] {
        for row in first_par_indec_table(p).map_err(|e| e.to_string())? {
            ensure(row.matches, || format!("p={p} class {}", row.class))?;
            sizes.push(row.indecomposables.len());
        }
    }
    ensure(sizes == [0, 0, 3, 3, 3, 3, 6, 6], || format!("sizes {sizes:?}"))
}

fn criterion_10() -> Check {
    for a in [21, 30] {
        let start = Instant::now();
        let rep = pythagoras(ctx(a)).map_err(|e| e.to_string())?;
        ensure(rep.min_squares == 6 && rep.pythagoras_number == Some(6), || format!("a={a}: {} squares", rep.min_squares))?;
        ensure(rep.class5_in_every_optimal && rep.some_optimal_has_seven, || format!("a={a}: structure fails"))?;
        within(start, Duration::from_secs(600), &format!("pythagoras a={a}"))?;
    }
    Ok(())
}

fn criterion_11() -> Check {
    let b = uqf_bounds(ctx(21)).map_err(|e| e.to_string())?;
    ensure(b.diag_upper == 432 && b.classical_lower == Ratio::new(28, 3), || format!("{b:?}"))?;
    ensure(b.nonclassical_lower.is_none(), || "a=21 emitted the non-classical bound".into())?;
    for a in [21, 30, 48, 57, 75, 84, 102] {
        let b = uqf_bounds(ctx(a)).map_err(|e| e.to_string())?;
        ensure(b.nonclassical_lower.is_some() == (a > 64), || format!("a={a}: emission {:?}", b.nonclassical_lower))?;
        ensure(b.nonclassical_lower.is_some() == (b.n_trace1 >= NONCLASSICAL_MIN_N), || format!("a={a}: threshold"))?;
    }
    Ok(())
}

fn run_prop<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Check {
    TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() }).run(&strategy, test).map_err(|e| e.to_string())
}

fn criterion_12() -> Check {
    let coord = || (-30i128..=30, 1i128..=5).prop_map(|(n, d)| Ratio::new(n, d));
    let elem = move || (coord(), coord(), coord()).prop_map(|(x, y, z)| Elem::new(x, y, z));
    run_prop((-1i64..=120, elem(), elem()), |(a, x, y)| {
        let c = ctx(a);
        prop_assert_eq!(c.trace(&(&x + &y)), c.trace(&x) + c.trace(&y));
        prop_assert_eq!(c.norm(&c.mul(&x, &y)), c.norm(&x) * c.norm(&y));
        for k in 0..3 {
            prop_assert_eq!(c.conjugate(&c.mul(&x, &y), k), c.mul(&c.conjugate(&x, k), &c.conjugate(&y, k)));
        }
        Ok(())
    })?;
    run_prop((-1i64..=120, elem(), elem(), 0i128..=4), |(a, x, y, q)| {
        let c = ctx(a);
        let q = Elem::rational(Rat::from_integer(q + 1));
        let s = &c.square(&x) + &q;
        let t = &c.square(&y) + &q;
        prop_assert!(c.is_totally_positive(&s) && c.is_totally_positive(&t));
        prop_assert!(c.is_totally_positive(&(&s + &t)) && c.is_totally_positive(&c.mul(&s, &t)));
        Ok(())
    })?;
    run_prop(-1i64..=3000, |a| {
        let cl = classify(a).unwrap();
        if cl.basis.kind == BasisKind::Bp {
            let (p, k, l) = (cl.basis.p, cl.basis.k, cl.basis.l);
            prop_assert_eq!((2 * k - l + 2).rem_euclid(p), 0);
            prop_assert_eq!(kl_solutions(a, p), vec![(k, l)]);
        }
        Ok(())
    })?;
    for a in [21, 30, 48, 57] {
        for lemma in t1_region_lemmas(a).map_err(|e| e.to_string())? {
            let img = t1_image(ctx(a), lemma.s, &lemma.from).map_err(|e| e.to_string())?;
            ensure(img.as_ref() == Some(&lemma.to), || format!("a={a}: {} fails", lemma.name))?;
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("classification", criterion_1),
        ("table of bases", criterion_2),
        ("dual basis", criterion_3),
        ("enumeration cross-check", criterion_4),
        ("indecomposables end to end", criterion_5),
        ("minimal traces", criterion_6),
        ("norm extremes", criterion_7),
        ("a = 41 list", criterion_8),
        ("first parallelepiped table", criterion_9),
        ("sums of squares", criterion_10),
        ("universal form bounds", criterion_11),
        ("property suites", criterion_12),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(()) => println!("PASS criterion {}: {name} ({:.1?})", i + 1, start.elapsed()),
            Err(e) => {
                println!("FAIL criterion {}: {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
