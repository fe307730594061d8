use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_rational::Ratio;
use num_traits::Signed;
use proptest::prelude::*;

use simplest_cubic::classify::{classify, kl_solutions, BasisKind};
use simplest_cubic::codifferent::Codifferent;
use simplest_cubic::indecomposables::generate_theorem_list;
use simplest_cubic::lattice::{alpha, locate_p3, t1_region_lemmas, transform_t1, transform_t2};
use simplest_cubic::regions::admissible;
use simplest_cubic::{make_context, Context, Elem};

const FAMILY: [i64; 8] = [21, 30, 48, 57, 75, 84, 102, 111];

fn ctx(a: i64) -> &'static Context {
    static CACHE: OnceLock<Mutex<HashMap<i64, &'static Context>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(a).or_insert_with(|| Box::leak(Box::new(make_context(a).unwrap())))
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, ..ProptestConfig::default() }
}

fn coord() -> impl Strategy<Value = Ratio<i128>> {
    (-40i128..=40, 1i128..=6).prop_map(|(n, d)| Ratio::new(n, d))
}

fn elem() -> impl Strategy<Value = Elem> {
    (coord(), coord(), coord()).prop_map(|(a, b, c)| Elem::new(a, b, c))
}

fn nonzero_elem() -> impl Strategy<Value = Elem> {
    elem().prop_filter("nonzero", |x| !x.is_zero())
}

fn field_a() -> impl Strategy<Value = i64> {
    -1i64..=150
}

/// A sum of up to three squares plus a nonnegative rational, never zero.
fn tp_elem(c: &'static Context) -> impl Strategy<Value = Elem> {
    (proptest::collection::vec(nonzero_elem(), 1..=3), 0i128..=5).prop_map(move |(xs, q)| {
        let mut s = Elem::rational(Ratio::from_integer(q));
        for x in &xs {
            s = &s + &c.square(x);
        }
        s
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn trace_is_additive_and_norm_multiplicative(a in field_a(), x in elem(), y in elem()) {
        let c = ctx(a);
        prop_assert_eq!(c.trace(&(&x + &y)), c.trace(&x) + c.trace(&y));
        prop_assert_eq!(c.norm(&c.mul(&x, &y)), c.norm(&x) * c.norm(&y));
    }

    #[test]
    fn conjugation_is_a_ring_automorphism(a in field_a(), x in elem(), y in elem()) {
        let c = ctx(a);
        for k in 0..3 {
            prop_assert_eq!(c.conjugate(&c.mul(&x, &y), k), c.mul(&c.conjugate(&x, k), &c.conjugate(&y, k)));
            prop_assert_eq!(c.conjugate(&(&x + &y), k), &c.conjugate(&x, k) + &c.conjugate(&y, k));
        }
        prop_assert_eq!(c.conjugate1(&c.conjugate2(&x)), x.clone());
        let prod = c.mul(&c.mul(&x, &c.conjugate1(&x)), &c.conjugate2(&x));
        prop_assert_eq!(prod, Elem::rational(c.norm(&x)));
    }

    #[test]
    fn inverse_is_exact(a in field_a(), x in nonzero_elem()) {
        let c = ctx(a);
        prop_assert_eq!(c.mul(&x, &c.inverse(&x).unwrap()), Elem::one());
    }

    #[test]
    fn totally_positive_cone_is_closed((a, x, y) in field_a().prop_flat_map(|a| (Just(a), tp_elem(ctx(a)), tp_elem(ctx(a))))) {
        let c = ctx(a);
        prop_assert!(c.is_totally_positive(&x));
        prop_assert!(c.is_totally_positive(&y));
        prop_assert!(c.is_totally_positive(&(&x + &y)));
        prop_assert!(c.is_totally_positive(&c.mul(&x, &y)));
        prop_assert!(!c.is_totally_positive(&x.scale_int(-1)));
    }

    #[test]
    fn positivity_agrees_with_enclosures(a in field_a(), x in nonzero_elem()) {
        let c = ctx(a);
        let signs: Vec<_> = (0..3).map(|k| c.conjugate_enclosure(&x, k)).collect();
        if signs.iter().all(|e| e.excludes_zero()) {
            let positive = signs.iter().all(|e| e.lo.is_positive());
            prop_assert_eq!(c.is_totally_positive(&x), positive);
        }
    }

    #[test]
    fn discovered_bases_satisfy_the_congruence(a in -1i64..=3000) {
        let cl = classify(a).unwrap();
        if cl.basis.kind == BasisKind::Bp {
            let (p, k, l) = (cl.basis.p, cl.basis.k, cl.basis.l);
            prop_assert_eq!((2 * k - l + 2).rem_euclid(p), 0);
            prop_assert_eq!(kl_solutions(a, p), vec![(k, l)]);
            let g3 = cl.basis.elements::<i128>()[2].clone();
            prop_assert!(ctx(a).is_algebraic_integer(&g3));
        }
    }

    #[test]
    fn t1_t2_preserve_positivity_and_norm((a, x) in prop::sample::select(FAMILY.to_vec()).prop_flat_map(|a| (Just(a), tp_elem(ctx(a))))) {
        let c = ctx(a);
        for y in [transform_t1(c, &x), transform_t2(c, &x)] {
            prop_assert!(c.is_totally_positive(&y));
            prop_assert_eq!(c.norm(&y).abs(), c.norm(&x).abs());
        }
    }

    #[test]
    fn s0_index_identities((a, v, r) in prop::sample::select(FAMILY.to_vec()).prop_flat_map(|a| (Just(a), 0..=a, 1..=a + 1))) {
        let c = ctx(a);
        let x = alpha(c, 0, v, r).unwrap();
        let (v1, r1) = (r - 1, a + 2 - v - r);
        if admissible(a, 0, v1, r1) {
            prop_assert_eq!(transform_t1(c, &x), alpha(c, 0, v1, r1).unwrap());
        }
        let (v2, r2) = (a + 1 - v - r, v + 1);
        if admissible(a, 0, v2, r2) {
            prop_assert_eq!(transform_t2(c, &x), alpha(c, 0, v2, r2).unwrap());
        }
    }

    #[test]
    fn t1_region_images((a, lemma, pick) in prop::sample::select(FAMILY.to_vec()).prop_flat_map(|a| (Just(a), 0usize..11, any::<prop::sample::Index>()))) {
        let c = ctx(a);
        let lemma = &t1_region_lemmas(a).unwrap()[lemma];
        let src: Vec<_> = lemma.from.iter().copied().collect();
        let (v, r) = src[pick.index(src.len())];
        let y = transform_t1(c, &alpha(c, lemma.s, v, r).unwrap());
        let (s, v2, r2) = locate_p3(c, &y).expect("image is a lattice point");
        prop_assert_eq!(s, lemma.s);
        prop_assert!(lemma.to.contains(&(v2, r2)), "{}: ({}, {}) -> ({}, {})", lemma.name, v, r, v2, r2);
    }

    #[test]
    fn minimal_trace_is_unit_invariant(a in prop::sample::select(vec![21i64, 30]), idx in any::<prop::sample::Index>(), i in -2i64..=2, j in -2i64..=2) {
        let c = ctx(a);
        let list = list_for(a);
        let rec = &list[idx.index(list.len())];
        let unit = c.square(&c.unit_power(i, j));
        let y = c.mul(&unit, &rec.elem);
        let cod = codifferent_for(a);
        prop_assert_eq!(cod.minimal_trace(c, &y, true).unwrap().value, rec.min_trace);
    }
}

fn list_for(a: i64) -> &'static Vec<simplest_cubic::indecomposables::IndecRecord<i128>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, &'static Vec<simplest_cubic::indecomposables::IndecRecord<i128>>>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(a).or_insert_with(|| Box::leak(Box::new(generate_theorem_list(ctx(a)).unwrap())))
}

fn codifferent_for(a: i64) -> &'static Codifferent<i128> {
    static CACHE: OnceLock<Mutex<HashMap<i64, &'static Codifferent<i128>>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(a).or_insert_with(|| Box::leak(Box::new(Codifferent::new(ctx(a)).unwrap())))
}

#[test]
fn t1_region_lemmas_hold_as_set_equalities() {
    for a in FAMILY {
        let c = ctx(a);
        for lemma in t1_region_lemmas(a).unwrap() {
            let img = simplest_cubic::lattice::t1_image(c, lemma.s, &lemma.from).unwrap();
            assert_eq!(img.as_ref(), Some(&lemma.to), "a={a} {}", lemma.name);
        }
    }
}
