use simplest_cubic::classify::{
    classify, conductor, cubefree_split, find_kl, in_p3_family, table1, to_canovas_form, BasisKind, EXCEPTIONAL_A,
};
use simplest_cubic::codifferent::Codifferent;
use simplest_cubic::make_context;
use simplest_cubic::Rat;

const TABLE1: [(i64, i64, (i64, i64)); 24] = [
    (7, 5, (2, 6)),
    (7, 41, (4, 3)),
    (13, 66, (3, 8)),
    (13, 100, (9, 7)),
    (19, 154, (11, 5)),
    (19, 204, (7, 16)),
    (31, 356, (25, 21)),
    (31, 602, (5, 12)),
    (37, 374, (10, 22)),
    (37, 992, (26, 17)),
    (43, 577, (36, 31)),
    (43, 1269, (6, 14)),
    (61, 1259, (47, 35)),
    (61, 2459, (13, 28)),
    (67, 2097, (37, 9)),
    (67, 2389, (29, 60)),
    (73, 1265, (64, 57)),
    (73, 4061, (8, 18)),
    (79, 1096, (55, 33)),
    (79, 5142, (23, 48)),
    (97, 4451, (35, 72)),
    (97, 4955, (61, 27)),
    (103, 271, (46, 94)),
    (103, 10335, (56, 11)),
];

#[test]
fn table1_is_reproduced() {
    let got: Vec<_> = table1(103).unwrap().into_iter().map(|f| (f.p, f.a, (f.k, f.l))).collect();
    assert_eq!(got, TABLE1.to_vec());
}

#[test]
fn table1_residues_solve_the_congruences() {
    let mut cubes = Vec::new();
    for (p, a, kl) in TABLE1 {
        let delta = a * a + 3 * a + 9;
        assert_eq!(delta % (p * p), 0);
        if delta % (p * p * p) == 0 {
            cubes.push(a);
            assert!(find_kl(a, p).is_err());
            assert_eq!(find_kl(a + p * p, p).unwrap(), Some(kl));
        } else {
            assert_eq!(find_kl(a, p).unwrap(), Some(kl));
        }
    }
    assert_eq!(cubes, vec![1259, 2389]);
}

#[test]
fn family_members_use_b3() {
    for a in [21, 48, 75, 102, 129, 156] {
        let c = classify(a).unwrap();
        assert!(c.in_p3_family, "a={a}");
        assert_eq!((c.module_index, c.basis.label()), (3, "B3(1,1)".to_string()), "a={a}");
    }
}

#[test]
fn p7_examples() {
    let c = classify(41).unwrap();
    assert_eq!((c.delta_disc, c.conductor, c.module_index), (1813, 259, 7));
    assert_eq!(c.basis.label(), "B7(4,3)");
    let c = classify(90).unwrap();
    assert_eq!((c.delta_disc, c.conductor, c.module_index), (8379, 1197, 7));
    assert_eq!(c.basis.label(), "B7(4,3)");
}

#[test]
fn exceptional_parameters_are_monogenic() {
    for a in EXCEPTIONAL_A {
        assert!(classify(a).unwrap().monogenic, "a={a}");
    }
    assert!(!classify(21).unwrap().monogenic);
    assert!(classify(4).unwrap().monogenic);
}

#[test]
fn family_boundaries() {
    assert!(!in_p3_family(678));
    assert_eq!(678 % 27, 3);
    assert_eq!((678 * 678 + 3 * 678 + 9) % 49, 0);
    assert!(!in_p3_family(66));
    assert!(in_p3_family(30));
}

#[test]
fn cube_free_parts() {
    assert_eq!(cubefree_split(513).unwrap(), (19, 3));
    assert_eq!(cubefree_split(8).unwrap(), (1, 2));
    assert_eq!(cubefree_split(1911).unwrap(), (1911, 1));
    assert!(cubefree_split(0).is_err());
}

#[test]
fn canovas_forms() {
    let c = to_canovas_form(21).unwrap();
    assert_eq!((c.p, c.q), (171, 5));
    let c = to_canovas_form(48).unwrap();
    assert_eq!((c.p, c.q), (819, 11));
    assert_eq!(4 * 819 - 27 * 121, 9);
}

/// The trace form of the computed basis has determinant 𝔠², i.e. the basis spans O_K.
#[test]
fn basis_discriminant_is_conductor_squared() {
    let mut checked = 0;
    for a in -1..=700 {
        let c = classify(a).unwrap();
        if c.basis.kind == BasisKind::Unsupported {
            continue;
        }
        let ctx = make_context(a).unwrap();
        let cod = Codifferent::new(&ctx).unwrap();
        let m = &cod.gram;
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        let f = conductor(a).unwrap() as i128;
        assert_eq!(det, Rat::from_integer(f * f), "a={a}");
        assert!(cod.duality_holds(&ctx), "a={a}");
        checked += 1;
    }
    assert!(checked > 600);
}
