use simplest_cubic::classify::{classify, BasisKind};
use simplest_cubic::codifferent::{closed_form_scaled_inverse, trace_pairing_checked, Codifferent};
use simplest_cubic::{make_context, Elem, Rat};

#[test]
fn dual_basis_is_dual_for_all_supported_fields() {
    for a in -1..=400 {
        if classify(a).unwrap().basis.kind == BasisKind::Unsupported {
            continue;
        }
        let ctx = make_context(a).unwrap();
        let cod = Codifferent::new(&ctx).unwrap();
        assert!(cod.duality_holds(&ctx), "a={a}");
        if ctx.classification().in_p3_family {
            assert!(cod.matches_closed_form(&ctx), "a={a}");
        }
    }
}

#[test]
fn closed_form_for_a21() {
    let ctx = make_context(21).unwrap();
    let cod = Codifferent::new(&ctx).unwrap();
    let row: Vec<Rat<i128>> = cod.gram[0].to_vec();
    assert_eq!(row, vec![Rat::from(3), Rat::from(21), Rat::from(171)]);
    let cf = closed_form_scaled_inverse(21);
    assert_eq!(cf[2], [-81, -135, 18]);
    let g3 = Elem::from_scaled([1, 1, 1], 3);
    let phi3 = &Elem::from_ints(-81, -135, 0) + &g3.scale_int(18);
    assert_eq!(cod.phi[2], phi3.scale(&Rat::new(1, 513)));
}

#[test]
fn pairings_and_witnesses() {
    let ctx = make_context(30).unwrap();
    let cod = Codifferent::new(&ctx).unwrap();
    let g3 = Elem::from_scaled([1, 1, 1], 3);
    assert_eq!(trace_pairing_checked(&ctx, &cod.element_i64([1, 0, 1]), &g3).unwrap(), 1);
    let basis = ctx.classification().basis;
    let (v, r) = (2, 12);
    let x = basis.from_integral(&[-(2 * v + 1), -(v * 33 + r + 1), 3 * v + 2]);
    assert_eq!(trace_pairing_checked(&ctx, &cod.element_i64([3, 0, 2]), &x).unwrap(), 1);
    assert_eq!(trace_pairing_checked(&ctx, &cod.element_i64([0, 1, 0]), &Elem::one()).unwrap(), 0);
}

#[test]
fn minimal_trace_examples() {
    let ctx = make_context(21).unwrap();
    let cod = Codifferent::new(&ctx).unwrap();
    let one = cod.minimal_trace(&ctx, &Elem::one(), true).unwrap();
    assert_eq!(one.value, 1);
    assert_eq!(cod.minimal_trace(&ctx, &Elem::from_ints(0, -1, 1), true).unwrap().value, 2);
    assert!(cod.minimal_trace(&ctx, &Elem::rho(), true).is_err());
    assert!(cod.minimal_trace(&ctx, &Elem::from_scaled([1, 0, 0], 2), true).is_err());
    let big = ctx.mul(&ctx.square(&ctx.unit_power(3, -2)), &Elem::from_ints(0, -1, 1));
    let mt = cod.minimal_trace(&ctx, &big, true).unwrap();
    assert_eq!(mt.value, 2);
    assert_eq!(trace_pairing_checked(&ctx, &mt.witness, &big).unwrap(), 2);
    assert!(ctx.is_totally_positive(&mt.witness.as_field_elem));

    let ctx = make_context(41).unwrap();
    let cod = Codifferent::new(&ctx).unwrap();
    let x = ctx.classification().basis.from_integral(&[-4, -4, 7]);
    assert_eq!(cod.minimal_trace(&ctx, &x, true).unwrap().value, 2);
    let loose = cod.minimal_trace(&ctx, &x, false).unwrap();
    assert!(!loose.certified && loose.value >= 2);
}
