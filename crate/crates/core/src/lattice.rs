//! Lattice points of O_K in the two unit parallelepipeds
//! D(1, ρ², 1+2ρ+ρ²) and D(1, ρ², ν) with ν = −1−a−(a²+3a+3)ρ+(a+2)ρ².

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::BasisDescriptor;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::int::{ceil_div, floor_div, Int, Rat};
use crate::regions::{region_of, region_points, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parallelepiped {
    First,
    Second,
}

/// Indices of a closed-form point α_s(v, r) with w = v(a+2)+r = t(a+1)+l_aux.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClosedIndex {
    pub s: i64,
    pub v: i64,
    pub r: i64,
    pub w: i64,
    pub t: i64,
    pub l_aux: i64,
    pub e1: i64,
    pub e2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeCandidate<I: Int> {
    pub elem: FieldElement<I>,
    /// Coordinates over the integral basis (g₁, g₂, g₃).
    pub integral: [I; 3],
    pub parallelepiped: Parallelepiped,
    /// Numerator n of t₃: n/(2p) in the first parallelepiped, n/(p(a²+3a+3)) in the second.
    pub t3_num: i64,
    pub index: Option<ClosedIndex>,
    pub region: Region,
}

pub fn first_parallelepiped_nodes<I: Int>() -> [FieldElement<I>; 3] {
    [FieldElement::one(), FieldElement::from_ints(0, 0, 1), FieldElement::from_ints(1, 2, 1)]
}

pub fn second_parallelepiped_nodes<I: Int>(ctx: &FieldContext<I>) -> [FieldElement<I>; 3] {
    let a = ctx.a();
    [
        FieldElement::one(),
        FieldElement::from_ints(0, 0, 1),
        FieldElement::from_ints(-1 - a, -(a * a + 3 * a + 3), a + 2),
    ]
}

/// (t₁, t₂, t₃) with x = t₁ℓ₁ + t₂ℓ₂ + t₃ℓ₃ for the nodes of the given parallelepiped.
pub fn parallelepiped_params<I: Int>(ctx: &FieldContext<I>, which: Parallelepiped, x: &FieldElement<I>) -> [Rat<I>; 3] {
    let a = ctx.a();
    let [x1, x2, x3] = &x.coords;
    let c = |n: i64| Rat::from_integer(I::from_i64_exact(n));
    match which {
        Parallelepiped::First => {
            let t3 = x2 / c(2);
            [x1 - &t3, x3 - &t3, t3]
        }
        Parallelepiped::Second => {
            let t3 = -(x2 / c(a * a + 3 * a + 3));
            [x1 + c(a + 1) * &t3, x3 - c(a + 2) * &t3, t3]
        }
    }
}

pub fn in_parallelepiped<I: Int>(ctx: &FieldContext<I>, which: Parallelepiped, x: &FieldElement<I>) -> bool {
    parallelepiped_params(ctx, which, x).iter().all(|t| !t.is_negative_rat() && *t <= Rat::one())
}

trait NonNeg {
    fn is_negative_rat(&self) -> bool;
}

impl<I: Int> NonNeg for Rat<I> {
    fn is_negative_rat(&self) -> bool {
        *self < Rat::zero()
    }
}

/// e₁, e₂ by the exact ceiling formulas.
pub fn e_ceiling(a: i64, s: i64, v: i64, r: i64, t: i64, l: i64) -> (i64, i64) {
    let d = 3 * (a * a + 3 * a + 3);
    let e1 = ceil_div(s * (a * a + 2 * a + 2) + 3 * (v - r * (a + 1)), d);
    let e2 = ceil_div(s * (a * a + 4 * a + 5) + 3 * (l * (a + 2) - t), d);
    (e1, e2)
}

/// e₁, e₂ by the case split on s; must agree with [`e_ceiling`] away from the zero point.
pub fn e_cases(a: i64, s: i64, v: i64, r: i64, t: i64, l: i64) -> (i64, i64) {
    let x = 3 * (r * (a + 1) - v);
    let y = 3 * (l * (a + 2) - t);
    match s {
        0 => (i64::from(r == 0), i64::from(l != 0)),
        1 => (i64::from(x <= a * a + 2 * a), if y <= (2 * a + 3) * (a + 1) { 1 } else { 2 }),
        _ => (i64::from(x <= 2 * a * a + 4 * a + 3), if y <= a * a + a - 3 { 1 } else { 2 }),
    }
}

pub fn closed_index(a: i64, s: i64, w: i64) -> ClosedIndex {
    let (v, r) = (w / (a + 2), w % (a + 2));
    let (t, l_aux) = (w / (a + 1), w % (a + 1));
    let (e1, e2) = e_ceiling(a, s, v, r, t, l_aux);
    ClosedIndex { s, v, r, w, t, l_aux, e1, e2 }
}

/// Integral coordinates (−(v+t−e₁+e₂), −(w+t+e₂), −s+3(t+e₂)) of α_s(v, r).
pub fn closed_integral(ix: &ClosedIndex) -> [i64; 3] {
    [-(ix.v + ix.t - ix.e1 + ix.e2), -(ix.w + ix.t + ix.e2), -ix.s + 3 * (ix.t + ix.e2)]
}

/// The index record of α_s(v, r), if (v, r) is admissible.
pub fn index_of(a: i64, s: i64, v: i64, r: i64) -> Option<ClosedIndex> {
    if !crate::regions::admissible(a, s, v, r) {
        return None;
    }
    Some(closed_index(a, s, v * (a + 2) + r))
}

fn require_p3<I: Int>(ctx: &FieldContext<I>) -> Result<BasisDescriptor> {
    let c = ctx.classification();
    if !c.in_p3_family {
        return Err(Error::NotInFamily { a: ctx.a(), reason: "closed forms need the p = 3 family".into() });
    }
    Ok(c.basis)
}

fn require_supported<I: Int>(ctx: &FieldContext<I>) -> Result<BasisDescriptor> {
    let c = ctx.classification();
    c.basis.require_supported(c.a, c.module_index)?;
    Ok(c.basis)
}

fn to_i<I: Int>(c: [i64; 3]) -> [I; 3] {
    c.map(I::from_i64_exact)
}

/// α_s(v, r) as a field element.
pub fn alpha<I: Int>(ctx: &FieldContext<I>, s: i64, v: i64, r: i64) -> Result<FieldElement<I>> {
    let basis = require_p3(ctx)?;
    let ix = index_of(ctx.a(), s, v, r).ok_or(Error::NoRegion { s, v, r })?;
    Ok(basis.from_integral(&to_i(closed_integral(&ix))))
}

fn integral_test<I: Int>(ctx: &FieldContext<I>, p: i64, c: &[I; 3]) -> bool {
    let e = ctx.char_poly_scaled(c);
    let p = BigInt::from(p);
    let mut pk = BigInt::one();
    e.iter().all(|x| {
        pk = &pk * &p;
        x.is_multiple_of(&pk)
    })
}

/// Algebraic integers in the first parallelepiped with 0 < t₃ < 1.
pub fn first_parallelepiped_points<I: Int>(ctx: &FieldContext<I>) -> Result<Vec<LatticeCandidate<I>>> {
    let basis = require_supported(ctx)?;
    let p = basis.p;
    let mut out = Vec::new();
    for nn in 1..2 * p {
        let lo = ceil_div(nn, 2);
        let hi = floor_div(2 * p + nn, 2);
        for m in lo..=hi {
            for o in lo..=hi {
                let c: [I; 3] = to_i([m, nn, o]);
                if !integral_test(ctx, p, &c) {
                    continue;
                }
                let elem = FieldElement::from_scaled(c.clone(), I::from_i64_exact(p));
                if !ctx.is_totally_positive_scaled(&c) {
                    continue;
                }
                let integral = basis.to_integral(&elem).ok_or_else(|| {
                    Error::Internal(format!("integral element {elem} has non-integral basis coordinates"))
                })?;
                out.push(LatticeCandidate {
                    elem,
                    integral,
                    parallelepiped: Parallelepiped::First,
                    t3_num: nn,
                    index: None,
                    region: Region::FirstPar,
                });
            }
        }
    }
    Ok(out)
}

/// Closed-form second-parallelepiped points α_s(v, r) for the p = 3 family, with region tags.
pub fn second_parallelepiped_points_p3<I: Int>(ctx: &FieldContext<I>) -> Result<Vec<LatticeCandidate<I>>> {
    let basis = require_p3(ctx)?;
    let a = ctx.a();
    let mut out = Vec::with_capacity((3 * (a * a + 3 * a + 3)) as usize);
    for w in 0..=a * a + 3 * a + 2 {
        for s in 0..3 {
            if w == 0 && s == 0 {
                continue;
            }
            let ix = closed_index(a, s, w);
            let integral = to_i(closed_integral(&ix));
            out.push(LatticeCandidate {
                elem: basis.from_integral(&integral),
                integral,
                parallelepiped: Parallelepiped::Second,
                t3_num: 3 * w + s,
                index: Some(ix),
                region: region_of(a, s, ix.v, ix.r)?,
            });
        }
    }
    Ok(out)
}

/// Second-parallelepiped points found by scanning t₃ = n/(p(a²+3a+3)) and testing integrality
/// through the characteristic polynomial.
pub fn second_parallelepiped_points_bruteforce<I: Int>(ctx: &FieldContext<I>) -> Result<Vec<LatticeCandidate<I>>> {
    let basis = require_supported(ctx)?;
    let (a, p) = (ctx.a(), basis.p);
    let q = a * a + 3 * a + 3;
    let family = ctx.classification().in_p3_family;
    let chunks: Vec<Result<Vec<LatticeCandidate<I>>>> = (1..p * q)
        .into_par_iter()
        .map(|nn| {
            let mut found = Vec::new();
            // x₁ = m/p ∈ [−(a+1)t₃, 1−(a+1)t₃], x₃ = o/p ∈ [(a+2)t₃, 1+(a+2)t₃]
            let mlo = ceil_div(-(a + 1) * nn, q);
            let mhi = floor_div(p * q - (a + 1) * nn, q);
            let olo = ceil_div((a + 2) * nn, q);
            let ohi = floor_div(p * q + (a + 2) * nn, q);
            for m in mlo..=mhi {
                for o in olo..=ohi {
                    let c: [I; 3] = to_i([m, -nn, o]);
                    if !integral_test(ctx, p, &c) {
                        continue;
                    }
                    let elem = FieldElement::from_scaled(c, I::from_i64_exact(p));
                    let integral = basis.to_integral(&elem).ok_or_else(|| {
                        Error::Internal(format!("integral element {elem} has non-integral basis coordinates"))
                    })?;
                    let (index, region) = if family && p == 3 {
                        let ix = closed_index(a, nn % 3, nn / 3);
                        (Some(ix), region_of(a, ix.s, ix.v, ix.r)?)
                    } else {
                        (None, Region::Unclassified)
                    };
                    found.push(LatticeCandidate {
                        elem,
                        integral,
                        parallelepiped: Parallelepiped::Second,
                        t3_num: nn,
                        index,
                        region,
                    });
                }
            }
            Ok(found)
        })
        .collect();
    let mut out = Vec::new();
    for c in chunks {
        out.extend(c?);
    }
    Ok(out)
}

/// Both parallelepipeds: closed form for the p = 3 family, brute force otherwise.
pub fn all_candidates<I: Int>(ctx: &FieldContext<I>) -> Result<Vec<LatticeCandidate<I>>> {
    let mut out = first_parallelepiped_points(ctx)?;
    if ctx.classification().in_p3_family {
        out.extend(second_parallelepiped_points_p3(ctx)?);
    } else {
        out.extend(second_parallelepiped_points_bruteforce(ctx)?);
    }
    Ok(out)
}

/// (s, v, r) of a second-parallelepiped point of the p = 3 family, if x is one.
pub fn locate_p3<I: Int>(ctx: &FieldContext<I>, x: &FieldElement<I>) -> Option<(i64, i64, i64)> {
    let a = ctx.a();
    if !ctx.classification().in_p3_family || !in_parallelepiped(ctx, Parallelepiped::Second, x) {
        return None;
    }
    let [_, _, t3] = parallelepiped_params(ctx, Parallelepiped::Second, x);
    let u = t3 * Rat::from_integer(I::from_i64_exact(3 * (a * a + 3 * a + 3)));
    if !u.is_integer() {
        return None;
    }
    let u = u.to_integer().to_i64()?;
    let (s, w) = (u % 3, u / 3);
    let (v, r) = (w / (a + 2), w % (a + 2));
    let y = alpha(ctx, s, v, r).ok()?;
    (y == *x).then_some((s, v, r))
}

/// T₁(α) = α′·(−1−a−(a²+3a+3)ρ+(a+2)ρ²).
pub fn transform_t1<I: Int>(ctx: &FieldContext<I>, x: &FieldElement<I>) -> FieldElement<I> {
    let [_, _, nu] = second_parallelepiped_nodes(ctx);
    ctx.mul(&ctx.conjugate1(x), &nu)
}

/// T₂(α) = α″·ρ².
pub fn transform_t2<I: Int>(ctx: &FieldContext<I>, x: &FieldElement<I>) -> FieldElement<I> {
    ctx.mul(&ctx.conjugate2(x), &FieldElement::from_ints(0, 0, 1))
}

/// One region-image identity for T₁: the image of `from` equals `to` as index sets.
#[derive(Clone, Debug, Serialize)]
pub struct RegionLemma {
    pub name: String,
    pub s: i64,
    pub from: BTreeSet<(i64, i64)>,
    pub to: BTreeSet<(i64, i64)>,
}

fn union(a: i64, regions: &[Region]) -> Result<BTreeSet<(i64, i64)>> {
    let mut out = BTreeSet::new();
    for &reg in regions {
        out.extend(region_points(a, reg)?);
    }
    Ok(out)
}

/// The T₁ region-image identities for s = 1 and s = 2.
pub fn t1_region_lemmas(a: i64) -> Result<Vec<RegionLemma>> {
    use Region::{R, S};
    let n = a / 3;
    let lemma = |name: &str, s: i64, from: BTreeSet<(i64, i64)>, to: BTreeSet<(i64, i64)>| RegionLemma {
        name: name.to_string(),
        s,
        from,
        to,
    };
    let mut r3 = union(a, &[R(3)])?;
    r3.remove(&(0, 0));
    let column: BTreeSet<_> = (n + 1..=a + 1).map(|r| (2 * n, r)).collect();
    let mut r3_img = union(a, &[R(3)])?;
    r3_img.remove(&(2 * n + 1, 0));
    Ok(vec![
        lemma("T1(R1+R2)=R14", 1, union(a, &[R(1), R(2)])?, union(a, &[R(14)])?),
        lemma("T1(R3-(0,0))=column", 1, r3, column),
        lemma("T1(0,0)=(2a/3+1,0)", 1, [(0, 0)].into(), [(2 * n + 1, 0)].into()),
        lemma("T1(R10+R11)=R1+R2", 1, union(a, &[R(10), R(11)])?, union(a, &[R(1), R(2)])?),
        lemma("T1(R12)=R3-(2a/3+1,0)", 1, union(a, &[R(12)])?, r3_img),
        lemma("T1(R5)=R8", 1, union(a, &[R(5)])?, union(a, &[R(8)])?),
        lemma("T1(R9+R15)=R5", 1, union(a, &[R(9), R(15)])?, union(a, &[R(5)])?),
        lemma("T1(S1+S2)=S12", 2, union(a, &[S(1), S(2)])?, union(a, &[S(12)])?),
        lemma("T1(S3)=S6+S7", 2, union(a, &[S(3)])?, union(a, &[S(6), S(7)])?),
        lemma("T1(S6+S7)=S14+S15", 2, union(a, &[S(6), S(7)])?, union(a, &[S(14), S(15)])?),
        lemma("T1(S12)=S9", 2, union(a, &[S(12)])?, union(a, &[S(9)])?),
    ])
}

/// Image of an index set under T₁, or None if some image leaves the slice s.
pub fn t1_image<I: Int>(ctx: &FieldContext<I>, s: i64, from: &BTreeSet<(i64, i64)>) -> Result<Option<BTreeSet<(i64, i64)>>> {
    let mut out = BTreeSet::new();
    for &(v, r) in from {
        let y = transform_t1(ctx, &alpha(ctx, s, v, r)?);
        match locate_p3(ctx, &y) {
            Some((s2, v2, r2)) if s2 == s => {
                out.insert((v2, r2));
            }
            _ => return Ok(None),
        }
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_context, Elem};

    #[test]
    fn special_points() {
        let ctx = make_context(21).unwrap();
        let g = |b: [i64; 3]| ctx.classification().basis.from_integral(&to_i::<i128>(b));
        assert_eq!(alpha(&ctx, 2, 0, 0).unwrap(), g([0, -1, 1]));
        assert_eq!(alpha(&ctx, 1, 0, 0).unwrap(), g([0, -1, 2]));
        assert_eq!(alpha(&ctx, 0, 22, 0).unwrap(), Elem::from_ints(-21, -22 * 23, 23));
        let [_, _, nu] = second_parallelepiped_nodes(&ctx);
        assert_eq!(nu, Elem::from_ints(-22, -507, 23));
        assert_eq!(ctx.norm(&nu), Rat::from(1));
    }

    #[test]
    fn first_parallelepiped_for_a21() {
        let ctx = make_context(21).unwrap();
        let pts = first_parallelepiped_points(&ctx).unwrap();
        let coords: Vec<[i128; 3]> = pts.iter().map(|c| c.integral).collect();
        assert_eq!(coords, vec![[0, 0, 1], [0, 0, 2], [0, 0, 3], [0, 0, 4], [0, 0, 5]]);
    }

    #[test]
    fn case_split_agrees_with_ceilings() {
        for a in [21, 30, 48] {
            for w in 0..=a * a + 3 * a + 2 {
                for s in 0..3 {
                    if w == 0 && s == 0 {
                        continue;
                    }
                    let ix = closed_index(a, s, w);
                    assert_eq!((ix.e1, ix.e2), e_cases(a, s, ix.v, ix.r, ix.t, ix.l_aux), "a={a} s={s} w={w}");
                }
            }
        }
    }

    #[test]
    fn closed_form_matches_bruteforce() {
        for a in [21, 30] {
            let ctx = make_context(a).unwrap();
            let closed = second_parallelepiped_points_p3(&ctx).unwrap();
            let mut brute = second_parallelepiped_points_bruteforce(&ctx).unwrap();
            brute.sort_by_key(|c| c.t3_num);
            assert_eq!(closed.len(), brute.len());
            for (c, b) in closed.iter().zip(&brute) {
                assert_eq!(c.elem, b.elem, "a={a} n={}", c.t3_num);
                assert_eq!(c.region, b.region);
                assert!(in_parallelepiped(&ctx, Parallelepiped::Second, &c.elem));
            }
        }
    }

    #[test]
    fn region_offsets_reproduce_points() {
        let a = 30;
        let ctx = make_context(a).unwrap();
        let g3 = ctx.classification().basis.elements::<i128>()[2].clone();
        for c in second_parallelepiped_points_p3(&ctx).unwrap() {
            let ix = c.index.unwrap();
            let (c0, c2) = crate::regions::region_offsets(c.region).unwrap();
            let expect = Elem::from_ints(-(ix.v - c0), -ix.w, ix.v + c2) - g3.scale_int(ix.s);
            assert_eq!(c.elem, expect, "{ix:?} {}", c.region);
        }
    }

    #[test]
    fn t1_lemmas_a21() {
        let ctx = make_context(21).unwrap();
        for lemma in t1_region_lemmas(21).unwrap() {
            let img = t1_image(&ctx, lemma.s, &lemma.from).unwrap();
            assert_eq!(img.as_ref(), Some(&lemma.to), "{}", lemma.name);
        }
    }

}
