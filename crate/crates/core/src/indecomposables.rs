//! Indecomposable integers: the closed-form list for the p = 3 family, a brute-force
//! oracle, decomposition witnesses, norm extremes, the a = 41 list and first-parallelepiped
//! tables for p > 3.

use std::collections::HashMap;
use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::BasisDescriptor;
use crate::codifferent::Codifferent;
use crate::enclosure::Iv;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::int::{Int, Rat};
use crate::lattice::{self, alpha, LatticeCandidate};
use crate::regions::Region;
use crate::scan::scan_find_first;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Unit1,
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    Extern,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Unit1 => "1",
            Family::I => "(i)",
            Family::II => "(ii)",
            Family::III => "(iii)",
            Family::IV => "(iv)",
            Family::V => "(v)",
            Family::VI => "(vi)",
            Family::VII => "(vii)",
            Family::VIII => "(viii)",
            Family::Extern => "extern",
        };
        f.write_str(s)
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndecRecord<I: Int> {
    pub elem: FieldElement<I>,
    pub integral: [I; 3],
    pub family: Family,
    pub v: Option<i64>,
    pub r: Option<i64>,
    pub min_trace: i64,
    pub norm_abs: I,
    /// A totally positive codifferent element (φ-coordinates) attaining `min_trace`, when known.
    pub witness: Option<[i64; 3]>,
}

/// (a² + 3a)/18 + 2a + 2.
pub fn theorem_count(a: i64) -> i64 {
    (a * a + 3 * a) / 18 + 2 * a + 2
}

fn require_family<I: Int>(ctx: &FieldContext<I>) -> Result<BasisDescriptor> {
    let c = ctx.classification();
    if !c.in_p3_family {
        return Err(Error::NotInFamily { a: ctx.a(), reason: "needs a ≡ 3, 21 (mod 27), a > 12 and Δ/27 square-free".into() });
    }
    Ok(c.basis)
}

fn to_i<I: Int>(c: [i64; 3]) -> [I; 3] {
    c.map(I::from_i64_exact)
}

fn norm_abs<I: Int>(ctx: &FieldContext<I>, x: &FieldElement<I>) -> I {
    ctx.norm(x).to_integer().abs()
}

/// The closed-form list of indecomposables up to totally positive units.
pub fn generate_theorem_list<I: Int>(ctx: &FieldContext<I>) -> Result<Vec<IndecRecord<I>>> {
    let basis = require_family(ctx)?;
    let a = ctx.a();
    let n = a / 3;
    let mut raw: Vec<(Family, Option<i64>, Option<i64>, [i64; 3], i64, Option<[i64; 3]>)> = Vec::new();
    raw.push((Family::Unit1, None, None, [1, 0, 0], 1, None));
    raw.push((Family::I, None, None, [0, 0, 1], 1, Some([1, 0, 1])));
    for r in 1..=n {
        raw.push((Family::II, None, Some(r), [-1, -(r + 1), 3], 2, Some([1, 0, 1])));
    }
    for v in 2 * n + 1..=a {
        raw.push((Family::III, Some(v), None, [-(2 * v + 1), -(v * (a + 3) + 2), 3 * (v + 1)], 2, None));
    }
    for v in 0..n {
        raw.push((Family::IV, Some(v), None, [-(2 * v + 1), -(v + 1) * (a + 2), 3 * (v + 1)], 2, None));
    }
    for v in 0..n {
        for r in n + 1..=2 * n - v {
            raw.push((Family::V, Some(v), Some(r), [-(2 * v + 1), -(v * (a + 3) + r + 1), 3 * v + 2], 1, Some([3, 0, 2])));
        }
    }
    for r in 0..n {
        raw.push((Family::VI, None, Some(r), [0, -(r + 1), 1], 1, Some([1, 0, 1])));
    }
    for v in 0..n {
        raw.push((Family::VII, Some(v), None, [-(2 * v + 2), -(v * (a + 3) + 2 * n + 3), 3 * v + 4], 1, None));
    }
    for v in n..2 * n {
        raw.push((Family::VIII, Some(v), None, [-(2 * v + 2), -(v * (a + 3) + 4 * n - v + 3), 3 * v + 4], 1, None));
    }
    let out: Vec<IndecRecord<I>> = raw
        .into_iter()
        .map(|(family, v, r, c, min_trace, witness)| {
            let integral = to_i::<I>(c);
            let elem = basis.from_integral(&integral);
            let norm_abs = norm_abs(ctx, &elem);
            IndecRecord { elem, integral, family, v, r, min_trace, norm_abs, witness }
        })
        .collect();
    if out.len() as i64 != theorem_count(a) {
        return Err(Error::Internal(format!("list has {} elements, expected {}", out.len(), theorem_count(a))));
    }
    Ok(out)
}

/// The power-basis form of each family, for cross-checking the integral-coordinate form.
pub fn theorem_power_form<I: Int>(ctx: &FieldContext<I>, rec: &IndecRecord<I>) -> FieldElement<I> {
    let a = ctx.a();
    let n = a / 3;
    let g3 = ctx.classification().basis.elements::<I>()[2].clone();
    let (v, r) = (rec.v.unwrap_or(0), rec.r.unwrap_or(0));
    let e = |c0: i64, c1: i64, c2: i64, k: i64| &FieldElement::from_ints(c0, c1, c2) - &g3.scale_int(k);
    match rec.family {
        Family::Unit1 => FieldElement::one(),
        Family::I => g3.clone(),
        Family::II => e(0, -r, 1, 0),
        Family::III => e(-v, -(v * (a + 2) + 1), v + 1, 0),
        Family::IV => e(-v, -(v * (a + 2) + a - v + 1), v + 1, 0),
        Family::V => e(-v, -(v * (a + 2) + r), v + 1, 1),
        Family::VI => e(1, -r, 1, 2),
        Family::VII => e(-v, -(v * (a + 2) + 2 * n + 1), v + 2, 2),
        Family::VIII => e(-v, -(v * (a + 2) + 4 * n - v + 1), v + 2, 2),
        Family::Extern => rec.elem.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition<I: Int> {
    pub beta: FieldElement<I>,
    pub gamma: FieldElement<I>,
    pub beta_integral: [I; 3],
    pub gamma_integral: [I; 3],
}

/// Brute-force indecomposability test over all β with 0 ≺ β ≺ α.
pub struct Oracle<I: Int> {
    pub codifferent: Codifferent<I>,
    basis: BasisDescriptor,
}

impl<I: Int> Oracle<I> {
    pub fn new(ctx: &FieldContext<I>) -> Result<Self> {
        Ok(Oracle { codifferent: Codifferent::new(ctx)?, basis: ctx.classification().basis })
    }

    /// `None` if α is indecomposable, otherwise the first decomposition in scan order.
    pub fn decomposition(&self, ctx: &FieldContext<I>, alpha: &FieldElement<I>) -> Result<Option<Decomposition<I>>> {
        let b = self.basis.to_integral(alpha).ok_or(Error::NotIntegral)?;
        let sa = self.basis.scaled_power(&b);
        if !ctx.is_totally_positive_scaled(&sa) {
            return Err(Error::NotTotallyPositive);
        }
        let y: [Iv; 3] = std::array::from_fn(|i| {
            let s = ctx.conjugate_iv(alpha, i);
            Iv::new(0.0, s.hi)
        });
        let found = scan_find_first(self.codifferent.primal_embedding(), &y, |x| {
            let x: [I; 3] = to_i(x);
            if x == b {
                return None;
            }
            let sb = self.basis.scaled_power(&x);
            if !ctx.is_totally_positive_scaled(&sb) {
                return None;
            }
            let rest: [I; 3] = std::array::from_fn(|k| sa[k].clone() - sb[k].clone());
            ctx.is_totally_positive_scaled(&rest).then_some(x)
        })?;
        Ok(found.map(|x| {
            let gamma_integral: [I; 3] = std::array::from_fn(|k| b[k].clone() - x[k].clone());
            Decomposition {
                beta: self.basis.from_integral(&x),
                gamma: self.basis.from_integral(&gamma_integral),
                beta_integral: x,
                gamma_integral,
            }
        }))
    }

    pub fn is_indecomposable(&self, ctx: &FieldContext<I>, alpha: &FieldElement<I>) -> Result<bool> {
        Ok(self.decomposition(ctx, alpha)?.is_none())
    }
}

/// y = εx for a totally positive unit ε.
pub fn associated<I: Int>(ctx: &FieldContext<I>, x: &FieldElement<I>, y: &FieldElement<I>) -> Result<bool> {
    let q = ctx.mul(y, &ctx.inverse(x)?);
    let e = ctx.char_poly(&q);
    Ok(e.iter().all(|c| c.is_integer()) && e[2].is_one() && ctx.is_totally_positive(&q))
}

/// Index of a record equal or unit-associated to `x`.
fn match_record<I: Int>(
    ctx: &FieldContext<I>,
    exact: &HashMap<FieldElement<I>, usize>,
    by_norm: &HashMap<I, Vec<usize>>,
    records: &[FieldElement<I>],
    x: &FieldElement<I>,
) -> Result<Option<(usize, bool)>> {
    if let Some(&i) = exact.get(x) {
        return Ok(Some((i, true)));
    }
    let n = norm_abs(ctx, x);
    for &i in by_norm.get(&n).map(|v| v.as_slice()).unwrap_or(&[]) {
        if associated(ctx, &records[i], x)? {
            return Ok(Some((i, false)));
        }
    }
    Ok(None)
}

struct Matcher<I: Int> {
    exact: HashMap<FieldElement<I>, usize>,
    by_norm: HashMap<I, Vec<usize>>,
    elems: Vec<FieldElement<I>>,
}

impl<I: Int> Matcher<I> {
    fn new(ctx: &FieldContext<I>, elems: Vec<FieldElement<I>>) -> Self {
        let mut exact = HashMap::new();
        let mut by_norm: HashMap<I, Vec<usize>> = HashMap::new();
        for (i, e) in elems.iter().enumerate() {
            exact.insert(e.clone(), i);
            by_norm.entry(norm_abs(ctx, e)).or_default().push(i);
        }
        Matcher { exact, by_norm, elems }
    }

    fn find(&self, ctx: &FieldContext<I>, x: &FieldElement<I>) -> Result<Option<(usize, bool)>> {
        match_record(ctx, &self.exact, &self.by_norm, &self.elems, x)
    }
}

/// T₁ restricted to one family, compared with its expected target family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyImage {
    pub from: Family,
    pub to: Family,
    pub size: usize,
    pub bijective: bool,
}

pub const T1_FAMILY_CYCLES: [(Family, Family); 7] = [
    (Family::II, Family::IV),
    (Family::IV, Family::III),
    (Family::III, Family::II),
    (Family::V, Family::V),
    (Family::VI, Family::VIII),
    (Family::VIII, Family::VII),
    (Family::VII, Family::VI),
];

/// Whether T₁ maps each family onto its target, up to totally positive units.
pub fn t1_family_images<I: Int>(ctx: &FieldContext<I>) -> Result<Vec<FamilyImage>> {
    let list = generate_theorem_list(ctx)?;
    let mut out = Vec::new();
    for (from, to) in T1_FAMILY_CYCLES {
        let src: Vec<_> = list.iter().filter(|r| r.family == from).map(|r| r.elem.clone()).collect();
        let dst: Vec<_> = list.iter().filter(|r| r.family == to).map(|r| r.elem.clone()).collect();
        let matcher = Matcher::new(ctx, dst.clone());
        let mut hit = vec![false; dst.len()];
        let mut ok = src.len() == dst.len();
        for x in &src {
            match matcher.find(ctx, &lattice::transform_t1(ctx, x))? {
                Some((i, _)) if !hit[i] => hit[i] = true,
                _ => ok = false,
            }
        }
        out.push(FamilyImage { from, to, size: src.len(), bijective: ok && hit.iter().all(|&h| h) });
    }
    Ok(out)
}

/// Pairs of distinct list entries that are associated by a totally positive unit.
pub fn associated_pairs<I: Int>(ctx: &FieldContext<I>, list: &[IndecRecord<I>]) -> Result<Vec<(usize, usize)>> {
    let mut by_norm: HashMap<I, Vec<usize>> = HashMap::new();
    for (i, r) in list.iter().enumerate() {
        by_norm.entry(r.norm_abs.clone()).or_default().push(i);
    }
    let mut out = Vec::new();
    for idx in by_norm.values() {
        for (k, &i) in idx.iter().enumerate() {
            for &j in &idx[k + 1..] {
                if associated(ctx, &list[i].elem, &list[j].elem)? {
                    out.push((i.min(j), i.max(j)));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub kind: String,
    pub integral: [String; 3],
    pub detail: String,
}

fn coords_str<I: Int>(c: &[I; 3]) -> [String; 3] {
    std::array::from_fn(|i| c[i].to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessRow {
    pub integral: [String; 3],
    pub region: Region,
    pub beta: [String; 3],
    pub gamma: [String; 3],
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub a: i64,
    pub expected_count: i64,
    pub records: usize,
    pub candidates: usize,
    pub oracle_indecomposable: usize,
    pub oracle_decomposable: usize,
    pub associated_duplicates: usize,
    pub listed_witnesses_checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub witnesses: Vec<WitnessRow>,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Default largest a accepted by [`verify_classification`] without an explicit override.
pub const DEFAULT_MAX_A_ORACLE: i64 = 48;

pub type Progress<'a> = Option<&'a (dyn Fn(&str) + Sync)>;

/// Checks the list against the oracle over every lattice candidate of both parallelepipeds.
pub fn verify_classification<I: Int>(ctx: &FieldContext<I>, max_a: i64, progress: Progress<'_>) -> Result<VerificationReport> {
    require_family(ctx)?;
    let a = ctx.a();
    if a > max_a {
        return Err(Error::InvalidParameter(format!("a = {a} exceeds the oracle cap {max_a}")));
    }
    let oracle = Oracle::new(ctx)?;
    let records = generate_theorem_list(ctx)?;
    let say = |m: &str| {
        if let Some(p) = progress {
            p(m)
        }
    };
    let mut mismatches = Vec::new();

    say(&format!("a = {a}: checking {} listed elements", records.len()));
    let rec_results: Vec<Result<bool>> = records.par_iter().map(|r| oracle.is_indecomposable(ctx, &r.elem)).collect();
    for (r, res) in records.iter().zip(rec_results) {
        if !res? {
            mismatches.push(Mismatch {
                kind: "listed element decomposes".into(),
                integral: coords_str(&r.integral),
                detail: r.family.to_string(),
            });
        }
    }

    let candidates = lattice::all_candidates(ctx)?;
    say(&format!("a = {a}: running the oracle on {} candidates", candidates.len()));
    let results: Vec<Result<Option<Decomposition<I>>>> =
        candidates.par_iter().map(|c| oracle.decomposition(ctx, &c.elem)).collect();

    let matcher = Matcher::new(ctx, records.iter().map(|r| r.elem.clone()).collect());
    let mut hit = vec![false; records.len()];
    hit[0] = true;
    let (mut indec, mut dec, mut dups) = (0, 0, 0);
    let mut witnesses = Vec::new();
    for (c, res) in candidates.iter().zip(results) {
        let found = matcher.find(ctx, &c.elem)?;
        match res? {
            None => {
                indec += 1;
                match found {
                    Some((i, exact)) => {
                        if hit[i] || !exact {
                            dups += 1;
                        }
                        hit[i] = true;
                    }
                    None => mismatches.push(Mismatch {
                        kind: "unlisted indecomposable".into(),
                        integral: coords_str(&c.integral),
                        detail: c.region.to_string(),
                    }),
                }
            }
            Some(d) => {
                dec += 1;
                if let Some((i, _)) = found {
                    mismatches.push(Mismatch {
                        kind: "listed element decomposes".into(),
                        integral: coords_str(&c.integral),
                        detail: records[i].family.to_string(),
                    });
                }
                witnesses.push(WitnessRow {
                    integral: coords_str(&c.integral),
                    region: c.region,
                    beta: coords_str(&d.beta_integral),
                    gamma: coords_str(&d.gamma_integral),
                });
            }
        }
    }
    for (r, h) in records.iter().zip(&hit) {
        if !h {
            mismatches.push(Mismatch {
                kind: "listed element not found among candidates".into(),
                integral: coords_str(&r.integral),
                detail: r.family.to_string(),
            });
        }
    }

    let listed = check_listed_decompositions(ctx)?;
    for f in &listed.failures {
        mismatches.push(Mismatch { kind: "listed decomposition fails".into(), integral: [f.s.to_string(), f.v.to_string(), f.r.to_string()], detail: f.label.clone() });
    }
    say(&format!("a = {a}: {indec} indecomposable, {dec} decomposable candidates"));
    Ok(VerificationReport {
        a,
        expected_count: theorem_count(a),
        records: records.len(),
        candidates: candidates.len(),
        oracle_indecomposable: indec,
        oracle_decomposable: dec,
        associated_duplicates: dups,
        listed_witnesses_checked: listed.checked,
        mismatches,
        witnesses,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ListedWitnessFailure {
    pub label: String,
    pub s: i64,
    pub v: i64,
    pub r: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ListedWitnessReport {
    pub checked: usize,
    pub failures: Vec<ListedWitnessFailure>,
}

/// Index sets (s, v, r) of the displayed decompositions with their two summands.
type Summands<'a, I> = Box<dyn Fn(i64, i64, i64) -> Result<(Option<FieldElement<I>>, FieldElement<I>, FieldElement<I>)> + 'a>;

/// Checks every displayed decomposition α = β + γ of the s = 0, 1, 2 cases: α matches the
/// closed-form point and both summands are totally positive integers.
pub fn check_listed_decompositions<I: Int>(ctx: &FieldContext<I>) -> Result<ListedWitnessReport> {
    require_family(ctx)?;
    let a = ctx.a();
    let n = a / 3;
    let g3 = ctx.classification().basis.elements::<I>()[2].clone();
    let e = {
        let g3 = g3.clone();
        move |c0: i64, c1: i64, c2: i64, k: i64| &FieldElement::<I>::from_ints(c0, c1, c2) - &g3.scale_int(k)
    };
    let al = |s: i64, v: i64, r: i64| alpha(ctx, s, v, r);
    let w = |v: i64, r: i64| v * (a + 2) + r;

    let mut sets: Vec<(&str, i64, Vec<(i64, i64)>)> = Vec::new();
    let rect = |vlo: i64, vhi: i64, rlo: &dyn Fn(i64) -> i64, rhi: &dyn Fn(i64) -> i64| -> Vec<(i64, i64)> {
        (vlo..=vhi).flat_map(|v| (rlo(v)..=rhi(v)).map(move |r| (v, r))).collect()
    };
    sets.push(("s0:v<N,N+1<=r<=2N-v", 0, rect(0, n - 1, &|_| n + 1, &|v| 2 * n - v)));
    sets.push(("s0:v=0,2N+1<=r<=a", 0, rect(0, 0, &|_| 2 * n + 1, &|_| a)));
    let mut c = rect(1, n - 1, &|v| v + 1, &|_| n);
    c.push((n, n + 1));
    sets.push(("s0:v+1<=r<=N", 0, c));
    sets.push(("s0:2N-v+1<=r<=a-2v", 0, rect(1, n - 1, &|v| 2 * n - v + 1, &|v| a - 2 * v)));
    sets.push(("s1:v=0,1<=r<=N", 1, rect(0, 0, &|_| 1, &|_| n)));
    let mut b = rect(1, 2 * n - 1, &|_| 1, &|v| n.min(2 * n - v));
    b.extend(rect(1, 2 * n, &|_| 0, &|_| 0));
    sets.push(("s1:R1,R2,R3", 1, b));
    let mut c = rect(n + 1, 2 * n, &|v| 2 * n - v + 1, &|_| n);
    c.extend(rect(2 * n + 1, a, &|_| 1, &|v| a - v + 1));
    sets.push(("s1:upper", 1, c));
    sets.push(("s1:a-v+2<=r", 1, rect(1, 2 * n - 1, &|v| a - v + 2, &|v| (a + 1).min(4 * n - v + 1))));
    sets.push(("s2:r<=N-v-1", 2, rect(1, n - 1, &|_| 0, &|v| n - v - 1)));
    let mut b = rect(0, n - 1, &|v| (n - v).max(1), &|_| 2 * n);
    b.extend(rect(n, a, &|_| 1, &|v| a + 1 - v));
    sets.push(("s2:1+rho^2-2g3", 2, b));
    sets.push(("s2:S8", 2, rect(n, a + 1, &|_| 0, &|_| 0)));
    sets.push(("s2:S10,S11", 2, rect(0, n - 1, &|v| a - v + 1, &|_| a + 1)));
    sets.push(("s2:S13", 2, rect(2 * n + 1, a, &|v| 4 * n + 2 - v, &|_| 2 * n + 1)));

    let a20 = al(2, 0, 0)?;
    let a1_0_2n = al(1, 0, 2 * n)?;
    let gens: Vec<Summands<'_, I>> = vec![
        {
            let g3 = g3.clone();
            Box::new(move |s, v, r| {
                let t = alpha(ctx, s, v, r)?;
                Ok((None, g3.clone(), &t - &g3))
            })
        },
        {
            let e = e.clone();
            Box::new(move |_s, _v, r| Ok((None, e(0, -2 * n, 1, 1), e(1, -(r - 2 * n - 1), 1, 2))))
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, r| Ok((None, e(0, -(n + 1), 1, 1), e(-(v - 1), -(w(v, r) - n - 2), v + 1, 2))))
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, r| Ok((None, e(0, -2 * n, 1, 1), e(-(v - 1), -(w(v, r) - 2 * n - 1), v + 1, 2))))
        },
        {
            let e = e.clone();
            let a20 = a20.clone();
            Box::new(move |_s, v, r| Ok((None, a20.clone(), e(-(v - 1), -(w(v, r) - 1), v + 1, 2))))
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, r| Ok((None, e(0, -2 * n, 1, 1), e(-(v - 1), -((v - 1) * (a + 2) + r + n + 2), v, 0))))
        },
        {
            let e = e.clone();
            let a20 = a20.clone();
            Box::new(move |_s, v, r| {
                Ok((Some(e(-(v - 1), -w(v, r), v + 2, 1)), a20.clone(), e(-(v - 1), -(w(v, r) - 1), v + 2, 2)))
            })
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, r| {
                Ok((Some(e(-v, -w(v, r), v + 2, 1)), e(0, -(n + 1), 1, 1), e(-v, -(w(v, r) - n - 1), v + 1, 0)))
            })
        },
        {
            let e = e.clone();
            let a1 = a1_0_2n.clone();
            Box::new(move |_s, v, r| Ok((None, a1.clone(), e(-(v - 1), -(w(v, r) - 2 * n), v, 1))))
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, r| Ok((None, e(1, 0, 1, 2), e(-v, -w(v, r), v + 1, 0))))
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, _r| Ok((None, e(0, -(n + 1), 1, 1), e(-(v - 1), -((v - 1) * (a + 2) + 2 * n + 1), v + 1, 1))))
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, r| {
                Ok((Some(e(-v, -w(v, r), v + 2, 2)), e(0, -(v + r - 2 * n), 1, 1), e(-v, -(v * (a + 2) + 2 * n - v), v + 1, 1)))
            })
        },
        {
            let e = e.clone();
            Box::new(move |_s, v, r| Ok((Some(e(-(v - 1), -w(v, r), v + 3, 2)), e(1, 0, 1, 2), e(-v, -w(v, r), v + 2, 0))))
        },
    ];

    let mut checked = 0;
    let mut failures = Vec::new();
    for ((label, s, pts), gen) in sets.into_iter().zip(gens.iter()) {
        for (v, r) in pts {
            checked += 1;
            let target = al(s, v, r)?;
            let (shown, beta, gamma) = gen(s, v, r)?;
            let ok = shown.as_ref().is_none_or(|x| *x == target)
                && &beta + &gamma == target
                && ctx.is_algebraic_integer(&beta)
                && ctx.is_algebraic_integer(&gamma)
                && ctx.is_totally_positive(&beta)
                && ctx.is_totally_positive(&gamma);
            if !ok {
                failures.push(ListedWitnessFailure { label: label.to_string(), s, v, r });
            }
        }
    }
    Ok(ListedWitnessReport { checked, failures })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormExtremes<I: Int> {
    pub a: i64,
    pub min_nonrational: I,
    pub max_indec: I,
    pub argmin: [I; 3],
    pub argmin_family: Family,
    pub argmax: [I; 3],
    pub argmax_family: Family,
    #[serde(serialize_with = "crate::int::serialize_rat")]
    pub expected_min: Rat<I>,
    #[serde(serialize_with = "crate::int::serialize_rat")]
    pub expected_max: Rat<I>,
    pub matches: bool,
}

/// Closed-form extremes: Δ/27 and (2a³+9a²+27a+27)/27 for a ∈ {21, 30, 48}, otherwise 2a+3 and Δ²/729.
pub fn expected_norm_extremes<I: Int>(a: i64) -> (Rat<I>, Rat<I>) {
    let r = |n: i128, d: i128| Rat::new(from_i128::<I>(n), from_i128::<I>(d));
    let (ai, delta) = (a as i128, (a * a + 3 * a + 9) as i128);
    if matches!(a, 21 | 30 | 48) {
        (r(delta, 27), r(2 * ai * ai * ai + 9 * ai * ai + 27 * ai + 27, 27))
    } else {
        (r(2 * ai + 3, 1), r(delta * delta, 729))
    }
}

fn from_i128<I: Int>(n: i128) -> I {
    I::from_bigint(&num_bigint::BigInt::from(n)).expect("value fits the scalar type")
}

pub fn norm_extremes<I: Int>(ctx: &FieldContext<I>) -> Result<NormExtremes<I>> {
    let list = generate_theorem_list(ctx)?;
    let min = list
        .iter()
        .filter(|r| r.family != Family::Unit1)
        .min_by(|x, y| x.norm_abs.cmp(&y.norm_abs).then(x.integral.cmp(&y.integral)))
        .ok_or_else(|| Error::Internal("empty list".into()))?;
    let max = list
        .iter()
        .max_by(|x, y| x.norm_abs.cmp(&y.norm_abs).then(y.integral.cmp(&x.integral)))
        .ok_or_else(|| Error::Internal("empty list".into()))?;
    let (emin, emax) = expected_norm_extremes::<I>(ctx.a());
    let matches = Rat::from_integer(min.norm_abs.clone()) == emin && Rat::from_integer(max.norm_abs.clone()) == emax;
    Ok(NormExtremes {
        a: ctx.a(),
        min_nonrational: min.norm_abs.clone(),
        max_indec: max.norm_abs.clone(),
        argmin: min.integral.clone(),
        argmin_family: min.family,
        argmax: max.integral.clone(),
        argmax_family: max.family,
        expected_min: emin,
        expected_max: emax,
        matches,
    })
}

/// One element of the a = 41 list with its item number and stated minimal trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A41Item {
    pub item: u8,
    pub integral: [i64; 3],
    pub min_trace: i64,
}

/// The elements of items (1)–(14) for a = 41, in g-coordinates over B₇(4,3).
pub fn a41_items() -> Vec<A41Item> {
    let mut out = Vec::new();
    let mut push = |item: u8, c: [i64; 3], t: i64| out.push(A41Item { item, integral: c, min_trace: t });
    for v in 0..=5 {
        for w in 46 * v + 14..=45 * v + 19 {
            push(1, [-(5 * v + 2), -w, 7 * v + 3], 1);
        }
    }
    for v in 1..=6 {
        push(2, [0, -v, 1], 1);
    }
    for v in 1..=12 {
        push(3, [-1, -v, 2], 1);
    }
    for v in 0..=5 {
        push(4, [-(5 * v + 125), -(45 * v + 1132), 7 * v + 176], 1);
    }
    for v in 0..=11 {
        push(5, [-(5 * v + 31), -(45 * v + 283), 7 * v + 44], 1);
    }
    for v in 0..=5 {
        push(6, [-(5 * v + 5), -(46 * v + 22), 7 * v + 8], 1);
    }
    for v in 0..=11 {
        push(7, [-(5 * v + 6), -(46 * v + 41), 7 * v + 9], 1);
    }
    for v in 9..=14 {
        push(8, [-3, -v, 5], 2);
    }
    for v in 0..=5 {
        push(9, [-(5 * v + 3), -(45 * v + 32), 7 * v + 5], 2);
    }
    for v in 0..=5 {
        push(10, [-(5 * v + 93), -(46 * v + 837), 7 * v + 131], 2);
    }
    for c in [[-4, -4, 7], [-4, -45, 7], [-209, -1890, 294]] {
        push(11, c, 2);
    }
    for v in 5..=9 {
        push(12, [-4, -v, 7], 3);
    }
    for v in 1..=5 {
        push(13, [-(5 * v + 4), -(45 * v + 45), 7 * v + 7], 3);
    }
    for v in 0..=4 {
        push(14, [-(5 * v + 184), -(46 * v + 1660), 7 * v + 259], 3);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct A41ItemReport {
    pub item: u8,
    pub elements: usize,
    pub found: usize,
    pub min_trace: i64,
    pub traces_ok: usize,
    /// Distinct codifferent witnesses (φ-coordinates) attaining the minimal traces.
    pub witnesses: Vec<[i64; 3]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct A41Report {
    pub candidates: usize,
    pub oracle_indecomposable: usize,
    pub listed: usize,
    pub items: Vec<A41ItemReport>,
    pub mismatches: Vec<Mismatch>,
}

impl A41Report {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Reproduces the a = 41 list: enumeration of both parallelepipeds, the oracle, and certified minimal traces.
pub fn verify_a41<I: Int>(ctx: &FieldContext<I>, certify: bool, progress: Progress<'_>) -> Result<A41Report> {
    if ctx.a() != 41 {
        return Err(Error::InvalidParameter(format!("expected a = 41, got {}", ctx.a())));
    }
    let say = |m: &str| {
        if let Some(p) = progress {
            p(m)
        }
    };
    let basis = ctx.classification().basis;
    let oracle = Oracle::new(ctx)?;
    let mut candidates = lattice::first_parallelepiped_points(ctx)?;
    candidates.extend(lattice::second_parallelepiped_points_bruteforce(ctx)?);
    say(&format!("a = 41: running the oracle on {} candidates", candidates.len()));
    let flags: Vec<Result<bool>> = candidates.par_iter().map(|c| oracle.is_indecomposable(ctx, &c.elem)).collect();
    let mut passing: Vec<&LatticeCandidate<I>> = Vec::new();
    for (c, f) in candidates.iter().zip(flags) {
        if f? {
            passing.push(c);
        }
    }

    let items = a41_items();
    let elems: Vec<FieldElement<I>> = items.iter().map(|it| basis.from_integral(&to_i::<I>(it.integral))).collect();
    let matcher = Matcher::new(ctx, elems.clone());
    let mut mismatches = Vec::new();
    let mut hit = vec![false; items.len()];
    for c in &passing {
        match matcher.find(ctx, &c.elem)? {
            Some((i, _)) => hit[i] = true,
            None => mismatches.push(Mismatch {
                kind: "unlisted indecomposable".into(),
                integral: coords_str(&c.integral),
                detail: String::new(),
            }),
        }
    }
    say("a = 41: computing minimal traces");
    let traces: Vec<Result<(i64, [i64; 3])>> = elems
        .par_iter()
        .map(|x| {
            let mt = oracle.codifferent.minimal_trace(ctx, x, certify)?;
            let w = mt.witness.dual_coords.clone().map(|u| u.to_i64().expect("small"));
            Ok((mt.value, w))
        })
        .collect();
    let mut reports: Vec<A41ItemReport> = Vec::new();
    for ((it, h), t) in items.iter().zip(&hit).zip(traces) {
        let (value, w) = t?;
        if !h {
            mismatches.push(Mismatch {
                kind: "listed element not found".into(),
                integral: coords_str(&it.integral),
                detail: format!("item {}", it.item),
            });
        }
        if value != it.min_trace {
            mismatches.push(Mismatch {
                kind: "minimal trace differs".into(),
                integral: coords_str(&it.integral),
                detail: format!("item {}: found {value}, listed {}", it.item, it.min_trace),
            });
        }
        if reports.last().is_none_or(|r| r.item != it.item) {
            reports.push(A41ItemReport { item: it.item, elements: 0, found: 0, min_trace: it.min_trace, traces_ok: 0, witnesses: Vec::new() });
        }
        let r = reports.last_mut().expect("pushed above");
        r.elements += 1;
        r.found += usize::from(*h);
        r.traces_ok += usize::from(value == it.min_trace);
        if !r.witnesses.contains(&w) {
            r.witnesses.push(w);
        }
    }
    Ok(A41Report { candidates: candidates.len(), oracle_indecomposable: passing.len(), listed: items.len() + 1, items: reports, mismatches })
}

/// Representatives a used for each row of the first-parallelepiped table.
pub const FIRST_PAR_REPRESENTATIVES: [(i64, i64, i64); 8] =
    [(7, 5, 103), (7, 41, 41), (13, 66, 235), (13, 100, 100), (19, 154, 154), (19, 204, 204), (31, 356, 356), (31, 602, 602)];

/// Indecomposables of the first parallelepiped as listed for each residue class.
pub fn first_par_expected(class: i64) -> Vec<[i64; 3]> {
    match class {
        66 => vec![[0, -1, 2], [-1, -3, 6], [-1, -3, 5]],
        100 => vec![[-1, -1, 2], [-3, -2, 5], [-4, -3, 6]],
        154 => vec![[-2, -1, 4], [-3, -1, 6], [-5, -2, 9]],
        204 => vec![[-1, -3, 4], [-2, -5, 6], [-3, -7, 9]],
        356 => vec![[-2, -2, 3], [-10, -8, 13], [-12, -10, 15], [-6, -5, 8], [-7, -6, 9], [-11, -9, 14]],
        602 => vec![[0, -1, 3], [-2, -5, 15], [-2, -5, 13], [-1, -3, 9], [-1, -3, 8], [-2, -5, 14]],
        _ => Vec::new(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstParRow {
    pub p: i64,
    pub class: i64,
    pub a: i64,
    pub k: i64,
    pub l: i64,
    pub indecomposables: Vec<[i64; 3]>,
    pub min_traces: Vec<i64>,
    pub matches: bool,
}

/// First-parallelepiped indecomposables for both residue classes of a prime p ∈ {7, 13, 19, 31}.
pub fn first_par_indec_table(p: i64) -> Result<Vec<FirstParRow>> {
    let reps: Vec<_> = FIRST_PAR_REPRESENTATIVES.iter().filter(|r| r.0 == p).collect();
    if reps.is_empty() {
        return Err(Error::InvalidParameter(format!("no table for p = {p}; supported: 7, 13, 19, 31")));
    }
    let mut rows = Vec::new();
    for &&(p, class, a) in &reps {
        let ctx = FieldContext::<i128>::new(a)?;
        let basis = ctx.classification().basis;
        if basis.p != p {
            return Err(Error::UnsupportedBasis { a, delta: ctx.classification().module_index });
        }
        let oracle = Oracle::new(&ctx)?;
        let mut found = Vec::new();
        let mut traces = Vec::new();
        for c in lattice::first_parallelepiped_points(&ctx)? {
            if oracle.is_indecomposable(&ctx, &c.elem)? {
                found.push(c.integral.map(|x| x as i64));
                traces.push(oracle.codifferent.minimal_trace(&ctx, &c.elem, true)?.value);
            }
        }
        let mut want = first_par_expected(class);
        want.sort();
        let mut got = found.clone();
        got.sort();
        rows.push(FirstParRow { p, class, a, k: basis.k, l: basis.l, indecomposables: found, min_traces: traces, matches: got == want });
    }
    Ok(rows)
}
