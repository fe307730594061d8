//! Pythagoras number witness and universal quadratic form rank bounds for the p = 3 family.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::enclosure::Iv;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::indecomposables::theorem_count;
use crate::int::{serialize_rat, Int, Rat};
use crate::scan::{scan_filter_map, Embedding};

type V3 = [i64; 3];

fn require_family<I: Int>(ctx: &FieldContext<I>) -> Result<()> {
    if ctx.classification().in_p3_family {
        Ok(())
    } else {
        Err(Error::NotInFamily { a: ctx.a(), reason: "needs the p = 3 family".into() })
    }
}

fn rat<I: Int>(n: i64, d: i64) -> Rat<I> {
    Rat::new(I::from_i64_exact(n), I::from_i64_exact(d))
}

fn integral<I: Int>(ctx: &FieldContext<I>, x: &FieldElement<I>) -> Result<V3> {
    let c = ctx.classification().basis.to_integral(x).ok_or(Error::NotIntegral)?;
    Ok(c.map(|v| v.to_i64().expect("coordinate fits in i64")))
}

/// The two non-rational square roots in the six-square form of γ.
pub fn gamma_roots<I: Int>(ctx: &FieldContext<I>) -> Result<[FieldElement<I>; 2]> {
    require_family(ctx)?;
    let a = ctx.a();
    let basis = ctx.classification().basis;
    let b = |c: V3| basis.from_integral(&c.map(I::from_i64_exact));
    Ok([b([(a + 6) / 3, a / 3, -1]), b([(5 * a + 3) / 9, (2 * a + 3) / 3, -2])])
}

/// γ = 1 + 1 + 1 + 4 + ω₁² + ω₂², checked against its power-basis form and trace.
pub fn build_gamma<I: Int>(ctx: &FieldContext<I>) -> Result<FieldElement<I>> {
    let a = ctx.a();
    let [w1, w2] = gamma_roots(ctx)?;
    let seven = FieldElement::rational(rat(7, 1));
    let sum = &(&seven + &ctx.square(&w1)) + &ctx.square(&w2);
    let power = FieldElement::new(rat(34 * a * a + 15 * a + 783, 81), rat(11 * a * a - 29 * a - 39, 27), rat(-(11 * a - 33), 27));
    if sum != power {
        return Err(Error::Internal(format!("the two forms of gamma differ: {sum} vs {power}")));
    }
    if ctx.trace(&sum) != rat(16 * a * a - 24 * a + 981, 27) {
        return Err(Error::Internal("trace of gamma differs from (16a²−24a+981)/27".into()));
    }
    Ok(sum)
}

/// All ω ≠ 0 up to sign with γ − ω² totally nonnegative.
pub fn squares_below<I: Int>(ctx: &FieldContext<I>, gamma: &FieldElement<I>) -> Result<Vec<FieldElement<I>>> {
    let c = ctx.classification();
    c.basis.require_supported(c.a, c.module_index)?;
    let basis = c.basis;
    let g = basis.elements::<I>();
    let cod = crate::codifferent::Codifferent::new(ctx)?;
    let emb = Embedding::new(ctx, &g, &cod.phi);
    let y: [Iv; 3] = std::array::from_fn(|i| {
        let s = ctx.conjugate_iv(gamma, i).sqrt();
        Iv::new(-s.hi, s.hi)
    });
    let found = scan_filter_map(&emb, &y, |x| {
        let lead = x.iter().rev().find(|&&v| v != 0)?;
        if *lead < 0 {
            return None;
        }
        let w = basis.from_integral(&x.map(I::from_i64_exact));
        let rest = gamma - &ctx.square(&w);
        ctx.is_totally_nonnegative(&rest).then_some(w)
    })?;
    Ok(found)
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareDecomposition<I: Int> {
    pub count: usize,
    /// The roots ω with γ = Σ ω².
    pub omegas: Vec<FieldElement<I>>,
}

struct Search<'a, I: Int> {
    ctx: &'a FieldContext<I>,
    sq: Vec<V3>,
    traces: Vec<Rat<I>>,
    pairs: HashMap<V3, Vec<(usize, usize)>>,
    failed: HashSet<(V3, usize, usize)>,
}

impl<'a, I: Int> Search<'a, I> {
    fn new(ctx: &'a FieldContext<I>, sq: Vec<V3>) -> Self {
        let basis = ctx.classification().basis;
        let traces = sq.iter().map(|s| ctx.trace(&basis.from_integral(&s.map(I::from_i64_exact)))).collect();
        let mut pairs: HashMap<V3, Vec<(usize, usize)>> = HashMap::new();
        for i in 0..sq.len() {
            for j in i..sq.len() {
                pairs.entry(add(sq[i], sq[j])).or_default().push((i, j));
            }
        }
        Search { ctx, sq, traces, pairs, failed: HashSet::new() }
    }

    fn nonneg(&self, x: V3) -> bool {
        let basis = self.ctx.classification().basis;
        self.ctx.is_totally_nonnegative(&basis.from_integral(&x.map(I::from_i64_exact)))
    }

    fn trace(&self, x: V3) -> Rat<I> {
        let basis = self.ctx.classification().basis;
        self.ctx.trace(&basis.from_integral(&x.map(I::from_i64_exact)))
    }

    /// Multisets of k squares (indices ≥ start, nondecreasing) summing to rem; stops after `limit`.
    fn solve(&mut self, rem: V3, k: usize, start: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        if k == 0 {
            if rem == [0, 0, 0] {
                out.push(prefix.clone());
            }
            return;
        }
        if k == 2 {
            if let Some(ps) = self.pairs.get(&rem) {
                for &(i, j) in ps {
                    if i >= start && out.len() < limit {
                        let mut v = prefix.clone();
                        v.extend([i, j]);
                        out.push(v);
                    }
                }
            }
            return;
        }
        if self.failed.contains(&(rem, k, start)) {
            return;
        }
        let before = out.len();
        let tr = self.trace(rem);
        let kk = Rat::from_integer(I::from_i64_exact(k as i64));
        for i in start..self.sq.len() {
            if self.traces[i].clone() * kk.clone() < tr {
                break;
            }
            let next = sub(rem, self.sq[i]);
            if !self.nonneg(next) {
                continue;
            }
            prefix.push(i);
            self.solve(next, k - 1, i, prefix, out, limit);
            prefix.pop();
            if out.len() >= limit {
                return;
            }
        }
        if out.len() == before {
            self.failed.insert((rem, k, start));
        }
    }
}

fn add(x: V3, y: V3) -> V3 {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2]]
}

fn sub(x: V3, y: V3) -> V3 {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2]]
}

/// Least k with γ a sum of k of the given squares, plus up to `limit` optimal decompositions
/// as index multisets into `omegas`.
pub fn min_squares_with_all<I: Int>(
    ctx: &FieldContext<I>,
    gamma: &FieldElement<I>,
    omegas: &[FieldElement<I>],
    max_k: usize,
    limit: usize,
) -> Result<(usize, Vec<Vec<usize>>)> {
    let target = integral(ctx, gamma)?;
    let mut sq: Vec<(Rat<I>, V3, usize)> = Vec::new();
    for (i, w) in omegas.iter().enumerate() {
        let s = ctx.square(w);
        sq.push((ctx.trace(&s), integral(ctx, &s)?, i));
    }
    sq.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    let order: Vec<usize> = sq.iter().map(|x| x.2).collect();
    let mut search = Search::new(ctx, sq.iter().map(|x| x.1).collect());
    for k in 1..=max_k {
        let mut out = Vec::new();
        search.solve(target, k, 0, &mut Vec::new(), &mut out, limit);
        if !out.is_empty() {
            let mut mapped: Vec<Vec<usize>> = out
                .into_iter()
                .map(|v| {
                    let mut m: Vec<usize> = v.into_iter().map(|i| order[i]).collect();
                    m.sort();
                    m
                })
                .collect();
            mapped.sort();
            mapped.dedup();
            return Ok((k, mapped));
        }
    }
    Err(Error::Internal(format!("no decomposition into at most {max_k} squares")))
}

pub fn min_squares_decomposition<I: Int>(
    ctx: &FieldContext<I>,
    gamma: &FieldElement<I>,
    omegas: &[FieldElement<I>],
) -> Result<SquareDecomposition<I>> {
    let (k, all) = min_squares_with_all(ctx, gamma, omegas, 8, 1)?;
    Ok(SquareDecomposition { count: k, omegas: all[0].iter().map(|&i| omegas[i].clone()).collect() })
}

/// Squares ρ²ρ′²(−g₁″ − (r+1)g₂″ + 2g₃″)² in g-coordinates, 5(a−3)/9 ≤ r ≤ 2a/3 − 1.
pub fn class5_squares(a: i64) -> Vec<V3> {
    let lo = crate::int::ceil_div(5 * (a - 3), 9);
    (lo..=2 * a / 3 - 1)
        .filter_map(|r| {
            let n1 = 15 - 8 * a + 36 * r + 9 * r * r;
            let n2 = 3 - 4 * a - 4 * a * a + (12 * a + 18) * r;
            let n3 = 4 * a - 3 - 12 * r;
            (n1 % 9 == 0 && n2 % 9 == 0 && n3 % 3 == 0).then_some([n1 / 9, n2 / 9, n3 / 3])
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PythagorasReport<I: Int> {
    pub a: i64,
    pub gamma: FieldElement<I>,
    pub gamma_integral: V3,
    #[serde(serialize_with = "serialize_rat")]
    pub gamma_trace: Rat<I>,
    pub gamma_below_a_squared: bool,
    pub squares_below: usize,
    pub min_squares: usize,
    pub decomposition: Vec<FieldElement<I>>,
    pub optimal_decompositions: usize,
    pub class5_in_every_optimal: bool,
    pub some_optimal_has_seven: bool,
    pub parity_isolates_class5: bool,
    /// Lower bound certified here combined with the known upper bound of 6 for cubic orders.
    pub pythagoras_number: Option<usize>,
}

/// Upper bound on the number of optimal decompositions enumerated for the structural checks.
pub const DECOMPOSITION_LIMIT: usize = 100_000;

pub fn pythagoras<I: Int>(ctx: &FieldContext<I>) -> Result<PythagorasReport<I>> {
    let a = ctx.a();
    let gamma = build_gamma(ctx)?;
    let a2 = FieldElement::rational(rat(a * a, 1));
    let below = ctx.is_totally_positive(&(&a2 - &gamma));
    let omegas = squares_below(ctx, &gamma)?;
    let (k, all) = min_squares_with_all(ctx, &gamma, &omegas, 8, DECOMPOSITION_LIMIT)?;
    let sq: Vec<V3> = omegas.iter().map(|w| integral(ctx, &ctx.square(w))).collect::<Result<_>>()?;
    let class5: HashSet<V3> = class5_squares(a).into_iter().collect();
    let class5_in_every_optimal = all.iter().all(|d| d.iter().filter(|&&i| class5.contains(&sq[i])).count() == 1);
    let some_optimal_has_seven = all.iter().any(|d| {
        let rational: Vec<&V3> = d.iter().map(|&i| &sq[i]).filter(|s| s[1] == 0 && s[2] == 0).collect();
        rational.len() == 4 && rational.iter().map(|s| s[0]).sum::<i64>() == 7
    });
    let idx = if a % 2 == 1 { 1 } else { 2 };
    let parity: HashSet<V3> = sq.iter().filter(|s| s[idx].rem_euclid(2) == 1).cloned().collect();
    let present5: HashSet<V3> = sq.iter().filter(|s| class5.contains(*s)).cloned().collect();
    let parity_isolates_class5 = parity == present5;
    Ok(PythagorasReport {
        a,
        gamma_integral: integral(ctx, &gamma)?,
        gamma_trace: ctx.trace(&gamma),
        gamma: gamma.clone(),
        gamma_below_a_squared: below,
        squares_below: omegas.len(),
        min_squares: k,
        decomposition: all[0].iter().map(|&i| omegas[i].clone()).collect(),
        optimal_decompositions: all.len(),
        class5_in_every_optimal,
        some_optimal_has_seven,
        parity_isolates_class5,
        pythagoras_number: (k >= 6).then_some(6),
    })
}

/// √radicand / denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Surd {
    pub radicand: i64,
    pub denominator: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct UqfBounds {
    pub a: i64,
    pub s_size: i64,
    pub n_trace1: i64,
    pub diag_upper: i64,
    #[serde(serialize_with = "serialize_rat")]
    pub classical_lower: Rat<i64>,
    pub nonclassical_lower: Option<Surd>,
}

/// Threshold on n for the non-classical bound.
pub const NONCLASSICAL_MIN_N: i64 = 240;

pub fn uqf_bounds<I: Int>(ctx: &FieldContext<I>) -> Result<UqfBounds> {
    require_family(ctx)?;
    let a = ctx.a();
    let s_size = theorem_count(a);
    let n = (a * a + 3 * a) / 18;
    Ok(UqfBounds {
        a,
        s_size,
        n_trace1: n,
        diag_upper: 6 * s_size,
        classical_lower: Rat::new(n, 3),
        nonclassical_lower: (n >= NONCLASSICAL_MIN_N).then_some(Surd { radicand: n, denominator: 3 }),
    })
}

/// √(a²+3a)/(9√2) = √n/3 compared after squaring: (a²+3a)/162 = n/9.
pub fn nonclassical_matches_closed_form(b: &UqfBounds) -> bool {
    match b.nonclassical_lower {
        Some(s) => Rat::new(b.a * b.a + 3 * b.a, 162) == Rat::new(s.radicand, s.denominator * s.denominator),
        None => b.a <= 64,
    }
}
