//! Enumeration of lattice points whose embeddings lie in a box.
//!
//! A lattice with basis e₁, e₂, e₃ embeds as y = Bx with B[i][j] = σᵢ(eⱼ). Given the dual
//! rows C[j][i] = σᵢ(e*ⱼ) (so that x = Cy), every x with y in the box is produced by
//! scanning x₃ over its projected range, x₂ over the pairwise strip eliminations and x₁
//! over the row intervals. The result is a superset; callers confirm each point exactly.

use rayon::prelude::*;

use crate::enclosure::Iv;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::int::Int;

#[derive(Clone, Debug)]
pub struct Embedding {
    pub b: [[Iv; 3]; 3],
    pub c: [[Iv; 3]; 3],
}

impl Embedding {
    /// Embedding of the lattice spanned by `basis`, with `dual` its trace-dual basis.
    pub fn new<I: Int>(ctx: &FieldContext<I>, basis: &[FieldElement<I>; 3], dual: &[FieldElement<I>; 3]) -> Self {
        let mut b = [[Iv::point(0.0); 3]; 3];
        let mut c = [[Iv::point(0.0); 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i][j] = ctx.conjugate_iv(&basis[j], i);
                c[j][i] = ctx.conjugate_iv(&dual[j], i);
            }
        }
        Embedding { b, c }
    }
}

fn range(iv: Iv) -> Result<Option<(i64, i64)>> {
    if iv.is_empty() {
        return Ok(None);
    }
    match iv.integer_range() {
        Some((lo, hi)) if lo > hi => Ok(None),
        Some(r) => Ok(Some(r)),
        None => Err(Error::Internal("unbounded scan range".into())),
    }
}

fn x2_range(e: &Embedding, y: &[Iv; 3], x3: i64) -> Result<Option<(i64, i64)>> {
    let x3 = Iv::point(x3 as f64);
    let rest: Vec<Iv> = (0..3).map(|i| y[i] - e.b[i][2] * x3).collect();
    let mut acc: Option<Iv> = None;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let det = e.b[j][0] * e.b[i][1] - e.b[i][0] * e.b[j][1];
        if !det.excludes_zero() {
            continue;
        }
        let strip = (e.b[j][0] * rest[i] - e.b[i][0] * rest[j]) / det;
        acc = Some(match acc {
            Some(a) => a.intersect(&strip),
            None => strip,
        });
    }
    match acc {
        Some(iv) => range(iv),
        None => Err(Error::Internal("degenerate embedding".into())),
    }
}

fn x1_range(e: &Embedding, y: &[Iv; 3], x2: i64, x3: i64) -> Result<Option<(i64, i64)>> {
    let (x2, x3) = (Iv::point(x2 as f64), Iv::point(x3 as f64));
    let mut acc: Option<Iv> = None;
    for i in 0..3 {
        if !e.b[i][0].excludes_zero() {
            continue;
        }
        let row = (y[i] - e.b[i][1] * x2 - e.b[i][2] * x3) / e.b[i][0];
        acc = Some(match acc {
            Some(a) => a.intersect(&row),
            None => row,
        });
    }
    match acc {
        Some(iv) => range(iv),
        None => Err(Error::Internal("degenerate embedding".into())),
    }
}

/// Range of x₃ over the box.
pub fn x3_range(e: &Embedding, y: &[Iv; 3]) -> Result<Option<(i64, i64)>> {
    let iv = e.c[2][0] * y[0] + e.c[2][1] * y[1] + e.c[2][2] * y[2];
    range(iv)
}

fn slice<T, F>(e: &Embedding, y: &[Iv; 3], x3: i64, f: &F) -> Result<Vec<T>>
where
    F: Fn([i64; 3]) -> Option<T>,
{
    let mut out = Vec::new();
    let Some((lo2, hi2)) = x2_range(e, y, x3)? else {
        return Ok(out);
    };
    for x2 in lo2..=hi2 {
        let Some((lo1, hi1)) = x1_range(e, y, x2, x3)? else {
            continue;
        };
        for x1 in lo1..=hi1 {
            if let Some(t) = f([x1, x2, x3]) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// All `f(x)` that are `Some`, over a superset of the box points, ordered by (x₃, x₂, x₁).
pub fn scan_filter_map<T, F>(e: &Embedding, y: &[Iv; 3], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn([i64; 3]) -> Option<T> + Sync,
{
    let Some((lo, hi)) = x3_range(e, y)? else {
        return Ok(Vec::new());
    };
    let parts: Vec<Result<Vec<T>>> = (lo..=hi).into_par_iter().map(|x3| slice(e, y, x3, &f)).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// The first `f(x)` that is `Some` in (x₃, x₂, x₁) order.
pub fn scan_find_first<T, F>(e: &Embedding, y: &[Iv; 3], f: F) -> Result<Option<T>>
where
    T: Send,
    F: Fn([i64; 3]) -> Option<T> + Sync,
{
    let Some((lo, hi)) = x3_range(e, y)? else {
        return Ok(None);
    };
    let found = (lo..=hi)
        .into_par_iter()
        .map(|x3| slice(e, y, x3, &f).map(|v| v.into_iter().next()))
        .find_map_first(|r| match r {
            Ok(Some(t)) => Some(Ok(t)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        });
    found.transpose()
}
