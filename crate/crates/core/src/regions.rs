//! Region tables for the second-parallelepiped points of the p = 3 family.
//!
//! Every bound is affine in N = a/3 and v. A point α_s(v,r) of a region equals
//! −(v − c₀) − wρ + (v + c₂)ρ² − s·g₃ with the region's offsets (c₀, c₂).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    P(u8),
    R(u8),
    S(u8),
    FirstPar,
    Unclassified,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::P(i) => write!(f, "P{i}"),
            Region::R(i) => write!(f, "R{i}"),
            Region::S(i) => write!(f, "S{i}"),
            Region::FirstPar => write!(f, "FirstPar"),
            Region::Unclassified => write!(f, "-"),
        }
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// c_n·N + c_v·v + c.
#[derive(Clone, Copy, Debug)]
struct Lin(i64, i64, i64);

impl Lin {
    fn eval(self, n: i64, v: i64) -> i64 {
        self.0 * n + self.1 * v + self.2
    }
}

struct Row {
    region: Region,
    v: (Lin, Lin),
    r: (Lin, Lin),
    offsets: (i64, i64),
}

const fn k(c: i64) -> Lin {
    Lin(0, 0, c)
}

const fn n(cn: i64, c: i64) -> Lin {
    Lin(cn, 0, c)
}

const fn nv(cn: i64, c: i64) -> Lin {
    Lin(cn, -1, c)
}

macro_rules! row {
    ($reg:expr, [$vlo:expr, $vhi:expr], [$rlo:expr, $rhi:expr], $off:expr) => {
        Row { region: $reg, v: ($vlo, $vhi), r: ($rlo, $rhi), offsets: $off }
    };
}

fn table(s: i64) -> Vec<Row> {
    use Region::{P, R, S};
    match s {
        0 => vec![
            row!(P(1), [k(0), n(3, -1)], [k(1), nv(3, 0)], (0, 1)),
            row!(P(2), [k(0), n(3, 0)], [nv(3, 1), nv(3, 1)], (0, 1)),
            row!(P(3), [k(0), n(3, 0)], [nv(3, 2), n(3, 1)], (0, 2)),
            row!(P(4), [k(0), n(3, 1)], [k(0), k(0)], (1, 1)),
        ],
        1 => vec![
            row!(R(1), [k(0), n(1, 0)], [k(1), n(1, 0)], (1, 1)),
            row!(R(2), [n(1, 1), n(2, -1)], [k(1), nv(2, 0)], (1, 1)),
            row!(R(3), [k(0), n(2, 1)], [k(0), k(0)], (1, 1)),
            row!(R(4), [k(0), n(1, -1)], [n(1, 1), nv(2, 0)], (0, 1)),
            row!(R(5), [n(1, 1), n(2, 0)], [nv(2, 1), n(1, 0)], (1, 2)),
            row!(R(6), [n(2, 1), n(3, -1)], [k(1), nv(3, 0)], (1, 2)),
            row!(R(7), [n(2, 1), n(3, 0)], [nv(3, 1), nv(3, 1)], (1, 2)),
            row!(R(8), [n(2, 1), n(3, 0)], [nv(3, 2), n(1, 1)], (1, 2)),
            row!(R(9), [n(2, 2), n(3, 1)], [k(0), k(0)], (1, 2)),
            row!(R(10), [k(0), n(1, 0)], [nv(2, 1), nv(3, 0)], (0, 2)),
            row!(R(11), [n(1, 1), n(2, -1)], [n(1, 1), nv(3, 0)], (0, 2)),
            row!(R(12), [k(0), n(2, 0)], [nv(3, 1), nv(3, 1)], (0, 2)),
            row!(R(13), [k(1), n(2, 0)], [nv(3, 2), n(3, 1)], (0, 2)),
            row!(R(14), [n(2, 1), n(3, 0)], [n(1, 2), nv(5, 2)], (0, 2)),
            row!(R(15), [n(2, 2), n(3, 0)], [nv(5, 3), n(3, 1)], (0, 3)),
        ],
        _ => vec![
            row!(S(1), [k(0), n(1, -2)], [k(1), nv(1, -1)], (1, 1)),
            row!(S(2), [k(0), n(1, -1)], [k(0), k(0)], (1, 1)),
            row!(S(3), [k(0), n(1, -1)], [nv(1, 0), n(2, 0)], (1, 2)),
            row!(S(4), [n(1, 0), n(3, -1)], [k(1), nv(3, 0)], (1, 2)),
            row!(S(5), [n(1, 0), n(3, 0)], [nv(3, 1), nv(3, 1)], (1, 2)),
            row!(S(6), [n(1, 1), n(2, 0)], [nv(3, 2), n(2, 1)], (1, 2)),
            row!(S(7), [n(2, 1), n(3, 0)], [nv(3, 2), nv(4, 1)], (1, 2)),
            row!(S(8), [n(1, 0), n(3, 1)], [k(0), k(0)], (1, 2)),
            row!(S(9), [k(0), n(1, -1)], [n(2, 1), nv(3, 0)], (0, 2)),
            row!(S(10), [k(0), n(1, -1)], [nv(3, 1), nv(3, 1)], (0, 2)),
            row!(S(11), [k(1), n(1, -1)], [nv(3, 2), n(3, 1)], (0, 2)),
            row!(S(12), [n(1, 0), n(2, -1)], [n(2, 2), nv(4, 1)], (0, 2)),
            row!(S(13), [n(2, 1), n(3, 0)], [nv(4, 2), n(2, 1)], (1, 3)),
            row!(S(14), [n(1, 1), n(2, 0)], [nv(4, 2), n(3, 1)], (0, 3)),
            row!(S(15), [n(2, 1), n(3, 0)], [n(2, 2), n(3, 1)], (0, 3)),
        ],
    }
}

fn contains(row: &Row, nn: i64, v: i64, r: i64) -> bool {
    let (vlo, vhi) = (row.v.0.eval(nn, 0), row.v.1.eval(nn, 0));
    if v < vlo || v > vhi {
        return false;
    }
    r >= row.r.0.eval(nn, v) && r <= row.r.1.eval(nn, v)
}

fn third(a: i64) -> Result<i64> {
    if a <= 0 || a % 3 != 0 {
        return Err(Error::InvalidParameter(format!("region tables need 3 | a, got a = {a}")));
    }
    Ok(a / 3)
}

/// All table rows containing (v, r) for the given s.
pub fn regions_containing(a: i64, s: i64, v: i64, r: i64) -> Result<Vec<Region>> {
    let nn = third(a)?;
    Ok(table(s).iter().filter(|row| contains(row, nn, v, r)).map(|row| row.region).collect())
}

/// The unique region of α_s(v, r).
pub fn region_of(a: i64, s: i64, v: i64, r: i64) -> Result<Region> {
    match regions_containing(a, s, v, r)?.as_slice() {
        [reg] => Ok(*reg),
        _ => Err(Error::NoRegion { s, v, r }),
    }
}

/// Offsets (c₀, c₂) of the point formula attached to a region.
pub fn region_offsets(region: Region) -> Option<(i64, i64)> {
    let s = match region {
        Region::P(_) => 0,
        Region::R(_) => 1,
        Region::S(_) => 2,
        _ => return None,
    };
    table(s).into_iter().find(|row| row.region == region).map(|row| row.offsets)
}

/// The (v, r) index points of a region.
pub fn region_points(a: i64, region: Region) -> Result<Vec<(i64, i64)>> {
    let nn = third(a)?;
    let s = match region {
        Region::P(_) => 0,
        Region::R(_) => 1,
        Region::S(_) => 2,
        _ => return Ok(Vec::new()),
    };
    let rows = table(s);
    let row = rows.iter().find(|row| row.region == region).ok_or(Error::NoRegion { s, v: -1, r: -1 })?;
    let mut out = Vec::new();
    for v in row.v.0.eval(nn, 0)..=row.v.1.eval(nn, 0) {
        for r in row.r.0.eval(nn, v)..=row.r.1.eval(nn, v) {
            out.push((v, r));
        }
    }
    Ok(out)
}

pub fn regions_for(s: i64) -> Vec<Region> {
    table(s).into_iter().map(|row| row.region).collect()
}

/// Admissible index set: 0 ≤ v, r ≤ a+1, r = 0 when v = a+1, and (v, r) ≠ (0, 0) when s = 0.
pub fn admissible(a: i64, s: i64, v: i64, r: i64) -> bool {
    (0..=a + 1).contains(&v) && (0..=a + 1).contains(&r) && !(v == a + 1 && r != 0) && !(s == 0 && v == 0 && r == 0)
}
