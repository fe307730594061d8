//! Certified enclosures: exact rational intervals for the roots of the defining
//! polynomial and outward-rounded floating intervals for search-box bounds.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Closed interval with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        RatInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RatInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let (x, y) = (&self.lo * c, &self.hi * c);
        if x <= y {
            RatInterval::new(x, y)
        } else {
            RatInterval::new(y, x)
        }
    }

    pub fn shift(&self, c: &BigRational) -> Self {
        RatInterval::new(&self.lo + c, &self.hi + c)
    }

    pub fn add(&self, o: &Self) -> Self {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        RatInterval::new(lo, hi)
    }

    /// Outward conversion to a floating interval.
    pub fn to_iv(&self) -> Iv {
        let lo = self.lo.to_f64().unwrap_or(f64::NEG_INFINITY);
        let hi = self.hi.to_f64().unwrap_or(f64::INFINITY);
        Iv::new(lo, hi).widen()
    }
}

fn eval_f(a: &BigInt, x: &BigRational) -> BigRational {
    let a = BigRational::from_integer(a.clone());
    let three = BigRational::from_integer(BigInt::from(3));
    ((x - &a) * x - (&a + three)) * x - BigRational::one()
}

fn ri(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn bisect(a: &BigInt, mut lo: BigRational, mut hi: BigRational, precision: &BigRational) -> Result<RatInterval> {
    let flo = eval_f(a, &lo);
    let fhi = eval_f(a, &hi);
    if flo.is_zero() || fhi.is_zero() || flo.is_positive() == fhi.is_positive() {
        return Err(Error::Internal(format!("no sign change of f on [{lo}, {hi}]")));
    }
    let lo_positive = flo.is_positive();
    let two = ri(2);
    while &hi - &lo > *precision {
        let mid = (&lo + &hi) / &two;
        let fm = eval_f(a, &mid);
        if fm.is_zero() {
            return Err(Error::Internal(format!("f has the rational root {mid}")));
        }
        if fm.is_positive() == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RatInterval::new(lo, hi))
}

/// Isolating intervals for the roots of x³ − ax² − (a+3)x − 1, ordered as
/// (ρ, ρ′, ρ″) with ρ the largest root, ρ′ ∈ (−2, −1) and ρ″ ∈ (−1, 0).
pub fn isolate_roots(a: i64, precision: &BigRational) -> Result<[RatInterval; 3]> {
    if a < -1 {
        return Err(Error::InvalidParameter(format!("a = {a} must be at least -1")));
    }
    let ab = BigInt::from(a);
    let (b0, b1, b2) = if a >= 7 {
        let ar = ri(a);
        (
            (ri(a + 1), ri(a + 1) + ri(2) / &ar),
            (ri(-1) - ri(1) / &ar, ri(-1) - ri(1) / (ri(2) * &ar)),
            (ri(-1) / ri(a + 2), ri(-1) / ri(a + 3)),
        )
    } else {
        let mut n = (a + 1).max(0);
        while !eval_f(&ab, &ri(n + 1)).is_positive() {
            n += 1;
        }
        ((ri(n), ri(n + 1)), (ri(-2), ri(-1)), (ri(-1), ri(0)))
    };
    Ok([
        bisect(&ab, b0.0, b0.1, precision)?,
        bisect(&ab, b1.0, b1.1, precision)?,
        bisect(&ab, b2.0, b2.1, precision)?,
    ])
}

const REL: f64 = 1.0 / (1u64 << 50) as f64;
const ABS: f64 = 1e-300;

/// Floating interval kept outward-rounded by widening after every operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Iv {
    pub lo: f64,
    pub hi: f64,
}

impl Iv {
    pub fn new(lo: f64, hi: f64) -> Self {
        Iv { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Iv { lo: x, hi: x }
    }

    pub fn widen(self) -> Self {
        Iv {
            lo: self.lo - self.lo.abs() * REL - ABS,
            hi: self.hi + self.hi.abs() * REL + ABS,
        }
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo > 0.0 || self.hi < 0.0
    }

    pub fn intersect(&self, o: &Iv) -> Iv {
        Iv::new(self.lo.max(o.lo), self.hi.min(o.hi))
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    /// Integers in the interval after inflating by the factor 1 + 2⁻²⁰.
    pub fn integer_range(&self) -> Option<(i64, i64)> {
        let pad = |x: f64| x.abs() / (1u64 << 20) as f64 + 1e-9;
        let lo = (self.lo - pad(self.lo)).ceil();
        let hi = (self.hi + pad(self.hi)).floor();
        if !(lo.is_finite() && hi.is_finite()) {
            return None;
        }
        if lo > hi {
            return Some((1, 0));
        }
        Some((lo as i64, hi as i64))
    }

    pub fn recip(self) -> Iv {
        assert!(self.excludes_zero());
        Iv::new(1.0 / self.hi, 1.0 / self.lo).widen()
    }

    pub fn sqrt(self) -> Iv {
        Iv::new(self.lo.max(0.0).sqrt(), self.hi.max(0.0).sqrt()).widen()
    }
}

impl Add for Iv {
    type Output = Iv;
    fn add(self, o: Iv) -> Iv {
        Iv::new(self.lo + o.lo, self.hi + o.hi).widen()
    }
}

impl Sub for Iv {
    type Output = Iv;
    fn sub(self, o: Iv) -> Iv {
        Iv::new(self.lo - o.hi, self.hi - o.lo).widen()
    }
}

impl Neg for Iv {
    type Output = Iv;
    fn neg(self) -> Iv {
        Iv::new(-self.hi, -self.lo)
    }
}

impl Mul for Iv {
    type Output = Iv;
    fn mul(self, o: Iv) -> Iv {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Iv::new(lo, hi).widen()
    }
}

impl Div for Iv {
    type Output = Iv;
    fn div(self, o: Iv) -> Iv {
        self * o.recip()
    }
}

impl Mul<f64> for Iv {
    type Output = Iv;
    fn mul(self, c: f64) -> Iv {
        self * Iv::point(c)
    }
}
