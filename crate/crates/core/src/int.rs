//! Integer scalar abstraction and small number-theoretic helpers.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive};

/// Integer types usable as the coefficient ring of field elements.
pub trait Int:
    Integer
    + Signed
    + Clone
    + Hash
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    fn from_i64_exact(n: i64) -> Self {
        Self::from_i64(n).expect("i64 fits every supported integer type")
    }

    fn to_bigint(&self) -> BigInt;

    fn from_bigint(n: &BigInt) -> Option<Self>;
}

impl Int for i64 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(n: &BigInt) -> Option<Self> {
        n.to_i64()
    }
}

impl Int for i128 {
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(n: &BigInt) -> Option<Self> {
        n.to_i128()
    }
}

impl Int for BigInt {
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(n: &BigInt) -> Option<Self> {
        Some(n.clone())
    }
}

/// Rational numbers over `I`, always kept in lowest terms.
pub type Rat<I> = Ratio<I>;

/// Serializes a rational as a "num/den" string.
pub fn serialize_rat<I: Int, S: serde::Serializer>(q: &Rat<I>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn rat<I: Int>(n: i64, d: i64) -> Rat<I> {
    Ratio::new(I::from_i64_exact(n), I::from_i64_exact(d))
}

pub fn rat_int<I: Int>(n: I) -> Rat<I> {
    Ratio::from_integer(n)
}

pub fn ceil_div(n: i64, d: i64) -> i64 {
    -floor_div(-n, d)
}

pub fn floor_div(n: i64, d: i64) -> i64 {
    assert!(d > 0);
    n.div_euclid(d)
}

pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation by trial division, as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_cube(n: i64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e % 3 == 0)
}

pub fn mod_pow(b: i64, mut e: u64, m: i64) -> i64 {
    let m = m as i128;
    let mut r = 1i128 % m;
    let mut b = (b as i128).rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as i64
}

/// Inverse of `x` modulo `m`, if it exists.
pub fn mod_inv(x: i64, m: i64) -> Option<i64> {
    let e = (x.rem_euclid(m) as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some((e.x.rem_euclid(m as i128)) as i64)
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}
