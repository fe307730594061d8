//! Exact arithmetic in K = Q(ρ), ρ³ = aρ² + (a+3)ρ + 1.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::classify::{classify, Classification};
use crate::enclosure::{isolate_roots, Iv, RatInterval};
use crate::error::{Error, Result};
use crate::int::{Int, Rat};

/// Element x₁ + x₂ρ + x₃ρ² with rational coordinates in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FieldElement<I: Int> {
    pub coords: [Rat<I>; 3],
}

impl<I: Int> FieldElement<I> {
    pub fn new(x1: Rat<I>, x2: Rat<I>, x3: Rat<I>) -> Self {
        FieldElement { coords: [x1, x2, x3] }
    }

    pub fn from_ints(x1: i64, x2: i64, x3: i64) -> Self {
        Self::from_int_coords([I::from_i64_exact(x1), I::from_i64_exact(x2), I::from_i64_exact(x3)])
    }

    pub fn from_int_coords(c: [I; 3]) -> Self {
        let [x, y, z] = c;
        FieldElement::new(Rat::from_integer(x), Rat::from_integer(y), Rat::from_integer(z))
    }

    /// The element (c₁ + c₂ρ + c₃ρ²)/d.
    pub fn from_scaled(c: [I; 3], d: I) -> Self {
        let [x, y, z] = c;
        FieldElement::new(Rat::new(x, d.clone()), Rat::new(y, d.clone()), Rat::new(z, d))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0)
    }

    pub fn rho() -> Self {
        Self::from_ints(0, 1, 0)
    }

    pub fn rational(q: Rat<I>) -> Self {
        FieldElement::new(q, Rat::zero(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1].is_zero() && self.coords[2].is_zero()
    }

    pub fn scale(&self, q: &Rat<I>) -> Self {
        FieldElement { coords: self.coords.clone().map(|c| c * q.clone()) }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rat::from_integer(I::from_i64_exact(n)))
    }

    /// Positive common denominator `d` and integer vector `c` with self = c/d.
    pub fn to_scaled(&self) -> (I, [I; 3]) {
        let d = self.coords.iter().fold(I::one(), |acc, c| acc.lcm(c.denom()));
        let c = self.coords.clone().map(|x| (x * Rat::from_integer(d.clone())).to_integer());
        (d, c)
    }

    pub fn map_int<J: Int>(&self) -> FieldElement<J> {
        let conv = |x: &Rat<I>| {
            let n = J::from_bigint(&x.numer().to_bigint()).expect("coordinate fits target type");
            let d = J::from_bigint(&x.denom().to_bigint()).expect("coordinate fits target type");
            Rat::new(n, d)
        };
        FieldElement { coords: [conv(&self.coords[0]), conv(&self.coords[1]), conv(&self.coords[2])] }
    }

    pub fn to_big(&self) -> FieldElement<BigInt> {
        self.map_int()
    }
}

/// Serialized as the three power-basis coordinates, each a "num/den" string.
impl<I: Int> serde::Serialize for FieldElement<I> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(3))?;
        for c in &self.coords {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<I: Int> fmt::Display for FieldElement<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*rho + {}*rho^2", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl<I: Int> Add for &FieldElement<I> {
    type Output = FieldElement<I>;
    fn add(self, o: &FieldElement<I>) -> FieldElement<I> {
        FieldElement::new(
            &self.coords[0] + &o.coords[0],
            &self.coords[1] + &o.coords[1],
            &self.coords[2] + &o.coords[2],
        )
    }
}

impl<I: Int> Sub for &FieldElement<I> {
    type Output = FieldElement<I>;
    fn sub(self, o: &FieldElement<I>) -> FieldElement<I> {
        FieldElement::new(
            &self.coords[0] - &o.coords[0],
            &self.coords[1] - &o.coords[1],
            &self.coords[2] - &o.coords[2],
        )
    }
}

impl<I: Int> Neg for &FieldElement<I> {
    type Output = FieldElement<I>;
    fn neg(self) -> FieldElement<I> {
        FieldElement { coords: self.coords.clone().map(|c| -c) }
    }
}

impl<I: Int> Add for FieldElement<I> {
    type Output = FieldElement<I>;
    fn add(self, o: FieldElement<I>) -> FieldElement<I> {
        &self + &o
    }
}

impl<I: Int> Sub for FieldElement<I> {
    type Output = FieldElement<I>;
    fn sub(self, o: FieldElement<I>) -> FieldElement<I> {
        &self - &o
    }
}

impl<I: Int> Neg for FieldElement<I> {
    type Output = FieldElement<I>;
    fn neg(self) -> FieldElement<I> {
        -&self
    }
}

/// Structure constants of the regular representation.
#[derive(Clone, Debug)]
pub(crate) struct Consts<I> {
    a: I,
    a3: I,
    q1: I,
    q2: I,
}

impl<I: Int> Consts<I> {
    fn new(a: i64) -> Self {
        Consts {
            a: I::from_i64_exact(a),
            a3: I::from_i64_exact(a + 3),
            q1: I::from_i64_exact(a * a + 3 * a + 1),
            q2: I::from_i64_exact(a * a + a + 3),
        }
    }
}

fn cm<I: Int>(x: &I, y: &I) -> Option<I> {
    x.checked_mul(y)
}

fn ca<I: Int>(x: &I, y: &I) -> Option<I> {
    x.checked_add(y)
}

fn cs<I: Int>(x: &I, y: &I) -> Option<I> {
    x.checked_sub(y)
}

/// Matrix of multiplication by c₁ + c₂ρ + c₃ρ² in the power basis (columns are images).
fn regular_matrix<I: Int>(k: &Consts<I>, c: &[I; 3]) -> Option<[[I; 3]; 3]> {
    let [c0, c1, c2] = c;
    let ac2 = cm(&k.a, c2)?;
    let m02 = ca(c1, &ac2)?;
    let m11 = ca(c0, &cm(&k.a3, c2)?)?;
    let m12 = ca(&cm(&k.a3, c1)?, &cm(&k.q1, c2)?)?;
    let m22 = ca(&ca(c0, &cm(&k.a, c1)?)?, &cm(&k.q2, c2)?)?;
    Some([
        [c0.clone(), c2.clone(), m02.clone()],
        [c1.clone(), m11, m12],
        [c2.clone(), m02, m22],
    ])
}

fn minor<I: Int>(m: &[[I; 3]; 3], i: usize, j: usize, k: usize, l: usize) -> Option<I> {
    cs(&cm(&m[i][k], &m[j][l])?, &cm(&m[i][l], &m[j][k])?)
}

/// (e₁, e₂, e₃) of the characteristic polynomial of an integral-coordinate element,
/// or `None` on overflow of `I`.
pub(crate) fn char_poly_checked<I: Int>(k: &Consts<I>, c: &[I; 3]) -> Option<[I; 3]> {
    let m = regular_matrix(k, c)?;
    let e1 = ca(&ca(&m[0][0], &m[1][1])?, &m[2][2])?;
    let e2 = ca(&ca(&minor(&m, 0, 1, 0, 1)?, &minor(&m, 0, 2, 0, 2)?)?, &minor(&m, 1, 2, 1, 2)?)?;
    let d0 = cm(&m[0][0], &minor(&m, 1, 2, 1, 2)?)?;
    let d1 = cm(&m[0][1], &minor(&m, 1, 2, 0, 2)?)?;
    let d2 = cm(&m[0][2], &minor(&m, 1, 2, 0, 1)?)?;
    let e3 = ca(&cs(&d0, &d1)?, &d2)?;
    Some([e1, e2, e3])
}

/// Integer characteristic polynomial, falling back to big integers on overflow.
pub(crate) fn char_poly_int<I: Int>(k: &Consts<I>, kb: &Consts<BigInt>, c: &[I; 3]) -> [BigInt; 3] {
    match char_poly_checked(k, c) {
        Some(e) => e.map(|x| x.to_bigint()),
        None => {
            let cb = [c[0].to_bigint(), c[1].to_bigint(), c[2].to_bigint()];
            char_poly_checked(kb, &cb).expect("big integers do not overflow")
        }
    }
}

/// Sign pattern test: all conjugates > 0 (`strict`) or ≥ 0.
fn signs_ok(e: &[BigInt; 3], strict: bool) -> bool {
    if strict {
        e.iter().all(|x| x.is_positive())
    } else {
        e.iter().all(|x| !x.is_negative())
    }
}

/// The parameter a with its derived constants and certified root enclosures.
#[derive(Clone, Debug)]
pub struct FieldContext<I: Int> {
    a: i64,
    delta_disc: i64,
    classification: Classification,
    roots: [RatInterval; 3],
    precision: BigRational,
    consts: Consts<I>,
    big_consts: Consts<BigInt>,
    rho1: FieldElement<I>,
    rho1_sq: FieldElement<I>,
}

pub fn default_precision() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1u64 << 48))
}

impl<I: Int> FieldContext<I> {
    pub fn new(a: i64) -> Result<Self> {
        Self::with_precision(a, &default_precision())
    }

    pub fn with_precision(a: i64, precision: &BigRational) -> Result<Self> {
        if !precision.is_positive() {
            return Err(Error::InvalidParameter("precision must be positive".into()));
        }
        let roots = isolate_roots(a, precision)?;
        let classification = classify(a)?;
        let consts = Consts::new(a);
        let rho1 = FieldElement::from_ints(a + 2, a, -1);
        let mut ctx = FieldContext {
            a,
            delta_disc: a * a + 3 * a + 9,
            classification,
            roots,
            precision: precision.clone(),
            consts,
            big_consts: Consts::new(a),
            rho1: rho1.clone(),
            rho1_sq: FieldElement::zero(),
        };
        ctx.rho1_sq = ctx.mul(&rho1, &rho1);
        Ok(ctx)
    }

    /// The same field with root enclosures narrowed to width ≤ `precision`.
    pub fn refined(&self, precision: &BigRational) -> Result<Self> {
        Self::with_precision(self.a, precision)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn delta_disc(&self) -> i64 {
        self.delta_disc
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    /// Coefficients (1, −a, −(a+3), −1) of f.
    pub fn min_poly_coeffs(&self) -> (i64, i64, i64, i64) {
        (1, -self.a, -(self.a + 3), -1)
    }

    pub fn root_intervals(&self) -> &[RatInterval; 3] {
        &self.roots
    }

    pub fn interval_precision(&self) -> &BigRational {
        &self.precision
    }

    pub fn mul(&self, x: &FieldElement<I>, y: &FieldElement<I>) -> FieldElement<I> {
        let a = Rat::from_integer(self.consts.a.clone());
        let a3 = Rat::from_integer(self.consts.a3.clone());
        let q1 = Rat::from_integer(self.consts.q1.clone());
        let q2 = Rat::from_integer(self.consts.q2.clone());
        let [c0, c1, c2] = &x.coords;
        let [y0, y1, y2] = &y.coords;
        let m02 = c1 + &a * c2;
        let m11 = c0 + &a3 * c2;
        let m12 = &a3 * c1 + &q1 * c2;
        let m22 = c0 + &a * c1 + &q2 * c2;
        FieldElement::new(
            c0 * y0 + c2 * y1 + &m02 * y2,
            c1 * y0 + m11 * y1 + m12 * y2,
            c2 * y0 + m02 * y1 + m22 * y2,
        )
    }

    pub fn square(&self, x: &FieldElement<I>) -> FieldElement<I> {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &FieldElement<I>, e: i64) -> Result<FieldElement<I>> {
        let base = if e < 0 { self.inverse(x)? } else { x.clone() };
        let mut out = FieldElement::one();
        for _ in 0..e.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        Ok(out)
    }

    /// (e₁, e₂, e₃) with x³ − e₁x² + e₂x − e₃ the characteristic polynomial of x.
    pub fn char_poly(&self, x: &FieldElement<I>) -> [Rat<I>; 3] {
        let (d, c) = x.to_scaled();
        let e = char_poly_int(&self.consts, &self.big_consts, &c);
        let db = d.to_bigint();
        let conv = |n: &BigInt, k: u32| {
            let q = BigRational::new(n.clone(), num_traits::pow(db.clone(), k as usize));
            Rat::new(
                I::from_bigint(q.numer()).expect("characteristic polynomial fits scalar type"),
                I::from_bigint(q.denom()).expect("characteristic polynomial fits scalar type"),
            )
        };
        [conv(&e[0], 1), conv(&e[1], 2), conv(&e[2], 3)]
    }

    /// Characteristic polynomial with big-rational coefficients (never overflows).
    pub fn char_poly_big(&self, x: &FieldElement<I>) -> [BigRational; 3] {
        let (d, c) = x.to_scaled();
        let e = char_poly_int(&self.consts, &self.big_consts, &c);
        let db = d.to_bigint();
        let mut out: [BigRational; 3] = Default::default();
        for (k, v) in e.iter().enumerate() {
            out[k] = BigRational::new(v.clone(), num_traits::pow(db.clone(), k + 1));
        }
        out
    }

    pub fn trace(&self, x: &FieldElement<I>) -> Rat<I> {
        let three = Rat::from_integer(I::from_i64_exact(3));
        let [c0, c1, c2] = &x.coords;
        let t2 = Rat::from_integer(I::from_i64_exact(self.a * self.a + 2 * self.a + 6));
        three * c0 + Rat::from_integer(self.consts.a.clone()) * c1 + t2 * c2
    }

    pub fn norm(&self, x: &FieldElement<I>) -> Rat<I> {
        let [_, _, e3] = self.char_poly(x);
        e3
    }

    pub fn is_algebraic_integer(&self, x: &FieldElement<I>) -> bool {
        self.char_poly_big(x).iter().all(|e| e.is_integer())
    }

    pub fn is_totally_positive(&self, x: &FieldElement<I>) -> bool {
        if x.is_zero() {
            return false;
        }
        let (_, c) = x.to_scaled();
        self.is_totally_positive_scaled(&c)
    }

    /// All conjugates ≥ 0.
    pub fn is_totally_nonnegative(&self, x: &FieldElement<I>) -> bool {
        let (_, c) = x.to_scaled();
        signs_ok(&char_poly_int(&self.consts, &self.big_consts, &c), false)
    }

    /// Total positivity of c/d for integer `c` and any positive `d`.
    pub fn is_totally_positive_scaled(&self, c: &[I; 3]) -> bool {
        if c.iter().all(|x| x.is_zero()) {
            return false;
        }
        match char_poly_checked(&self.consts, c) {
            Some(e) => e.iter().all(|x| x.is_positive()),
            None => signs_ok(&char_poly_int(&self.consts, &self.big_consts, c), true),
        }
    }

    /// Integer characteristic polynomial of c₁ + c₂ρ + c₃ρ².
    pub fn char_poly_scaled(&self, c: &[I; 3]) -> [BigInt; 3] {
        char_poly_int(&self.consts, &self.big_consts, c)
    }

    pub fn inverse(&self, x: &FieldElement<I>) -> Result<FieldElement<I>> {
        if x.is_zero() {
            return Err(Error::InvalidParameter("zero has no inverse".into()));
        }
        let [e1, e2, e3] = self.char_poly(x);
        let x2 = self.mul(x, x);
        let num = &(&x2 - &x.scale(&e1)) + &FieldElement::rational(e2);
        Ok(num.scale(&(Rat::one() / e3)))
    }

    pub fn conjugate1(&self, x: &FieldElement<I>) -> FieldElement<I> {
        let [c0, c1, c2] = &x.coords;
        &(&FieldElement::rational(c0.clone()) + &self.rho1.scale(c1)) + &self.rho1_sq.scale(c2)
    }

    pub fn conjugate2(&self, x: &FieldElement<I>) -> FieldElement<I> {
        self.conjugate1(&self.conjugate1(x))
    }

    /// σₖ(x) for k = 0, 1, 2.
    pub fn conjugate(&self, x: &FieldElement<I>, k: usize) -> FieldElement<I> {
        match k % 3 {
            0 => x.clone(),
            1 => self.conjugate1(x),
            _ => self.conjugate2(x),
        }
    }

    pub fn is_unit(&self, x: &FieldElement<I>) -> Result<bool> {
        let e = self.char_poly_big(x);
        if !e.iter().all(|c| c.is_integer()) {
            return Err(Error::NotIntegral);
        }
        Ok(e[2].abs().is_one())
    }

    /// ρ^i (ρ′)^j.
    pub fn unit_power(&self, i: i64, j: i64) -> FieldElement<I> {
        let r = FieldElement::rho();
        let a = self.pow(&r, i).expect("rho is invertible");
        let b = self.pow(&self.rho1, j).expect("rho' is invertible");
        self.mul(&a, &b)
    }

    /// (εx, ε) for a totally positive unit ε found by greedy descent on Tr(εx).
    pub fn reduce_by_units(&self, x: &FieldElement<I>) -> (FieldElement<I>, FieldElement<I>) {
        let gens: Vec<FieldElement<I>> = self
            .rho_conjugates()
            .iter()
            .flat_map(|r| {
                let sq = self.square(r);
                let inv = self.inverse(&sq).expect("units are invertible");
                [sq, inv]
            })
            .collect();
        let (mut y, mut eps) = (x.clone(), FieldElement::one());
        let mut tr = self.trace(&y);
        loop {
            let best = gens
                .iter()
                .map(|g| (self.mul(g, &y), g))
                .map(|(z, g)| (self.trace(&z), z, g))
                .filter(|(t, _, _)| t.abs() < tr.abs())
                .min_by(|p, q| p.0.abs().cmp(&q.0.abs()));
            match best {
                Some((t, z, g)) => {
                    eps = self.mul(&eps, g);
                    y = z;
                    tr = t;
                }
                None => return (y, eps),
            }
        }
    }

    pub fn rho_conjugates(&self) -> [FieldElement<I>; 3] {
        [FieldElement::rho(), self.rho1.clone(), self.conjugate1(&self.rho1)]
    }

    /// Rational interval containing σₖ(x).
    pub fn conjugate_enclosure(&self, x: &FieldElement<I>, k: usize) -> RatInterval {
        let r = &self.roots[k % 3];
        let big = |q: &Rat<I>| BigRational::new(q.numer().to_bigint(), q.denom().to_bigint());
        let [c0, c1, c2] = &x.coords;
        // Horner: c0 + r(c1 + r c2)
        let inner = r.scale(&big(c2)).shift(&big(c1));
        r.mul(&inner).shift(&big(c0))
    }

    /// Floating enclosure of σₖ(x), outward rounded.
    pub fn conjugate_iv(&self, x: &FieldElement<I>, k: usize) -> Iv {
        self.conjugate_enclosure(x, k).to_iv()
    }

    /// x ≺ y, i.e. y − x is totally positive.
    pub fn precedes(&self, x: &FieldElement<I>, y: &FieldElement<I>) -> bool {
        self.is_totally_positive(&(y - x))
    }
}

/// Context over 128-bit integers; the workhorse for enumeration.
pub type Context = FieldContext<i128>;
/// Element over 128-bit integers.
pub type Elem = FieldElement<i128>;
/// Context over arbitrary-precision integers.
pub type BigContext = FieldContext<BigInt>;
/// Element over arbitrary-precision integers.
pub type BigElem = FieldElement<BigInt>;

pub fn make_context(a: i64) -> Result<Context> {
    Context::new(a)
}
