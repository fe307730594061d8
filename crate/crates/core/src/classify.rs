//! Discriminant, conductor, module index, monogenity and integral bases.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::int::{factorize, is_cube, is_prime, is_squarefree, mod_inv, Int, Rat};

/// Parameters a for which the field is monogenic although δ need not be a cube.
pub const EXCEPTIONAL_A: [i64; 11] = [-1, 0, 1, 2, 3, 5, 12, 54, 66, 1259, 2389];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasisKind {
    PowerBasis,
    Bp,
    Unsupported,
}

/// Integral basis {1, ρ, (k + lρ + ρ²)/p}; the power basis is p = 1, k = l = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BasisDescriptor {
    pub kind: BasisKind,
    pub p: i64,
    pub k: i64,
    pub l: i64,
}

impl BasisDescriptor {
    pub fn power() -> Self {
        BasisDescriptor { kind: BasisKind::PowerBasis, p: 1, k: 0, l: 0 }
    }

    pub fn bp(p: i64, k: i64, l: i64) -> Self {
        BasisDescriptor { kind: BasisKind::Bp, p, k, l }
    }

    pub fn unsupported() -> Self {
        BasisDescriptor { kind: BasisKind::Unsupported, p: 0, k: 0, l: 0 }
    }

    pub fn is_supported(&self) -> bool {
        self.kind != BasisKind::Unsupported
    }

    pub fn require_supported(&self, a: i64, delta: i64) -> Result<()> {
        if self.is_supported() {
            Ok(())
        } else {
            Err(Error::UnsupportedBasis { a, delta })
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            BasisKind::PowerBasis => "power".into(),
            BasisKind::Bp => format!("B{}({},{})", self.p, self.k, self.l),
            BasisKind::Unsupported => "unsupported-general".into(),
        }
    }

    /// g₁, g₂, g₃ as field elements.
    pub fn elements<I: Int>(&self) -> [FieldElement<I>; 3] {
        [
            FieldElement::from_ints(1, 0, 0),
            FieldElement::from_ints(0, 1, 0),
            self.from_integral(&[I::zero(), I::zero(), I::one()]),
        ]
    }

    /// b₁g₁ + b₂g₂ + b₃g₃ scaled by p, over the power basis.
    pub fn scaled_power<I: Int>(&self, b: &[I; 3]) -> [I; 3] {
        let p = I::from_i64_exact(self.p);
        let k = I::from_i64_exact(self.k);
        let l = I::from_i64_exact(self.l);
        [
            p.clone() * b[0].clone() + k * b[2].clone(),
            p * b[1].clone() + l * b[2].clone(),
            b[2].clone(),
        ]
    }

    pub fn from_integral<I: Int>(&self, b: &[I; 3]) -> FieldElement<I> {
        FieldElement::from_scaled(self.scaled_power(b), I::from_i64_exact(self.p))
    }

    /// Coordinates over (g₁, g₂, g₃), or `None` if they are not integers.
    pub fn to_integral<I: Int>(&self, x: &FieldElement<I>) -> Option<[I; 3]> {
        let c = self.to_rational_coords(x);
        if c.iter().all(|q| q.is_integer()) {
            Some(c.map(|q| q.to_integer()))
        } else {
            None
        }
    }

    pub fn to_rational_coords<I: Int>(&self, x: &FieldElement<I>) -> [Rat<I>; 3] {
        let p = Rat::from_integer(I::from_i64_exact(self.p));
        let k = Rat::from_integer(I::from_i64_exact(self.k));
        let l = Rat::from_integer(I::from_i64_exact(self.l));
        let [x1, x2, x3] = &x.coords;
        [x1 - &k * x3, x2 - &l * x3, &p * x3]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub a: i64,
    pub delta_disc: i64,
    pub b: i64,
    pub c: i64,
    pub conductor: i64,
    pub module_index: i64,
    pub monogenic: bool,
    pub in_exceptional_list: bool,
    pub in_p3_family: bool,
    pub basis: BasisDescriptor,
}

pub fn delta_disc(a: i64) -> i64 {
    a * a + 3 * a + 9
}

/// n = b·c³ with b cube-free.
pub fn cubefree_split(n: i64) -> Result<(i64, i64)> {
    if n <= 0 {
        return Err(Error::InvalidParameter(format!("cubefree_split needs n > 0, got {n}")));
    }
    let (mut b, mut c) = (1, 1);
    for (p, e) in factorize(n) {
        b *= p.pow(e % 3);
        c *= p.pow(e / 3);
    }
    Ok((b, c))
}

pub fn conductor(a: i64) -> Result<i64> {
    check_a(a)?;
    let (b, _) = cubefree_split(delta_disc(a))?;
    let primes = factorize(b).into_iter().map(|(p, _)| p);
    if a % 3 != 0 || a.rem_euclid(27) == 12 {
        Ok(primes.product())
    } else {
        Ok(9 * primes.filter(|&p| p != 3).product::<i64>())
    }
}

/// δ = [O_K : Z[ρ]] = Δ/𝔠.
pub fn module_index(a: i64) -> Result<i64> {
    let c = conductor(a)?;
    let d = delta_disc(a);
    if d % c != 0 {
        return Err(Error::Internal(format!("conductor {c} does not divide {d}")));
    }
    Ok(d / c)
}

pub fn is_monogenic(a: i64) -> Result<bool> {
    Ok(EXCEPTIONAL_A.contains(&a) || is_cube(module_index(a)?))
}

/// a ≡ 3, 21 (mod 27), a > 12 and Δ/27 square-free.
pub fn in_p3_family(a: i64) -> bool {
    let m = a.rem_euclid(27);
    (m == 3 || m == 21) && a > 12 && is_squarefree(delta_disc(a) / 27)
}

fn check_a(a: i64) -> Result<()> {
    if a < -1 {
        Err(Error::InvalidParameter(format!("a = {a} must be at least -1")))
    } else {
        Ok(())
    }
}

/// The congruence polynomials h₁, h₂, h₃ in (a, k, l).
pub fn h_values(a: i64, k: i64, l: i64) -> [i128; 3] {
    let (a, k, l) = (a as i128, k as i128, l as i128);
    let a2 = a * a;
    let h1 = a2 + (l + 2) * a + 3 * k + 6;
    let h2 = (2 * k - l + 1) * a2 + (-l * l + 2 * k * l + 4 * k - 3 * l + 4) * a + 3 * k * k - 3 * l * l + 12 * k
        - 3 * l
        + 9;
    let h3 = (k * k - k * l + k) * a2
        + (k * k * l - k * l * l + 2 * k * k + l * l - 3 * k * l + 4 * k - l) * a
        + k * k * k
        + l * l * l
        - 3 * k * l * l
        + 6 * k * k
        - 3 * k * l
        + 9 * k
        - 3 * l
        + 1;
    [h1, h2, h3]
}

pub fn satisfies_h(a: i64, p: i64, k: i64, l: i64) -> bool {
    let h = h_values(a, k, l);
    let p = p as i128;
    h[0] % p == 0 && h[1] % (p * p) == 0 && h[2] % (p * p * p) == 0
}

/// All pairs 1 ≤ k, l ≤ p−1 passing the three congruences.
pub fn kl_solutions(a: i64, p: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for k in 1..p {
        for l in 1..p {
            if satisfies_h(a, p, k, l) {
                out.push((k, l));
            }
        }
    }
    out
}

/// Closed-form (k, l) modulo p for p > 3.
pub fn kl_closed_form(a: i64, p: i64) -> Option<(i64, i64)> {
    if p <= 3 {
        return None;
    }
    let am = a.rem_euclid(p);
    let inv = mod_inv(2 * am + 3, p)?;
    let l = (-(2 * am * am + 4 * am + 6) % p * inv).rem_euclid(p);
    let inv3 = mod_inv(3, p)?;
    let k = (-(inv3 * ((am * l + am * am + 2 * am + 6) % p))).rem_euclid(p);
    Some((k, l))
}

pub fn find_kl(a: i64, p: i64) -> Result<Option<(i64, i64)>> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} is not an odd prime")));
    }
    let sols = kl_solutions(a, p);
    match sols.as_slice() {
        [] => Ok(None),
        [kl] => {
            if p > 3 && kl_closed_form(a, p) != Some(*kl) {
                return Err(Error::Internal(format!("closed form disagrees with search for a = {a}, p = {p}")));
            }
            Ok(Some(*kl))
        }
        _ => Err(Error::Internal(format!("several (k,l) pairs for a = {a}, p = {p}: {sols:?}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParameter {
    pub p: i64,
    pub a: i64,
    pub k: i64,
    pub l: i64,
}

/// The two residues a mod p² with p² | a² + 3a + 9, each with its (k, l).
pub fn family_parameters(p: i64) -> Result<Option<[FamilyParameter; 2]>> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("p = {p} must be a prime > 3")));
    }
    if p % 6 != 1 {
        return Ok(None);
    }
    let p2 = p * p;
    let mut roots: Vec<i64> = (0..p)
        .filter(|&x| (x * x + 3 * x + 9) % p == 0)
        .map(|r| {
            let h = (r * r + 3 * r + 9).rem_euclid(p2);
            let inv = mod_inv(2 * r + 3, p2).expect("simple root");
            (r - (h as i128 * inv as i128 % p2 as i128) as i64).rem_euclid(p2)
        })
        .collect();
    roots.sort_unstable();
    if roots.len() != 2 {
        return Err(Error::Internal(format!("expected two roots mod {p}, found {roots:?}")));
    }
    let mut out = [FamilyParameter { p, a: 0, k: 0, l: 0 }; 2];
    for (slot, &a) in out.iter_mut().zip(&roots) {
        // When p³ | Δ every pair passes, so take a representative with v_p(Δ) = 2.
        let rep = (0..p)
            .map(|j| a + j * p2)
            .find(|&x| (delta_disc(x) as i128) % (p2 as i128 * p as i128) != 0)
            .expect("Δ mod p³ varies along a + jp²");
        let (k, l) = find_kl(rep, p)?.ok_or_else(|| Error::Internal(format!("no (k,l) for a = {a}, p = {p}")))?;
        *slot = FamilyParameter { p, a, k, l };
    }
    Ok(Some(out))
}

/// Rows of the (p, a mod p², (k,l)) table for primes 3 < p ≤ pmax with p ≡ 1 (mod 6).
pub fn table1(pmax: i64) -> Result<Vec<FamilyParameter>> {
    let mut rows = Vec::new();
    for p in 5..=pmax {
        if is_prime(p) {
            if let Some(pair) = family_parameters(p)? {
                rows.extend(pair);
            }
        }
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CanovasForm {
    pub p: i64,
    pub q: i64,
    /// The correspondence needs q > 2; false flags a boundary parameter.
    pub q_gt_2: bool,
}

/// (p, q) = ((a²+3a+9)/3, (2a+3)/9) with 4p − 27q² = 9.
pub fn to_canovas_form(a: i64) -> Result<CanovasForm> {
    let m = a.rem_euclid(27);
    if m != 3 && m != 21 {
        return Err(Error::NotInFamily { a, reason: "a is not 3 or 21 modulo 27".into() });
    }
    let p = delta_disc(a) / 3;
    let q = (2 * a + 3) / 9;
    debug_assert_eq!(4 * p - 27 * q * q, 9);
    Ok(CanovasForm { p, q, q_gt_2: q > 2 })
}

pub fn classify(a: i64) -> Result<Classification> {
    check_a(a)?;
    let d = delta_disc(a);
    let (b, c) = cubefree_split(d)?;
    let cond = conductor(a)?;
    let delta = d / cond;
    let basis = if delta == 1 {
        BasisDescriptor::power()
    } else if is_prime(delta) {
        match find_kl(a, delta)? {
            Some((k, l)) => BasisDescriptor::bp(delta, k, l),
            None => BasisDescriptor::unsupported(),
        }
    } else {
        BasisDescriptor::unsupported()
    };
    Ok(Classification {
        a,
        delta_disc: d,
        b,
        c,
        conductor: cond,
        module_index: delta,
        monogenic: EXCEPTIONAL_A.contains(&a) || is_cube(delta),
        in_exceptional_list: EXCEPTIONAL_A.contains(&a),
        in_p3_family: in_p3_family(a),
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(cubefree_split(513).unwrap(), (19, 3));
        assert_eq!(cubefree_split(8).unwrap(), (1, 2));
        assert_eq!(cubefree_split(1911).unwrap(), (1911, 1));
        assert!(cubefree_split(0).is_err());
        assert_eq!(conductor(21).unwrap(), 171);
        assert_eq!(conductor(90).unwrap(), 1197);
        assert_eq!(module_index(90).unwrap(), 7);
        assert!(!is_monogenic(21).unwrap());
        assert!(is_monogenic(5).unwrap());
        assert!(is_monogenic(4).unwrap());
    }

    #[test]
    fn a41_has_index_seven() {
        let c = classify(41).unwrap();
        assert_eq!(c.delta_disc, 1813);
        assert_eq!(c.conductor, 259);
        assert_eq!(c.module_index, 7);
        assert_eq!(c.basis, BasisDescriptor::bp(7, 4, 3));
    }

    #[test]
    fn kl_examples() {
        assert_eq!(find_kl(41, 7).unwrap(), Some((4, 3)));
        assert_eq!(find_kl(21, 3).unwrap(), Some((1, 1)));
        assert_eq!(find_kl(66, 13).unwrap(), Some((3, 8)));
        assert!(find_kl(21, 4).is_err());
    }

    #[test]
    fn family_parameter_examples() {
        let p7 = family_parameters(7).unwrap().unwrap();
        assert_eq!((p7[0].a, p7[0].k, p7[0].l), (5, 2, 6));
        assert_eq!((p7[1].a, p7[1].k, p7[1].l), (41, 4, 3));
        assert_eq!(family_parameters(11).unwrap(), None);
        let p103 = family_parameters(103).unwrap().unwrap();
        assert_eq!((p103[0].a, p103[0].k, p103[0].l), (271, 46, 94));
        assert_eq!((p103[1].a, p103[1].k, p103[1].l), (10335, 56, 11));
        assert!(family_parameters(9).is_err());
    }

    #[test]
    fn canovas() {
        assert_eq!(to_canovas_form(21).unwrap(), CanovasForm { p: 171, q: 5, q_gt_2: true });
        assert_eq!(to_canovas_form(3).unwrap(), CanovasForm { p: 9, q: 1, q_gt_2: false });
        assert_eq!(to_canovas_form(48).unwrap(), CanovasForm { p: 819, q: 11, q_gt_2: true });
        assert!(to_canovas_form(22).is_err());
    }

    #[test]
    fn composite_index_is_unsupported() {
        let c = classify(678).unwrap();
        assert_eq!(c.module_index, 21);
        assert!(!c.in_p3_family);
        assert_eq!(c.basis.kind, BasisKind::Unsupported);
    }
}
