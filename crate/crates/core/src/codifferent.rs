//! The codifferent O_K^∨, its dual basis φ₁, φ₂, φ₃ and certified minimal traces.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::enclosure::Iv;
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::int::{Int, Rat};
use crate::scan::{scan_filter_map, Embedding};

/// Largest t tried by the certified search before giving up.
pub const MAX_CERTIFIED_TRACE: i64 = 64;
/// Coordinate radius of the uncertified search box.
pub const HEURISTIC_RADIUS: i64 = 6;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CodifferentElement<I: Int> {
    pub dual_coords: [I; 3],
    #[serde(skip)]
    pub as_field_elem: FieldElement<I>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MinTrace<I: Int> {
    pub value: i64,
    pub witness: CodifferentElement<I>,
    pub certified: bool,
}

/// The integral basis g, its Gram matrix M = (Tr(gᵢgₖ)) and the dual basis φ.
#[derive(Clone, Debug)]
pub struct Codifferent<I: Int> {
    pub g: [FieldElement<I>; 3],
    pub phi: [FieldElement<I>; 3],
    pub gram: [[Rat<I>; 3]; 3],
    pub gram_inverse: [[Rat<I>; 3]; 3],
    phi_den: I,
    phi_scaled: [[I; 3]; 3],
    dual_embedding: Embedding,
    primal_embedding: Embedding,
}

fn det3<I: Int>(m: &[[Rat<I>; 3]; 3]) -> Rat<I> {
    let t = |i: usize, j: usize, k: usize| &m[0][i] * &m[1][j] * &m[2][k];
    t(0, 1, 2) + t(1, 2, 0) + t(2, 0, 1) - t(2, 1, 0) - t(0, 2, 1) - t(1, 0, 2)
}

/// Exact inverse by the adjugate.
pub fn invert3<I: Int>(m: &[[Rat<I>; 3]; 3]) -> Result<[[Rat<I>; 3]; 3]> {
    let d = det3(m);
    if d.is_zero() {
        return Err(Error::Internal("singular Gram matrix".into()));
    }
    let mut inv: [[Rat<I>; 3]; 3] = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            let minor = &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
            inv[i][j] = minor / &d;
        }
    }
    Ok(inv)
}

/// Δ·M⁻¹ for the basis B₃(1,1), entrywise.
pub fn closed_form_scaled_inverse(a: i64) -> [[i64; 3]; 3] {
    let q = a * a + 7 * a;
    [
        [q + 21, q + 9, -3 * (a + 6)],
        [q + 9, 2 * (a * a + 3 * a + 3), -3 * (2 * a + 3)],
        [-3 * (a + 6), -3 * (2 * a + 3), 18],
    ]
}

fn rat<I: Int>(n: i64) -> Rat<I> {
    Rat::from_integer(I::from_i64_exact(n))
}

impl<I: Int> Codifferent<I> {
    pub fn new(ctx: &FieldContext<I>) -> Result<Self> {
        let c = ctx.classification();
        c.basis.require_supported(c.a, c.module_index)?;
        let g = c.basis.elements::<I>();
        let mut gram: [[Rat<I>; 3]; 3] = Default::default();
        for i in 0..3 {
            for k in 0..3 {
                gram[i][k] = ctx.trace(&ctx.mul(&g[i], &g[k]));
            }
        }
        let gram_inverse = invert3(&gram)?;
        let phi: [FieldElement<I>; 3] = std::array::from_fn(|j| {
            (0..3).fold(FieldElement::zero(), |acc, k| &acc + &g[k].scale(&gram_inverse[k][j]))
        });
        let phi_den = phi.iter().fold(I::one(), |d, x| {
            let (dx, _) = x.to_scaled();
            num_integer::Integer::lcm(&d, &dx)
        });
        let den = Rat::from_integer(phi_den.clone());
        let phi_scaled = std::array::from_fn(|j| phi[j].coords.clone().map(|q| (q * &den).to_integer()));
        let dual_embedding = Embedding::new(ctx, &phi, &g);
        let primal_embedding = Embedding::new(ctx, &g, &phi);
        Ok(Codifferent { g, phi, gram, gram_inverse, phi_den, phi_scaled, dual_embedding, primal_embedding })
    }

    pub fn element(&self, u: [I; 3]) -> CodifferentElement<I> {
        let elem = (0..3).fold(FieldElement::zero(), |acc, j| &acc + &self.phi[j].scale(&Rat::from_integer(u[j].clone())));
        CodifferentElement { dual_coords: u, as_field_elem: elem }
    }

    pub fn element_i64(&self, u: [i64; 3]) -> CodifferentElement<I> {
        self.element(u.map(I::from_i64_exact))
    }

    /// Δ·M⁻¹ compared against the closed form; meaningful for the p = 3 family.
    pub fn matches_closed_form(&self, ctx: &FieldContext<I>) -> bool {
        let delta = rat::<I>(ctx.delta_disc());
        let cf = closed_form_scaled_inverse(ctx.a());
        (0..3).all(|i| (0..3).all(|j| &self.gram_inverse[i][j] * &delta == rat(cf[i][j])))
    }

    /// Tr(gᵢφⱼ) = δᵢⱼ for all i, j.
    pub fn duality_holds(&self, ctx: &FieldContext<I>) -> bool {
        (0..3).all(|i| {
            (0..3).all(|j| {
                let t = ctx.trace(&ctx.mul(&self.g[i], &self.phi[j]));
                if i == j {
                    t.is_one()
                } else {
                    t.is_zero()
                }
            })
        })
    }

    /// Embedding of O_K^∨ in φ-coordinates.
    pub fn dual_embedding(&self) -> &Embedding {
        &self.dual_embedding
    }

    /// Embedding of O_K in g-coordinates.
    pub fn primal_embedding(&self) -> &Embedding {
        &self.primal_embedding
    }

    fn is_totally_positive_dual(&self, ctx: &FieldContext<I>, u: &[i64; 3]) -> bool {
        let c: [I; 3] = std::array::from_fn(|k| {
            (0..3).fold(I::zero(), |acc, j| acc + self.phi_scaled[j][k].clone() * I::from_i64_exact(u[j]))
        });
        ctx.is_totally_positive_scaled(&c)
    }

    /// Least Tr(dα) over totally positive d in O_K^∨, with a witness d.
    pub fn minimal_trace(&self, ctx: &FieldContext<I>, alpha: &FieldElement<I>, certify: bool) -> Result<MinTrace<I>> {
        ctx.classification().basis.to_integral(alpha).ok_or(Error::NotIntegral)?;
        if !ctx.is_totally_positive(alpha) {
            return Err(Error::NotTotallyPositive);
        }
        let (alpha, eps) = ctx.reduce_by_units(alpha);
        let found = self.minimal_trace_reduced(ctx, &alpha, certify)?;
        let witness = self.from_field(ctx, &ctx.mul(&found.witness.as_field_elem, &eps))?;
        Ok(MinTrace { witness, ..found })
    }

    /// The φ-coordinates (Tr(d gⱼ))ⱼ of a codifferent element d.
    pub fn from_field(&self, ctx: &FieldContext<I>, d: &FieldElement<I>) -> Result<CodifferentElement<I>> {
        let mut u: [I; 3] = std::array::from_fn(|_| I::zero());
        for j in 0..3 {
            let t = ctx.trace(&ctx.mul(d, &self.g[j]));
            if !t.is_integer() {
                return Err(Error::Internal("element is not in the codifferent".into()));
            }
            u[j] = t.to_integer();
        }
        Ok(self.element(u))
    }

    fn minimal_trace_reduced(&self, ctx: &FieldContext<I>, alpha: &FieldElement<I>, certify: bool) -> Result<MinTrace<I>> {
        let b = ctx.classification().basis.to_integral(alpha).ok_or(Error::NotIntegral)?;
        let b: [i64; 3] = b.map(|x| x.to_i64().expect("coordinate fits in i64"));
        if certify {
            let sig: [Iv; 3] = std::array::from_fn(|i| ctx.conjugate_iv(alpha, i));
            for t in 1..=MAX_CERTIFIED_TRACE {
                let y: [Iv; 3] = std::array::from_fn(|i| Iv::new(0.0, (Iv::point(t as f64) / sig[i]).hi));
                let found = scan_filter_map(&self.dual_embedding, &y, |u| {
                    let tr: i64 = (0..3).map(|i| u[i] * b[i]).sum();
                    (tr >= 1 && tr <= t && self.is_totally_positive_dual(ctx, &u)).then_some((tr, u))
                })?;
                if let Some((tr, u)) = found.into_iter().min() {
                    return Ok(MinTrace { value: tr, witness: self.element_i64(u), certified: true });
                }
            }
            return Err(Error::Internal(format!("minimal trace exceeds {MAX_CERTIFIED_TRACE}")));
        }
        let r = HEURISTIC_RADIUS;
        let mut best: Option<(i64, [i64; 3])> = None;
        for u1 in -r..=r {
            for u2 in -r..=r {
                for u3 in -r..=r {
                    let u = [u1, u2, u3];
                    let tr: i64 = (0..3).map(|i| u[i] * b[i]).sum();
                    if tr >= 1 && best.is_none_or(|x| (tr, u) < x) && self.is_totally_positive_dual(ctx, &u) {
                        best = Some((tr, u));
                    }
                }
            }
        }
        let (tr, u) = best.ok_or_else(|| Error::Internal("no totally positive codifferent element in the search box".into()))?;
        Ok(MinTrace { value: tr, witness: self.element_i64(u), certified: false })
    }

    /// Scaled denominator of the φ coordinates.
    pub fn phi_denominator(&self) -> &I {
        &self.phi_den
    }
}

/// Σ uᵢbᵢ for α = Σ bᵢgᵢ.
pub fn trace_pairing<I: Int>(d: &CodifferentElement<I>, b: &[I; 3]) -> I {
    (0..3).fold(I::zero(), |acc, i| acc + d.dual_coords[i].clone() * b[i].clone())
}

/// [`trace_pairing`] cross-checked against Tr(d·α) computed in the field.
pub fn trace_pairing_checked<I: Int>(ctx: &FieldContext<I>, d: &CodifferentElement<I>, alpha: &FieldElement<I>) -> Result<I> {
    let b = ctx.classification().basis.to_integral(alpha).ok_or(Error::NotIntegral)?;
    let t = trace_pairing(d, &b);
    let direct = ctx.trace(&ctx.mul(&d.as_field_elem, alpha));
    if direct != Rat::from_integer(t.clone()) {
        return Err(Error::Internal(format!("trace pairing {t} disagrees with field trace {direct}")));
    }
    Ok(t)
}

/// Total positivity of a codifferent element, decided on its characteristic polynomial.
pub fn is_totally_positive<I: Int>(ctx: &FieldContext<I>, d: &CodifferentElement<I>) -> bool {
    ctx.is_totally_positive(&d.as_field_elem)
}

/// Characteristic polynomial coefficients (e₁, e₂, e₃) of d.
pub fn char_poly<I: Int>(ctx: &FieldContext<I>, d: &CodifferentElement<I>) -> [Rat<I>; 3] {
    ctx.char_poly(&d.as_field_elem)
}
