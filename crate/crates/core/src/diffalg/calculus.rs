use std::collections::HashMap;

use num_traits::One;

use super::mono::{Field, Gen, Jet, Mono, ParamMono, MAX_Z};
use super::poly::{Algebra, Ctx, DiffPoly};
use super::series::p_op;
use super::Q;
use crate::error::{Error, Result};

/// Ring homomorphism defined on order-0 generators and prolonged to jets:
/// `∂ⁿx ↦ ∂ⁿ(image(x))`. Generators without an image are kept as they are.
/// The order-0 `q` is always fixed; higher `q` jets are re-derived in the
/// target algebra.
pub struct Substitution<'a> {
    target: Ctx,
    image: &'a (dyn Fn(Field) -> Option<DiffPoly> + Sync),
    params: &'a (dyn Fn(&ParamMono, &Q) -> (ParamMono, Q) + Sync),
    cache: HashMap<Jet, DiffPoly>,
}

fn identity_params(p: &ParamMono, c: &Q) -> (ParamMono, Q) {
    (*p, c.clone())
}

impl<'a> Substitution<'a> {
    pub fn new(target: Ctx, image: &'a (dyn Fn(Field) -> Option<DiffPoly> + Sync)) -> Self {
        Substitution { target, image, params: &identity_params, cache: HashMap::new() }
    }

    pub fn with_params(
        mut self,
        params: &'a (dyn Fn(&ParamMono, &Q) -> (ParamMono, Q) + Sync),
    ) -> Self {
        self.params = params;
        self
    }

    fn jet_image(&mut self, j: Jet) -> Option<DiffPoly> {
        if let Some(p) = self.cache.get(&j) {
            return Some(p.clone());
        }
        let img = if j.gen == Gen::Q {
            if j.order == 0 {
                return None;
            }
            DiffPoly::var(self.target, Gen::Q).derive_n(j.order as usize)
        } else {
            let base = (self.image)(j.base())?;
            if j.order == 0 {
                base.truncated(self.target.order).recast(self.target.kind)
            } else {
                let lower = self.jet_image(Jet { order: j.order - 1, ..j })?;
                lower.derive()
            }
        };
        self.cache.insert(j, img.clone());
        Some(img)
    }

    pub fn apply(&mut self, p: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero(self.target);
        for (m, c) in p.terms() {
            let (pm, pc) = (self.params)(&m.params, c);
            let mut kept = Mono::param(pm);
            let mut factors: Vec<(DiffPoly, i16)> = Vec::new();
            for &(j, e) in m.jets.iter() {
                match self.jet_image(j) {
                    Some(img) => {
                        assert!(e > 0, "negative power of a substituted jet");
                        factors.push((img, e));
                    }
                    None => kept = kept.mul(&Mono::jet_pow(j, e)),
                }
            }
            let mut acc = DiffPoly::term(self.target, kept, pc);
            for (img, e) in factors {
                for _ in 0..e {
                    acc = &acc * &img;
                }
            }
            out.add_assign_ref(&acc);
        }
        out
    }
}

fn flip_params(p: &ParamMono, c: &Q) -> (ParamMono, Q) {
    let mut m = *p;
    for i in 0..MAX_Z {
        std::mem::swap(&mut m.z[i], &mut m.zb[i]);
    }
    let c = if p.t % 2 != 0 { -c.clone() } else { c.clone() };
    (m, c)
}

/// `v̄ = v − t·P(u)` in the reduced algebra.
pub fn vbar(ctx: Ctx) -> DiffPoly {
    debug_assert_eq!(ctx.kind, Algebra::Reduced);
    let v = DiffPoly::var(ctx, Gen::V);
    let u = DiffPoly::var(ctx, Gen::U);
    &v - &(&DiffPoly::t(ctx) * &p_op(&u))
}

/// The involution `p ↦ p̄`: swaps barred and unbarred jets (in the reduced
/// algebra `v ↦ v̄`), fixes `q`, `u`, ε and `s`, sends `t ↦ −t` and swaps
/// `z_k ↔ zb_k`.
pub fn involute(p: &DiffPoly) -> DiffPoly {
    match p.kind() {
        Algebra::FreeA | Algebra::DressingB => p.map_monos(|m, c| {
            let (pm, pc) = flip_params(&m.params, c);
            let mut out = Mono::param(pm);
            for &(j, e) in m.jets.iter() {
                let j2 = if j.gen.self_conjugate() { j } else { Jet { barred: !j.barred, ..j } };
                out = out.mul(&Mono::jet_pow(j2, e));
            }
            Some((out, pc))
        }),
        Algebra::Reduced => {
            let ctx = p.ctx();
            let vb = vbar(ctx);
            let image = move |f: Field| -> Option<DiffPoly> {
                if f.gen == Gen::V && !f.barred {
                    Some(vb.clone())
                } else {
                    None
                }
            };
            Substitution::new(ctx, &image).with_params(&flip_params).apply(p)
        }
    }
}

/// Inverse of a unit `c·t^j·q^m·(1 + O(ε))` under ε-truncation.
pub fn laurent_invert(p: &DiffPoly) -> Result<DiffPoly> {
    let lead = p.eps_part(0);
    let mut it = lead.terms();
    let (m0, c0) = match (it.next(), it.next()) {
        (Some((m, c)), None) => (m.clone(), c.clone()),
        _ => return Err(Error::NotAUnit(p.to_string())),
    };
    let pure_q = m0.jets.iter().all(|(j, _)| j.is_q0());
    if !pure_q || m0.params.s != 0 || m0.params.has_z() {
        return Err(Error::NotAUnit(p.to_string()));
    }
    let mut inv_mono = Mono::param(ParamMono::t(-m0.params.t));
    inv_mono = inv_mono.mul(&Mono::jet_pow(Jet::q(), -m0.q_exponent()));
    let inv_c = Q::one() / c0;
    let lead_inv = DiffPoly::term(p.ctx(), inv_mono, inv_c);
    // p = lead·(1 + x) with x = O(ε)
    let x = &(p * &lead_inv) - &DiffPoly::one(p.ctx());
    let mut sum = DiffPoly::one(p.ctx());
    let mut pw = DiffPoly::one(p.ctx());
    let neg_x = -&x;
    for _ in 1..p.order().max(1) {
        pw = &pw * &neg_x;
        if pw.is_zero() {
            break;
        }
        sum.add_assign_ref(&pw);
    }
    Ok(&sum * &lead_inv)
}

/// The Euler–Lagrange operator `Σₙ (−∂)ⁿ ∂p/∂(∂ⁿx)`. In the reduced algebra
/// the `u`-derivative also picks up `q·∂p/∂q` since `q = e^u`.
pub fn var_derivative(p: &DiffPoly, x: Field) -> DiffPoly {
    let mut out = DiffPoly::zero(p.ctx());
    if let Some(maxn) = p.max_jet_order(x) {
        for n in (0..=maxn).rev() {
            // Horner in (−∂): out = ∂p/∂x_n − ∂(out)
            let part = p.partial(x.jet(n));
            out = &part - &out.derive();
        }
    }
    if p.kind() == Algebra::Reduced && x == Field::new(Gen::U) {
        out.add_assign_ref(&p.map_monos(|m, c| {
            let e = m.q_exponent();
            (e != 0).then(|| (m.clone(), c * Q::from_integer(e.into())))
        }));
    }
    out
}

/// The generators with respect to which functionals are compared.
pub fn functional_fields(p: &DiffPoly) -> Vec<Field> {
    let mut fields: Vec<Field> = p.fields().into_iter().collect();
    if p.kind() == Algebra::Reduced {
        fields.retain(|f| f.gen != Gen::Q);
        let has_q = p.terms().any(|(m, _)| m.q_exponent() != 0);
        if has_q && !fields.contains(&Field::new(Gen::U)) {
            fields.push(Field::new(Gen::U));
        }
        fields.sort();
    }
    fields
}

/// `∫f dx = ∫g dx` in the quotient by total derivatives.
pub fn functional_equal(f: &DiffPoly, g: &DiffPoly) -> bool {
    functional_residual(&(f - g)).is_none()
}

/// First obstruction to `∫d dx = 0`, if any.
pub fn functional_residual(d: &DiffPoly) -> Option<(Option<Field>, DiffPoly)> {
    let c = d.constant_part();
    if !c.is_zero() {
        return Some((None, c));
    }
    for f in functional_fields(d) {
        let vd = var_derivative(d, f);
        if !vd.is_zero() {
            return Some((Some(f), vd));
        }
    }
    None
}

/// An element `∫f dx` of the space of functionals.
#[derive(Clone, Debug)]
pub struct Functional {
    pub density: DiffPoly,
}

impl Functional {
    pub fn new(density: DiffPoly) -> Self {
        Functional { density }
    }

    pub fn zero(ctx: Ctx) -> Self {
        Functional { density: DiffPoly::zero(ctx) }
    }

    pub fn variational(&self, x: Field) -> DiffPoly {
        var_derivative(&self.density, x)
    }

    pub fn is_zero(&self) -> bool {
        functional_residual(&self.density).is_none()
    }
}

impl PartialEq for Functional {
    fn eq(&self, o: &Self) -> bool {
        functional_equal(&self.density, &o.density)
    }
}

impl std::ops::Add for &Functional {
    type Output = Functional;
    fn add(self, o: &Functional) -> Functional {
        Functional::new(&self.density + &o.density)
    }
}

impl std::ops::Sub for &Functional {
    type Output = Functional;
    fn sub(self, o: &Functional) -> Functional {
        Functional::new(&self.density - &o.density)
    }
}

/// Whether every coefficient of `p` is zero at ε-degree below `order`.
pub fn vanishes_below(p: &DiffPoly, order: u8) -> bool {
    p.truncated(order).is_zero()
}
