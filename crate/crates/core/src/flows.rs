//! The commuting flows `∂_n`, `∂̄_n` as evolutionary derivations, and the
//! Zakharov–Shabat and commutativity checks.
//!
//! Every derivation is stored multiplied by ε: the table holds `ε·δ(x)` for
//! the order-0 generators, so `ε⁻¹` never has to be formed.

use std::collections::{BTreeMap, HashMap};

use crate::check::{context, ensure_op, ensure_zero};
use crate::diffalg::{involute, Algebra, Ctx, DiffPoly, Field, Gen, Jet};
use crate::diffop::{commutator, op_mul, op_power, DiffOp};
use crate::dressing::{Dressing, LaxPair};
use crate::error::{Error, Result};
use crate::parallel::par_map;

/// An evolutionary derivation, given by `ε·δ` on order-0 generators and
/// prolonged by `δ(∂ⁿx) = ∂ⁿδ(x)`.
#[derive(Clone, Debug)]
pub struct EvolDerivation {
    pub name: String,
    pub ctx: Ctx,
    pub table: BTreeMap<Field, DiffPoly>,
}

impl EvolDerivation {
    pub fn new(name: impl Into<String>, ctx: Ctx) -> Self {
        EvolDerivation { name: name.into(), ctx, table: BTreeMap::new() }
    }

    pub fn set(&mut self, f: Field, image: DiffPoly) {
        self.table.insert(f, image);
    }

    pub fn image(&self, f: Field) -> Option<&DiffPoly> {
        self.table.get(&f)
    }

    fn base_image(&self, f: Field) -> Result<DiffPoly> {
        if let Some(p) = self.table.get(&f) {
            return Ok(p.clone());
        }
        if self.ctx.kind == Algebra::Reduced && f.gen == Gen::Q {
            // q = e^u
            let du = self.base_image(Field::new(Gen::U))?;
            return Ok(&DiffPoly::q_pow(self.ctx, 1) * &du);
        }
        Err(Error::MissingGenerator(format!("{f} under {}", self.name)))
    }

    /// `δ(p)` (times ε).
    pub fn apply(&self, p: &DiffPoly) -> Result<DiffPoly> {
        let mut cache: HashMap<Jet, DiffPoly> = HashMap::new();
        let mut out = DiffPoly::zero(p.ctx());
        for j in p.jets() {
            let img = match cache.get(&j) {
                Some(x) => x.clone(),
                None => {
                    let x = self.base_image(j.base())?.derive_n(j.order as usize);
                    cache.insert(j, x.clone());
                    x
                }
            };
            out.add_assign_ref(&(&p.partial(j) * &img));
        }
        Ok(out)
    }

    /// Coefficient-wise action on an operator.
    pub fn apply_op(&self, a: &DiffOp) -> Result<DiffOp> {
        a.try_map_coeffs(a.ctx(), |_, c| self.apply(c))
    }

    /// Divide every image by ε; fails if some image has an ε⁰ part.
    pub fn regular(&self) -> Result<EvolDerivation> {
        let mut table = BTreeMap::new();
        for (f, p) in &self.table {
            table.insert(*f, p.div_eps()?);
        }
        Ok(EvolDerivation { name: self.name.clone(), ctx: self.ctx.with_order(self.ctx.order - 1), table })
    }

    /// The conjugate derivation `x ↦ conj(δ(conj x))`, swapping the roles of
    /// barred and unbarred generators.
    pub fn conjugate_images(&self, name: impl Into<String>) -> EvolDerivation {
        let mut out = EvolDerivation::new(name, self.ctx);
        for (f, p) in &self.table {
            let g = if f.gen.self_conjugate() { *f } else { Field { barred: !f.barred, ..*f } };
            out.set(g, involute(p));
        }
        out
    }
}

/// `Lⁿ₊`.
pub fn b_tilde(l: &DiffOp, n: i32) -> Result<DiffOp> {
    op_power(l, n)?.proj_plus()
}

/// `L̄ⁿ₋`.
pub fn c_tilde(lbar: &DiffOp, n: i32) -> Result<DiffOp> {
    op_power(lbar, n)?.proj_minus()
}

/// `ε∂_n L = [Lⁿ₊, L]`, `ε∂_n L̄ = [Lⁿ₊, L̄]`.
pub fn lax_rhs(lp: &LaxPair, n: i32) -> Result<(DiffOp, DiffOp)> {
    let b = b_tilde(&lp.l, n)?;
    Ok((commutator(&b, &lp.l)?, commutator(&b, &lp.lbar)?))
}

/// `ε∂̄_n L = −[L̄ⁿ₋, L]`, `ε∂̄_n L̄ = −[L̄ⁿ₋, L̄]`.
pub fn lax_rhs_bar(lp: &LaxPair, n: i32) -> Result<(DiffOp, DiffOp)> {
    let c = c_tilde(&lp.lbar, n)?;
    Ok((commutator(&c, &lp.l)?.neg(), commutator(&c, &lp.lbar)?.neg()))
}

/// Highest `k` for which `ε∂_n a_k` can be read off `[Lⁿ₊, L]`.
fn known_a(op: &DiffOp, depth: usize) -> usize {
    ((1 - op.lo()).max(0) as usize).min(depth)
}

/// `∂_n` (or `∂̄_n` when `barred`) on the free algebra `𝒜`, read off the Lax
/// equations: `a_k` from `L`, `q` from the `Λ⁻¹` coefficient of `L̄`, and
/// `ā_k` from the conjugate flow.
pub fn flow_on_a(lp: &LaxPair, n: i32, barred: bool) -> Result<EvolDerivation> {
    let ctx = lp.ctx();
    let depth = lp.depth();
    let ((l, lb), (cl, _)) = if barred {
        (lax_rhs_bar(lp, n)?, lax_rhs(lp, n)?)
    } else {
        (lax_rhs(lp, n)?, lax_rhs_bar(lp, n)?)
    };
    let name = if barred { format!("dbar_{n}") } else { format!("d_{n}") };
    let mut d = EvolDerivation::new(name, ctx);
    for k in 1..=known_a(&l, depth) {
        d.set(Field::new(Gen::A(k as u8)), l.coeff(1 - k as i32)?);
    }
    for k in 1..=known_a(&cl, depth) {
        d.set(Field::bar(Gen::A(k as u8)), involute(&cl.coeff(1 - k as i32)?));
    }
    d.set(Field::new(Gen::Q), lb.coeff(-1)?);
    Ok(d)
}

/// `∂_n w_k = −ε⁻¹ coef_{−k}(Lⁿ₋W)` and `∂̄_n w_k = −ε⁻¹ coef_{−k}(L̄ⁿ₋W)`
/// on `ℬ`, with the barred generators from the conjugate flow and `q` from
/// the Lax equation for `L̄`.
pub fn flow_on_w(d: &Dressing, lp: &LaxPair, n: i32, barred: bool) -> Result<EvolDerivation> {
    let ctx = d.ctx;
    let minus_l = op_power(&lp.l, n)?.proj_minus()?;
    let minus_lb = c_tilde(&lp.lbar, n)?;
    let lw = op_mul(&minus_l, &d.w)?.neg();
    let lbw = op_mul(&minus_lb, &d.w)?.neg();
    let (own, other) = if barred { (&lbw, &lw) } else { (&lw, &lbw) };
    let name = if barred { format!("dbar_{n}") } else { format!("d_{n}") };
    let mut der = EvolDerivation::new(name, ctx);
    for k in 1..=d.depth {
        if let Ok(c) = own.coeff(-(k as i32)) {
            der.set(Field::new(Gen::W(k as u8)), c);
        }
        if let Ok(c) = other.coeff(-(k as i32)) {
            der.set(Field::bar(Gen::W(k as u8)), involute(&c));
        }
    }
    let (_, lb) = if barred { lax_rhs_bar(lp, n)? } else { lax_rhs(lp, n)? };
    der.set(Field::new(Gen::Q), lb.coeff(-1)?);
    Ok(der)
}

fn b_or_c(lp: &LaxPair, n: i32, bar: bool) -> Result<DiffOp> {
    if bar {
        c_tilde(&lp.lbar, n)
    } else {
        b_tilde(&lp.l, n)
    }
}

/// Zakharov–Shabat for a pair of flows, in the scaled form
/// `(εδ_m)X_n − (εδ_n)X_m = [X_m, X_n]` with `X = Lⁿ₊` for `∂_n` and
/// `X = −L̄ⁿ₋` for `∂̄_n`.
pub fn zakharov_shabat_check(
    lp: &LaxPair,
    (m, m_bar): (i32, bool),
    (n, n_bar): (i32, bool),
) -> Result<()> {
    let dm = flow_on_a(lp, m, m_bar)?;
    let dn = flow_on_a(lp, n, n_bar)?;
    let sign = |bar: bool, x: DiffOp| if bar { x.neg() } else { x };
    let xm = sign(m_bar, b_or_c(lp, m, m_bar)?);
    let xn = sign(n_bar, b_or_c(lp, n, n_bar)?);
    let lhs = dm.apply_op(&xn)?.sub(&dn.apply_op(&xm)?)?;
    let rhs = commutator(&xm, &xn)?;
    let label = |k: i32, bar: bool| if bar { format!("{k}~") } else { format!("{k}") };
    ensure_op(&lhs, &rhs, &format!("ZS({},{})", label(m, m_bar), label(n, n_bar)))
}

/// `[δ₁, δ₂](x) = 0` for each generator in `gens`.
pub fn flows_commute_check(a: &EvolDerivation, b: &EvolDerivation, gens: &[Field]) -> Result<()> {
    let ctx = a.ctx;
    let results = par_map(gens.to_vec(), |f| -> Result<()> {
        let x = DiffPoly::jet(ctx, f.jet(0));
        let ab = a.apply(&b.apply(&x)?)?;
        let ba = b.apply(&a.apply(&x)?)?;
        ensure_zero(&(&ab - &ba), &format!("[{}, {}]({f})", a.name, b.name), None)
    });
    results.into_iter().collect()
}

/// `δ` commutes with `∂`: `δ(∂p) = ∂δ(p)`.
pub fn evolutionary_check(d: &EvolDerivation, p: &DiffPoly) -> Result<()> {
    let lhs = d.apply(&p.derive())?;
    let rhs = d.apply(p)?.derive();
    ensure_zero(&(&lhs - &rhs), &format!("[d, {}]", d.name), None)
}

/// Every image of `δ` is divisible by ε.
pub fn regularity_check(d: &EvolDerivation) -> Result<()> {
    d.regular().map(|_| ()).map_err(|e| match e {
        Error::NotRegular(m) => crate::check::fail(&format!("{} regular in eps", d.name), m),
        other => other,
    })
}

/// The flows on `ℬ` restrict to `𝒜`: applying `∂_n` to `a_k(w)` equals
/// substituting `a(w)` into the free flow image.
pub fn restriction_check(d: &Dressing, n: i32, k_max: usize) -> Result<()> {
    let dl = crate::dressing::lax_from_dressing(d)?;
    let a_w = crate::dressing::a_in_w(d)?;
    let fw = flow_on_w(d, &dl, n, false)?;
    let free = crate::dressing::lax_free(Ctx::new(Algebra::FreeA, d.ctx.order), d.depth)?;
    let fa = flow_on_a(&free, n, false)?;
    let subst = crate::dressing::free_to_dressing(&a_w);
    for k in 1..=k_max {
        let Some(img) = fa.image(Field::new(Gen::A(k as u8))) else { break };
        let lhs = fw.apply(&a_w[k - 1])?;
        let rhs = subst(img);
        context(
            crate::check::ensure_poly(&lhs, &rhs, &format!("d_{n} a_{k} over B"), None),
            "restriction",
        )?;
    }
    Ok(())
}

/// The flows of `L` computed on `ℬ` from `W` reproduce the Lax equation:
/// `(εδ_n W)W⁻¹ = −Lⁿ₋`.
pub fn dressing_flow_check(d: &Dressing, n: i32) -> Result<()> {
    let lp = crate::dressing::lax_from_dressing(d)?;
    let fw = flow_on_w(d, &lp, n, false)?;
    // the lowest coefficient involves w_D, whose flow is out of the window
    let l = lp.l.truncate_below(lp.l.lo() + 1)?;
    let dl = fw.apply_op(&l)?;
    let (rhs, _) = lax_rhs(&lp, n)?;
    ensure_op(&dl, &rhs, &format!("eps d_{n} L = [L^{n}_+, L] on B"))
}

#[cfg(test)]
mod tests;
