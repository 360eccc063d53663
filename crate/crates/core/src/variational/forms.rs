//! Variational one-forms `Σ f·∂ⁿ(dx)`, the differential `d`, integration by
//! parts, and operators with one-form coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::diffalg::{rat, Algebra, Ctx, DiffPoly, Field, Gen, Jet, Q};
use crate::diffop::{op_mul, op_power, twisted_product, Coeff, DiffOp, Op};
use crate::error::Result;

/// A one-form: the coefficient of `∂ⁿ(dx)` is stored under the jet `(x, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    ctx: Ctx,
    terms: BTreeMap<Jet, DiffPoly>,
}

pub type OperatorForm = Op<OneForm>;

impl OneForm {
    pub fn zero(ctx: Ctx) -> Self {
        OneForm { ctx, terms: BTreeMap::new() }
    }

    /// `f·∂ⁿ(dx)`.
    pub fn term(f: DiffPoly, j: Jet) -> Self {
        let mut w = OneForm::zero(f.ctx());
        w.add_term(j, &f);
        w
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Jet, &DiffPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, j: Jet, f: &DiffPoly) {
        if f.is_zero() {
            return;
        }
        let e = self.terms.entry(j).or_insert_with(|| DiffPoly::zero(f.ctx()));
        e.add_assign_ref(f);
        if e.is_zero() {
            self.terms.remove(&j);
        }
    }

    /// The coefficient of `dx` (no derivatives on `dx`).
    pub fn coefficient(&self, x: Field) -> DiffPoly {
        self.terms.get(&x.jet(0)).cloned().unwrap_or_else(|| DiffPoly::zero(self.ctx))
    }

    pub fn map_polys(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> OneForm {
        let mut out = OneForm::zero(self.ctx);
        for (j, c) in &self.terms {
            out.add_term(*j, &f(c));
        }
        out
    }

    /// Integration-by-parts normal form `Σₓ (Σₙ (−∂)ⁿ f_{x,n})·dx`.
    pub fn canonicalize(&self) -> OneForm {
        let mut out = OneForm::zero(self.ctx);
        for (j, f) in &self.terms {
            let mut g = f.clone();
            for _ in 0..j.order {
                g = -g.derive();
            }
            out.add_term(j.base().jet(0), &g);
        }
        out
    }

    pub fn is_canonical(&self) -> bool {
        self.terms.keys().all(|j| j.order == 0)
    }

    pub fn sub(&self, o: &OneForm) -> OneForm {
        let mut out = self.clone();
        out.add_assign_ref(&o.neg());
        out
    }
}

impl Coeff for OneForm {
    fn zero(ctx: Ctx) -> Self {
        OneForm::zero(ctx)
    }
    fn ctx(&self) -> Ctx {
        self.ctx
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn derive(&self) -> Self {
        let mut out = OneForm::zero(self.ctx);
        for (j, f) in &self.terms {
            out.add_term(*j, &f.derive());
            out.add_term(j.raised(), f);
        }
        out
    }
    fn scale_eps(&self, k: i8, c: &Q) -> Self {
        self.map_polys(|f| f.scale_eps(k, c))
    }
    fn mul_poly(&self, p: &DiffPoly) -> Self {
        self.map_polys(|f| f * p)
    }
    fn add_assign_ref(&mut self, o: &Self) {
        for (j, f) in &o.terms {
            self.add_term(*j, f);
        }
    }
    fn neg(&self) -> Self {
        self.map_polys(|f| -f)
    }
    fn first_term(&self) -> Option<(i8, String)> {
        let (j, f) = self.terms.iter().next()?;
        let (e, m) = f.first_term()?;
        Some((e, format!("({m}) d{j}")))
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (j, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) d{j}")?;
        }
        Ok(())
    }
}

/// `dp = Σ_j ∂p/∂j · d(j)` with `d(∂ⁿx) = ∂ⁿ(dx)`; in the reduced algebra
/// `dq = q·du`.
pub fn differential(p: &DiffPoly) -> OneForm {
    let ctx = p.ctx();
    let mut out = OneForm::zero(ctx);
    for j in p.jets() {
        let part = p.partial(j);
        if ctx.kind == Algebra::Reduced && j.gen == Gen::Q {
            out.add_term(Jet::new(Gen::U, 0), &(&part * &DiffPoly::q_pow(ctx, 1)));
        } else {
            out.add_term(j, &part);
        }
    }
    out
}

pub fn canonicalize(w: &OneForm) -> OneForm {
    w.canonicalize()
}

/// `dA`, coefficient-wise.
pub fn differential_op(a: &DiffOp) -> OperatorForm {
    a.map_coeffs(a.ctx(), |_, c| differential(c))
}

/// The residue of an operator form, in integration-by-parts normal form.
pub fn res_form(a: &OperatorForm) -> Result<OneForm> {
    Ok(a.res()?.canonicalize())
}

/// `A·Ω`.
pub fn mul_op_form(a: &DiffOp, w: &OperatorForm) -> Result<OperatorForm> {
    let ctx = a.ctx().with_order(a.ctx().order.min(w.ctx().order));
    twisted_product(a, w, ctx, |x, y| y.mul_poly(x))
}

/// `Ω·A`.
pub fn mul_form_op(w: &OperatorForm, a: &DiffOp) -> Result<OperatorForm> {
    let ctx = a.ctx().with_order(a.ctx().order.min(w.ctx().order));
    twisted_product(w, a, ctx, |x, y| x.mul_poly(y))
}

/// `ad(A)Ω = AΩ − ΩA`.
pub fn ad(a: &DiffOp, w: &OperatorForm) -> Result<OperatorForm> {
    mul_op_form(a, w)?.sub(&mul_form_op(w, a)?)
}

fn ad_pow(a: &DiffOp, w: &OperatorForm, k: usize) -> Result<OperatorForm> {
    let mut x = w.clone();
    for _ in 0..k {
        x = ad(a, &x)?;
    }
    Ok(x)
}

/// `C(s, k)` for an integer `s`.
pub fn binomial(s: i64, k: u32) -> Q {
    let mut c = Q::one();
    for i in 0..k as i64 {
        c = c * rat(s - i, i + 1);
    }
    c
}

/// `C(s, k)` as a polynomial in the formal exponent `s`.
pub fn binomial_s(ctx: Ctx, k: u32) -> DiffPoly {
    let s = DiffPoly::s(ctx);
    let mut c = DiffPoly::one(ctx);
    for i in 0..k as i64 {
        let f = &s - &DiffPoly::int(ctx, i);
        c = (&c * &f).scale(&rat(1, i + 1));
    }
    c
}

/// The right side of the perturbation formula for `dLⁿ`:
/// `Σ_{k=0}^{n−1} (−1)^k C(n, k+1) ad(L)^k(L^{n−k−1} dL)`.
pub fn dls_integer_rhs(l: &DiffOp, n: usize) -> Result<OperatorForm> {
    let dl = differential_op(l);
    let mut acc: Option<OperatorForm> = None;
    for k in 0..n {
        let c = binomial(n as i64, k as u32 + 1) * rat(if k % 2 == 0 { 1 } else { -1 }, 1);
        let pw = op_power(l, (n - k - 1) as i32)?;
        let term = ad_pow(l, &mul_op_form(&pw, &dl)?, k)?.scale(&c);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("n >= 1"))
}

/// The right side of the perturbation formula for a formal power `L^s`
/// (given as `ls = WΛ^sW⁻¹`), summed over `k < k_terms`.
pub fn dls_formal_rhs(l: &DiffOp, ls: &DiffOp, k_terms: usize) -> Result<OperatorForm> {
    let ctx = l.ctx();
    let dl = differential_op(l);
    let linv = crate::diffop::op_invert(l)?;
    let mut neg_pow = linv.clone();
    let mut acc: Option<OperatorForm> = None;
    for k in 0..k_terms {
        if k > 0 {
            neg_pow = op_mul(&neg_pow, &linv)?;
        }
        let sign = rat(if k % 2 == 0 { 1 } else { -1 }, 1);
        let c = binomial_s(ctx, k as u32 + 1).scale(&sign);
        let x = mul_op_form(&op_mul(ls, &neg_pow)?, &dl)?;
        let term = ad_pow(l, &x, k)?.map_coeffs(ctx, |_, w| w.mul_poly(&c));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("k_terms >= 1"))
}

/// The right side of the formula for `dℓ`:
/// `−Σ_{k<k_terms} (k+1)⁻¹ ad(L)^k(L^{−k−1} dL)`.
pub fn dlog_rhs(l: &DiffOp, k_terms: usize) -> Result<OperatorForm> {
    let dl = differential_op(l);
    let linv = crate::diffop::op_invert(l)?;
    let mut neg_pow = linv.clone();
    let mut acc: Option<OperatorForm> = None;
    for k in 0..k_terms {
        if k > 0 {
            neg_pow = op_mul(&neg_pow, &linv)?;
        }
        let term = ad_pow(l, &mul_op_form(&neg_pow, &dl)?, k)?.scale(&rat(-1, k as i64 + 1));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.expect("k_terms >= 1"))
}
