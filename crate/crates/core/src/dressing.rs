//! The dressing operator `W`, the Lax operators `L = WΛW⁻¹` and `L̄`, the
//! operator `ℓ = ε(∂W)W⁻¹` and the fractional powers `L^s = WΛ^sW⁻¹`.

use num_traits::One;

use crate::check::{ensure_op, ensure_poly, ensure_zero, fail};
use crate::diffalg::{
    bracket, e_half, involute, p_op, series_apply, Algebra, Builtin, Ctx, DiffPoly, Field, Gen,
    Jet, Substitution, Q,
};
use crate::diffop::{
    op_bar, op_invert, op_mul, op_mul_all, op_powers, DiffOp, Op, Window,
};
use crate::error::{Error, Result};

/// `W = 1 + Σ_{k=1}^{D} w_k Λ^{−k}` and its inverse.
#[derive(Clone, Debug)]
pub struct Dressing {
    pub ctx: Ctx,
    pub depth: usize,
    pub w: DiffOp,
    pub w_star: Vec<DiffPoly>,
    pub w_inv: DiffOp,
}

fn w_var(ctx: Ctx, k: usize) -> DiffPoly {
    DiffPoly::var(ctx, Gen::W(k as u8))
}

/// `w*_k = −w_k − Σ_{j<k} (E^{(k−j)/2}w_j)(E^{−j/2}w*_{k−j})`, for `k = 1..=D`.
pub fn dressing_inverse(ctx: Ctx, depth: usize) -> Vec<DiffPoly> {
    let mut ws: Vec<DiffPoly> = Vec::with_capacity(depth);
    for k in 1..=depth {
        let mut x = -w_var(ctx, k);
        for j in 1..k {
            let a = e_half((k - j) as i64, &w_var(ctx, j));
            let b = e_half(-(j as i64), &ws[k - j - 1]);
            x.sub_assign_ref(&(&a * &b));
        }
        ws.push(x);
    }
    ws
}

pub fn dressing(ctx: Ctx, depth: usize) -> Dressing {
    debug_assert_eq!(ctx.kind, Algebra::DressingB);
    let d = depth as i32;
    let window = Window::minus(-d, 0).unwrap();
    let mut coeffs = vec![(0, DiffPoly::one(ctx))];
    coeffs.extend((1..=depth).map(|k| (-(k as i32), w_var(ctx, k))));
    let w = Op::new(ctx, window, coeffs);
    let w_star = dressing_inverse(ctx, depth);
    let mut inv = vec![(0, DiffPoly::one(ctx))];
    inv.extend(w_star.iter().enumerate().map(|(i, p)| (-(i as i32) - 1, p.clone())));
    let w_inv = Op::new(ctx, window, inv);
    Dressing { ctx, depth, w, w_star, w_inv }
}

/// `W∘W⁻¹ = W⁻¹∘W = 1` to depth `D`.
pub fn w_inverse_check(d: &Dressing) -> Result<()> {
    let one = DiffOp::identity(d.ctx).as_minus(-(d.depth as i32))?;
    ensure_op(&op_mul(&d.w, &d.w_inv)?, &one, "W W^-1 = 1")?;
    ensure_op(&op_mul(&d.w_inv, &d.w)?, &one, "W^-1 W = 1")?;
    let generic = op_invert(&d.w)?;
    ensure_op(&generic, &d.w_inv, "w* recursion = operator inverse")
}

/// The Lax operators `L` (a `Φ₋` operator) and `L̄` (a `Φ₊` operator).
#[derive(Clone, Debug)]
pub struct LaxPair {
    pub l: DiffOp,
    pub lbar: DiffOp,
}

impl LaxPair {
    pub fn ctx(&self) -> Ctx {
        self.l.ctx()
    }

    /// `a_k`, the coefficient of `Λ^{1−k}` in `L`.
    pub fn a(&self, k: usize) -> Result<DiffPoly> {
        self.l.coeff(1 - k as i32)
    }

    /// The window depth: `a_1..a_D` are known.
    pub fn depth(&self) -> usize {
        (1 - self.l.lo()) as usize
    }
}

/// `L = WΛW⁻¹` and `L̄ = W̄⁻¹(qΛ⁻¹)W̄` with `W̄ = op_bar(W)`.
pub fn lax_from_dressing(d: &Dressing) -> Result<LaxPair> {
    let ctx = d.ctx;
    let l = op_mul_all(&[&d.w, &DiffOp::lambda(ctx, 1), &d.w_inv])?;
    let wb = op_bar(&d.w)?;
    let wb_inv = op_bar(&d.w_inv)?;
    let q_lam = DiffOp::monomial(DiffPoly::q_pow(ctx, 1), -1);
    let lbar = op_mul_all(&[&wb_inv, &q_lam, &wb])?;
    Ok(LaxPair { l, lbar })
}

/// `a_k` as a polynomial in the `w`'s, `k = 1..=D`.
pub fn a_in_w(d: &Dressing) -> Result<Vec<DiffPoly>> {
    let lp = lax_from_dressing(d)?;
    (1..=d.depth).map(|k| lp.a(k)).collect()
}

/// `a_k + ε∇w_k` lies in the differential ideal generated by `w_1..w_{k−1}`.
pub fn embedding_check(d: &Dressing) -> Result<()> {
    let a = a_in_w(d)?;
    for (i, ak) in a.iter().enumerate() {
        let k = i + 1;
        let nab = series_apply(Builtin::Nabla, &w_var(d.ctx, k))?.scale_eps(1, &Q::one());
        let x = ak + &nab;
        let reduced = x.filter(|m| {
            !m.jets
                .iter()
                .any(|(j, _)| matches!(j.gen, Gen::W(i) if (i as usize) < k) && !j.barred)
        });
        ensure_zero(&reduced, &format!("a_{k} + eps nabla w_{k} in (w_1..w_{})", k - 1), None)?;
    }
    Ok(())
}

/// The free Lax pair: `L = Λ + Σ a_k Λ^{1−k}` over the generators `a_k`, and
/// `L̄ = op_bar(L) = qΛ⁻¹ + Σ ā_k q^{−[k−1]} Λ^{k−1}`.
pub fn lax_free(ctx: Ctx, depth: usize) -> Result<LaxPair> {
    let mut coeffs = vec![(1, DiffPoly::one(ctx))];
    coeffs.extend((1..=depth).map(|k| (1 - k as i32, DiffPoly::var(ctx, Gen::A(k as u8)))));
    let l = Op::new(ctx, Window::minus(1 - depth as i32, 1)?, coeffs);
    let lbar = op_bar(&l)?;
    Ok(LaxPair { l, lbar })
}

/// The ring map `𝒜 → ℬ`, `a_k ↦ a_k(w)`, `ā_k ↦ conj(a_k(w))`.
pub fn free_to_dressing(a_w: &[DiffPoly]) -> impl Fn(&DiffPoly) -> DiffPoly + '_ {
    move |p: &DiffPoly| {
        let ctx = a_w[0].ctx();
        let image = |f: Field| -> Option<DiffPoly> {
            match f.gen {
                Gen::A(k) if (k as usize) <= a_w.len() => {
                    let x = &a_w[k as usize - 1];
                    Some(if f.barred { involute(x) } else { x.clone() })
                }
                _ => None,
            }
        };
        Substitution::new(ctx, &image).apply(&p.recast(Algebra::DressingB))
    }
}

/// `ℓ = ε(∂W)W⁻¹ = Σ b_k Λ^{−k}` over `ℬ`.
pub fn ell_direct(d: &Dressing) -> Result<DiffOp> {
    let dw = d.w.derive().times_eps(1);
    op_mul(&dw, &d.w_inv)
}

/// `ℓ` from the displayed sum
/// `b_k = ε(∂w_k + Σ_j (E^{(k−j)/2}∂w_j)(E^{−j/2}w*_{k−j}))`.
pub fn ell_sum(d: &Dressing) -> DiffOp {
    let ctx = d.ctx;
    let mut coeffs = Vec::new();
    for k in 1..=d.depth {
        let mut b = w_var(ctx, k).derive();
        for j in 1..k {
            let a = e_half((k - j) as i64, &w_var(ctx, j).derive());
            b.add_assign_ref(&(&a * &e_half(-(j as i64), &d.w_star[k - j - 1])));
        }
        coeffs.push((-(k as i32), b.scale_eps(1, &Q::one())));
    }
    Op::new(ctx, Window::minus(-(d.depth as i32), -1).unwrap(), coeffs)
}

/// `p_k(n)`: coefficient of `Λ^k` in `Lⁿ`.
pub fn powers(l: &DiffOp, n: i32, k: i32) -> Result<DiffPoly> {
    crate::diffop::op_power(l, n)?.coeff(k)
}

/// `b_n = −[n]⁻¹(Σ_{k=1}^{n−1}[k](b_k p_k(n)) + 𝖯 p₀(n))`, `n = 1..=n_max`,
/// with `Lⁿ` precomputed in `pw[n]`.
pub fn ell_from_powers(pw: &[DiffOp], n_max: usize) -> Result<DiffOp> {
    let ctx = pw[0].ctx();
    let mut bs: Vec<DiffPoly> = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let p = &pw[n];
        let mut acc = p_op(&p.coeff(0)?);
        for (k, bk) in bs.iter().enumerate() {
            let k = k + 1;
            acc.add_assign_ref(&bracket(k as i64, &(bk * &p.coeff(k as i32)?)));
        }
        let bn = -series_apply(Builtin::BracketInv(n as i64), &acc)?;
        bs.push(bn);
    }
    let coeffs = bs.into_iter().enumerate().map(|(i, b)| (-(i as i32) - 1, b));
    Ok(Op::new(ctx, Window::minus(-(n_max as i32), -1)?, coeffs))
}

/// `ℓ` by the recursion for `b_n`, from the powers of `L`.
pub fn ell_recursive(l: &DiffOp, n_max: usize) -> Result<DiffOp> {
    let depth = (1 - l.lo()) as usize;
    if n_max > depth {
        return Err(Error::DepthExhausted { depth, needed: n_max });
    }
    let pw = op_powers(l, n_max)?;
    ell_from_powers(&pw, n_max)
}

/// `ε∂L = [ℓ, L]` on the window.
pub fn ell_commutator_check(ell: &DiffOp, l: &DiffOp) -> Result<()> {
    let lhs = l.derive().times_eps(1);
    let rhs = crate::diffop::commutator(ell, l)?;
    ensure_op(&lhs, &rhs, "eps dL = [ell, L]")
}

/// `∇([n]b_n + Σ_{k<n}[k](b_k p_k(n)) + 𝖯p₀(n)) = 0` together with the
/// vanishing of its integration constant.
pub fn eq_bn_check(ell: &DiffOp, pw: &[DiffOp], n_max: usize) -> Result<()> {
    for n in 1..=n_max {
        let p = &pw[n];
        let mut x = p_op(&p.coeff(0)?);
        for k in 1..=n {
            let bk = ell.coeff(-(k as i32))?;
            let pk = if k == n { DiffPoly::one(bk.ctx()) } else { p.coeff(k as i32)? };
            x.add_assign_ref(&bracket(k as i64, &(&bk * &pk)));
        }
        let nab = series_apply(Builtin::Nabla, &x)?;
        ensure_zero(&nab, &format!("nabla(B_{n})"), Some(-(n as i32)))?;
        ensure_zero(&x, &format!("B_{n} (constant of integration)"), Some(-(n as i32)))?;
        if let Ok(a) = ell.coeff(-(n as i32))?.alpha() {
            ensure_zero(&a, &format!("alpha(b_{n})"), Some(-(n as i32)))?;
        }
    }
    Ok(())
}

/// `L^s = W Λ^s W⁻¹` with the formal exponent `s` (an s-offset operator).
pub fn frac_power(d: &Dressing) -> Result<DiffOp> {
    let ls = crate::diffop::lambda_s(d.ctx, 1);
    op_mul(&op_mul(&d.w, &ls)?, &d.w_inv)
}

/// The explicit `a_k(s) = E^{−s/2}w_k + Σ_j (E^{(k−j−s)/2}w_j)(E^{(s−j)/2}w*_{k−j}) + E^{s/2}w*_k`.
pub fn frac_power_explicit(d: &Dressing, k: usize) -> DiffPoly {
    use crate::diffalg::shift_formal;
    let ctx = d.ctx;
    let mut a = shift_formal(&w_var(ctx, k), 0, -1);
    for j in 1..k {
        let x = shift_formal(&w_var(ctx, j), (k - j) as i64, -1);
        let y = shift_formal(&d.w_star[k - j - 1], -(j as i64), 1);
        a.add_assign_ref(&(&x * &y));
    }
    a.add_assign_ref(&shift_formal(&d.w_star[k - 1], 0, 1));
    a
}

/// The properties of `a_k(s)`: the explicit formula, `a_k(0) = 0`,
/// `a_k(1) = a_k`, `a'_k(0) = −b_k`, the s-degree bound, and the ODE
/// `dL^s/ds = −½(L^s ℓ + ℓ L^s)`.
pub fn frac_power_ode_check(d: &Dressing, k_max: usize) -> Result<()> {
    let ctx = d.ctx;
    let ls = frac_power(d)?;
    let lp = lax_from_dressing(d)?;
    let ell = ell_direct(d)?;
    for k in 1..=k_max.min(d.depth) {
        let deg = -(k as i32);
        let ak = ls.coeff(deg)?;
        ensure_poly(&ak, &frac_power_explicit(d, k), &format!("a_{k}(s) explicit"), Some(deg))?;
        ensure_zero(&ak.subst_s(&Q::from_integer(0.into())), &format!("a_{k}(0)"), Some(deg))?;
        ensure_poly(&ak.subst_s(&Q::one()), &lp.a(k)?, &format!("a_{k}(1)"), Some(deg))?;
        let da0 = ak.diff_s().subst_s(&Q::from_integer(0.into()));
        ensure_poly(&da0, &-ell.coeff(deg)?, &format!("a'_{k}(0) = -b_{k}"), Some(deg))?;
        for i in 0..ctx.order as i8 {
            let sd = ak.max_s_degree_at_eps(i).unwrap_or(0);
            if sd as i32 > i as i32 + 1 {
                return Err(fail(
                    &format!("s-degree of a_{k}(s) at eps^{i}"),
                    format!("degree {sd} > {}", i + 1),
                ));
            }
        }
    }
    let ds = ls.map_polys(ctx, DiffPoly::diff_s);
    let half = Q::new((-1).into(), 2.into());
    let rhs = op_mul(&ls, &ell)?.add(&op_mul(&ell, &ls)?)?.scale(&half);
    let rhs = rhs.truncate_below(-(k_max.min(d.depth) as i32))?;
    ensure_op(&ds, &rhs, "dL^s/ds = -1/2 (L^s ell + ell L^s)")
}

/// `L^s` at `s = n` against `Lⁿ`.
pub fn frac_power_integer_check(d: &Dressing, n_max: usize) -> Result<()> {
    let ls = frac_power(d)?;
    let lp = lax_from_dressing(d)?;
    let pw = op_powers(&lp.l, n_max)?;
    for n in 1..=n_max {
        let at_n = ls.map_polys(d.ctx, |c| c.subst_s(&Q::from_integer((n as i64).into())));
        let coeffs: Vec<(i32, DiffPoly)> =
            at_n.entries().map(|(k, c)| (k + n as i32, c.clone())).collect();
        let w = at_n.window().shifted(n as i32);
        let shifted = Op::new(d.ctx, w, coeffs);
        ensure_op(&shifted, &pw[n], &format!("L^s at s = {n}"))?;
    }
    Ok(())
}

/// Whether any coefficient mentions a `w` jet.
pub fn mentions_w(op: &DiffOp) -> bool {
    op.mentions(|j: Jet| matches!(j.gen, Gen::W(_)))
}

#[cfg(test)]
mod tests;
