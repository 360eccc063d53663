//! The equivariant reduction: the operator `K = Λ + v + qΛ⁻¹`, the constants
//! `z_k`, the order-by-order solution of `K = L + tℓ − Σ z_k/k L^{−k}` over
//! the reduced algebra, and the identities derived from it.

use num_traits::One;

use crate::check::{context, ensure_op, ensure_poly, ensure_zero, fail};
use crate::diffalg::{
    involute, nabla, p_op, Algebra, Ctx, DiffPoly, Field, Gen, Substitution, MAX_Z, Q,
};
use crate::diffop::{commutator, op_bar, op_invert, op_mul, op_power, DiffOp, Op, Window};
use crate::dressing::{ell_recursive, lax_from_dressing, Dressing, LaxPair};
use crate::error::{Error, Result};
use crate::flows::{flow_on_w, EvolDerivation};

/// `K = Λ + a₁ + qΛ⁻¹` (with `a₁ = v` in the reduced algebra).
pub fn big_k(ctx: Ctx) -> DiffOp {
    let a1 = match ctx.kind {
        Algebra::Reduced => DiffPoly::var(ctx, Gen::V),
        _ => DiffPoly::var(ctx, Gen::A(1)),
    };
    let coeffs = [(1, DiffPoly::one(ctx)), (0, a1), (-1, DiffPoly::q_pow(ctx, 1))];
    Op::new(ctx, Window::finite(-1, 1).unwrap(), coeffs)
}

/// `K = L₊ + L̄₋` for a Lax pair.
pub fn k_from_lax(lp: &LaxPair) -> Result<DiffOp> {
    lp.l.proj_plus()?.add(&lp.lbar.proj_minus()?)
}

/// `z_k = p₋₁(k) − q p₁(k) − t𝖯p₀(k)` with `p_j(k)` the `Λ^j` coefficient of `L^k`.
pub fn z_constant(l: &DiffOp, k: i32) -> Result<DiffPoly> {
    let ctx = l.ctx();
    let lk = op_power(l, k)?;
    let q = DiffPoly::q_pow(ctx, 1);
    let t = DiffPoly::t(ctx);
    Ok(&(&lk.coeff(-1)? - &(&q * &lk.coeff(1)?)) - &(&t * &p_op(&lk.coeff(0)?)))
}

/// `a₁ … a_{k_max+1}` over the reduced algebra.
#[derive(Clone, Debug)]
pub struct ConstraintSolution {
    pub ctx: Ctx,
    pub k_max: usize,
    /// `a[k-1] = a_k`.
    pub a: Vec<DiffPoly>,
}

impl ConstraintSolution {
    pub fn a(&self, k: usize) -> &DiffPoly {
        &self.a[k - 1]
    }

    pub fn depth(&self) -> usize {
        self.a.len()
    }

    /// `L = Λ + Σ a_k Λ^{1−k}` and `L̄ = op_bar(L)`, so that `ā_k` is
    /// realized as the involution of `a_k`.
    pub fn lax(&self) -> Result<LaxPair> {
        let l = lax_of(self.ctx, &self.a)?;
        let lbar = op_bar(&l)?;
        Ok(LaxPair { l, lbar })
    }

    /// The map `ρ: 𝒜 → 𝒜̃`, `a_k ↦ a_k`, `ā_k ↦ conj(a_k)`, `q ↦ q`.
    pub fn rho(&self, p: &DiffPoly) -> Result<DiffPoly> {
        for f in p.fields() {
            if let Gen::A(k) = f.gen {
                if k as usize > self.depth() {
                    return Err(Error::DepthExhausted { depth: self.depth(), needed: k as usize });
                }
            }
        }
        let bars: Vec<DiffPoly> = self.a.iter().map(involute).collect();
        let image = |f: Field| -> Option<DiffPoly> {
            match f.gen {
                Gen::A(k) => {
                    let i = k as usize - 1;
                    Some(if f.barred { bars[i].clone() } else { self.a[i].clone() })
                }
                _ => None,
            }
        };
        Ok(Substitution::new(self.ctx, &image).apply(&p.recast(Algebra::Reduced)))
    }
}

fn lax_of(ctx: Ctx, a: &[DiffPoly]) -> Result<DiffOp> {
    let mut coeffs = vec![(1, DiffPoly::one(ctx))];
    coeffs.extend(a.iter().enumerate().map(|(i, x)| (-(i as i32), x.clone())));
    Ok(Op::new(ctx, Window::minus(1 - a.len() as i32, 1)?, coeffs))
}

fn z_over_k(ctx: Ctx, k: usize) -> DiffPoly {
    DiffPoly::z(ctx, k).scale(&Q::new(1.into(), (k as i64).into()))
}

/// Solve `L = K − tℓ + Σ z_k/k L^{−k}` for `a₂, …, a_{k_max+1}`, one
/// `Λ`-degree at a time: the `Λ^{1−k}` coefficient of the right side only
/// involves `a₁ … a_{k−1}`.
pub fn solve_constraint(order: u8, k_max: usize, depth: usize) -> Result<ConstraintSolution> {
    if depth < k_max + 2 {
        return Err(Error::DepthExhausted { depth, needed: k_max + 2 });
    }
    if k_max > MAX_Z {
        return Err(Error::SolveFailed(format!("at most {MAX_Z} constants z_k")));
    }
    let ctx = Ctx::new(Algebra::Reduced, order);
    let kop = big_k(ctx);
    let t = DiffPoly::t(ctx);
    let mut a = vec![DiffPoly::var(ctx, Gen::V)];
    for k in 2..=k_max + 1 {
        let l = lax_of(ctx, &a)?;
        let deg = 1 - k as i32;
        let ell = ell_recursive(&l, k - 1)?;
        let mut x = kop.get(deg).cloned().unwrap_or_else(|| DiffPoly::zero(ctx));
        x.sub_assign_ref(&(&t * &ell.coeff(deg)?));
        if k > 2 {
            let linv = op_invert(&l)?;
            let mut pw = linv.clone();
            for j in 1..k {
                if j > 1 {
                    pw = op_mul(&pw, &linv)?;
                }
                x.add_assign_ref(&(&z_over_k(ctx, j) * &pw.coeff(deg)?));
            }
        } else {
            x.add_assign_ref(&DiffPoly::z(ctx, 1));
        }
        if x.min_t_degree().is_some_and(|d| d < 0) {
            return Err(Error::TPoleDetected(format!("a_{k}")));
        }
        a.push(x);
    }
    Ok(ConstraintSolution { ctx, k_max, a })
}

/// `K − tℓ − L` over the solution, known on degrees `≥ −k_max`.
pub fn kl_remainder(sol: &ConstraintSolution) -> Result<(LaxPair, DiffOp, DiffOp)> {
    let lp = sol.lax()?;
    let ctx = sol.ctx;
    let ell = ell_recursive(&lp.l, sol.depth())?;
    let t_ell = ell.scale_scalar(&DiffPoly::t(ctx));
    let r = big_k(ctx).sub(&t_ell)?.sub(&lp.l)?;
    Ok((lp, ell, r))
}

/// Which form of the `Λ⁻¹` relation the reduced algebra satisfies.
pub const LAMBDA_INV_RELATION: &str = "q*nabla(v - vbar) = t*dq, i.e. nabla(v - vbar) = t*du";

/// The identities of the main theorem over the solution:
/// (i) `[K − tℓ, L] = 0`, (ii) `K − tℓ − L = −Σ z_k/k L^{−k}` with scalar
/// coefficients, (iii) `[K, L] = εt∂L`, together with `[K, L̄] = εt∂L̄`, the
/// `Λ⁻¹` relation and `K = L₊ + L̄₋`.
pub fn theorem_main_check(sol: &ConstraintSolution) -> Result<()> {
    let ctx = sol.ctx;
    let (lp, ell, r) = kl_remainder(sol)?;
    let kop = big_k(ctx);
    let t = DiffPoly::t(ctx);

    ensure_op(&k_from_lax(&lp)?, &kop, "K = L_+ + Lbar_-")?;

    let kt = kop.sub(&ell.scale_scalar(&t))?;
    let c = commutator(&kt, &lp.l)?;
    ensure_op(&c, &Op::zero(ctx).with_window(c.window()), "[K - t ell, L] = 0")?;

    ensure_zero(&r.coeff(0)?, "constant term of K - t ell - L", Some(0))?;
    let linv = op_invert(&lp.l)?;
    let mut rest = r;
    let mut pw = linv.clone();
    for k in 1..=sol.k_max {
        let deg = -(k as i32);
        if k > 1 {
            pw = op_mul(&pw, &linv)?;
        }
        let y = rest.coeff(deg)?;
        if !y.is_jet_free() {
            return Err(fail("K - t ell - L in powers of L^-1", format!("y_{k} = {y} is not scalar")));
        }
        ensure_poly(&y, &-z_over_k(ctx, k), &format!("y_{k} = -z_{k}/{k}"), Some(deg))?;
        rest = rest.sub(&pw.scale_scalar(&y))?;
    }
    let rest = rest.truncate_below(-(sol.k_max as i32))?;
    ensure_op(&rest, &Op::zero(ctx).with_window(rest.window()), "K - t ell - L + sum z_k/k L^-k")?;

    let lhs = commutator(&kop, &lp.l)?;
    let rhs = lp.l.derive().times_eps(1).scale_scalar(&t);
    ensure_op(&lhs, &rhs, "[K, L] = eps t dL")?;

    lbar_constraint_check(sol, &lp)?;
    lambda_inv_oracle(&lp)
}

/// `[K, L̄] = εt∂L̄` with `L̄ = op_bar(L)`: the barred reduction holds with
/// `ā_k ↦ conj(a_k)`.
pub fn lbar_constraint_check(sol: &ConstraintSolution, lp: &LaxPair) -> Result<()> {
    let t = DiffPoly::t(sol.ctx);
    let lhs = commutator(&big_k(sol.ctx), &lp.lbar)?;
    let rhs = lp.lbar.derive().times_eps(1).scale_scalar(&t);
    ensure_op(&lhs, &rhs, "[K, Lbar] = eps t dLbar")
}

/// The `Λ⁻¹` coefficient of `[K, L̄] = εt∂L̄` reads `εq∇(v − v̄) = εt∂q`.
pub fn lambda_inv_oracle(lp: &LaxPair) -> Result<()> {
    let ctx = lp.ctx();
    let c = commutator(&big_k(ctx), &lp.lbar)?.coeff(-1)?;
    let q = DiffPoly::q_pow(ctx, 1);
    let v = DiffPoly::var(ctx, Gen::V);
    let oracle = (&q * &nabla(&(&v - &involute(&v)))).scale_eps(1, &Q::one());
    ensure_poly(&c, &oracle, "[K, Lbar] at L^-1 = eps q nabla(v - vbar)", Some(-1))?;
    let rhs = (&DiffPoly::t(ctx) * &q.derive()).scale_eps(1, &Q::one());
    ensure_poly(&c, &rhs, LAMBDA_INV_RELATION, Some(-1))
}

/// Each `z_k` reduces to the parameter `z_k` plus a polynomial in `z_1 … z_{k−1}`.
pub fn z_constants_check(sol: &ConstraintSolution) -> Result<Vec<DiffPoly>> {
    let free = crate::dressing::lax_free(Ctx::new(Algebra::FreeA, sol.ctx.order), sol.depth())?;
    let mut out = Vec::new();
    for k in 1..=sol.k_max {
        let z = sol.rho(&z_constant(&free.l, k as i32)?)?;
        let rest = &z - &DiffPoly::z(sol.ctx, k);
        let bad = rest.filter(|m| {
            !m.jets.is_empty() || m.params.t != 0 || m.params.z[k - 1..].iter().any(|&e| e > 0)
        });
        ensure_zero(&bad, &format!("z_{k} reduces to constants"), None)?;
        ensure_zero(&z.derive(), &format!("d z_{k}"), None)?;
        out.push(z);
    }
    Ok(out)
}

/// `e = ∂/∂v` in the reduced algebra: `e(v) = e(v̄) = 1`, `e(u) = e(q) = 0`.
pub fn e_derivation(ctx: Ctx) -> EvolDerivation {
    let mut e = EvolDerivation::new("e", ctx);
    e.set(Field::new(Gen::V), DiffPoly::one(ctx));
    e.set(Field::new(Gen::U), DiffPoly::zero(ctx));
    e.set(Field::new(Gen::Q), DiffPoly::zero(ctx));
    e
}

/// `(L − t + Σ z_k L^{−k}) e(L) = L`, together with `e(K) = 1` and
/// `e(ℓ) = −L⁻¹e(L)`, on the known window.
pub fn puncture_check(sol: &ConstraintSolution) -> Result<()> {
    let ctx = sol.ctx;
    let lp = sol.lax()?;
    let e = e_derivation(ctx);
    ensure_op(&e.apply_op(&big_k(ctx))?, &DiffOp::identity(ctx), "e(K) = 1")?;
    ensure_poly(&e.apply(&involute(&DiffPoly::var(ctx, Gen::V)))?, &DiffPoly::one(ctx), "e(vbar) = 1", None)?;

    let el = e.apply_op(&lp.l)?;
    let linv = op_invert(&lp.l)?;
    let ell = ell_recursive(&lp.l, sol.depth())?;
    let e_ell = e.apply_op(&ell)?;
    let rhs = op_mul(&linv, &el)?.neg();
    ensure_op(&e_ell, &rhs, "e(ell) = -L^-1 e(L)")?;

    let mut m = lp.l.sub(&DiffOp::scalar(DiffPoly::t(ctx)))?;
    let mut pw = linv.clone();
    for k in 1..=sol.k_max {
        if k > 1 {
            pw = op_mul(&pw, &linv)?;
        }
        m = m.add(&pw.scale_scalar(&DiffPoly::z(ctx, k)))?;
    }
    let m = m.truncate_below(-(sol.k_max as i32))?;
    let lhs = op_mul(&m, &el)?;
    context(ensure_op(&lhs, &lp.l, "(L - t + sum z_k L^-k) e(L) = L"), "puncture")
}

/// `(K − L − tℓ)W = ε(∂₁ − ∂̄₁ − t∂)W` over the dressing algebra.
pub fn equivariant_w_check(d: &Dressing) -> Result<()> {
    let ctx = d.ctx;
    let lp = lax_from_dressing(d)?;
    let t = DiffPoly::t(ctx);
    let ell = crate::dressing::ell_direct(d)?;
    let kop = k_from_lax(&lp)?;
    let lhs_op = kop.sub(&lp.l)?.sub(&ell.scale_scalar(&t))?;
    let lhs = op_mul(&lhs_op, &d.w)?;
    let d1 = flow_on_w(d, &lp, 1, false)?;
    let db1 = flow_on_w(d, &lp, 1, true)?;
    let w = d.w.truncate_below(1 - d.depth as i32)?;
    let rhs = d1
        .apply_op(&w)?
        .sub(&db1.apply_op(&w)?)?
        .sub(&w.derive().times_eps(1).scale_scalar(&t))?;
    ensure_op(&lhs, &rhs, "(K - L - t ell) W = eps (d_1 - dbar_1 - t d) W")
}

/// With every `z_k = 0` the reduced solution satisfies `K = L + tℓ`, so the
/// left side above vanishes.
pub fn equivariant_w_reduced_check(sol: &ConstraintSolution) -> Result<()> {
    let (_, _, r) = kl_remainder(sol)?;
    let r0 = r.map_polys(sol.ctx, DiffPoly::z_zero);
    ensure_op(&r0, &Op::zero(sol.ctx).with_window(r0.window()), "K - L - t ell = 0 at z = 0")
}

/// The reduced flows `ε∂_n v = res[Lⁿ₊, L]`, `ε∂_n u = q⁻¹[Lⁿ₊, L̄]_{−1}` (or
/// their barred versions `res(−[L̄ⁿ₋, L])`, `q⁻¹[L̄ⁿ₊, L̄]_{−1}`).
pub fn reduced_flow(sol: &ConstraintSolution, n: i32, barred: bool) -> Result<EvolDerivation> {
    let ctx = sol.ctx;
    let lp = sol.lax()?;
    let (dl, dlb) = if barred {
        let c = op_power(&lp.lbar, n)?;
        (commutator(&c.proj_minus()?, &lp.l)?.neg(), commutator(&c.proj_plus()?, &lp.lbar)?)
    } else {
        crate::flows::lax_rhs(&lp, n)?
    };
    let qinv = DiffPoly::q_pow(ctx, -1);
    let name = if barred { format!("dbar_{n}") } else { format!("d_{n}") };
    let mut d = EvolDerivation::new(name, ctx);
    d.set(Field::new(Gen::V), dl.res()?);
    d.set(Field::new(Gen::U), &qinv * &dlb.coeff(-1)?);
    Ok(d)
}

/// `ρ(ε∂_n a_k) = ε∂_n^red ρ(a_k)` and `ρ(ε∂_n q) = q·ε∂_n^red u`.
pub fn reduced_consistency_check(sol: &ConstraintSolution, n: i32, barred: bool, k_max: usize) -> Result<()> {
    let free = crate::dressing::lax_free(Ctx::new(Algebra::FreeA, sol.ctx.order), sol.depth())?;
    let fa = crate::flows::flow_on_a(&free, n, barred)?;
    let red = reduced_flow(sol, n, barred)?;
    for k in 1..=k_max {
        let Some(img) = fa.image(Field::new(Gen::A(k as u8))) else {
            return Err(Error::DepthExhausted { depth: sol.depth(), needed: k + n as usize });
        };
        let lhs = sol.rho(img)?;
        let rhs = red.apply(sol.a(k))?;
        ensure_poly(&lhs, &rhs, &format!("rho({} a_{k})", red.name), None)?;
    }
    let qimg = fa.image(Field::new(Gen::Q)).expect("q flow");
    let lhs = sol.rho(qimg)?;
    let rhs = red.apply(&DiffPoly::q_pow(sol.ctx, 1))?;
    ensure_poly(&lhs, &rhs, &format!("rho({} q)", red.name), None)
}

/// The solution for `a_k` is stable when more coefficients are solved.
pub fn deepening_check(a: &ConstraintSolution, b: &ConstraintSolution) -> Result<()> {
    for k in 1..=a.depth().min(b.depth()) {
        ensure_poly(a.a(k), b.a(k), &format!("a_{k} under deepening"), Some(1 - k as i32))?;
    }
    Ok(())
}
