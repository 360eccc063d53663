//! Hamiltonians `h_n`, `H_n`, `H̄_n`, the operator `J`, and the `t → 0`
//! limits.

use crate::check::{context, ensure_op, ensure_poly, ensure_zero, fail};
use crate::diffalg::{
    bracket, functional_equal, functional_residual, involute, nabla, p_op, rat, Ctx, DiffPoly,
    Field, Functional, Gen, Q,
};
use crate::diffop::{op_mul, op_power, Coeff, DiffOp};
use crate::equivariant::{big_k, reduced_flow, ConstraintSolution};
use crate::error::{Error, Mismatch, Result};

use super::forms::{differential, differential_op, mul_op_form, res_form};

/// The Hamiltonians of the `n`-th flow over the reduced algebra.
#[derive(Clone, Debug)]
pub struct HamiltonianRecord {
    pub n: usize,
    /// `h_0 … h_n`.
    pub h: Vec<Functional>,
    pub big_h: Functional,
    pub big_h_bar: Functional,
    pub delta_v: DiffPoly,
    pub delta_u: DiffPoly,
}

fn h_density(l: &DiffOp, n: usize) -> Result<DiffPoly> {
    Ok(op_power(l, n as i32 + 1)?.res()?.scale(&rat(1, n as i64 + 1)))
}

fn big_h_density(ctx: Ctx, h: &[DiffPoly], n: usize) -> DiffPoly {
    let mut x = h[n].clone();
    if n >= 1 {
        x.sub_assign_ref(&(&DiffPoly::t(ctx) * &h[n - 1]));
    }
    for k in 1..n {
        x.add_assign_ref(&(&DiffPoly::z(ctx, k) * &h[n - k - 1]));
    }
    x
}

/// `h_k = Res(L^{k+1})/(k+1)` for `k ≤ n`, `H_n = h_n − t h_{n−1} + Σ z_k h_{n−k−1}`
/// and `H̄_n = conj(H_n)`.
pub fn hamiltonian(sol: &ConstraintSolution, n: usize) -> Result<HamiltonianRecord> {
    if sol.depth() < n + 1 {
        return Err(Error::DepthExhausted { depth: sol.depth(), needed: n + 1 });
    }
    let ctx = sol.ctx;
    let lp = sol.lax()?;
    let h: Vec<DiffPoly> = (0..=n).map(|k| h_density(&lp.l, k)).collect::<Result<_>>()?;
    let big = big_h_density(ctx, &h, n);
    let bar = involute(&big);
    Ok(HamiltonianRecord {
        n,
        delta_v: crate::diffalg::var_derivative(&big, Field::new(Gen::V)),
        delta_u: crate::diffalg::var_derivative(&big, Field::new(Gen::U)),
        h: h.into_iter().map(Functional::new).collect(),
        big_h: Functional::new(big),
        big_h_bar: Functional::new(bar),
    })
}

fn ensure_form(a: &super::OneForm, b: &super::OneForm, check: &str) -> Result<()> {
    if a == b {
        return Ok(());
    }
    let d = a.sub(b);
    let (eps, monomial) = d.first_term().unwrap_or_default();
    Err(Error::CheckFailed(Mismatch {
        check: check.to_string(),
        degree: Some(0),
        eps_degree: Some(eps.into()),
        monomial,
        detail: format!("difference {d}"),
    }))
}

/// `dh_n = Res(Lⁿ dL)` as canonical one-forms.
pub fn dh_n_check(sol: &ConstraintSolution, n: usize) -> Result<()> {
    let lp = sol.lax()?;
    let h = h_density(&lp.l, n)?;
    let rhs = res_form(&mul_op_form(&op_power(&lp.l, n as i32)?, &differential_op(&lp.l))?)?;
    ensure_form(&differential(&h).canonicalize(), &rhs, &format!("dh_{n} = Res(L^{n} dL)"))
}

/// `dH_n = Res(Lⁿ dK)` with `dK = dv + q du Λ⁻¹`.
pub fn big_h_check(sol: &ConstraintSolution, rec: &HamiltonianRecord) -> Result<()> {
    let lp = sol.lax()?;
    let n = rec.n;
    let dk = differential_op(&big_k(sol.ctx));
    let rhs = res_form(&mul_op_form(&op_power(&lp.l, n as i32)?, &dk)?)?;
    ensure_form(&differential(&rec.big_h.density).canonicalize(), &rhs, &format!("dH_{n} = Res(L^{n} dK)"))
}

/// `δ_vH_n = p₀(n)`, `δ_uH_n = q p₁(n)`, `δ_vH̄_n = p̄₀(n)` and
/// `δ_uH̄_n = q p̄₁(n) − t𝖯p̄₀(n)`.
pub fn var_corollary_check(sol: &ConstraintSolution, rec: &HamiltonianRecord) -> Result<()> {
    let ctx = sol.ctx;
    let n = rec.n;
    let (p0, p1) = p01(sol, n)?;
    let q = DiffPoly::q_pow(ctx, 1);
    let (v, u) = (Field::new(Gen::V), Field::new(Gen::U));
    ensure_poly(&rec.delta_v, &p0, &format!("delta_v H_{n} = p_0({n})"), None)?;
    ensure_poly(&rec.delta_u, &(&q * &p1), &format!("delta_u H_{n} = q p_1({n})"), None)?;
    let (b0, b1) = (involute(&p0), involute(&p1));
    ensure_poly(&rec.big_h_bar.variational(v), &b0, &format!("delta_v Hbar_{n} = pbar_0({n})"), None)?;
    let want = &(&q * &b1) - &(&DiffPoly::t(ctx) * &p_op(&b0));
    ensure_poly(&rec.big_h_bar.variational(u), &want, &format!("delta_u Hbar_{n}"), None)
}

fn p01(sol: &ConstraintSolution, n: usize) -> Result<(DiffPoly, DiffPoly)> {
    let ln = op_power(&sol.lax()?.l, n as i32)?;
    Ok((ln.coeff(0)?, ln.get(1).cloned().unwrap_or_else(|| DiffPoly::zero(sol.ctx))))
}

/// `J(a, b) = (t∂a + ∇b, ∇a)`.
pub fn apply_j(a: &DiffPoly, b: &DiffPoly) -> (DiffPoly, DiffPoly) {
    let t = DiffPoly::t(a.ctx());
    (&(&t * &a.derive()) + &nabla(b), nabla(a))
}

/// `∫ xᵀJy + yᵀJx dx` as a density (zero as a functional when `J` is
/// antisymmetric).
pub fn j_antisymmetry_residual(x: (&DiffPoly, &DiffPoly), y: (&DiffPoly, &DiffPoly)) -> DiffPoly {
    let jy = apply_j(y.0, y.1);
    let jx = apply_j(x.0, x.1);
    let a = &(x.0 * &jy.0) + &(x.1 * &jy.1);
    let b = &(y.0 * &jx.0) + &(y.1 * &jx.1);
    &a + &b
}

/// `(∂_n v, ∂_n u) = J(δ_vH_n, δ_uH_n)` (or with `∂̄_n` and `H̄_n`), comparing
/// the flows read off the Lax equations with `J` applied to the gradients.
pub fn hamiltonian_flow_check(sol: &ConstraintSolution, n: usize, barred: bool) -> Result<()> {
    let rec = hamiltonian(sol, n)?;
    let h = if barred { &rec.big_h_bar } else { &rec.big_h };
    let (gv, gu) = (h.variational(Field::new(Gen::V)), h.variational(Field::new(Gen::U)));
    let (jv, ju) = apply_j(&gv, &gu);
    let flow = reduced_flow(sol, n as i32, barred)?;
    let one = Q::from_integer(1.into());
    let fv = flow.image(Field::new(Gen::V)).expect("v flow");
    let fu = flow.image(Field::new(Gen::U)).expect("u flow");
    let name = &flow.name;
    ensure_poly(fv, &jv.scale_eps(1, &one), &format!("{name} v = (J dH)_v"), None)?;
    ensure_poly(fu, &ju.scale_eps(1, &one), &format!("{name} u = (J dH)_u"), None)
}

/// `∂_m H_n = 0` (and `∂̄_m H_n = 0`) as functionals.
pub fn conservation_check(sol: &ConstraintSolution, m: usize, n: usize) -> Result<()> {
    let rec = hamiltonian(sol, n)?;
    for barred in [false, true] {
        let flow = reduced_flow(sol, m as i32, barred)?;
        for (h, which) in [(&rec.big_h, "H"), (&rec.big_h_bar, "Hbar")] {
            let d = flow.apply(&h.density)?;
            if let Some((f, r)) = functional_residual(&d) {
                let at = f.map(|f| f.to_string()).unwrap_or_else(|| "constant".into());
                return Err(fail(&format!("{} {which}_{n} = 0", flow.name), format!("{at}: {r}")));
            }
        }
    }
    Ok(())
}

/// `p₀(n+1) = Σ_{k=0}^{n} [k+1](a_{k+1} p_k(n))` over the free algebra, the
/// vanishing of its integration constant, and
/// `h_n = Σ (k+1)/(n+1) ∫a_{k+1}p_k(n) dx`.
pub fn lemma_p0_check(l: &DiffOp, n: usize) -> Result<()> {
    let ctx = l.ctx();
    let ln = op_power(l, n as i32)?;
    let ln1 = op_power(l, n as i32 + 1)?;
    let mut sum = DiffPoly::zero(ctx);
    let mut h = DiffPoly::zero(ctx);
    for k in 0..=n {
        let pk = if k == n { DiffPoly::one(ctx) } else { ln.coeff(k as i32)? };
        let a = l.coeff(-(k as i32))?;
        let x = &a * &pk;
        sum.add_assign_ref(&bracket(k as i64 + 1, &x));
        h.add_assign_ref(&x.scale(&rat(k as i64 + 1, n as i64 + 1)));
    }
    let p0 = ln1.coeff(0)?;
    ensure_poly(&p0, &sum, &format!("p_0({}) lemma", n + 1), Some(0))?;
    if let Ok(a) = p0.alpha() {
        ensure_zero(&a, &format!("alpha(p_0({}))", n + 1), Some(0))?;
    }
    let res = p0.scale(&rat(1, n as i64 + 1));
    if !functional_equal(&h, &res) {
        return Err(fail(&format!("h_{n} summation formula"), format!("{h} vs {res}")));
    }
    Ok(())
}

/// The harmonic number `1 + 1/2 + … + 1/k`.
pub fn harmonic(k: usize) -> Q {
    (1..=k).map(|i| rat(1, i as i64)).fold(Q::from_integer(0.into()), |a, b| a + b)
}

/// `ℓ₀`: the reduced `ℓ` at `z = 0`, `t → 0`.
pub fn ell_zero(sol: &ConstraintSolution) -> Result<DiffOp> {
    let lp = sol.lax()?;
    let ell = crate::dressing::ell_recursive(&lp.l, sol.depth())?;
    ell.try_map_coeffs(sol.ctx, |_, c| c.z_zero().t_zero())
}

/// The outcome of the `t → 0` comparison for one `k`.
#[derive(Clone, Debug)]
pub struct DescendantReport {
    pub k: usize,
    /// `[t¹](H_{k+1} − H̄_{k+1})` at `z = 0`.
    pub limit: Functional,
    /// `Res(K^{k+1}(𝖯u − 2ℓ₀))`.
    pub stated: Functional,
    /// `limit − stated`, which is `−2/(k+1)·Res K^{k+1}`.
    pub stated_residual: Functional,
    /// `(k+1)!⁻¹ Res(K^{k+1}(𝖯u − 2(ℓ₀ + c_k)))` as printed.
    pub hamiltonian_printed: Functional,
    /// The limit of `(k+1)!⁻¹t⁻¹(H_{k+1} − H̄_{k+1}) − (k!)⁻¹c_k(H_k + H̄_k)`,
    /// which is the printed form with `c_{k+1}` in place of `c_k`.
    pub hamiltonian_limit: Functional,
    /// `op_bar(K)`, printed so the convention is visible.
    pub k_bar: String,
}

impl DescendantReport {
    pub fn stated_holds(&self) -> bool {
        self.stated_residual.is_zero()
    }
}

fn factorial(n: usize) -> Q {
    (1..=n).map(|i| rat(i as i64, 1)).fold(Q::from_integer(1.into()), |a, b| a * b)
}

/// With `z = 0`: `L = K − tℓ₀ + O(t²)`, `L̄ = K + t(ℓ₀ − 𝖯u) + O(t²)` under
/// `Res(K^{k+1}·)`,
/// `H_{k+1} − H̄_{k+1} = O(t)`, and its `t¹` coefficient is
/// `Res(K^{k+1}(𝖯u − 2ℓ₀)) − 2/(k+1)·Res(K^{k+1})`.
pub fn descendant_limit_check(sol: &ConstraintSolution, k: usize) -> Result<DescendantReport> {
    let ctx = sol.ctx;
    let lp = sol.lax()?;
    let kop = big_k(ctx);
    let ell0 = ell_zero(sol)?;
    let u = DiffPoly::var(ctx, Gen::U);
    let pu = DiffOp::scalar(p_op(&u));

    let l0 = lp.l.map_polys(ctx, DiffPoly::z_zero);
    let lb0 = lp.lbar.map_polys(ctx, DiffPoly::z_zero);
    let tc = |a: &DiffOp, j: i8| a.map_polys(ctx, |c| c.t_coefficient(j));
    context(ensure_op(&tc(&l0, 0), &kop, "L at t^0 = K"), "descendant")?;
    context(ensure_op(&tc(&l0, 1), &ell0.neg(), "L at t^1 = -ell_0"), "descendant")?;
    context(ensure_op(&tc(&lb0, 0), &kop, "Lbar at t^0 = K"), "descendant")?;
    let kk = op_power(&kop, k as i32 + 1)?;
    // [t¹]L̄ is a Φ₊ series and only agrees with ℓ₀ − 𝖯u under Res(K^{k+1}·)
    let lhs = op_mul(&kk, &tc(&lb0, 1))?.res()?;
    let rhs = op_mul(&kk, &ell0.sub(&pu)?)?.res()?;
    if !functional_equal(&lhs, &rhs) {
        return Err(fail(
            &format!("descendant: Res(K^{} Lbar at t^1) = Res(K^{} (ell_0 - Pu))", k + 1, k + 1),
            format!("{lhs} vs {rhs}"),
        ));
    }

    let rec = hamiltonian(sol, k + 1)?;
    let diff = (&rec.big_h.density - &rec.big_h_bar.density).z_zero();
    if diff.min_t_degree().is_some_and(|d| d < 0) {
        return Err(Error::TPoleDetected(format!("H_{} - Hbar_{}", k + 1, k + 1)));
    }
    let t0 = diff.t_coefficient(0);
    if functional_residual(&t0).is_some() {
        return Err(Error::TPoleDetected(format!("t^-1 (H_{} - Hbar_{}) at t^-1: {t0}", k + 1, k + 1)));
    }
    let limit = Functional::new(diff.t_coefficient(1));

    let stated = Functional::new(op_mul(&kk, &pu.sub(&ell0.scale(&rat(2, 1)))?)?.res()?);
    let res_kk = kk.res()?;
    let correction = res_kk.scale(&rat(-2, k as i64 + 1));
    let corrected = Functional::new(&stated.density + &correction);
    if limit != corrected {
        return Err(fail(
            &format!("t^-1 (H_{0} - Hbar_{0}) at t = 0", k + 1),
            format!("{} vs {}", limit.density, corrected.density),
        ));
    }

    let fk = factorial(k + 1);
    let inv = |x: &DiffPoly, c: &Q| x.scale(&(c / &fk));
    let ck = harmonic(k);
    let with_c = |c: &Q| -> Result<Functional> {
        let x = pu.sub(&ell0.add(&DiffOp::scalar(DiffPoly::constant(ctx, c.clone())))?.scale(&rat(2, 1)))?;
        Ok(Functional::new(inv(&op_mul(&kk, &x)?.res()?, &Q::from_integer(1.into()))))
    };
    let printed = with_c(&ck)?;
    let shifted = with_c(&harmonic(k + 1))?;
    let hk = hamiltonian(sol, k)?;
    let sum_k = (&hk.big_h.density + &hk.big_h_bar.density).z_zero().t_zero()?;
    let lim = &inv(&limit.density, &Q::from_integer(1.into())) - &sum_k.scale(&(ck / factorial(k)));
    let hamiltonian_limit = Functional::new(lim);
    if hamiltonian_limit != shifted {
        return Err(fail(
            &format!("descendant Hamiltonian k = {k} with c_{}", k + 1),
            format!("{} vs {}", hamiltonian_limit.density, shifted.density),
        ));
    }
    let k_bar = crate::diffop::op_bar(&kop)?.render();
    Ok(DescendantReport {
        k,
        stated_residual: &limit - &stated,
        limit,
        stated,
        hamiltonian_printed: printed,
        hamiltonian_limit,
        k_bar,
    })
}
