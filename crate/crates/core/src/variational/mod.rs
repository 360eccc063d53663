//! Variational calculus and the Hamiltonian structure of the reduced
//! hierarchy.

mod forms;
mod hamiltonian;

pub use forms::{
    ad, binomial, binomial_s, canonicalize, differential, differential_op, dlog_rhs,
    dls_formal_rhs, dls_integer_rhs, mul_form_op, mul_op_form, res_form, OneForm, OperatorForm,
};
pub use hamiltonian::{
    apply_j, big_h_check, conservation_check, descendant_limit_check, dh_n_check, ell_zero,
    hamiltonian, hamiltonian_flow_check, harmonic, j_antisymmetry_residual, lemma_p0_check,
    var_corollary_check, DescendantReport, HamiltonianRecord,
};

use crate::check::{ensure_op, fail};
use crate::diffalg::Q;
use crate::diffop::{op_power, DiffOp};
use crate::dressing::{ell_recursive, frac_power, lax_from_dressing, Dressing};
use crate::error::Result;

/// `d(Lⁿ)` against the perturbation formula and the product rule
/// `d(Lⁿ) = d(Lⁿ⁻¹)·L + Lⁿ⁻¹·dL`, for `n = 2..=n_max`.
pub fn dls_check(l: &DiffOp, n_max: usize) -> Result<()> {
    let dl = differential_op(l);
    for n in 2..=n_max {
        let lhs = differential_op(&op_power(l, n as i32)?);
        ensure_op(&lhs, &dls_integer_rhs(l, n)?, &format!("dL^{n} perturbation formula"))?;
        let prev = differential_op(&op_power(l, n as i32 - 1)?);
        let rule = mul_form_op(&prev, l)?.add(&mul_op_form(&op_power(l, n as i32 - 1)?, &dl)?)?;
        ensure_op(&lhs, &rule, &format!("dL^{n} product rule"))?;
    }
    Ok(())
}

/// The perturbation formula for the formal power `L^s = WΛ^sW⁻¹` over the
/// dressing algebra, and its `s`-derivative at `s = 0` against the formula
/// for `dℓ`.
pub fn dls_formal_check(d: &Dressing, k_terms: usize) -> Result<()> {
    let lp = lax_from_dressing(d)?;
    let ls = frac_power(d)?;
    let rhs = dls_formal_rhs(&lp.l, &ls, k_terms)?;
    ensure_op(&differential_op(&ls), &rhs, "dL^s perturbation formula")?;

    let zero = Q::from_integer(0.into());
    let ctx = d.ctx;
    let ds0 = rhs.map_coeffs(ctx, |_, w| w.map_polys(|c| c.diff_s().subst_s(&zero)));
    let dlog = dlog_rhs(&lp.l, k_terms)?.neg();
    ensure_op(&ds0, &dlog, "d/ds dL^s at s = 0 = -(dlog formula)")?;
    let ell = crate::dressing::ell_direct(d)?;
    ensure_op(&differential_op(&ell), &dlog.neg(), "dell over B")
}

/// `d/ds C(s, k+1)` at `s = 0` is `(−1)^k/(k+1)`.
pub fn binomial_derivative_check(ctx: crate::diffalg::Ctx, k_terms: usize) -> Result<()> {
    let zero = Q::from_integer(0.into());
    for k in 0..k_terms {
        let d = binomial_s(ctx, k as u32 + 1).diff_s().subst_s(&zero);
        let want = crate::diffalg::rat(if k % 2 == 0 { 1 } else { -1 }, k as i64 + 1);
        if d.constant_part() != crate::diffalg::DiffPoly::constant(ctx, want.clone()) {
            return Err(fail("d/ds C(s, k+1) at 0", format!("k = {k}: {d} != {want}")));
        }
    }
    Ok(())
}

/// `dℓ` (with `ℓ` from the recursion in terms of `a_k`) against the formula
/// `−Σ (k+1)⁻¹ ad(L)^k(L^{−k−1}dL)`.
pub fn dlog_check(l: &DiffOp, k_terms: usize) -> Result<()> {
    let depth = (1 - l.lo()) as usize;
    let ell = ell_recursive(l, depth)?;
    let lhs = differential_op(&ell);
    ensure_op(&lhs, &dlog_rhs(l, k_terms)?, "dell = dlog formula")
}

/// `Res` of `[A, Ω]` vanishes after integration by parts.
pub fn res_commutator_form_check(a: &DiffOp, b: &DiffOp) -> Result<()> {
    let w = differential_op(b);
    let c = mul_op_form(a, &w)?.sub(&mul_form_op(&w, a)?)?;
    let r = res_form(&c)?;
    if r.is_zero() {
        Ok(())
    } else {
        Err(fail("Res [A, dB] = 0", r.to_string()))
    }
}

/// `Res(d A) = d Res(A)` in normal form.
pub fn res_differential_check(a: &DiffOp) -> Result<()> {
    let lhs = res_form(&differential_op(a))?;
    let rhs = differential(&a.res()?).canonicalize();
    if lhs == rhs {
        Ok(())
    } else {
        Err(fail("Res dA = d Res A", format!("{lhs} != {rhs}")))
    }
}

#[cfg(test)]
mod tests;
