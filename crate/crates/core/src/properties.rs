//! Algebraic identities checked on seeded random instances.
//!
//! Every check draws `instances` independent cases; case `i` uses the seed
//! `seed + i`, so a failure can be replayed on its own.

use crate::check::{context, ensure_op, ensure_poly, fail};
use crate::diffalg::{
    bracket, functional_equal, functional_fields, involute, nabla, var_derivative, Ctx, DiffPoly,
    Gen, Jet, Mono, Q,
};
use crate::diffop::{commutator, op_bar, op_mul};
use crate::error::Result;
use crate::parallel::par_map;
use crate::random::RandomGen;
use crate::variational::{differential, j_antisymmetry_residual};

fn run_cases(
    ctx: Ctx,
    seed: u64,
    instances: usize,
    name: &str,
    f: impl Fn(&mut RandomGen) -> Result<()> + Sync + Send,
) -> Result<()> {
    let seeds: Vec<u64> = (0..instances as u64).map(|i| seed.wrapping_add(i)).collect();
    let results = par_map(seeds, |s| (s, f(&mut RandomGen::new(ctx, s))));
    for (s, r) in results {
        context(r, &format!("{name} (seed {s})"))?;
    }
    Ok(())
}

/// `(AB)C = A(BC)` for random `Φ₋` and banded operators.
pub fn assoc_check(ctx: Ctx, seed: u64, instances: usize) -> Result<()> {
    run_cases(ctx, seed, instances, "assoc", |g| {
        let a = g.minus(-2, 1);
        let b = g.banded(1);
        let c = g.minus(-1, 1);
        let lhs = op_mul(&op_mul(&a, &b)?, &c)?;
        let rhs = op_mul(&a, &op_mul(&b, &c)?)?;
        ensure_op(&lhs, &rhs, "(AB)C = A(BC)")
    })
}

/// `bar(bar(A)) = A` and `bar(AB) = bar(B)·bar(A)`.
pub fn bar_check(ctx: Ctx, seed: u64, instances: usize) -> Result<()> {
    run_cases(ctx, seed, instances, "bar", |g| {
        let a = g.minus(-2, 1);
        let b = g.banded(1);
        ensure_op(&op_bar(&op_bar(&a)?)?, &a, "bar(bar(A)) = A")?;
        let lhs = op_bar(&op_mul(&a, &b)?)?;
        let rhs = op_mul(&op_bar(&b)?, &op_bar(&a)?)?;
        ensure_op(&lhs, &rhs, "bar(AB) = bar(B) bar(A)")
    })
}

/// `res[A, B] = Σ_k ε∇[k](a_k b_{−k})` for banded `A`, `B`, and the residue
/// of a commutator integrates to zero.
pub fn res_commutator_check(ctx: Ctx, seed: u64, instances: usize) -> Result<()> {
    run_cases(ctx, seed, instances, "res-commutator", |g| {
        let band = g.range(1, 2);
        let a = g.banded(band);
        let b = g.banded(band);
        let lhs = commutator(&a, &b)?.res()?;
        let one = Q::from_integer(1.into());
        let mut rhs = DiffPoly::zero(ctx);
        for k in 1..=band {
            for (sign, i) in [(1, k), (-1, -k)] {
                let ab = &a.coeff(i)? * &b.coeff(-i)?;
                let term = nabla(&bracket(k as i64, &ab)).scale_eps(1, &one);
                if sign > 0 {
                    rhs.add_assign_ref(&term);
                } else {
                    rhs.sub_assign_ref(&term);
                }
            }
        }
        ensure_poly(&lhs, &rhs, "res[A, B] formula", Some(0))?;
        if !functional_equal(&lhs, &DiffPoly::zero(ctx)) {
            return Err(fail("Res[A, B] = 0", lhs.to_string()));
        }
        Ok(())
    })
}

/// `δ_x(∂h) = 0` for every field `x`, and `∂` commutes with the involution.
pub fn var_derivative_exact_check(ctx: Ctx, seed: u64, instances: usize) -> Result<()> {
    run_cases(ctx, seed, instances, "var-derivative", |g| {
        let h = g.jet_poly(3);
        let dh = h.derive();
        for x in functional_fields(&h) {
            let r = var_derivative(&dh, x);
            if !r.is_zero() {
                return Err(fail(&format!("delta_{x} (dh) = 0"), r.to_string()));
            }
        }
        ensure_poly(&involute(&dh), &involute(&h).derive(), "conj(dh) = d conj(h)", None)
    })
}

/// `∫(f + ∂h) = ∫f`, while adding a term `c·a₃²` in a fresh field is
/// detected.
pub fn functional_soundness_check(ctx: Ctx, seed: u64, instances: usize) -> Result<()> {
    run_cases(ctx, seed, instances, "functional-equal", |g| {
        let f = g.poly(3);
        let h = g.jet_poly(2);
        let shifted = &f + &h.derive();
        if !functional_equal(&shifted, &f) {
            return Err(fail("f + dh = f", format!("f = {f}, h = {h}")));
        }
        let fresh = DiffPoly::term(ctx, Mono::jet_pow(Jet::new(Gen::A(3), 0), 2), Q::from_integer(2.into()));
        if functional_equal(&(&shifted + &fresh), &f) {
            return Err(fail("f + dh + 2 a3^2 != f", format!("f = {f}")));
        }
        Ok(())
    })
}

/// The `dx` coefficient of the canonical form of `dp` is `δ_x p`.
pub fn euler_lagrange_check(ctx: Ctx, seed: u64, instances: usize) -> Result<()> {
    run_cases(ctx, seed, instances, "euler-lagrange", |g| {
        let p = g.jet_poly(3);
        let w = differential(&p).canonicalize();
        for x in functional_fields(&p) {
            ensure_poly(&w.coefficient(x), &var_derivative(&p, x), &format!("(dp)_{x} = delta_{x} p"), None)?;
        }
        Ok(())
    })
}

/// `∫ xᵀJy = −∫ yᵀJx`.
pub fn j_antisymmetry_check(ctx: Ctx, seed: u64, instances: usize) -> Result<()> {
    run_cases(ctx, seed, instances, "J antisymmetry", |g| {
        let (x0, x1, y0, y1) = (g.poly(2), g.poly(2), g.poly(2), g.poly(2));
        let r = j_antisymmetry_residual((&x0, &x1), (&y0, &y1));
        if functional_equal(&r, &DiffPoly::zero(ctx)) {
            Ok(())
        } else {
            Err(fail("x J y + y J x = 0", r.to_string()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::Algebra;

    #[test]
    fn small_runs_pass() {
        let ctx = Ctx::new(Algebra::FreeA, 4);
        assoc_check(ctx, 7, 3).unwrap();
        bar_check(ctx, 7, 3).unwrap();
        res_commutator_check(ctx, 7, 3).unwrap();
        var_derivative_exact_check(ctx, 7, 3).unwrap();
        functional_soundness_check(ctx, 7, 3).unwrap();
        euler_lagrange_check(ctx, 7, 3).unwrap();
        j_antisymmetry_check(ctx, 7, 3).unwrap();
    }

    #[test]
    fn generator_is_deterministic() {
        let ctx = Ctx::new(Algebra::FreeA, 4);
        let a = RandomGen::new(ctx, 11).minus(-2, 1);
        let b = RandomGen::new(ctx, 11).minus(-2, 1);
        assert_eq!(a, b);
        assert_ne!(a, RandomGen::new(ctx, 12).minus(-2, 1));
    }
}
