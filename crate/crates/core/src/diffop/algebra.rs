use num_traits::One;

use super::op::{op_mul, DiffOp, Op};
use super::window::{Orientation, Window};
use crate::diffalg::{e_half, involute, laurent_invert, Ctx, DiffPoly, Functional, Q};
use crate::error::{Error, Result};
use crate::parallel::par_map;

/// `q^{[k]}`: `q^{[0]} = 1`, `q^{[k+1]} = (E^{k/2}q)(E^{−1/2}q^{[k]})`, and
/// `q^{[−k]}` is the inverse of `q^{[k]}`.
pub fn q_bracket_power(ctx: Ctx, k: i32) -> DiffPoly {
    if k < 0 {
        return laurent_invert(&q_bracket_power(ctx, -k)).expect("q^[k] is a unit");
    }
    let q = DiffPoly::q_pow(ctx, 1);
    let mut acc = DiffPoly::one(ctx);
    for j in 0..k {
        acc = &e_half(j as i64, &q) * &e_half(-1, &acc);
    }
    acc
}

/// The anti-isomorphism `Σ p_k Λ^k ↦ Σ p̄_k q^{[k]} Λ^{−k}`.
pub fn op_bar(a: &DiffOp) -> Result<DiffOp> {
    if a.s_offset() != 0 {
        return Err(Error::Incompatible("bar of an s-offset operator".into()));
    }
    let ctx = a.ctx();
    let items: Vec<(i32, DiffPoly)> = a.entries().map(|(k, c)| (k, c.clone())).collect();
    let mapped = par_map(items, |(k, c)| {
        let cb = involute(&c);
        let p = if k == 0 { cb } else { &cb * &q_bracket_power(ctx, k) };
        (-k, p)
    });
    Ok(Op::new(ctx, a.window().reflected(), mapped))
}

/// The leading unit of `A`: its top coefficient (`Minus`) or bottom one (`Plus`).
fn leading_degree(a: &DiffOp) -> Result<i32> {
    let k = match a.window().orient {
        Orientation::Plus => a.entries().next().map(|(k, _)| k),
        _ => a.entries().next_back().map(|(k, _)| k),
    };
    k.ok_or_else(|| Error::NotInvertible("zero operator".into()))
}

/// `A⁻¹` on the window determined by `A`'s window.
pub fn op_invert(a: &DiffOp) -> Result<DiffOp> {
    if a.s_offset() != 0 {
        return Err(Error::Incompatible("inverse of an s-offset operator".into()));
    }
    let ctx = a.ctx();
    let m = leading_degree(a)?;
    let orient = a.window().orient;
    if orient == Orientation::Finite && a.entries().count() > 1 {
        return Err(Error::Incompatible(
            "inverse of a finite operator needs a window (as_minus/as_plus)".into(),
        ));
    }
    let b = op_mul(a, &DiffOp::lambda(ctx, -m))?;
    let c = b.coeff(0)?;
    let cinv = laurent_invert(&c).map_err(|_| Error::NotInvertible(c.to_string()))?;
    let cop = DiffOp::scalar(cinv);
    let b1 = op_mul(&cop, &b)?;

    let mut xs: Vec<(i32, DiffPoly)> = vec![(0, DiffPoly::one(ctx))];
    let (dir, end) = match orient {
        Orientation::Minus => (-1, b1.lo()),
        Orientation::Plus => (1, b1.hi()),
        Orientation::Finite => (-1, 0),
    };
    let mut k = dir;
    while (dir < 0 && k >= end) || (dir > 0 && k <= end) {
        // x_k = −Σ_{i between dir and k} (E^{−(k−i)/2} b_i)(E^{i/2} x_{k−i})
        let idx: Vec<i32> = (1..=k.abs()).map(|s| s * dir).collect();
        let terms = par_map(idx, |i| {
            let Some(bi) = b1.get(i) else { return DiffPoly::zero(ctx) };
            let xk = &xs[(k - i).unsigned_abs() as usize].1;
            &e_half(-((k - i) as i64), bi) * &e_half(i as i64, xk)
        });
        let mut x = DiffPoly::zero(ctx);
        for t in &terms {
            x.sub_assign_ref(t);
        }
        xs.push((k, x));
        k += dir;
    }
    let window = match orient {
        Orientation::Minus => Window::minus(b1.lo(), 0)?,
        Orientation::Plus => Window::plus(0, b1.hi())?,
        Orientation::Finite => Window::finite(0, 0)?,
    };
    let x = Op::new(ctx, window, xs);
    op_mul(&op_mul(&DiffOp::lambda(ctx, -m), &x)?, &cop)
}

/// `Aⁿ` by iterated multiplication; negative `n` goes through the inverse.
pub fn op_power(a: &DiffOp, n: i32) -> Result<DiffOp> {
    let base = if n < 0 { op_invert(a)? } else { a.clone() };
    let mut acc = DiffOp::identity(a.ctx());
    for _ in 0..n.unsigned_abs() {
        acc = op_mul(&acc, &base)?;
    }
    Ok(acc)
}

/// `[A⁰, A¹, …, Aⁿ]`.
pub fn op_powers(a: &DiffOp, n: usize) -> Result<Vec<DiffOp>> {
    let mut out = vec![DiffOp::identity(a.ctx())];
    for i in 0..n {
        let next = op_mul(&out[i], a)?;
        out.push(next);
    }
    Ok(out)
}

/// `Res A = ∫ res(A) dx`.
pub fn res_functional(a: &DiffOp) -> Result<Functional> {
    Ok(Functional::new(a.res()?))
}

/// `Λ^{m·s}` as an operator.
pub fn lambda_s(ctx: Ctx, m: i32) -> DiffOp {
    DiffOp::identity(ctx).with_s_offset(m)
}

/// Multiply an operator by a rational.
pub fn op_scale(a: &DiffOp, c: &Q) -> DiffOp {
    if c.is_one() {
        a.clone()
    } else {
        a.scale(c)
    }
}
