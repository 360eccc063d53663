//! Operators that are power series in `ε∂`: the shifts `E^{m/2}`, `∇`, `P`,
//! the brackets `[k]` and their inverses.

use num_traits::{One, Zero};

use super::mono::ParamMono;
use super::poly::DiffPoly;
use super::{rat, Q};
use crate::error::{Error, Result};

/// `Σ_j c_j ε^j ∂^{j+extra}`, truncated at the ε-order it was built for.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSeries {
    pub coeffs: Vec<Q>,
    /// Additional bare derivatives (1 for `∇`, which is `∂` times a series).
    pub extra_derivs: usize,
}

/// Named members of the `ε∂`-series family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// `E^{m/2}`.
    EHalfPow(i64),
    /// `∇ = ε⁻¹(E^{1/2} − E^{−1/2})`.
    Nabla,
    /// `P = ∇⁻¹∂`, the series `(x/2)/sinh(x/2)`.
    P,
    /// `P⁻¹ = sinh(x/2)/(x/2)`.
    PInv,
    /// `[k] = (E^{k/2} − E^{−k/2})/(E^{1/2} − E^{−1/2})`.
    Bracket(i64),
    BracketInv(i64),
}

fn factorial(n: usize) -> Q {
    (1..=n).fold(Q::one(), |a, k| a * Q::from_integer((k as i64).into()))
}

/// Coefficients of `exp(c·x)` up to `x^{n-1}`.
pub fn exp_series(c: &Q, n: usize) -> Vec<Q> {
    (0..n)
        .map(|j| num_traits::pow(c.clone(), j) / factorial(j))
        .collect()
}

/// Coefficients of `sinh(c·x/2)/(c·x/2)`; equal to 1 at `c = 0`.
fn sinhc_half(c: &Q, n: usize) -> Vec<Q> {
    let half = c / Q::from_integer(2.into());
    (0..n)
        .map(|j| {
            if j % 2 == 1 {
                Q::zero()
            } else {
                num_traits::pow(half.clone(), j) / factorial(j + 1)
            }
        })
        .collect()
}

pub fn ps_mul(a: &[Q], b: &[Q], n: usize) -> Vec<Q> {
    let mut r = vec![Q::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            r[i + j] += x * y;
        }
    }
    r
}

/// Reciprocal of a power series with nonzero constant term.
pub fn ps_inv(a: &[Q], n: usize) -> Vec<Q> {
    assert!(!a[0].is_zero(), "series is not invertible");
    let mut r = vec![Q::zero(); n];
    r[0] = Q::one() / &a[0];
    for k in 1..n {
        let mut acc = Q::zero();
        for i in 1..=k.min(a.len() - 1) {
            acc += &a[i] * &r[k - i];
        }
        r[k] = -acc * &r[0];
    }
    r
}

impl OperatorSeries {
    pub fn identity(n: usize) -> Self {
        let mut coeffs = vec![Q::zero(); n.max(1)];
        coeffs[0] = Q::one();
        OperatorSeries { coeffs, extra_derivs: 0 }
    }

    /// The named series, with `order` coefficients (enough for ε-order `order`).
    pub fn builtin(b: Builtin, order: usize) -> Result<Self> {
        let n = order.max(1);
        let two = Q::from_integer(2.into());
        let coeffs = match b {
            Builtin::EHalfPow(m) => exp_series(&(Q::from_integer(m.into()) / &two), n),
            Builtin::Nabla => {
                return Ok(OperatorSeries { coeffs: sinhc_half(&Q::one(), n), extra_derivs: 1 })
            }
            Builtin::P => ps_inv(&sinhc_half(&Q::one(), n), n),
            Builtin::PInv => sinhc_half(&Q::one(), n),
            Builtin::Bracket(k) => bracket_series(k, n),
            Builtin::BracketInv(k) => {
                if k == 0 {
                    return Err(Error::ZeroBracket);
                }
                ps_inv(&bracket_series(k, n), n)
            }
        };
        Ok(OperatorSeries { coeffs, extra_derivs: 0 })
    }

    /// Apply to `p`: `Σ_j c_j ε^j ∂^{j+extra} p`.
    pub fn apply(&self, p: &DiffPoly) -> DiffPoly {
        let n = (p.order() as usize).min(self.coeffs.len());
        let mut cur = p.derive_n(self.extra_derivs);
        let mut out = DiffPoly::zero(p.ctx());
        for j in 0..n {
            if !self.coeffs[j].is_zero() {
                out.add_assign_ref(&cur.scale_eps(j as i8, &self.coeffs[j]));
            }
            if j + 1 < n {
                cur = cur.derive();
            }
        }
        out
    }

    /// Series composition (both without extra derivatives commute freely).
    pub fn compose(&self, o: &OperatorSeries) -> OperatorSeries {
        let n = self.coeffs.len().min(o.coeffs.len());
        OperatorSeries {
            coeffs: ps_mul(&self.coeffs, &o.coeffs, n),
            extra_derivs: self.extra_derivs + o.extra_derivs,
        }
    }
}

/// `[k] = k·S(k)/S(1)` with `S(c) = sinh(cx/2)/(cx/2)`; `[−k] = −[k]`.
fn bracket_series(k: i64, n: usize) -> Vec<Q> {
    if k == 0 {
        return vec![Q::zero(); n];
    }
    let kq = Q::from_integer(k.into());
    let num: Vec<Q> = sinhc_half(&kq, n).into_iter().map(|c| c * &kq).collect();
    ps_mul(&num, &ps_inv(&sinhc_half(&Q::one(), n), n), n)
}

/// Apply a builtin series at the truncation order of `p`.
pub fn series_apply(b: Builtin, p: &DiffPoly) -> Result<DiffPoly> {
    Ok(OperatorSeries::builtin(b, p.order() as usize)?.apply(p))
}

pub fn nabla(p: &DiffPoly) -> DiffPoly {
    series_apply(Builtin::Nabla, p).expect("nabla")
}

pub fn p_op(p: &DiffPoly) -> DiffPoly {
    series_apply(Builtin::P, p).expect("P")
}

pub fn bracket(k: i64, p: &DiffPoly) -> DiffPoly {
    series_apply(Builtin::Bracket(k), p).expect("bracket")
}

pub fn e_half(m: i64, p: &DiffPoly) -> DiffPoly {
    series_apply(Builtin::EHalfPow(m), p).expect("shift")
}

/// Coefficients of `((a + b·s)/2)^j / j!` as jet-free polynomials in `s`.
pub fn formal_shift_coeffs(ctx: super::poly::Ctx, a: i64, b: i64, n: usize) -> Vec<DiffPoly> {
    let half_a = rat(a, 2);
    let half_b = rat(b, 2);
    let base = DiffPoly::from_terms(
        ctx.with_order(super::poly::UNTRUNCATED),
        [
            (super::mono::Mono::one(), half_a),
            (super::mono::Mono::param(ParamMono::s(1)), half_b),
        ],
    );
    let mut out = Vec::with_capacity(n);
    let mut pw = DiffPoly::one(ctx.with_order(super::poly::UNTRUNCATED));
    for j in 0..n {
        let scaled = pw.scale(&(Q::one() / factorial(j)));
        out.push(scaled.truncated(ctx.order));
        pw = &pw * &base;
    }
    out
}

/// `E^{(a + b·s)/2} p = Σ_j ((a+bs)/2)^j/j! · ε^j ∂^j p`.
pub fn shift_formal(p: &DiffPoly, a: i64, b: i64) -> DiffPoly {
    let n = p.order() as usize;
    let tower = p.tower(n);
    shift_tower(&tower, a, b)
}

/// Same as [`shift_formal`] given the precomputed derivatives of `p`.
pub fn shift_tower(tower: &[DiffPoly], a: i64, b: i64) -> DiffPoly {
    let ctx = tower[0].ctx();
    let n = (ctx.order as usize).min(tower.len());
    if a == 0 && b == 0 {
        return tower[0].clone();
    }
    let mut out = DiffPoly::zero(ctx);
    if b == 0 {
        let x = rat(a, 2);
        let cs = exp_series(&x, n);
        for (j, c) in cs.iter().enumerate() {
            out.add_assign_ref(&tower[j].scale_eps(j as i8, c));
        }
        return out;
    }
    let cs = formal_shift_coeffs(ctx, a, b, n);
    for (j, c) in cs.iter().enumerate() {
        out.add_assign_ref(&(&tower[j] * c).scale_eps(j as i8, &Q::one()));
    }
    out
}
