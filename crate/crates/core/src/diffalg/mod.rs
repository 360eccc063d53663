//! Exact coefficient arithmetic and the free differential algebras.

mod calculus;
mod mono;
mod parse;
mod poly;
mod series;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use calculus::{
    functional_equal, functional_fields, functional_residual, involute, laurent_invert,
    var_derivative, vanishes_below, vbar, Functional, Substitution,
};
pub use mono::{Field, Gen, Jet, JetPowers, Mono, ParamMono, MAX_Z};
pub use parse::{functional_latex, parse_poly, rational_text, to_latex};
pub use poly::{scaled, Algebra, CoeffSeries, Ctx, DiffPoly, UNTRUNCATED};
pub use series::{
    bracket, e_half, exp_series, formal_shift_coeffs, nabla, p_op, ps_inv, ps_mul, series_apply,
    shift_formal, shift_tower, Builtin, OperatorSeries,
};

/// Exact rationals.
pub type Q = BigRational;

pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests;
