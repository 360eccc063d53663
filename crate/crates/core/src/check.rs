//! Turning identities into `Result`s that carry the first mismatch.

use crate::diffalg::DiffPoly;
use crate::diffop::{Coeff, Op};
use crate::error::{Error, Mismatch, Result};

pub fn poly_mismatch(a: &DiffPoly, b: &DiffPoly, check: &str, degree: Option<i32>) -> Option<Mismatch> {
    if a == b {
        return None;
    }
    let d = a - b;
    let (m, _) = d.leading_term()?;
    Some(Mismatch {
        check: check.to_string(),
        degree,
        eps_degree: Some(m.params.eps.into()),
        monomial: DiffPoly::term(d.ctx(), m, num_traits::One::one()).to_string(),
        detail: String::new(),
    })
}

pub fn ensure_poly(a: &DiffPoly, b: &DiffPoly, check: &str, degree: Option<i32>) -> Result<()> {
    match poly_mismatch(a, b, check, degree) {
        None => Ok(()),
        Some(m) => Err(Error::CheckFailed(m)),
    }
}

pub fn ensure_zero(a: &DiffPoly, check: &str, degree: Option<i32>) -> Result<()> {
    ensure_poly(a, &DiffPoly::zero(a.ctx()), check, degree)
}

/// Equality of operators on their common window.
pub fn ensure_op<C: Coeff>(a: &Op<C>, b: &Op<C>, check: &str) -> Result<()> {
    match a.first_difference(b, check) {
        None => Ok(()),
        Some(m) => Err(Error::CheckFailed(m)),
    }
}

pub fn fail(check: &str, detail: impl Into<String>) -> Error {
    Error::CheckFailed(Mismatch {
        check: check.to_string(),
        degree: None,
        eps_degree: None,
        monomial: String::new(),
        detail: detail.into(),
    })
}

/// Attach a location prefix to a check failure.
pub fn context<T>(r: Result<T>, what: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::CheckFailed(mut m) => {
            m.check = format!("{what}: {}", m.check);
            Error::CheckFailed(m)
        }
        other => other,
    })
}
