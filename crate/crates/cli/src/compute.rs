//! The `compute` command: render a single object.

use eqtoda_core::diffalg::{functional_latex, DiffPoly};
use eqtoda_core::diffop::{op_power, DiffOp};
use eqtoda_core::dressing::{dressing, ell_recursive, frac_power};
use eqtoda_core::equivariant::{solve_constraint, ConstraintSolution};
use eqtoda_core::variational::hamiltonian;
use eqtoda_core::diffalg::{Algebra, Ctx};
use eqtoda_core::Result;

use crate::config::{Format, RunConfig};
use crate::render::render_poly;

#[derive(Clone, Debug, PartialEq)]
pub enum Computation {
    Hamiltonian(usize),
    Lax { power: i32, coeff: Option<i32> },
    Ell,
    FracPower,
    Constraint(usize),
}

fn solution(c: &RunConfig, k_max: usize) -> Result<ConstraintSolution> {
    solve_constraint(c.eps_order, c.k_max.max(k_max), c.lambda_depth)
}

fn specialize(c: &RunConfig, p: &DiffPoly) -> Result<DiffPoly> {
    let mut p = p.clone();
    if c.z_zero {
        p = p.z_zero();
    }
    if c.t_zero {
        p = p.t_zero()?;
    }
    Ok(p)
}

fn specialize_op(c: &RunConfig, a: &DiffOp) -> Result<DiffOp> {
    a.try_map_coeffs(a.ctx(), |_, p| specialize(c, p))
}

fn render_op(a: &DiffOp, format: Format) -> String {
    let mut parts = Vec::new();
    for (k, p) in a.entries().rev() {
        let body = render_poly(p, format);
        parts.push(match format {
            Format::Latex => format!("({body}) \\Lambda^{{{k}}}"),
            _ => format!("({body})*L^{k}"),
        });
    }
    if parts.is_empty() {
        parts.push("0".into());
    }
    format!("{} [window {}]", parts.join(" + "), a.window())
}

fn json_value(what: &str, body: String) -> String {
    serde_json::to_string_pretty(&serde_json::json!({ "what": what, "value": body })).expect("json") + "\n"
}

fn emit(what: &str, format: Format, text: String, latex: String) -> String {
    match format {
        Format::Text => text + "\n",
        Format::Latex => latex + "\n",
        Format::Json => json_value(what, text),
    }
}

pub fn run_compute(what: &Computation, c: &RunConfig) -> Result<String> {
    let f = c.format;
    match what {
        Computation::Hamiltonian(n) => {
            let sol = solution(c, *n)?;
            let rec = hamiltonian(&sol, *n)?;
            let h = specialize(c, &rec.big_h.density)?;
            Ok(emit("hamiltonian", f, format!("int ({h}) dx"), functional_latex(&h)))
        }
        Computation::Lax { power, coeff } => {
            let sol = solution(c, 2)?;
            let lp = op_power(&sol.lax()?.l, *power)?;
            match coeff {
                Some(k) => {
                    let p = specialize(c, &lp.coeff(*k)?)?;
                    Ok(emit("lax", f, render_poly(&p, Format::Text), render_poly(&p, Format::Latex)))
                }
                None => {
                    let a = specialize_op(c, &lp)?;
                    Ok(emit("lax", f, render_op(&a, Format::Text), render_op(&a, Format::Latex)))
                }
            }
        }
        Computation::Ell => {
            let sol = solution(c, 2)?;
            let ell = specialize_op(c, &ell_recursive(&sol.lax()?.l, sol.depth())?)?;
            Ok(emit("ell", f, render_op(&ell, Format::Text), render_op(&ell, Format::Latex)))
        }
        Computation::FracPower => {
            let d = dressing(Ctx::new(Algebra::DressingB, c.eps_order), c.lambda_depth);
            let ls = frac_power(&d)?;
            Ok(emit("frac-power", f, render_op(&ls, Format::Text), render_op(&ls, Format::Latex)))
        }
        Computation::Constraint(k) => {
            let sol = solution(c, k.saturating_sub(1))?;
            if *k == 0 || *k > sol.a.len() {
                return Err(eqtoda_core::Error::DepthExhausted { depth: sol.a.len(), needed: *k });
            }
            let p = specialize(c, sol.a(*k))?;
            Ok(emit("constraint", f, render_poly(&p, Format::Text), render_poly(&p, Format::Latex)))
        }
    }
}
