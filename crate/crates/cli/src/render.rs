//! Rendering polynomials with `𝖯(x)` folded back into a symbol where the
//! expansion appears verbatim.

use eqtoda_core::diffalg::{p_op, to_latex, DiffPoly, Field, Mono, Q};
use num_traits::One;

use crate::config::Format;

struct Folded {
    coeff: DiffPoly,
    field: Field,
}

/// Split `p` into a remainder and terms `c·π·𝖯(x)` with `π` an ε-free
/// parameter monomial.
fn fold_p(p: &DiffPoly) -> (DiffPoly, Vec<Folded>) {
    let ctx = p.ctx();
    let candidates: Vec<(Mono, Q, Field)> = p
        .terms()
        .filter(|(m, _)| m.params.eps == 0 && m.jets.len() == 1 && m.jets[0].1 == 1 && m.jets[0].0.order == 0)
        .map(|(m, c)| (Mono::param(m.params), c.clone(), m.jets[0].0.base()))
        .collect();
    let mut rest = p.clone();
    let mut folded = Vec::new();
    for (pm, c, x) in candidates {
        let coeff = DiffPoly::term(ctx, pm, c);
        let g = &coeff * &p_op(&DiffPoly::jet(ctx, x.jet(0)));
        if g.len() < 2 {
            continue;
        }
        if g.terms().all(|(m, a)| rest.coefficient(m) == *a) {
            rest = &rest - &g;
            folded.push(Folded { coeff, field: x });
        }
    }
    (rest, folded)
}

fn coeff_prefix(c: &DiffPoly, latex: bool) -> String {
    let s = if latex { to_latex(c) } else { c.to_string() };
    if c.len() == 1 && c.terms().next().is_some_and(|(m, a)| *m == Mono::one() && a.is_one()) {
        String::new()
    } else if c.len() > 1 {
        format!("({s}){}", if latex { " " } else { "*" })
    } else {
        format!("{s}{}", if latex { " " } else { "*" })
    }
}

pub fn render_poly(p: &DiffPoly, format: Format) -> String {
    let latex = format == Format::Latex;
    let (rest, folded) = fold_p(p);
    let mut parts = Vec::new();
    if !rest.is_zero() || folded.is_empty() {
        parts.push(if latex { to_latex(&rest) } else { rest.to_string() });
    }
    for f in folded {
        let sym = if latex { format!("\\mathsf{{P}}({})", f.field) } else { format!("P({})", f.field) };
        parts.push(format!("{}{sym}", coeff_prefix(&f.coeff, latex)));
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use eqtoda_core::diffalg::{parse_poly, Algebra, Ctx};

    #[test]
    fn folds_p_of_v() {
        let c = Ctx::new(Algebra::Reduced, 6);
        let v = parse_poly("v", c).unwrap();
        let p = &parse_poly("q + z1", c).unwrap() + &(&parse_poly("t", c).unwrap() * &p_op(&v));
        assert_eq!(render_poly(&p, Format::Text), format!("{} + t*P(v)", parse_poly("q + z1", c).unwrap()));
        assert!(render_poly(&p, Format::Latex).ends_with("t \\mathsf{P}(v)"));
        assert_eq!(render_poly(&v, Format::Text), v.to_string());
    }
}
