use super::*;
use crate::diffalg::{nabla, parse_poly, rat};

fn b_ctx(n: u8) -> Ctx {
    Ctx::new(Algebra::DressingB, n)
}

fn p(s: &str, ctx: Ctx) -> DiffPoly {
    parse_poly(s, ctx).unwrap()
}

#[test]
fn w_star_examples() {
    let c = b_ctx(6);
    let ws = dressing_inverse(c, 3);
    assert_eq!(ws[0], p("-w1", c));
    let w1 = p("w1", c);
    assert_eq!(ws[1], &p("-w2", c) + &(&e_half(1, &w1) * &e_half(-1, &w1)));
    w_inverse_check(&dressing(c, 5)).unwrap();
}

#[test]
fn lax_from_dressing_examples() {
    let c = b_ctx(6);
    let d = dressing(c, 4);
    let lp = lax_from_dressing(&d).unwrap();
    let w1 = p("w1", c);
    assert_eq!(lp.a(1).unwrap(), &e_half(-1, &w1) - &e_half(1, &w1));
    assert_eq!(lp.a(1).unwrap(), -nabla(&w1).scale_eps(1, &Q::one()));
    assert_eq!(lp.lbar.coeff(-1).unwrap(), p("q", c));
    assert_eq!(lp.lbar.hi(), 3);
    let bar_l = op_bar(&lp.l).unwrap();
    ensure_op(&bar_l, &lp.lbar, "bar L").unwrap();
    embedding_check(&d).unwrap();
}

#[test]
fn free_lax() {
    let c = Ctx::new(Algebra::FreeA, 6);
    let lp = lax_free(c, 4).unwrap();
    assert_eq!(lp.l.res().unwrap(), p("a1", c));
    assert_eq!(lp.lbar.res().unwrap(), p("a1~", c));
    assert_eq!(lp.depth(), 4);
    assert_eq!(lp.lbar.coeff(2).unwrap(), &p("a3~", c) * &crate::diffop::q_bracket_power(c, -2));
}

#[test]
fn free_lax_substitutes_to_dressing() {
    let c = b_ctx(5);
    let d = dressing(c, 4);
    let a_w = a_in_w(&d).unwrap();
    let lf = lax_free(Ctx::new(Algebra::FreeA, 5), 4).unwrap();
    let subst = free_to_dressing(&a_w);
    let l = lf.l.map_polys(c, &subst);
    let lp = lax_from_dressing(&d).unwrap();
    ensure_op(&l, &lp.l, "L").unwrap();
    let lbar = lf.lbar.map_polys(c, &subst);
    ensure_op(&lbar, &lp.lbar, "Lbar").unwrap();
}

#[test]
fn ell_examples() {
    let c = b_ctx(6);
    let d = dressing(c, 4);
    let ell = ell_direct(&d).unwrap();
    assert_eq!(ell.coeff(-1).unwrap(), p("eps*D1[w1]", c));
    ensure_op(&ell, &ell_sum(&d), "ell sum").unwrap();
    for k in 1..=4 {
        assert!(ell.coeff(-k).unwrap().alpha().unwrap().is_zero());
    }
    let trivial = dressing(c, 0);
    assert!(ell_direct(&trivial).unwrap().is_zero_on_window());
    ell_commutator_check(&ell, &lax_from_dressing(&d).unwrap().l).unwrap();
}

#[test]
fn ell_recursion_over_free() {
    let c = Ctx::new(Algebra::FreeA, 6);
    let lp = lax_free(c, 5).unwrap();
    let ell = ell_recursive(&lp.l, 4).unwrap();
    assert_eq!(ell.coeff(-1).unwrap(), -p_op(&p("a1", c)));
    assert!(!mentions_w(&ell));
    let pw = op_powers(&lp.l, 4).unwrap();
    eq_bn_check(&ell, &pw, 4).unwrap();
    ell_commutator_check(&ell, &lp.l.truncate_below(-3).unwrap()).unwrap();
    assert!(matches!(ell_recursive(&lp.l, 6), Err(Error::DepthExhausted { .. })));
}

#[test]
fn ell_routes_agree() {
    let c = b_ctx(5);
    let d = dressing(c, 4);
    let a_w = a_in_w(&d).unwrap();
    let lf = lax_free(Ctx::new(Algebra::FreeA, 5), 4).unwrap();
    let ell_free = ell_recursive(&lf.l, 4).unwrap();
    let ell_b = ell_free.map_polys(c, free_to_dressing(&a_w));
    ensure_op(&ell_b, &ell_direct(&d).unwrap(), "ell routes").unwrap();
}

#[test]
fn powers_examples() {
    let c = Ctx::new(Algebra::FreeA, 6);
    let lp = lax_free(c, 4).unwrap();
    assert_eq!(powers(&lp.l, 1, 0).unwrap(), p("a1", c));
    assert_eq!(powers(&lp.l, 1, -1).unwrap(), p("a2", c));
    assert_eq!(powers(&lp.l, 2, 0).unwrap(), &p("a1^2", c) + &bracket(2, &p("a2", c)));
    assert_eq!(powers(&lp.l, 3, 3).unwrap(), DiffPoly::one(c));
}

#[test]
fn fractional_powers() {
    let c = b_ctx(4);
    let d = dressing(c, 4);
    let ls = frac_power(&d).unwrap();
    let w1 = p("w1", c);
    let expect = &crate::diffalg::shift_formal(&w1, 0, -1) - &crate::diffalg::shift_formal(&w1, 0, 1);
    assert_eq!(ls.coeff(-1).unwrap(), expect);
    frac_power_ode_check(&d, 4).unwrap();
    frac_power_integer_check(&dressing(c, 3), 3).unwrap();
    assert_eq!(rat(1, 2), Q::new(1.into(), 2.into()));
}
