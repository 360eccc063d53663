use super::*;
use crate::diffalg::{bracket, e_half, nabla, parse_poly, Algebra, Ctx, DiffPoly};
use crate::error::Error;

fn free(n: u8) -> Ctx {
    Ctx::new(Algebra::FreeA, n)
}

fn p(s: &str, ctx: Ctx) -> DiffPoly {
    parse_poly(s, ctx).unwrap()
}

fn op(ctx: Ctx, window: Window, terms: &[(i32, &str)]) -> DiffOp {
    Op::new(ctx, window, terms.iter().map(|(k, s)| (*k, p(s, ctx))))
}

fn k_op(ctx: Ctx) -> DiffOp {
    op(ctx, Window::finite(-1, 1).unwrap(), &[(1, "1"), (0, "a1"), (-1, "q")])
}

#[test]
fn product_examples() {
    let c = free(6);
    let lam = DiffOp::lambda(c, 1);
    let qinv = op(c, Window::finite(-1, -1).unwrap(), &[(-1, "q")]);
    let r = op_mul(&lam, &qinv).unwrap();
    assert_eq!(r.coeff(0).unwrap(), e_half(1, &p("q", c)));

    let f = DiffOp::scalar(p("a2*a1", c));
    let conj = op_mul_all(&[&lam, &f, &DiffOp::lambda(c, -1)]).unwrap();
    assert_eq!(conj.coeff(0).unwrap(), e_half(2, &p("a2*a1", c)));

    let w = Window::finite(-1, 0).unwrap();
    let a = op(c, w, &[(0, "1"), (-1, "a1")]);
    let b = op(c, w, &[(0, "1"), (-1, "-a1")]);
    let ab = op_mul(&a, &b).unwrap();
    let w1 = p("a1", c);
    assert_eq!(ab.coeff(-1).unwrap(), DiffPoly::zero(c));
    assert_eq!(ab.coeff(-2).unwrap(), -(&e_half(1, &w1) * &e_half(-1, &w1)));
}

#[test]
fn projections_and_residue() {
    let c = free(6);
    let k = k_op(c);
    let plus = k.proj_plus().unwrap();
    let minus = k.proj_minus().unwrap();
    assert_eq!(plus.entries().count(), 2);
    assert_eq!(minus.coeff(-1).unwrap(), p("q", c));
    assert_eq!(plus.add(&minus).unwrap(), k);
    assert_eq!(k.res().unwrap(), p("a1", c));
    assert!(DiffOp::lambda(c, 2).res().unwrap().is_zero());

    let m = k.as_minus(-3).unwrap();
    assert!(matches!(m.coeff(-4), Err(Error::WindowMiss { .. })));
    let deep = m.truncate_below(1).unwrap();
    assert!(deep.proj_minus().is_err());
}

#[test]
fn residue_of_commutator() {
    let c = free(6);
    let a = op(c, Window::finite(1, 1).unwrap(), &[(1, "a1")]);
    let b = op(c, Window::finite(-1, -1).unwrap(), &[(-1, "q")]);
    let r = commutator(&a, &b).unwrap().res().unwrap();
    assert_eq!(r, nabla(&p("a1*q", c)).scale_eps(1, &crate::diffalg::rat(1, 1)));
}

#[test]
fn q_brackets() {
    let c = free(4);
    assert_eq!(q_bracket_power(c, 0), DiffPoly::one(c));
    assert_eq!(q_bracket_power(c, 1), p("q", c));
    let q2 = q_bracket_power(c, 2);
    let q = p("q", c);
    assert_eq!(q2, &e_half(1, &q) * &e_half(-1, &q));
    assert_eq!(q2.truncated(2), p("q^2", c.with_order(2)));
    let qinv = op(c, Window::finite(-1, -1).unwrap(), &[(-1, "q")]);
    for k in 1..4 {
        let pw = op_power(&qinv, k).unwrap();
        assert_eq!(pw.coeff(-k).unwrap(), q_bracket_power(c, k));
    }
    let prod = &q_bracket_power(c, 3) * &q_bracket_power(c, -3);
    assert_eq!(prod, DiffPoly::one(c));
}

#[test]
fn bar_examples() {
    let c = free(6);
    let lam = DiffOp::lambda(c, 1);
    let b = op_bar(&lam).unwrap();
    assert_eq!(b.coeff(-1).unwrap(), p("q", c));
    let qinv = op(c, Window::finite(-1, -1).unwrap(), &[(-1, "q")]);
    assert_eq!(op_bar(&qinv).unwrap(), lam);
    let k = k_op(c);
    assert_eq!(op_bar(&op_bar(&k).unwrap()).unwrap(), k);
    let kb = op_bar(&k).unwrap();
    assert_eq!(kb.coeff(0).unwrap(), p("a1~", c));
}

#[test]
fn bar_is_anti_multiplicative() {
    let c = free(5);
    let a = op(c, Window::finite(-1, 2).unwrap(), &[(2, "a1"), (0, "q*a2"), (-1, "a3~")]);
    let b = op(c, Window::finite(-2, 1).unwrap(), &[(1, "1"), (-2, "a2*t")]);
    let lhs = op_bar(&op_mul(&a, &b).unwrap()).unwrap();
    let rhs = op_mul(&op_bar(&b).unwrap(), &op_bar(&a).unwrap()).unwrap();
    assert_eq!(lhs.first_difference(&rhs, "bar"), None);
}

#[test]
fn inverse_examples() {
    let c = free(6);
    let lam = DiffOp::lambda(c, 1);
    assert_eq!(op_invert(&lam).unwrap(), DiffOp::lambda(c, -1));
    let w = op(c, Window::minus(-4, 0).unwrap(), &[(0, "1"), (-1, "a1")]);
    let inv = op_invert(&w).unwrap();
    let w1 = p("a1", c);
    assert_eq!(inv.coeff(-1).unwrap(), -&w1);
    assert_eq!(inv.coeff(-2).unwrap(), &e_half(1, &w1) * &e_half(-1, &w1));
    let id = op_mul(&w, &inv).unwrap();
    assert_eq!(id, DiffOp::identity(c).as_minus(id.lo()).unwrap());

    let l = op(c, Window::minus(-3, 1).unwrap(), &[(1, "1"), (0, "a1"), (-1, "a2"), (-2, "a3")]);
    let li = op_invert(&l).unwrap();
    assert_eq!((li.lo(), li.hi()), (-5, -1));
    let one = op_mul(&li, &l).unwrap();
    assert_eq!(one.first_difference(&DiffOp::identity(c).as_minus(-10).unwrap(), "inv"), None);

    let lb = op_bar(&l).unwrap();
    let lbi = op_invert(&lb).unwrap();
    let one = op_mul(&lb, &lbi).unwrap();
    assert_eq!(one.first_difference(&DiffOp::identity(c).as_plus(10).unwrap(), "inv"), None);
}

#[test]
fn powers() {
    let c = free(6);
    let l = op(c, Window::minus(-3, 1).unwrap(), &[(1, "1"), (0, "a1"), (-1, "a2"), (-2, "a3")]);
    let l2 = op_power(&l, 2).unwrap();
    assert_eq!(l2.coeff(1).unwrap(), bracket(2, &p("a1", c)));
    assert_eq!(l2.coeff(0).unwrap(), &p("a1^2", c) + &bracket(2, &p("a2", c)));
    assert_eq!(op_power(&DiffOp::lambda(c, 1), 3).unwrap(), DiffOp::lambda(c, 3));
    let pw = op_powers(&l, 3).unwrap();
    assert_eq!(pw[3], op_power(&l, 3).unwrap());
    assert_eq!(res_functional(&l).unwrap().density, p("a1", c));
}

#[test]
fn mixed_product_is_rejected() {
    let c = free(4);
    let m = DiffOp::lambda(c, 1).as_minus(-3).unwrap();
    let pl = DiffOp::lambda(c, -1).as_plus(3).unwrap();
    assert!(matches!(op_mul(&m, &pl), Err(Error::Incompatible(_))));
}

#[test]
fn s_offset_product() {
    let c = free(4);
    let ls = lambda_s(c, 1);
    let f = DiffOp::scalar(p("a1", c));
    let r = op_mul(&ls, &f).unwrap();
    assert_eq!(r.s_offset(), 1);
    let expect = crate::diffalg::shift_formal(&p("a1", c), 0, 1);
    assert_eq!(r.coeff(0).unwrap(), expect);
}

#[test]
fn rendering() {
    let c = free(3);
    let k = k_op(c);
    assert_eq!(k.render(), "(1) * L^1 + (D0[a1]) * L^0 + (D0[q]) * L^-1 [-1..1]");
    assert_eq!(k.entries_text()[1], (0, "D0[a1]".to_string()));
}
