use super::*;
use crate::diffalg::{nabla, parse_poly, Q};
use num_traits::One;
use crate::dressing::{dressing, lax_free};

fn free(n: u8) -> Ctx {
    Ctx::new(Algebra::FreeA, n)
}

fn p(s: &str, ctx: Ctx) -> DiffPoly {
    parse_poly(s, ctx).unwrap()
}

#[test]
fn first_flow_on_a1() {
    let c = free(6);
    let lp = lax_free(c, 5).unwrap();
    let d1 = flow_on_a(&lp, 1, false).unwrap();
    let img = d1.image(Field::new(Gen::A(1))).unwrap();
    assert_eq!(img, &nabla(&p("a2", c)).scale_eps(1, &Q::one()));
    let dq = d1.image(Field::new(Gen::Q)).unwrap();
    assert_eq!(dq, &(&p("q", c) * &nabla(&p("a1", c))).scale_eps(1, &Q::one()));
    regularity_check(&d1).unwrap();
}

#[test]
fn derivations_are_evolutionary() {
    let c = free(5);
    let lp = lax_free(c, 5).unwrap();
    let d2 = flow_on_a(&lp, 2, true).unwrap();
    evolutionary_check(&d2, &p("a1*D1[a2]~ + q^2*a1~", c)).unwrap();
    assert!(d2.apply(&p("z1 + t", c)).unwrap().is_zero());
}

#[test]
fn zs_small() {
    let lp = lax_free(free(4), 6).unwrap();
    zakharov_shabat_check(&lp, (1, false), (1, false)).unwrap();
    zakharov_shabat_check(&lp, (1, false), (2, false)).unwrap();
    zakharov_shabat_check(&lp, (1, false), (1, true)).unwrap();
    zakharov_shabat_check(&lp, (2, false), (1, true)).unwrap();
    zakharov_shabat_check(&lp, (1, true), (2, true)).unwrap();
}

#[test]
fn commuting_flows() {
    let lp = lax_free(free(4), 7).unwrap();
    let gens = [Field::new(Gen::A(1)), Field::new(Gen::A(2)), Field::new(Gen::Q)];
    let d1 = flow_on_a(&lp, 1, false).unwrap();
    let d2 = flow_on_a(&lp, 2, false).unwrap();
    let db1 = flow_on_a(&lp, 1, true).unwrap();
    flows_commute_check(&d1, &d2, &gens).unwrap();
    flows_commute_check(&d1, &db1, &gens).unwrap();
}

#[test]
fn conjugation_intertwines() {
    let lp = lax_free(free(4), 5).unwrap();
    let d1 = flow_on_a(&lp, 1, false).unwrap();
    let db1 = flow_on_a(&lp, 1, true).unwrap();
    let x = p("a1*D1[a2] + q*a1~", free(4));
    let lhs = involute(&d1.apply(&x).unwrap());
    let rhs = db1.apply(&involute(&x)).unwrap();
    assert_eq!(lhs, rhs);
}

#[test]
fn dressing_flows() {
    let c = Ctx::new(Algebra::DressingB, 4);
    let d = dressing(c, 4);
    dressing_flow_check(&d, 1).unwrap();
    restriction_check(&d, 1, 2).unwrap();
}
