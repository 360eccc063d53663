//! One line per acceptance criterion. Criteria whose stated form does not
//! hold print FAIL, and the test asserts that the residual is exactly the
//! one recorded for them; every other criterion must pass.

use std::io::Write;
use std::process::Command;

use eqtoda_cli::registry::CHECKS;
use eqtoda_cli::{run_verify, RunConfig, Status};
use eqtoda_core::diffalg::{
    bracket, functional_equal, p_op, parse_poly, rat, Algebra, Ctx, DiffPoly, Gen, Jet, Mono,
    ParamMono,
};
use eqtoda_core::diffop::{commutator, op_power};
use eqtoda_core::dressing::{dressing, ell_direct, frac_power_ode_check, lax_from_dressing};
use eqtoda_core::equivariant::{big_k, solve_constraint, theorem_main_check};
use eqtoda_core::properties;
use eqtoda_core::variational::{descendant_limit_check, hamiltonian};

struct Outcome {
    pass: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { pass: true, detail: detail.into() }
}

fn failed(detail: impl Into<String>) -> Outcome {
    Outcome { pass: false, detail: detail.into() }
}

fn red(n: u8) -> Ctx {
    Ctx::new(Algebra::Reduced, n)
}

fn p(s: &str, c: Ctx) -> DiffPoly {
    parse_poly(s, c).unwrap()
}

fn from_checks(report: &eqtoda_cli::Report, ids: &[&str]) -> Outcome {
    let mut bad = Vec::new();
    let mut params = Vec::new();
    for id in ids {
        let r = report.get(id).expect("check ran");
        params.push(format!("{id}: {}", serde_json::to_string(&r.params).unwrap()));
        if r.status != Status::Pass {
            bad.push(format!("{id}: {:?} {}", r.status, r.residual));
        }
    }
    if bad.is_empty() {
        pass(params.join("; "))
    } else {
        failed(bad.join("; "))
    }
}

/// 𝖯 fitted from `b₁ = −Σ c_j ε^j ∂^j a₁` over the dressing algebra, where
/// `b₁` comes from `ε(∂W)W⁻¹` alone.
fn criterion_1() -> Outcome {
    let ctx = Ctx::new(Algebra::DressingB, 6);
    let d = dressing(ctx, 2);
    let lp = lax_from_dressing(&d).unwrap();
    let a1 = lp.a(1).unwrap();
    let b1 = ell_direct(&d).unwrap().coeff(-1).unwrap();
    let mut r = b1.clone();
    let mut cs = Vec::new();
    for j in 0..5u8 {
        let tj = a1.derive_n(j as usize).scale_eps(j as i8, &rat(1, 1));
        let m = Mono::param(ParamMono::eps(j as i8 + 1)).mul(&Mono::jet(Jet::new(Gen::W(1), j + 1)));
        let c = -r.coefficient(&m) / tj.coefficient(&m);
        r.add_assign_ref(&tj.scale(&c));
        cs.push(c);
    }
    let want = [rat(1, 1), rat(0, 1), rat(-1, 24), rat(0, 1), rat(7, 5760)];
    let coded = p_op(&a1) == -b1.clone();

    let c4 = Ctx::new(Algebra::DressingB, 4);
    let d4 = dressing(c4, 3);
    let l4 = lax_from_dressing(&d4).unwrap();
    let ell4 = ell_direct(&d4).unwrap();
    let residue_ok = (1..=2).all(|n| {
        let ln = op_power(&l4.l, n).unwrap();
        ln.res().unwrap().derive().scale_eps(1, &rat(1, 1)) == commutator(&ell4, &ln).unwrap().res().unwrap()
    });
    let text: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
    let detail = format!("fitted ({})", text.join(", "));
    if r.is_zero() && cs == want && coded && residue_ok {
        pass(detail)
    } else {
        failed(format!("{detail}, remainder {r}, coded P agrees: {coded}, residue identity n=1,2: {residue_ok}"))
    }
}

fn printed_a3(c: Ctx) -> DiffPoly {
    let v = p("v", c);
    let inner = &bracket(2, &p("v^2", c)).scale(&rat(1, 4)) + &p("q", c);
    let mut a3 = &p_op(&inner) - &(&v * &bracket(2, &p_op(&v))).scale(&rat(1, 2));
    a3 = &p("t", c) * &a3;
    a3 = &a3 + &(&p("t^2", c) * &p_op(&v));
    &a3 + &p("-z1*v + 1/2*z2", c)
}

fn printed_h2(c: Ctx) -> DiffPoly {
    let v = p("v", c);
    let mut h2 = p("1/3*v^3 + 2*z1*v - t*z1 + 1/2*z2", c);
    h2 = &h2 + &(&v * &bracket(2, &p("q", c)));
    &h2 + &(&p("1/2*t", c) * &(&v * &bracket(2, &p_op(&v))))
}

/// The recorded deviation: the solved `a₃` exceeds the printed display by
/// `t z₁ + t²(𝖯² − 𝖯)v`, and `H₂` by the constant functional `∫t z₁`.
fn criterion_2() -> (Outcome, bool) {
    let c = red(6);
    let sol = solve_constraint(6, 3, 5).unwrap();
    let v = p("v", c);
    let a2_ok = *sol.a(2) == &p("q + z1", c) + &(&p("t", c) * &p_op(&v));
    let a3_res = sol.a(3) - &printed_a3(c);
    let want_a3 = &p("t*z1", c) + &(&p("t^2", c) * &(&p_op(&p_op(&v)) - &p_op(&v)));
    let a3_matches_ledger = a3_res == want_a3;

    let r = hamiltonian(&sol, 2).unwrap();
    let h0 = functional_equal(&r.h[0].density, &v);
    let h1 = functional_equal(&r.h[1].density, &p("1/2*v^2 + q + t*v + z1", c));
    let big0 = functional_equal(&hamiltonian(&sol, 0).unwrap().big_h.density, &v);
    let big1 = functional_equal(&hamiltonian(&sol, 1).unwrap().big_h.density, &p("1/2*v^2 + q + z1", c));
    let h2_res = &r.big_h.density - &printed_h2(c);
    let h2_matches_ledger = functional_equal(&h2_res, &p("t*z1", c));
    let exact = a2_ok && h0 && h1 && big0 && big1;
    let h2_text = if h2_matches_ledger {
        "int(t*z1) dx modulo total derivatives".to_string()
    } else {
        format!("int({h2_res}) dx")
    };
    let detail = format!(
        "a2 {}, h0 h1 H0 H1 {}; a3 - printed = {a3_res}; H2 - printed = {h2_text}",
        if a2_ok { "exact" } else { "WRONG" },
        if h0 && h1 && big0 && big1 { "exact" } else { "WRONG" },
    );
    let stated_holds = a3_res.is_zero() && functional_equal(&h2_res, &DiffPoly::zero(c));
    (Outcome { pass: exact && stated_holds, detail }, exact && a3_matches_ledger && h2_matches_ledger)
}

fn criterion_3() -> Outcome {
    match solve_constraint(4, 3, 6).and_then(|s| theorem_main_check(&s)) {
        Ok(()) => pass("k_max=3 D=6 N=4"),
        Err(e) => failed(e.to_string()),
    }
}

fn criterion_5() -> Outcome {
    let d = dressing(Ctx::new(Algebra::DressingB, 5), 4);
    match frac_power_ode_check(&d, 4) {
        Ok(()) => pass("k<=4, eps-degree<=4"),
        Err(e) => failed(e.to_string()),
    }
}

/// The stated limit fails by exactly `−2/(k+1)·Res K^{k+1}`; the corrected
/// identity and the absence of a t-pole are verified inside the check.
fn criterion_10() -> (Outcome, bool) {
    let sol = solve_constraint(6, 4, 8).unwrap();
    let kop = big_k(sol.ctx);
    let mut details = Vec::new();
    let mut holds = true;
    let mut ledger = true;
    for k in 0..=1usize {
        match descendant_limit_check(&sol, k) {
            Ok(r) => {
                let res_k = op_power(&kop, k as i32 + 1).unwrap().res().unwrap();
                let want = res_k.scale(&rat(-2, k as i64 + 1));
                ledger &= functional_equal(&r.stated_residual.density, &want);
                holds &= r.stated_holds();
                details.push(format!("k={k}: no t-pole, stated residual int({}) dx", r.stated_residual.density));
            }
            Err(e) => {
                holds = false;
                ledger = false;
                details.push(format!("k={k}: {e}"));
            }
        }
    }
    (Outcome { pass: holds, detail: details.join("; ") }, ledger)
}

fn criterion_11() -> Outcome {
    let ctx = Ctx::new(Algebra::FreeA, 4);
    let seed = RunConfig::default().seed;
    let n = 25;
    let runs: [(&str, fn(Ctx, u64, usize) -> eqtoda_core::Result<()>); 5] = [
        ("assoc", properties::assoc_check),
        ("bar", properties::bar_check),
        ("res-commutator", properties::res_commutator_check),
        ("var-derivative", properties::var_derivative_exact_check),
        ("functional-equal", properties::functional_soundness_check),
    ];
    let bad: Vec<String> = runs
        .iter()
        .filter_map(|(name, f)| f(ctx, seed, n).err().map(|e| format!("{name}: {e}")))
        .collect();
    if bad.is_empty() {
        pass(format!("{n} instances each, seed {seed}"))
    } else {
        failed(bad.join("; "))
    }
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqtoda"))
        .args(args)
        .env_remove("EQTODA_CONFIG")
        .output()
        .expect("run eqtoda");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn criterion_12() -> Outcome {
    let (code, first) = run_cli(&["verify", "--format", "json"]);
    let (_, second) = run_cli(&["verify", "--format", "json"]);
    let (fault_code, faulted) = run_cli(&["verify", "--format", "json", "--inject-fault", "a3-sign"]);
    let v: serde_json::Value = serde_json::from_str(&faulted).unwrap();
    let mut failing: Vec<String> = Vec::new();
    let mut located = true;
    for c in v["checks"].as_array().unwrap() {
        if c["status"] == "fail" {
            failing.push(c["id"].as_str().unwrap().to_string());
            let r = c["residual"].as_str().unwrap();
            located &= r.contains("eps^") && r.contains("monomial");
        }
    }
    let dependent: Vec<String> = CHECKS.iter().filter(|c| c.uses_constraint).map(|c| c.id.to_string()).collect();
    let deterministic = first == second;
    let detail = format!(
        "default exit {code}, deterministic {deterministic}, fault exit {fault_code} failing [{}]",
        failing.join(", ")
    );
    if code == 0 && deterministic && fault_code == 1 && failing == dependent && located {
        pass(detail)
    } else {
        failed(format!("{detail}, expected [{}], located {located}", dependent.join(", ")))
    }
}

/// Written to stderr directly so the lines survive libtest output capture.
fn line(n: usize, o: &Outcome) {
    let _ = writeln!(
        std::io::stderr().lock(),
        "criterion {n:>2}: {} {}",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail
    );
}

#[test]
fn acceptance_criteria() {
    let config = RunConfig::default();
    let report = run_verify(&config);

    let c1 = criterion_1();
    let (c2, c2_ledger) = criterion_2();
    let c3 = criterion_3();
    let c4 = from_checks(&report, &["ell-cross"]);
    let c5 = criterion_5();
    let c6 = from_checks(&report, &["dls", "dlog"]);
    let c7 = from_checks(&report, &["hamiltonian-flow", "var-corollary"]);
    let c8 = from_checks(&report, &["zs", "flow-commute"]);
    let c9 = from_checks(&report, &["lemma-p0"]);
    let (c10, c10_ledger) = criterion_10();
    let c11 = criterion_11();
    let c12 = criterion_12();

    let all = [&c1, &c2, &c3, &c4, &c5, &c6, &c7, &c8, &c9, &c10, &c11, &c12];
    for (i, o) in all.iter().enumerate() {
        line(i + 1, o);
    }

    for (i, o) in all.iter().enumerate() {
        let n = i + 1;
        if n == 2 || n == 10 {
            continue;
        }
        assert!(o.pass, "criterion {n} failed: {}", o.detail);
    }
    // Criteria 2 and 10 are recorded deviations: they fail, and by exactly
    // the recorded residuals.
    assert!(!c2.pass && c2_ledger, "criterion 2 differs from the recorded residual: {}", c2.detail);
    assert!(!c10.pass && c10_ledger, "criterion 10 differs from the recorded residual: {}", c10.detail);
}
