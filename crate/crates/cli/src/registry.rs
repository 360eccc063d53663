//! The named verification checks and the parameters each one runs at.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use eqtoda_core::check::{ensure_op, ensure_poly, fail};
use eqtoda_core::diffalg::{p_op, Algebra, Ctx, DiffPoly, Field, Gen};
use eqtoda_core::diffop::op_powers;
use eqtoda_core::dressing::{
    a_in_w, dressing, ell_commutator_check, ell_direct, ell_recursive, ell_sum, embedding_check,
    eq_bn_check, frac_power_integer_check, frac_power_ode_check, free_to_dressing, lax_free,
    mentions_w, w_inverse_check, Dressing, LaxPair,
};
use eqtoda_core::equivariant::{
    equivariant_w_check, equivariant_w_reduced_check, puncture_check, solve_constraint,
    theorem_main_check, z_constants_check, ConstraintSolution, LAMBDA_INV_RELATION,
};
use eqtoda_core::flows::{flow_on_a, flows_commute_check, zakharov_shabat_check};
use eqtoda_core::properties;
use eqtoda_core::variational::{
    big_h_check, binomial_derivative_check, descendant_limit_check, dh_n_check, dlog_check,
    dls_check, dls_formal_check, hamiltonian, hamiltonian_flow_check, lemma_p0_check,
    var_corollary_check,
};
use eqtoda_core::{Error, Result};
use serde_json::{json, Value};

use crate::config::{Fault, RunConfig};

pub type Params = BTreeMap<String, Value>;

/// Random instances per property check.
pub const INSTANCES: usize = 25;

/// Shared state for one run: the configuration and the constraint solution,
/// solved at most once.
pub struct Env<'a> {
    pub config: &'a RunConfig,
    solution: OnceLock<std::result::Result<ConstraintSolution, Error>>,
}

impl<'a> Env<'a> {
    pub fn new(config: &'a RunConfig) -> Self {
        Env { config, solution: OnceLock::new() }
    }

    fn n_eps(&self) -> u8 {
        self.config.eps_order
    }

    fn depth(&self) -> usize {
        self.config.lambda_depth
    }

    fn free_ctx(&self) -> Ctx {
        Ctx::new(Algebra::FreeA, self.n_eps())
    }

    fn b_ctx(&self) -> Ctx {
        Ctx::new(Algebra::DressingB, self.n_eps())
    }

    fn free_lax(&self, depth: usize) -> Result<LaxPair> {
        lax_free(self.free_ctx(), depth)
    }

    fn dressing(&self, depth: usize) -> Dressing {
        dressing(self.b_ctx(), depth)
    }

    /// The solved constraint at `(N, k_max, D)`, with any injected fault.
    pub fn solution(&self) -> Result<ConstraintSolution> {
        self.solution
            .get_or_init(|| {
                let c = self.config;
                let mut sol = solve_constraint(c.eps_order, c.k_max, c.lambda_depth)?;
                if c.inject_fault == Some(Fault::A3Sign) && sol.a.len() > 2 {
                    sol.a[2] = -sol.a[2].clone();
                }
                Ok(sol)
            })
            .clone()
    }

    /// `0..=hi`, or just the `--n` value when it lies in range.
    fn n_range(&self, lo: usize, hi: usize) -> Vec<usize> {
        match self.config.n {
            Some(n) if n >= lo && n <= hi => vec![n],
            Some(_) => vec![],
            None => (lo..=hi).collect(),
        }
    }

    fn k_range(&self, hi: usize) -> Vec<usize> {
        match self.config.k {
            Some(k) if k <= hi => vec![k],
            Some(_) => vec![],
            None => (0..=hi).collect(),
        }
    }
}

type Runner = fn(&Env, &mut Params) -> Result<()>;
type Gate = fn(&RunConfig) -> Option<String>;

pub struct CheckDef {
    pub id: &'static str,
    /// Whether the identity only holds for a correct solution of the
    /// constraint (so an injected fault must break it).
    pub uses_constraint: bool,
    gate: Gate,
    run: Runner,
}

impl CheckDef {
    /// `Some(reason)` when the configuration is too small for the check.
    pub fn skip_reason(&self, c: &RunConfig) -> Option<String> {
        (self.gate)(c)
    }

    pub fn run(&self, env: &Env, params: &mut Params) -> Result<()> {
        (self.run)(env, params)
    }
}

fn depth_at_least(c: &RunConfig, d: usize) -> Option<String> {
    (c.lambda_depth < d).then(|| format!("lambda depth {} < {d}", c.lambda_depth))
}

fn gate2(c: &RunConfig) -> Option<String> {
    depth_at_least(c, 2)
}

fn gate1(c: &RunConfig) -> Option<String> {
    depth_at_least(c, 1)
}

fn gate3(c: &RunConfig) -> Option<String> {
    depth_at_least(c, 3)
}

fn gate_solution(c: &RunConfig) -> Option<String> {
    if c.k_max < 2 {
        return Some(format!("k_max {} < 2", c.k_max));
    }
    depth_at_least(c, c.k_max + 2)
}

fn p_set(params: &mut Params, key: &str, v: impl Into<Value>) {
    params.insert(key.to_string(), v.into());
}

fn base_params(env: &Env, params: &mut Params) {
    p_set(params, "eps_order", env.n_eps());
}

fn random_params(env: &Env, params: &mut Params) {
    base_params(env, params);
    p_set(params, "instances", INSTANCES);
    p_set(params, "seed", env.config.seed);
}

fn assoc(env: &Env, params: &mut Params) -> Result<()> {
    random_params(env, params);
    properties::assoc_check(env.free_ctx(), env.config.seed, INSTANCES)
}

fn res_commutator(env: &Env, params: &mut Params) -> Result<()> {
    random_params(env, params);
    properties::res_commutator_check(env.free_ctx(), env.config.seed, INSTANCES)?;
    properties::var_derivative_exact_check(env.free_ctx(), env.config.seed, INSTANCES)?;
    properties::functional_soundness_check(env.free_ctx(), env.config.seed, INSTANCES)
}

fn bar_involution(env: &Env, params: &mut Params) -> Result<()> {
    random_params(env, params);
    properties::bar_check(env.free_ctx(), env.config.seed, INSTANCES)
}

fn w_inverse(env: &Env, params: &mut Params) -> Result<()> {
    base_params(env, params);
    p_set(params, "depth", env.depth());
    w_inverse_check(&env.dressing(env.depth()))
}

fn embedding(env: &Env, params: &mut Params) -> Result<()> {
    let depth = env.depth().min(6);
    base_params(env, params);
    p_set(params, "depth", depth);
    embedding_check(&env.dressing(depth))
}

/// `ℓ` three ways: `ε(∂W)W⁻¹`, the explicit sum, and the recursion over
/// the free algebra mapped into `ℬ`.
fn ell_cross(env: &Env, params: &mut Params) -> Result<()> {
    let depth = env.depth().min(5);
    base_params(env, params);
    p_set(params, "depth", depth);
    let d = env.dressing(depth);
    let direct = ell_direct(&d)?;
    ensure_op(&ell_sum(&d), &direct, "ell explicit sum = eps (dW) W^-1")?;
    let lf = env.free_lax(depth)?;
    let rec = ell_recursive(&lf.l, depth)?;
    if mentions_w(&rec) {
        return Err(fail("ell recursion is w-free", rec.render()));
    }
    ensure_poly(&rec.coeff(-1)?, &-p_op(&DiffPoly::var(env.free_ctx(), Gen::A(1))), "b_1 = -P a_1", Some(-1))?;
    let a_w = a_in_w(&d)?;
    ensure_op(&rec.map_polys(d.ctx, free_to_dressing(&a_w)), &direct, "ell recursion in w = ell direct")?;
    ell_commutator_check(&rec, &lf.l.truncate_below(1 - depth as i32)?)
}

fn eq_bn(env: &Env, params: &mut Params) -> Result<()> {
    let n_max = env.config.effective_n_max().min(env.depth());
    base_params(env, params);
    p_set(params, "depth", env.depth());
    p_set(params, "n_max", n_max);
    let lp = env.free_lax(env.depth())?;
    let ell = ell_recursive(&lp.l, n_max)?;
    let pw = op_powers(&lp.l, n_max)?;
    eq_bn_check(&ell, &pw, n_max)
}

fn frac_ode(env: &Env, params: &mut Params) -> Result<()> {
    let depth = env.depth().min(4);
    let k = env.config.k_max.min(depth);
    let n = env.config.effective_n_max().min(3);
    base_params(env, params);
    p_set(params, "depth", depth);
    p_set(params, "k_max", k);
    p_set(params, "n_max", n);
    let d = env.dressing(depth);
    frac_power_ode_check(&d, k)?;
    frac_power_integer_check(&env.dressing(depth.min(3)), n)
}

const ZS_PAIRS: [((i32, bool), (i32, bool)); 5] =
    [((1, false), (2, false)), ((1, false), (1, true)), ((2, false), (1, true)), ((1, false), (1, false)), ((1, true), (2, true))];

fn zs(env: &Env, params: &mut Params) -> Result<()> {
    let n = env.n_eps().min(4);
    let depth = env.depth().min(6);
    p_set(params, "eps_order", n);
    p_set(params, "depth", depth);
    p_set(params, "pairs", "(1,2) (1,1~) (2,1~) (1,1) (1~,2~)");
    let lp = lax_free(Ctx::new(Algebra::FreeA, n), depth)?;
    for (a, b) in ZS_PAIRS {
        zakharov_shabat_check(&lp, a, b)?;
    }
    Ok(())
}

fn flow_commute(env: &Env, params: &mut Params) -> Result<()> {
    let n = env.n_eps().min(4);
    let depth = env.depth().min(7);
    p_set(params, "eps_order", n);
    p_set(params, "depth", depth);
    p_set(params, "pairs", "[d1,d2] [d1,d1~]");
    let lp = lax_free(Ctx::new(Algebra::FreeA, n), depth)?;
    let gens = [Field::new(Gen::A(1)), Field::new(Gen::A(2)), Field::new(Gen::Q)];
    let d1 = flow_on_a(&lp, 1, false)?;
    flows_commute_check(&d1, &flow_on_a(&lp, 2, false)?, &gens)?;
    flows_commute_check(&d1, &flow_on_a(&lp, 1, true)?, &gens)
}

fn solution_params(env: &Env, params: &mut Params) {
    base_params(env, params);
    p_set(params, "k_max", env.config.k_max);
    p_set(params, "depth", env.depth());
}

fn z_constants(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    let sol = env.solution()?;
    let z = z_constants_check(&sol)?;
    for (i, zk) in z.iter().enumerate() {
        ensure_poly(zk, &DiffPoly::z(sol.ctx, i + 1), &format!("z_{} reduces to the parameter", i + 1), None)?;
    }
    Ok(())
}

fn theorem_main(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    p_set(params, "relation", LAMBDA_INV_RELATION);
    theorem_main_check(&env.solution()?)
}

fn puncture(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    puncture_check(&env.solution()?)
}

fn equivariant_w(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    let depth = env.depth().min(3);
    p_set(params, "dressing_depth", depth);
    equivariant_w_check(&dressing(Ctx::new(Algebra::DressingB, env.n_eps().min(4)), depth))?;
    equivariant_w_reduced_check(&env.solution()?)
}

fn lemma_p0(env: &Env, params: &mut Params) -> Result<()> {
    let hi = env.config.effective_n_max().min(4).min(env.depth().saturating_sub(2));
    let ns = env.n_range(0, hi);
    base_params(env, params);
    p_set(params, "depth", env.depth());
    p_set(params, "n", json!(ns));
    let lp = env.free_lax(env.depth())?;
    for n in ns {
        lemma_p0_check(&lp.l, n)?;
    }
    Ok(())
}

fn dls(env: &Env, params: &mut Params) -> Result<()> {
    let depth = env.depth().min(5);
    let n = env.n_eps().min(4);
    p_set(params, "eps_order", n);
    p_set(params, "depth", depth);
    p_set(params, "n_max", 3);
    p_set(params, "formal_depth", 3);
    let lp = lax_free(Ctx::new(Algebra::FreeA, n), depth)?;
    dls_check(&lp.l, 3)?;
    binomial_derivative_check(lp.ctx(), n as usize + depth)?;
    dls_formal_check(&dressing(Ctx::new(Algebra::DressingB, 3), 3), 6)
}

fn dlog(env: &Env, params: &mut Params) -> Result<()> {
    let depth = env.depth().min(5);
    let n = env.n_eps().min(4);
    let terms = n as usize + depth;
    p_set(params, "eps_order", n);
    p_set(params, "depth", depth);
    p_set(params, "ad_terms", terms);
    let lp = lax_free(Ctx::new(Algebra::FreeA, n), depth)?;
    dlog_check(&lp.l, terms)
}

fn hamiltonian_ns(env: &Env, lo: usize) -> Vec<usize> {
    env.n_range(lo, 3.min(env.config.k_max))
}

fn d_hn(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    let ns = hamiltonian_ns(env, 0);
    p_set(params, "n", json!(ns));
    let sol = env.solution()?;
    for n in ns {
        dh_n_check(&sol, n)?;
        big_h_check(&sol, &hamiltonian(&sol, n)?)?;
    }
    Ok(())
}

fn var_corollary(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    let ns = hamiltonian_ns(env, 0);
    p_set(params, "n", json!(ns));
    let sol = env.solution()?;
    for n in ns {
        var_corollary_check(&sol, &hamiltonian(&sol, n)?)?;
    }
    Ok(())
}

fn hamiltonian_flow(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    let ns = hamiltonian_ns(env, 1);
    p_set(params, "n", json!(ns));
    let sol = env.solution()?;
    for n in ns {
        hamiltonian_flow_check(&sol, n, false)?;
        hamiltonian_flow_check(&sol, n, true)?;
    }
    Ok(())
}

/// Verifies the corrected limit; the residual of the stated form is
/// recorded in the parameters.
fn descendant_limit(env: &Env, params: &mut Params) -> Result<()> {
    solution_params(env, params);
    let ks = env.k_range(1.min(env.config.k_max.saturating_sub(1)));
    p_set(params, "k", json!(ks));
    let sol = env.solution()?;
    for k in ks {
        let r = descendant_limit_check(&sol, k)?;
        p_set(params, &format!("stated_residual_k{k}"), r.stated_residual.density.to_string());
    }
    Ok(())
}

pub static CHECKS: &[CheckDef] = &[
    CheckDef { id: "assoc", uses_constraint: false, gate: gate2, run: assoc },
    CheckDef { id: "bar-involution", uses_constraint: false, gate: gate2, run: bar_involution },
    CheckDef { id: "dHn", uses_constraint: true, gate: gate_solution, run: d_hn },
    CheckDef { id: "descendant-limit", uses_constraint: true, gate: gate_solution, run: descendant_limit },
    CheckDef { id: "dlog", uses_constraint: false, gate: gate2, run: dlog },
    CheckDef { id: "dls", uses_constraint: false, gate: gate2, run: dls },
    CheckDef { id: "ell-cross", uses_constraint: false, gate: gate1, run: ell_cross },
    CheckDef { id: "embedding", uses_constraint: false, gate: gate1, run: embedding },
    CheckDef { id: "eq-bn", uses_constraint: false, gate: gate1, run: eq_bn },
    CheckDef { id: "equivariant-w", uses_constraint: true, gate: gate_solution, run: equivariant_w },
    CheckDef { id: "flow-commute", uses_constraint: false, gate: gate3, run: flow_commute },
    CheckDef { id: "frac-ode", uses_constraint: false, gate: gate1, run: frac_ode },
    CheckDef { id: "hamiltonian-flow", uses_constraint: true, gate: gate_solution, run: hamiltonian_flow },
    CheckDef { id: "lemma-p0", uses_constraint: false, gate: gate2, run: lemma_p0 },
    CheckDef { id: "puncture", uses_constraint: true, gate: gate_solution, run: puncture },
    CheckDef { id: "res-commutator", uses_constraint: false, gate: gate2, run: res_commutator },
    CheckDef { id: "theorem-main", uses_constraint: true, gate: gate_solution, run: theorem_main },
    CheckDef { id: "var-corollary", uses_constraint: true, gate: gate_solution, run: var_corollary },
    CheckDef { id: "w-inverse", uses_constraint: false, gate: gate1, run: w_inverse },
    CheckDef { id: "z-constants", uses_constraint: true, gate: gate_solution, run: z_constants },
    CheckDef { id: "zs", uses_constraint: false, gate: gate3, run: zs },
];

pub fn find(id: &str) -> Option<&'static CheckDef> {
    CHECKS.iter().find(|c| c.id == id)
}
