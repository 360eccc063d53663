use eqtoda_core::diffalg::{Algebra, Ctx};
use eqtoda_core::properties::*;
use proptest::prelude::*;

const INSTANCES: usize = 25;
const SEED: u64 = 20_240_601;

fn ctx() -> Ctx {
    Ctx::new(Algebra::FreeA, 4)
}

#[test]
fn seeded_suites() {
    assoc_check(ctx(), SEED, INSTANCES).unwrap();
    bar_check(ctx(), SEED, INSTANCES).unwrap();
    res_commutator_check(ctx(), SEED, INSTANCES).unwrap();
    var_derivative_exact_check(ctx(), SEED, INSTANCES).unwrap();
    functional_soundness_check(ctx(), SEED, INSTANCES).unwrap();
    euler_lagrange_check(ctx(), SEED, INSTANCES).unwrap();
    j_antisymmetry_check(ctx(), SEED, INSTANCES).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(INSTANCES as u32))]

    #[test]
    fn associativity(seed in any::<u64>()) {
        assoc_check(ctx(), seed, 1).map_err(|e| TestCaseError::fail(e.to_string()))?;
    }

    #[test]
    fn bar_anti_isomorphism(seed in any::<u64>()) {
        bar_check(ctx(), seed, 1).map_err(|e| TestCaseError::fail(e.to_string()))?;
    }

    #[test]
    fn residue_of_commutator(seed in any::<u64>()) {
        res_commutator_check(ctx(), seed, 1).map_err(|e| TestCaseError::fail(e.to_string()))?;
    }

    #[test]
    fn total_derivatives_have_no_gradient(seed in any::<u64>()) {
        var_derivative_exact_check(ctx(), seed, 1).map_err(|e| TestCaseError::fail(e.to_string()))?;
    }

    #[test]
    fn functional_equality_is_sound(seed in any::<u64>()) {
        functional_soundness_check(ctx(), seed, 1).map_err(|e| TestCaseError::fail(e.to_string()))?;
    }

    #[test]
    fn j_is_antisymmetric(seed in any::<u64>()) {
        j_antisymmetry_check(ctx(), seed, 1).map_err(|e| TestCaseError::fail(e.to_string()))?;
    }
}
