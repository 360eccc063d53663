//! Seeded random elements for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffalg::{rat, Ctx, DiffPoly, Gen, Jet, Mono, ParamMono};
use crate::diffop::{DiffOp, Window};

/// Jets of `q, a₁, a₂, ā₁` in the free algebra.
const FREE_FIELDS: [(Gen, bool); 4] = [(Gen::Q, false), (Gen::A(1), false), (Gen::A(2), false), (Gen::A(1), true)];

pub struct RandomGen {
    rng: ChaCha8Rng,
    ctx: Ctx,
}

impl RandomGen {
    pub fn new(ctx: Ctx, seed: u64) -> Self {
        RandomGen { rng: ChaCha8Rng::seed_from_u64(seed), ctx }
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    fn coefficient(&mut self) -> num_rational::BigRational {
        let n = *[-3, -2, -1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
        rat(n, self.rng.gen_range(1..=3))
    }

    fn jet(&mut self, max_order: u8) -> Jet {
        let (g, barred) = *FREE_FIELDS.choose(&mut self.rng).expect("nonempty");
        let order = self.rng.gen_range(0..=max_order);
        if barred {
            Jet::bar(g, order)
        } else {
            Jet::new(g, order)
        }
    }

    /// A short polynomial in the jets of `q, a₁, a₂, ā₁` (order ≤ 2) with
    /// occasional `q⁻¹`, `ε` and `t` factors.
    pub fn poly(&mut self, terms: usize) -> DiffPoly {
        let mut p = DiffPoly::zero(self.ctx);
        for _ in 0..terms {
            let mut m = Mono::one();
            for _ in 0..self.rng.gen_range(0..=2) {
                m = m.mul(&Mono::jet(self.jet(2)));
            }
            if self.rng.gen_bool(0.2) {
                m = m.mul(&Mono::jet_pow(Jet::q(), -1));
            }
            let e = self.rng.gen_range(0..=1);
            m = m.mul(&Mono::param(ParamMono::eps(e)));
            if self.rng.gen_bool(0.3) {
                m = m.mul(&Mono::param(ParamMono::t(1)));
            }
            let c = self.coefficient();
            p.add_assign_ref(&DiffPoly::term(self.ctx, m, c));
        }
        p
    }

    /// A polynomial that genuinely depends on jets.
    pub fn jet_poly(&mut self, terms: usize) -> DiffPoly {
        loop {
            let p = self.poly(terms);
            if !p.is_jet_free() {
                return p;
            }
        }
    }

    /// A random operator on the given window, every degree filled.
    pub fn op(&mut self, window: Window) -> DiffOp {
        let mut coeffs = Vec::new();
        for k in window.lo..=window.hi {
            let n = self.rng.gen_range(1..=2);
            coeffs.push((k, self.poly(n)));
        }
        DiffOp::new(self.ctx, window, coeffs)
    }

    /// A finite operator supported in `[−band, band]`.
    pub fn banded(&mut self, band: i32) -> DiffOp {
        self.op(Window::finite(-band, band).expect("band >= 0"))
    }

    /// A `Φ₋` operator `Σ_{lo ≤ k ≤ hi}` with unknown terms below `lo`.
    pub fn minus(&mut self, lo: i32, hi: i32) -> DiffOp {
        self.op(Window::minus(lo, hi).expect("lo <= hi"))
    }

    pub fn range(&mut self, lo: i32, hi: i32) -> i32 {
        self.rng.gen_range(lo..=hi)
    }
}
