use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use super::window::{Orientation, Window};
use crate::diffalg::{exp_series, formal_shift_coeffs, rat, Ctx, DiffPoly, Mono, Q};
use crate::error::{Error, Mismatch, Result};
use crate::parallel::par_map;

/// What an operator coefficient must support: the differential-module
/// structure over `DiffPoly` that the twisted product needs.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero(ctx: Ctx) -> Self;
    fn ctx(&self) -> Ctx;
    fn is_zero(&self) -> bool;
    fn derive(&self) -> Self;
    /// Multiply by `c·ε^k`.
    fn scale_eps(&self, k: i8, c: &Q) -> Self;
    fn mul_poly(&self, p: &DiffPoly) -> Self;
    fn add_assign_ref(&mut self, o: &Self);
    fn neg(&self) -> Self;
    /// First term in normal-form order, as (ε-degree, rendered monomial).
    fn first_term(&self) -> Option<(i8, String)>;
}

impl Coeff for DiffPoly {
    fn zero(ctx: Ctx) -> Self {
        DiffPoly::zero(ctx)
    }
    fn ctx(&self) -> Ctx {
        DiffPoly::ctx(self)
    }
    fn is_zero(&self) -> bool {
        DiffPoly::is_zero(self)
    }
    fn derive(&self) -> Self {
        DiffPoly::derive(self)
    }
    fn scale_eps(&self, k: i8, c: &Q) -> Self {
        DiffPoly::scale_eps(self, k, c)
    }
    fn mul_poly(&self, p: &DiffPoly) -> Self {
        self * p
    }
    fn add_assign_ref(&mut self, o: &Self) {
        DiffPoly::add_assign_ref(self, o)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn first_term(&self) -> Option<(i8, String)> {
        self.leading_term().map(|(m, c)| {
            let t = DiffPoly::term(self.ctx(), m.clone(), c);
            (m.params.eps, t.to_string())
        })
    }
}

/// `E^{(a + b·s)/2}` applied to `c`, given the derivatives `tower[j] = ∂ʲc`.
pub fn shift_coeff<C: Coeff>(tower: &[C], a: i64, b: i64) -> C {
    let ctx = tower[0].ctx();
    if a == 0 && b == 0 {
        return tower[0].clone();
    }
    let n = (ctx.order as usize).min(tower.len());
    let mut out = C::zero(ctx);
    if b == 0 {
        for (j, c) in exp_series(&rat(a, 2), n).iter().enumerate() {
            out.add_assign_ref(&tower[j].scale_eps(j as i8, c));
        }
    } else {
        for (j, c) in formal_shift_coeffs(ctx, a, b, n).iter().enumerate() {
            out.add_assign_ref(&tower[j].mul_poly(c).scale_eps(j as i8, &Q::one()));
        }
    }
    out
}

fn tower<C: Coeff>(c: &C) -> Vec<C> {
    let n = (c.ctx().order as usize).max(1);
    let mut out = Vec::with_capacity(n);
    out.push(c.clone());
    for j in 1..n {
        let next = out[j - 1].derive();
        out.push(next);
    }
    out
}

/// A windowed Laurent series `Λ^{m·s} Σ_k c_k Λ^k`.
#[derive(Clone, Debug)]
pub struct Op<C> {
    ctx: Ctx,
    window: Window,
    s_offset: i32,
    coeffs: BTreeMap<i32, C>,
}

pub type DiffOp = Op<DiffPoly>;

impl<C: Coeff> Op<C> {
    /// Build from coefficients; entries outside the window or zero are dropped.
    pub fn new(ctx: Ctx, window: Window, coeffs: impl IntoIterator<Item = (i32, C)>) -> Self {
        let coeffs = coeffs
            .into_iter()
            .filter(|(k, c)| window.contains(*k) && !c.is_zero())
            .collect();
        Op { ctx, window, s_offset: 0, coeffs }
    }

    pub fn zero(ctx: Ctx) -> Self {
        Op::new(ctx, Window::finite(0, 0).unwrap(), [])
    }

    /// `c·Λ^k`.
    pub fn monomial(c: C, k: i32) -> Self {
        Op::new(c.ctx(), Window::finite(k, k).unwrap(), [(k, c)])
    }

    pub fn with_s_offset(mut self, m: i32) -> Self {
        self.s_offset = m;
        self
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn lo(&self) -> i32 {
        self.window.lo
    }

    pub fn hi(&self) -> i32 {
        self.window.hi
    }

    pub fn s_offset(&self) -> i32 {
        self.s_offset
    }

    /// Stored (nonzero) coefficients.
    pub fn entries(&self) -> impl DoubleEndedIterator<Item = (i32, &C)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn get(&self, k: i32) -> Option<&C> {
        self.coeffs.get(&k)
    }

    /// Coefficient at `k`; zero where known to vanish.
    pub fn coeff(&self, k: i32) -> Result<C> {
        if !self.window.known(k) {
            return Err(self.window.miss(k));
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(|| C::zero(self.ctx)))
    }

    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn map_coeffs<D: Coeff>(&self, ctx: Ctx, f: impl Fn(i32, &C) -> D + Sync) -> Op<D>
    where
        C: Sync,
    {
        let items: Vec<(i32, &C)> = self.coeffs.iter().map(|(k, c)| (*k, c)).collect();
        let mapped = par_map(items, |(k, c)| (k, f(k, c)));
        Op { ctx, window: self.window, s_offset: self.s_offset, coeffs: mapped
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect() }
    }

    /// Fallible coefficient map.
    pub fn try_map_coeffs<D: Coeff>(
        &self,
        ctx: Ctx,
        f: impl Fn(i32, &C) -> Result<D> + Sync,
    ) -> Result<Op<D>> {
        let items: Vec<(i32, &C)> = self.coeffs.iter().map(|(k, c)| (*k, c)).collect();
        let mapped = par_map(items, |(k, c)| f(k, c).map(|d| (k, d)));
        let mut coeffs = BTreeMap::new();
        for r in mapped {
            let (k, d) = r?;
            if !d.is_zero() {
                coeffs.insert(k, d);
            }
        }
        Ok(Op { ctx, window: self.window, s_offset: self.s_offset, coeffs })
    }

    /// Replace the window, dropping coefficients that fall outside.
    pub fn with_window(&self, window: Window) -> Self {
        Op {
            ctx: self.ctx,
            window,
            s_offset: self.s_offset,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| window.contains(**k))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Forget everything below `lo` (a `Minus` window).
    pub fn truncate_below(&self, lo: i32) -> Result<Self> {
        let w = Window::minus(lo.max(self.lo()), self.hi())?;
        if self.window.orient == Orientation::Plus {
            return Err(Error::Incompatible("truncate_below on a Phi_+ operator".into()));
        }
        Ok(self.with_window(w))
    }

    /// Forget everything above `hi` (a `Plus` window).
    pub fn truncate_above(&self, hi: i32) -> Result<Self> {
        let w = Window::plus(self.lo(), hi.min(self.hi()))?;
        if self.window.orient == Orientation::Minus {
            return Err(Error::Incompatible("truncate_above on a Phi_- operator".into()));
        }
        Ok(self.with_window(w))
    }

    /// View a finite operator as a `Minus` one with the given lower bound.
    pub fn as_minus(&self, lo: i32) -> Result<Self> {
        match self.window.orient {
            Orientation::Plus => Err(Error::Incompatible("as_minus on a Phi_+ operator".into())),
            Orientation::Minus => self.truncate_below(lo),
            Orientation::Finite => {
                Ok(self.with_window(Window::minus(lo.min(self.hi()), self.hi())?))
            }
        }
    }

    pub fn as_plus(&self, hi: i32) -> Result<Self> {
        match self.window.orient {
            Orientation::Minus => Err(Error::Incompatible("as_plus on a Phi_- operator".into())),
            Orientation::Plus => self.truncate_above(hi),
            Orientation::Finite => Ok(self.with_window(Window::plus(self.lo(), hi.max(self.lo()))?)),
        }
    }

    fn combine(&self, o: &Self, sign: bool) -> Result<Self> {
        if self.s_offset != o.s_offset {
            return Err(Error::Incompatible("sum with different s-offsets".into()));
        }
        let window = self.window.add(&o.window)?;
        let mut coeffs: BTreeMap<i32, C> = BTreeMap::new();
        for (k, c) in &self.coeffs {
            if window.contains(*k) {
                coeffs.insert(*k, c.clone());
            }
        }
        for (k, c) in &o.coeffs {
            if !window.contains(*k) {
                continue;
            }
            let c = if sign { c.clone() } else { c.neg() };
            match coeffs.get_mut(k) {
                Some(x) => x.add_assign_ref(&c),
                None => {
                    coeffs.insert(*k, c);
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Op { ctx: self.ctx, window, s_offset: self.s_offset, coeffs })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.combine(o, true)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.combine(o, false)
    }

    pub fn neg(&self) -> Self {
        Op {
            ctx: self.ctx,
            window: self.window,
            s_offset: self.s_offset,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    /// Multiply every coefficient by a rational.
    pub fn scale(&self, c: &Q) -> Self {
        Op {
            ctx: self.ctx,
            window: self.window,
            s_offset: self.s_offset,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, x)| (*k, x.scale_eps(0, c)))
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        }
    }

    /// Multiply every coefficient by a jet-free scalar (which commutes with Λ).
    pub fn scale_scalar(&self, p: &DiffPoly) -> Self {
        debug_assert!(p.is_jet_free());
        self.map_coeffs(self.ctx, |_, c| c.mul_poly(p))
    }

    /// Coefficient-wise `∂`; this is `ε⁻¹[log Λ, ·]`.
    pub fn derive(&self) -> Self {
        self.map_coeffs(self.ctx, |_, c| c.derive())
    }

    /// `A₊`: degrees `≥ 0`.
    pub fn proj_plus(&self) -> Result<Self> {
        self.project(0, i32::MAX)
    }

    /// `A₋`: degrees `≤ −1`.
    pub fn proj_minus(&self) -> Result<Self> {
        self.project(i32::MIN, -1)
    }

    /// The part in degrees `[from, to]`.
    pub fn project(&self, from: i32, to: i32) -> Result<Self> {
        let w = self.window;
        let lo = w.lo.max(from);
        let hi = w.hi.min(to);
        let window = match w.orient {
            Orientation::Finite => {
                if lo > hi {
                    return Ok(Op::zero(self.ctx));
                }
                Window::finite(lo, hi)?
            }
            Orientation::Minus => {
                if from > i32::MIN && !w.known(from) {
                    return Err(w.miss(from));
                }
                if from == i32::MIN && lo > hi {
                    return Err(w.miss(to));
                }
                if lo > hi {
                    return Ok(Op::zero(self.ctx));
                }
                if from > i32::MIN {
                    Window::finite(lo, hi)?
                } else {
                    Window::minus(lo, hi)?
                }
            }
            Orientation::Plus => {
                if to < i32::MAX && !w.known(to) {
                    return Err(w.miss(to));
                }
                if to == i32::MAX && lo > hi {
                    return Err(w.miss(from));
                }
                if lo > hi {
                    return Ok(Op::zero(self.ctx));
                }
                if to < i32::MAX {
                    Window::finite(lo, hi)?
                } else {
                    Window::plus(lo, hi)?
                }
            }
        };
        Ok(self.with_window(window).with_s_offset(self.s_offset))
    }

    /// The residue: the Λ⁰ coefficient.
    pub fn res(&self) -> Result<C> {
        if self.s_offset != 0 {
            return Err(Error::Incompatible("residue of an s-offset operator".into()));
        }
        self.coeff(0)
    }

    /// First coefficient where `self` and `o` disagree on the common window.
    pub fn first_difference(&self, o: &Self, check: &str) -> Option<Mismatch> {
        let mut keys: Vec<i32> = self.coeffs.keys().chain(o.coeffs.keys()).copied().collect();
        keys.sort_unstable_by(|a, b| b.cmp(a));
        keys.dedup();
        for k in keys {
            if !self.window.known(k) || !o.window.known(k) {
                continue;
            }
            let a = self.coeff(k).ok()?;
            let b = o.coeff(k).ok()?;
            if a != b {
                let mut d = a;
                d.add_assign_ref(&b.neg());
                let (e, m) = d.first_term().unwrap_or((0, String::new()));
                return Some(Mismatch {
                    check: check.to_string(),
                    degree: Some(k),
                    eps_degree: Some(e.into()),
                    monomial: m,
                    detail: String::new(),
                });
            }
        }
        None
    }

    /// `sum_k <coeff> * L^k [lo..hi]`.
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().rev() {
            parts.push(format!("({c}) * L^{k}"));
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        let s = if self.s_offset != 0 { format!("L^({}*s) * ", self.s_offset) } else { String::new() };
        format!("{s}{body} {}", self.window)
    }

    /// `[(k, coefficient text)]`, highest degree first.
    pub fn entries_text(&self) -> Vec<(i32, String)> {
        self.coeffs.iter().rev().map(|(k, c)| (*k, c.to_string())).collect()
    }
}

impl<C: Coeff> fmt::Display for Op<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Equality on the common window.
impl<C: Coeff> PartialEq for Op<C> {
    fn eq(&self, o: &Self) -> bool {
        self.s_offset == o.s_offset && self.first_difference(o, "").is_none()
    }
}

impl DiffOp {
    pub fn identity(ctx: Ctx) -> Self {
        Op::monomial(DiffPoly::one(ctx), 0)
    }

    /// `Λ^k`.
    pub fn lambda(ctx: Ctx, k: i32) -> Self {
        Op::monomial(DiffPoly::one(ctx), k)
    }

    /// `p·Λ^0` as an operator.
    pub fn scalar(p: DiffPoly) -> Self {
        Op::monomial(p, 0)
    }

    /// Apply a ring map to every coefficient.
    pub fn map_polys(&self, ctx: Ctx, f: impl Fn(&DiffPoly) -> DiffPoly + Sync) -> Self {
        self.map_coeffs(ctx, |_, c| f(c))
    }

    /// Multiply every coefficient by `ε^k`.
    pub fn times_eps(&self, k: i8) -> Self {
        self.map_polys(self.ctx, |c| c.scale_eps(k, &Q::one()))
    }

    pub fn truncated(&self, order: u8) -> Self {
        let ctx = self.ctx.with_order(order);
        self.map_coeffs(ctx, |_, c| c.truncated(order))
    }

    pub fn mentions(&self, pred: impl Fn(crate::diffalg::Jet) -> bool + Copy) -> bool {
        self.coeffs.values().any(|c| c.mentions(pred))
    }

    /// All coefficients as `(k, monomial, coefficient)` triples.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Mono, &Q)> {
        self.coeffs.iter().flat_map(|(k, c)| c.terms().map(move |(m, x)| (*k, m, x)))
    }
}

/// The twisted product with coefficient pairing `f`:
/// `(aΛ^{i+mₐs})(bΛ^{j+m_b s}) = f(E^{−(j+m_b s)/2}a, E^{(i+mₐs)/2}b) Λ^{i+j+(mₐ+m_b)s}`.
pub fn twisted_product<A: Coeff, B: Coeff, O: Coeff>(
    a: &Op<A>,
    b: &Op<B>,
    ctx: Ctx,
    f: impl Fn(&A, &B) -> O + Sync,
) -> Result<Op<O>> {
    let window = a.window.mul(&b.window)?;
    let (ma, mb) = (a.s_offset as i64, b.s_offset as i64);
    let ta: BTreeMap<i32, Vec<A>> = par_map(a.coeffs.iter().collect(), |(k, c)| (*k, tower(c)))
        .into_iter()
        .collect();
    let tb: BTreeMap<i32, Vec<B>> = par_map(b.coeffs.iter().collect(), |(k, c)| (*k, tower(c)))
        .into_iter()
        .collect();
    let degrees: Vec<i32> = (window.lo..=window.hi).collect();
    let out = par_map(degrees, |k| {
        let mut acc = O::zero(ctx);
        for (&i, ti) in &ta {
            let j = k - i;
            let Some(tj) = tb.get(&j) else { continue };
            let x = shift_coeff(ti, -(j as i64), -mb);
            let y = shift_coeff(tj, i as i64, ma);
            acc.add_assign_ref(&f(&x, &y));
        }
        (k, acc)
    });
    Ok(Op {
        ctx,
        window,
        s_offset: a.s_offset + b.s_offset,
        coeffs: out.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
    })
}

pub fn op_mul(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    let ctx = a.ctx.with_order(a.ctx.order.min(b.ctx.order));
    twisted_product(a, b, ctx, |x, y| x * y)
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &DiffOp, b: &DiffOp) -> Result<DiffOp> {
    op_mul(a, b)?.sub(&op_mul(b, a)?)
}

/// Product of several operators, left to right.
pub fn op_mul_all(ops: &[&DiffOp]) -> Result<DiffOp> {
    let mut acc = ops[0].clone();
    for o in &ops[1..] {
        acc = op_mul(&acc, o)?;
    }
    Ok(acc)
}
