use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::mono::{Field, Gen, Jet, Mono, ParamMono};
use super::{rat, Q};
use crate::error::{Error, Result};

/// Truncation order used for scalars that must not lose terms.
pub const UNTRUNCATED: u8 = 127;

/// Which differential algebra an expression lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algebra {
    /// Generators `q, a_k, ā_k`.
    FreeA,
    /// Generators `q, w_k, w̄_k`.
    DressingB,
    /// Generators `v, u` and the invertible symbol `q = e^u`, with
    /// `∂q = q·∂u`; `v̄ = v − t·P(u)` is derived.
    Reduced,
}

/// Algebra plus ε-truncation: every term of ε-degree `≥ order` is dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ctx {
    pub kind: Algebra,
    pub order: u8,
}

impl Ctx {
    pub fn new(kind: Algebra, order: u8) -> Self {
        Ctx { kind, order }
    }

    pub fn with_order(self, order: u8) -> Self {
        Ctx { order, ..self }
    }

    pub fn with_kind(self, kind: Algebra) -> Self {
        Ctx { kind, ..self }
    }
}

/// Jet-free part of the coefficient ring.
pub type CoeffSeries = DiffPoly;

/// An element of a free differential algebra (localized at `q`), truncated
/// in ε. Terms with zero coefficient are never stored, so structural
/// equality is equality of normal forms.
#[derive(Clone, Debug)]
pub struct DiffPoly {
    ctx: Ctx,
    terms: BTreeMap<Mono, Q>,
}

/// Equality at the common truncation order.
impl PartialEq for DiffPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.ctx.kind != other.ctx.kind {
            return false;
        }
        if self.ctx.order == other.ctx.order {
            return self.terms == other.terms;
        }
        let n = self.ctx.order.min(other.ctx.order);
        self.truncated(n).terms == other.truncated(n).terms
    }
}

impl DiffPoly {
    pub fn zero(ctx: Ctx) -> Self {
        DiffPoly { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: Ctx) -> Self {
        Self::constant(ctx, Q::one())
    }

    pub fn constant(ctx: Ctx, c: Q) -> Self {
        Self::term(ctx, Mono::one(), c)
    }

    pub fn int(ctx: Ctx, c: i64) -> Self {
        Self::constant(ctx, Q::from_integer(c.into()))
    }

    pub fn term(ctx: Ctx, m: Mono, c: Q) -> Self {
        let mut p = Self::zero(ctx);
        p.add_term(m, c);
        p
    }

    pub fn param(ctx: Ctx, p: ParamMono) -> Self {
        Self::term(ctx, Mono::param(p), Q::one())
    }

    pub fn eps(ctx: Ctx) -> Self {
        Self::param(ctx, ParamMono::eps(1))
    }

    pub fn t(ctx: Ctx) -> Self {
        Self::param(ctx, ParamMono::t(1))
    }

    pub fn s(ctx: Ctx) -> Self {
        Self::param(ctx, ParamMono::s(1))
    }

    pub fn z(ctx: Ctx, k: usize) -> Self {
        Self::param(ctx, ParamMono::z(k))
    }

    pub fn zb(ctx: Ctx, k: usize) -> Self {
        Self::param(ctx, ParamMono::zb(k))
    }

    pub fn jet(ctx: Ctx, j: Jet) -> Self {
        Self::term(ctx, Mono::jet(j), Q::one())
    }

    /// Order-0 jet of an unbarred generator.
    pub fn var(ctx: Ctx, g: Gen) -> Self {
        Self::jet(ctx, Jet::new(g, 0))
    }

    pub fn var_bar(ctx: Ctx, g: Gen) -> Self {
        Self::jet(ctx, Jet::bar(g, 0))
    }

    pub fn q_pow(ctx: Ctx, e: i16) -> Self {
        Self::term(ctx, Mono::jet_pow(Jet::q(), e), Q::one())
    }

    pub fn from_terms(ctx: Ctx, it: impl IntoIterator<Item = (Mono, Q)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn order(&self) -> u8 {
        self.ctx.order
    }

    pub fn kind(&self) -> Algebra {
        self.ctx.kind
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Mono) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() || m.params.eps >= self.ctx.order as i8 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Reinterpret in another algebra without changing terms.
    pub fn recast(&self, kind: Algebra) -> DiffPoly {
        DiffPoly { ctx: self.ctx.with_kind(kind), terms: self.terms.clone() }
    }

    pub fn truncated(&self, order: u8) -> DiffPoly {
        let ctx = self.ctx.with_order(order);
        if order >= self.ctx.order {
            return DiffPoly { ctx, terms: self.terms.clone() };
        }
        DiffPoly {
            ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.params.eps < order as i8)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn joint_ctx(&self, o: &DiffPoly) -> Ctx {
        assert_eq!(
            self.ctx.kind, o.ctx.kind,
            "mixing expressions from different algebras"
        );
        self.ctx.with_order(self.ctx.order.min(o.ctx.order))
    }

    pub fn add_assign_ref(&mut self, o: &DiffPoly) {
        let ctx = self.joint_ctx(o);
        if ctx.order < self.ctx.order {
            *self = self.truncated(ctx.order);
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_ref(&mut self, o: &DiffPoly) {
        let ctx = self.joint_ctx(o);
        if ctx.order < self.ctx.order {
            *self = self.truncated(ctx.order);
        }
        for (m, c) in &o.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn scale(&self, c: &Q) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(self.ctx);
        }
        DiffPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiply by `c·ε^k`, dropping what falls beyond the truncation.
    pub fn scale_eps(&self, k: i8, c: &Q) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero(self.ctx);
        }
        let n = self.ctx.order as i8;
        DiffPoly {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.params.eps + k < n)
                .map(|(m, x)| {
                    let mut m = m.clone();
                    m.params.eps += k;
                    (m, x * c)
                })
                .collect(),
        }
    }

    pub fn mul_mono(&self, mono: &Mono, c: &Q) -> DiffPoly {
        let mut r = DiffPoly::zero(self.ctx);
        for (m, x) in &self.terms {
            r.add_term(m.mul(mono), x * c);
        }
        r
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut r = DiffPoly::one(self.ctx);
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// The derivation `∂`.
    pub fn derive(&self) -> DiffPoly {
        let mut r = DiffPoly::zero(self.ctx);
        let reduced = self.ctx.kind == Algebra::Reduced;
        for (m, c) in &self.terms {
            for &(j, e) in m.jets.iter() {
                let ce = c * Q::from_integer(e.into());
                if reduced && j.is_q0() {
                    // ∂(q^e) = e·q^e·∂u
                    r.add_term(m.with_added(Jet::new(Gen::U, 1), 1), ce);
                } else {
                    let nm = m.with_added(j, -1).with_added(j.raised(), 1);
                    r.add_term(nm, ce);
                }
            }
        }
        r
    }

    pub fn derive_n(&self, n: usize) -> DiffPoly {
        let mut r = self.clone();
        for _ in 0..n {
            r = r.derive();
        }
        r
    }

    /// `[p, ∂p, …, ∂^{len-1}p]`.
    pub fn tower(&self, len: usize) -> Vec<DiffPoly> {
        let mut out = Vec::with_capacity(len);
        let mut cur = self.clone();
        for i in 0..len {
            if i + 1 < len {
                let next = cur.derive();
                out.push(cur);
                cur = next;
            } else {
                out.push(cur.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to a single jet coordinate.
    pub fn partial(&self, j: Jet) -> DiffPoly {
        let mut r = DiffPoly::zero(self.ctx);
        for (m, c) in &self.terms {
            let e = m.exponent(j);
            if e != 0 {
                r.add_term(m.with_added(j, -1), c * Q::from_integer(e.into()));
            }
        }
        r
    }

    /// All jets occurring with nonzero exponent.
    pub fn jets(&self) -> BTreeSet<Jet> {
        self.terms
            .keys()
            .flat_map(|m| m.jets.iter().map(|(j, _)| *j))
            .collect()
    }

    pub fn fields(&self) -> BTreeSet<Field> {
        self.jets().into_iter().map(Jet::base).collect()
    }

    pub fn max_jet_order(&self, f: Field) -> Option<u8> {
        self.jets()
            .into_iter()
            .filter(|j| j.base() == f)
            .map(|j| j.order)
            .max()
    }

    pub fn mentions(&self, pred: impl Fn(Jet) -> bool) -> bool {
        self.terms
            .keys()
            .any(|m| m.jets.iter().any(|(j, _)| pred(*j)))
    }

    pub fn is_jet_free(&self) -> bool {
        self.terms.keys().all(Mono::is_jet_free)
    }

    pub fn has_negative_power(&self) -> bool {
        self.terms.keys().any(Mono::has_negative_power)
    }

    /// Terms of ε-degree exactly `i`, with ε kept.
    pub fn eps_part(&self, i: i8) -> DiffPoly {
        self.filter(|m| m.params.eps == i)
    }

    pub fn filter(&self, pred: impl Fn(&Mono) -> bool) -> DiffPoly {
        DiffPoly {
            ctx: self.ctx,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| pred(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_monos(&self, f: impl Fn(&Mono, &Q) -> Option<(Mono, Q)>) -> DiffPoly {
        let mut r = DiffPoly::zero(self.ctx);
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                r.add_term(m2, c2);
            }
        }
        r
    }

    pub fn min_eps_degree(&self) -> Option<i8> {
        self.terms.keys().map(|m| m.params.eps).min()
    }

    pub fn max_s_degree_at_eps(&self, i: i8) -> Option<u8> {
        self.terms
            .keys()
            .filter(|m| m.params.eps == i)
            .map(|m| m.params.s)
            .max()
    }

    pub fn max_s_degree(&self) -> u8 {
        self.terms.keys().map(|m| m.params.s).max().unwrap_or(0)
    }

    /// Substitute a rational value for the formal exponent `s`.
    pub fn subst_s(&self, value: &Q) -> DiffPoly {
        self.map_monos(|m, c| {
            let mut m2 = m.clone();
            let k = m2.params.s;
            m2.params.s = 0;
            Some((m2, c * num_traits::pow(value.clone(), k as usize)))
        })
    }

    /// `d/ds`.
    pub fn diff_s(&self) -> DiffPoly {
        self.map_monos(|m, c| {
            if m.params.s == 0 {
                return None;
            }
            let mut m2 = m.clone();
            let k = m2.params.s;
            m2.params.s -= 1;
            Some((m2, c * Q::from_integer(k.into())))
        })
    }

    /// Divide by ε. The ε⁰ part must vanish; one order of precision is lost.
    pub fn div_eps(&self) -> Result<DiffPoly> {
        if let Some((m, _)) = self.terms.iter().find(|(m, _)| m.params.eps <= 0) {
            return Err(Error::NotRegular(Mono::render_one(m)));
        }
        let ctx = self.ctx.with_order(self.ctx.order.saturating_sub(1));
        Ok(self
            .map_monos(|m, c| {
                let mut m2 = m.clone();
                m2.params.eps -= 1;
                Some((m2, c.clone()))
            })
            .with_ctx(ctx))
    }

    fn with_ctx(mut self, ctx: Ctx) -> DiffPoly {
        self.ctx = ctx;
        self
    }

    /// Multiply by `t^k` (Laurent in t).
    pub fn mul_t_pow(&self, k: i8) -> DiffPoly {
        self.map_monos(|m, c| {
            let mut m2 = m.clone();
            m2.params.t += k;
            Some((m2, c.clone()))
        })
    }

    /// Coefficient of `t^k`, with t removed.
    pub fn t_coefficient(&self, k: i8) -> DiffPoly {
        self.map_monos(|m, c| {
            if m.params.t != k {
                return None;
            }
            let mut m2 = m.clone();
            m2.params.t = 0;
            Some((m2, c.clone()))
        })
    }

    pub fn min_t_degree(&self) -> Option<i8> {
        self.terms.keys().map(|m| m.params.t).min()
    }

    /// Set every `z_k` and `zb_k` to zero.
    pub fn z_zero(&self) -> DiffPoly {
        self.filter(|m| !m.params.has_z())
    }

    /// Set `t = 0`. Fails if a negative power of t is present.
    pub fn t_zero(&self) -> Result<DiffPoly> {
        if let Some((m, _)) = self.terms.iter().find(|(m, _)| m.params.t < 0) {
            return Err(Error::TPoleDetected(Mono::render_one(m)));
        }
        Ok(self.filter(|m| m.params.t == 0))
    }

    /// The homomorphism α sending every jet variable to zero.
    pub fn alpha(&self) -> Result<CoeffSeries> {
        if self.terms.keys().any(|m| m.q_exponent() < 0) {
            return Err(Error::NotDefined);
        }
        Ok(self.filter(Mono::is_jet_free))
    }

    /// Monomials with no jets and no power of `q`.
    pub fn constant_part(&self) -> DiffPoly {
        self.filter(Mono::is_jet_free)
    }

    /// Sum of `c` over all terms; used as a cheap fingerprint in tests.
    pub fn coefficient_sum(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, b| a + b)
    }

    /// The term that is first in normal-form order, for failure reports.
    pub fn leading_term(&self) -> Option<(Mono, Q)> {
        self.terms
            .iter()
            .min_by_key(|(m, _)| (m.params.eps, (*m).clone()))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    pub fn abs_max_coefficient(&self) -> Q {
        self.terms
            .values()
            .map(|c| c.abs())
            .fold(Q::zero(), |a, b| if b > a { b } else { a })
    }
}

impl Mono {
    pub fn render_one(m: &Mono) -> String {
        DiffPoly::term(
            Ctx::new(Algebra::FreeA, UNTRUNCATED),
            m.clone(),
            Q::one(),
        )
        .to_string()
    }
}

impl<'a> Add<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: &DiffPoly) -> DiffPoly {
        let mut r = self.clone();
        r.add_assign_ref(o);
        r
    }
}

impl<'a> Sub<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: &DiffPoly) -> DiffPoly {
        let mut r = self.clone();
        r.sub_assign_ref(o);
        r
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, o: DiffPoly) -> DiffPoly {
        self.add_assign_ref(&o);
        self
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(mut self, o: DiffPoly) -> DiffPoly {
        self.sub_assign_ref(&o);
        self
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl<'a> Mul<&'a DiffPoly> for &'a DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: &DiffPoly) -> DiffPoly {
        let ctx = self.joint_ctx(o);
        let n = ctx.order as i8;
        let mut r = DiffPoly::zero(ctx);
        if self.is_zero() || o.is_zero() {
            return r;
        }
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        for (m1, c1) in &small.terms {
            for (m2, c2) in &big.terms {
                if m1.params.eps + m2.params.eps >= n {
                    continue;
                }
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: DiffPoly) -> DiffPoly {
        &self * &o
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let factors = render_factors(m);
            if factors.is_empty() {
                write!(f, "{}", render_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", render_rational(&a), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

pub(crate) fn render_rational(a: &Q) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

fn pow_suffix(e: i64) -> String {
    if e == 1 {
        String::new()
    } else {
        format!("^{e}")
    }
}

fn render_factors(m: &Mono) -> Vec<String> {
    let p = &m.params;
    let mut out = Vec::new();
    if p.eps != 0 {
        out.push(format!("eps{}", pow_suffix(p.eps.into())));
    }
    if p.t != 0 {
        out.push(format!("t{}", pow_suffix(p.t.into())));
    }
    if p.s != 0 {
        out.push(format!("s{}", pow_suffix(p.s.into())));
    }
    for (i, &e) in p.z.iter().enumerate() {
        if e != 0 {
            out.push(format!("z{}{}", i + 1, pow_suffix(e.into())));
        }
    }
    for (i, &e) in p.zb.iter().enumerate() {
        if e != 0 {
            out.push(format!("zb{}{}", i + 1, pow_suffix(e.into())));
        }
    }
    for (j, e) in m.jets.iter() {
        out.push(format!("{}{}", j, pow_suffix((*e).into())));
    }
    out
}

/// Convenience: `c·p` for integer numerator and denominator.
pub fn scaled(p: &DiffPoly, n: i64, d: i64) -> DiffPoly {
    p.scale(&rat(n, d))
}
