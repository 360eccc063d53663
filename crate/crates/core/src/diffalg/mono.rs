use std::fmt;

use smallvec::SmallVec;

/// Number of independent constants `z_k` (and `zb_k`) a monomial can carry.
pub const MAX_Z: usize = 8;

/// Generators of the differential algebras in play.
///
/// `A(k)` and `W(k)` are indexed from 1. `V` and `U` only occur in the
/// reduced algebra, `W` only in the dressing algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Q,
    V,
    U,
    A(u8),
    W(u8),
}

impl Gen {
    pub fn name(self) -> String {
        match self {
            Gen::Q => "q".into(),
            Gen::V => "v".into(),
            Gen::U => "u".into(),
            Gen::A(k) => format!("a{k}"),
            Gen::W(k) => format!("w{k}"),
        }
    }

    /// `q` and `u` are fixed by the involution; everything else has a
    /// barred partner (or, for `v`, a derived conjugate).
    pub fn self_conjugate(self) -> bool {
        matches!(self, Gen::Q | Gen::U)
    }
}

/// A jet coordinate `∂ⁿx` or `∂ⁿx̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Jet {
    pub gen: Gen,
    pub barred: bool,
    pub order: u8,
}

impl Jet {
    pub const fn new(gen: Gen, order: u8) -> Self {
        Jet { gen, barred: false, order }
    }

    pub const fn bar(gen: Gen, order: u8) -> Self {
        Jet { gen, barred: true, order }
    }

    pub const fn q() -> Self {
        Jet::new(Gen::Q, 0)
    }

    /// The same generator one derivative higher.
    pub fn raised(self) -> Self {
        Jet { order: self.order + 1, ..self }
    }

    pub fn base(self) -> Field {
        Field { gen: self.gen, barred: self.barred }
    }

    pub fn is_q0(self) -> bool {
        self.gen == Gen::Q && self.order == 0
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D{}[{}]", self.order, self.gen.name())?;
        if self.barred {
            write!(f, "~")?;
        }
        Ok(())
    }
}

/// A generator together with its bar flag: the thing a variational
/// derivative or a one-form basis element `dx` refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Field {
    pub gen: Gen,
    pub barred: bool,
}

impl Field {
    pub const fn new(gen: Gen) -> Self {
        Field { gen, barred: false }
    }

    pub const fn bar(gen: Gen) -> Self {
        Field { gen, barred: true }
    }

    pub fn jet(self, order: u8) -> Jet {
        Jet { gen: self.gen, barred: self.barred, order }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.gen.name())?;
        if self.barred {
            write!(f, "~")?;
        }
        Ok(())
    }
}

/// Exponents of the scalar parameters: `ε`, `t` (Laurent), `s`, `z_k`, `zb_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParamMono {
    pub eps: i8,
    pub t: i8,
    pub s: u8,
    pub z: [u8; MAX_Z],
    pub zb: [u8; MAX_Z],
}

impl ParamMono {
    pub fn one() -> Self {
        ParamMono::default()
    }

    pub fn eps(k: i8) -> Self {
        ParamMono { eps: k, ..Default::default() }
    }

    pub fn t(k: i8) -> Self {
        ParamMono { t: k, ..Default::default() }
    }

    pub fn s(k: u8) -> Self {
        ParamMono { s: k, ..Default::default() }
    }

    /// `z_k`, `k ≥ 1`.
    pub fn z(k: usize) -> Self {
        let mut m = ParamMono::default();
        m.z[k - 1] = 1;
        m
    }

    pub fn zb(k: usize) -> Self {
        let mut m = ParamMono::default();
        m.zb[k - 1] = 1;
        m
    }

    pub fn mul(&self, o: &ParamMono) -> ParamMono {
        let mut r = *self;
        r.eps += o.eps;
        r.t += o.t;
        r.s += o.s;
        for i in 0..MAX_Z {
            r.z[i] += o.z[i];
            r.zb[i] += o.zb[i];
        }
        r
    }

    pub fn has_z(&self) -> bool {
        self.z.iter().chain(self.zb.iter()).any(|&e| e != 0)
    }

    /// `true` when only ε may be nontrivial.
    pub fn is_eps_only(&self) -> bool {
        self.t == 0 && self.s == 0 && !self.has_z()
    }
}

pub type JetPowers = SmallVec<[(Jet, i16); 4]>;

/// A monomial: parameter part times a product of jet powers.
///
/// Jets are kept sorted with nonzero exponents; a negative exponent is only
/// allowed on the order-0 jet of `q`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub params: ParamMono,
    pub jets: JetPowers,
}

impl Mono {
    pub fn one() -> Self {
        Mono { params: ParamMono::one(), jets: SmallVec::new() }
    }

    pub fn param(p: ParamMono) -> Self {
        Mono { params: p, jets: SmallVec::new() }
    }

    pub fn jet(j: Jet) -> Self {
        Mono::jet_pow(j, 1)
    }

    pub fn jet_pow(j: Jet, e: i16) -> Self {
        let mut jets = SmallVec::new();
        if e != 0 {
            jets.push((j, e));
        }
        Mono { params: ParamMono::one(), jets }
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let params = self.params.mul(&o.params);
        let mut jets: JetPowers = SmallVec::with_capacity(self.jets.len() + o.jets.len());
        let (mut i, mut k) = (0, 0);
        while i < self.jets.len() && k < o.jets.len() {
            let (a, ea) = self.jets[i];
            let (b, eb) = o.jets[k];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    jets.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    jets.push((b, eb));
                    k += 1;
                }
                std::cmp::Ordering::Equal => {
                    if ea + eb != 0 {
                        jets.push((a, ea + eb));
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        jets.extend_from_slice(&self.jets[i..]);
        jets.extend_from_slice(&o.jets[k..]);
        Mono { params, jets }
    }

    pub fn exponent(&self, j: Jet) -> i16 {
        self.jets
            .iter()
            .find(|(x, _)| *x == j)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    /// Monomial with the exponent of `j` changed by `delta`.
    pub fn with_added(&self, j: Jet, delta: i16) -> Mono {
        self.mul(&Mono::jet_pow(j, delta))
    }

    pub fn without(&self, j: Jet) -> Mono {
        Mono {
            params: self.params,
            jets: self.jets.iter().copied().filter(|(x, _)| *x != j).collect(),
        }
    }

    pub fn is_jet_free(&self) -> bool {
        self.jets.is_empty()
    }

    /// No jets other than (possibly) powers of the order-0 `q`.
    pub fn is_q_power_only(&self) -> bool {
        self.jets.iter().all(|(j, _)| j.is_q0())
    }

    pub fn q_exponent(&self) -> i16 {
        self.exponent(Jet::q())
    }

    pub fn has_negative_power(&self) -> bool {
        self.jets.iter().any(|(_, e)| *e < 0)
    }
}
