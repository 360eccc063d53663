use crate::error::{Error, Result};

/// Which side of a window is infinite.
///
/// `Minus`: zero above `hi`, unknown below `lo`.
/// `Plus`: zero below `lo`, unknown above `hi`.
/// `Finite`: zero outside `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Minus,
    Plus,
    Finite,
}

/// The range of Λ-degrees on which an operator is fully determined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub lo: i32,
    pub hi: i32,
    pub orient: Orientation,
}

impl Window {
    pub fn new(lo: i32, hi: i32, orient: Orientation) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyWindow { lo, hi });
        }
        Ok(Window { lo, hi, orient })
    }

    pub fn minus(lo: i32, hi: i32) -> Result<Self> {
        Window::new(lo, hi, Orientation::Minus)
    }

    pub fn plus(lo: i32, hi: i32) -> Result<Self> {
        Window::new(lo, hi, Orientation::Plus)
    }

    pub fn finite(lo: i32, hi: i32) -> Result<Self> {
        Window::new(lo, hi, Orientation::Finite)
    }

    /// Whether the coefficient at `k` is determined (possibly as zero).
    pub fn known(&self, k: i32) -> bool {
        match self.orient {
            Orientation::Minus => k >= self.lo,
            Orientation::Plus => k <= self.hi,
            Orientation::Finite => true,
        }
    }

    /// Whether `k` lies inside `[lo, hi]`, where nonzero coefficients live.
    pub fn contains(&self, k: i32) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn miss(&self, k: i32) -> Error {
        Error::WindowMiss { degree: k, lo: self.lo, hi: self.hi }
    }

    /// Window of a product.
    pub fn mul(&self, o: &Window) -> Result<Window> {
        use Orientation::*;
        match (self.orient, o.orient) {
            (Finite, Finite) => Window::finite(self.lo + o.lo, self.hi + o.hi),
            (Minus | Finite, Minus | Finite) => {
                let hi = self.hi + o.hi;
                let mut lo = self.lo + o.lo;
                if self.orient == Minus {
                    lo = lo.max(self.lo + o.hi);
                }
                if o.orient == Minus {
                    lo = lo.max(o.lo + self.hi);
                }
                Window::minus(lo, hi)
            }
            (Plus | Finite, Plus | Finite) => {
                let lo = self.lo + o.lo;
                let mut hi = self.hi + o.hi;
                if self.orient == Plus {
                    hi = hi.min(self.hi + o.lo);
                }
                if o.orient == Plus {
                    hi = hi.min(o.hi + self.lo);
                }
                Window::plus(lo, hi)
            }
            _ => Err(Error::Incompatible(
                "product of a Phi_- and a Phi_+ operator".into(),
            )),
        }
    }

    /// Window of a sum.
    pub fn add(&self, o: &Window) -> Result<Window> {
        use Orientation::*;
        let lo = self.lo.min(o.lo);
        let hi = self.hi.max(o.hi);
        match (self.orient, o.orient) {
            (Finite, Finite) => Window::finite(lo, hi),
            (Minus | Finite, Minus | Finite) => {
                let mut lo = i32::MIN;
                for w in [self, o] {
                    if w.orient == Minus {
                        lo = lo.max(w.lo);
                    }
                }
                Window::minus(lo, hi)
            }
            (Plus | Finite, Plus | Finite) => {
                let mut hi = i32::MAX;
                for w in [self, o] {
                    if w.orient == Plus {
                        hi = hi.min(w.hi);
                    }
                }
                Window::plus(lo, hi)
            }
            _ => Err(Error::Incompatible("sum of a Phi_- and a Phi_+ operator".into())),
        }
    }

    /// The window seen from the other side: `k ↦ −k`.
    pub fn reflected(&self) -> Window {
        let orient = match self.orient {
            Orientation::Minus => Orientation::Plus,
            Orientation::Plus => Orientation::Minus,
            Orientation::Finite => Orientation::Finite,
        };
        Window { lo: -self.hi, hi: -self.lo, orient }
    }

    pub fn shifted(&self, by: i32) -> Window {
        Window { lo: self.lo + by, hi: self.hi + by, ..*self }
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}..{}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minus_product_window() {
        let l = Window::minus(-5, 1).unwrap();
        let l2 = l.mul(&l).unwrap();
        assert_eq!((l2.lo, l2.hi), (-4, 2));
        let f = Window::finite(0, 2).unwrap();
        let p = l.mul(&f).unwrap();
        assert_eq!((p.lo, p.hi, p.orient), (-3, 3, Orientation::Minus));
    }

    #[test]
    fn mixed_orientations_are_rejected() {
        let m = Window::minus(-3, 1).unwrap();
        let p = Window::plus(-1, 3).unwrap();
        assert!(matches!(m.mul(&p), Err(Error::Incompatible(_))));
        assert!(m.add(&p).is_err());
    }

    #[test]
    fn empty_window() {
        assert_eq!(Window::minus(2, 1), Err(Error::EmptyWindow { lo: 2, hi: 1 }));
    }

    #[test]
    fn reflection_swaps_orientation() {
        let w = Window::minus(-4, 1).unwrap().reflected();
        assert_eq!((w.lo, w.hi, w.orient), (-1, 4, Orientation::Plus));
    }
}
