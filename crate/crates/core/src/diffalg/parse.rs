//! Text and LaTeX forms of expressions.
//!
//! Grammar of the text form (also accepted as input):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['-'] factor ('*' factor)*
//! factor := atom ['^' ['-'] int]
//! atom   := int ['/' int] | 'eps' | 't' | 's' | 'z'k | 'zb'k
//!         | 'D'n '[' gen ']' ['~'] | gen ['~'] | '(' expr ')'
//! gen    := 'q' | 'v' | 'u' | 'a'k | 'w'k
//! ```
//!
//! A bare generator name is its order-0 jet.

use num_traits::{One, Signed};

use super::mono::{Gen, Jet, Mono, ParamMono};
use super::poly::{render_rational, Ctx, DiffPoly};
use super::Q;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: Ctx,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer out of range"))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn expr(&mut self) -> Result<DiffPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffPoly> {
        let neg = self.eat(b'-');
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(if neg { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<DiffPoly> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        let e = self.int()?;
        if !neg {
            return Ok(base.pow(e as u32));
        }
        // Negative powers: only of a single monomial (q or t).
        let mut it = base.terms();
        match (it.next(), it.next()) {
            (Some((m, c)), None) if c.is_one() => {
                let mut r = Mono::param(ParamMono::one());
                for _ in 0..e {
                    let mut inv = Mono::param(ParamMono::t(-m.params.t));
                    for &(j, k) in m.jets.iter() {
                        inv = inv.mul(&Mono::jet_pow(j, -k));
                    }
                    r = r.mul(&inv);
                }
                Ok(DiffPoly::term(self.ctx, r, Q::one()))
            }
            _ => self.err("negative power of a non-monomial"),
        }
    }

    fn gen_from(&self, name: &str, idx: Option<i64>) -> Result<Gen> {
        Ok(match (name, idx) {
            ("q", None) => Gen::Q,
            ("v", None) => Gen::V,
            ("u", None) => Gen::U,
            ("a", Some(k)) if k > 0 => Gen::A(k as u8),
            ("w", Some(k)) if k > 0 => Gen::W(k as u8),
            _ => return self.err(format!("unknown generator {name}")),
        })
    }

    fn maybe_index(&mut self) -> Option<i64> {
        if self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.int().ok()
        } else {
            None
        }
    }

    fn atom(&mut self) -> Result<DiffPoly> {
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                let d = if self.eat(b'/') { self.int()? } else { 1 };
                if d == 0 {
                    return self.err("zero denominator");
                }
                Ok(DiffPoly::constant(self.ctx, super::rat(n, d)))
            }
            Some(_) => {
                let name = self.ident();
                match name.as_str() {
                    "eps" => Ok(DiffPoly::eps(self.ctx)),
                    "t" => Ok(DiffPoly::t(self.ctx)),
                    "s" => Ok(DiffPoly::s(self.ctx)),
                    "z" | "zb" => {
                        let k = self.maybe_index().filter(|k| (1..=8).contains(k));
                        let Some(k) = k else { return self.err("bad z index") };
                        Ok(if name == "z" {
                            DiffPoly::z(self.ctx, k as usize)
                        } else {
                            DiffPoly::zb(self.ctx, k as usize)
                        })
                    }
                    "D" => {
                        let n = self.int()?;
                        if !self.eat(b'[') {
                            return self.err("expected '['");
                        }
                        let g = self.ident();
                        let idx = self.maybe_index();
                        let gen = self.gen_from(&g, idx)?;
                        if !self.eat(b']') {
                            return self.err("expected ']'");
                        }
                        let barred = self.eat(b'~');
                        Ok(DiffPoly::jet(self.ctx, Jet { gen, barred, order: n as u8 }))
                    }
                    "" => self.err("unexpected character"),
                    _ => {
                        let (g, idx) = name.split_at(1);
                        if !idx.is_empty() {
                            return self.err(format!("unknown name {name}"));
                        }
                        let idx = self.maybe_index();
                        let gen = self.gen_from(g, idx)?;
                        let barred = self.eat(b'~');
                        Ok(DiffPoly::jet(self.ctx, Jet { gen, barred, order: 0 }))
                    }
                }
            }
        }
    }
}

/// Parse the text form into `ctx`.
pub fn parse_poly(src: &str, ctx: Ctx) -> Result<DiffPoly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ctx };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

fn latex_pow(base: String, e: i64) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{{{e}}}")
    }
}

fn latex_gen(j: &Jet) -> String {
    let name = match j.gen {
        Gen::Q => "q".to_string(),
        Gen::V => "v".to_string(),
        Gen::U => "u".to_string(),
        Gen::A(k) => format!("a_{{{k}}}"),
        Gen::W(k) => format!("w_{{{k}}}"),
    };
    let name = if j.barred { format!("\\bar{{{name}}}") } else { name };
    match j.order {
        0 => name,
        1 => format!("\\partial {name}"),
        n => format!("\\partial^{{{n}}} {name}"),
    }
}

fn latex_factors(m: &Mono) -> Vec<String> {
    let p = &m.params;
    let mut out = Vec::new();
    if p.eps != 0 {
        out.push(latex_pow("\\varepsilon".into(), p.eps.into()));
    }
    if p.t != 0 {
        out.push(latex_pow("t".into(), p.t.into()));
    }
    if p.s != 0 {
        out.push(latex_pow("s".into(), p.s.into()));
    }
    for (i, &e) in p.z.iter().enumerate() {
        if e != 0 {
            out.push(latex_pow(format!("z_{{{}}}", i + 1), e.into()));
        }
    }
    for (i, &e) in p.zb.iter().enumerate() {
        if e != 0 {
            out.push(latex_pow(format!("\\bar{{z}}_{{{}}}", i + 1), e.into()));
        }
    }
    for (j, e) in m.jets.iter() {
        let g = latex_gen(j);
        let g = if j.order > 0 && *e != 1 { format!("({g})") } else { g };
        out.push(latex_pow(g, (*e).into()));
    }
    out
}

fn latex_rational(a: &Q) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("\\tfrac{{{}}}{{{}}}", a.numer(), a.denom())
    }
}

/// LaTeX form of a polynomial.
pub fn to_latex(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let f = latex_factors(m);
        if f.is_empty() {
            s.push_str(&latex_rational(&a));
        } else {
            if !a.is_one() {
                s.push_str(&latex_rational(&a));
                s.push(' ');
            }
            s.push_str(&f.join(" "));
        }
    }
    s
}

/// `\int f \, dx`.
pub fn functional_latex(density: &DiffPoly) -> String {
    let body = to_latex(density);
    if density.len() > 1 {
        format!("\\int ({body}) \\, dx")
    } else {
        format!("\\int {body} \\, dx")
    }
}

/// Text form of a rational, `p/q`.
pub fn rational_text(a: &Q) -> String {
    render_rational(a)
}
