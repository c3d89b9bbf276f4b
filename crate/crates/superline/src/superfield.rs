//! Polynomial superfunctions on the superline and the contact bracket.
//!
//! A superfunction is `F(x, theta) = f0(x) + f1(x)*theta` with `theta` odd
//! and `theta^2 = 0`. The odd derivations are
//!
//! ```text
//! eta    = d/dtheta + theta * d/dx
//! etabar = d/dtheta - theta * d/dx
//! ```
//!
//! and the contact bracket is `{F, G} = F G' - F' G + (1/2) eta(F) etabar(G)`.
//!
//! `d/dtheta` is the left derivative fixed by `dtheta(f0 + f1*theta) = f1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Rat;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn from_u8(p: u8) -> Parity {
        if p % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// `(-1)^{|a||b|}` Koszul sign for swapping two homogeneous elements.
    pub fn koszul(a: Parity, b: Parity) -> Rat {
        if a == Parity::Odd && b == Parity::Odd {
            -Rat::one()
        } else {
            Rat::one()
        }
    }

    pub fn add(self, other: Parity) -> Parity {
        Parity::from_u8(self.as_u8() + other.as_u8())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// `F(x, theta) = even(x) + odd(x) * theta`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SuperFn {
    pub even: Poly,
    pub odd: Poly,
}

impl SuperFn {
    pub fn zero() -> Self {
        SuperFn::default()
    }

    pub fn one() -> Self {
        SuperFn::from_even(Poly::one())
    }

    pub fn x() -> Self {
        SuperFn::from_even(Poly::x())
    }

    pub fn theta() -> Self {
        SuperFn::from_odd(Poly::one())
    }

    pub fn constant(c: Rat) -> Self {
        SuperFn::from_even(Poly::constant(c))
    }

    pub fn from_even(p: Poly) -> Self {
        SuperFn {
            even: p,
            odd: Poly::zero(),
        }
    }

    pub fn from_odd(p: Poly) -> Self {
        SuperFn {
            even: Poly::zero(),
            odd: p,
        }
    }

    /// `c * x^d * theta^t` with `t` in `{0, 1}`.
    pub fn monomial(xdeg: usize, theta: bool, c: Rat) -> Self {
        let p = Poly::monomial(xdeg, c);
        if theta {
            SuperFn::from_odd(p)
        } else {
            SuperFn::from_even(p)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    /// Parity of a homogeneous element. Zero counts as even; a mixed
    /// element is an error.
    pub fn parity(&self) -> Result<Parity> {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (false, false) => Err(Error::MixedParity(format!("{self}"))),
            (true, false) => Ok(Parity::Odd),
            _ => Ok(Parity::Even),
        }
    }

    pub fn has_parity(&self, p: Parity) -> bool {
        match p {
            Parity::Even => self.odd.is_zero(),
            Parity::Odd => self.even.is_zero(),
        }
    }

    pub fn scale(&self, c: &Rat) -> SuperFn {
        SuperFn {
            even: self.even.scale(c),
            odd: self.odd.scale(c),
        }
    }

    /// Componentwise `d/dx`.
    pub fn dx(&self) -> SuperFn {
        SuperFn {
            even: self.even.deriv(),
            odd: self.odd.deriv(),
        }
    }

    /// Left derivative `d/dtheta`.
    pub fn dtheta(&self) -> SuperFn {
        SuperFn::from_even(self.odd.clone())
    }

    /// `eta = d/dtheta + theta d/dx`; flips parity of homogeneous input.
    pub fn eta(&self) -> SuperFn {
        SuperFn {
            even: self.odd.clone(),
            odd: self.even.deriv(),
        }
    }

    /// `etabar = d/dtheta - theta d/dx`.
    pub fn eta_bar(&self) -> SuperFn {
        SuperFn {
            even: self.odd.clone(),
            odd: -&self.even.deriv(),
        }
    }
}

impl Add<&SuperFn> for &SuperFn {
    type Output = SuperFn;
    fn add(self, rhs: &SuperFn) -> SuperFn {
        SuperFn {
            even: &self.even + &rhs.even,
            odd: &self.odd + &rhs.odd,
        }
    }
}

impl Sub<&SuperFn> for &SuperFn {
    type Output = SuperFn;
    fn sub(self, rhs: &SuperFn) -> SuperFn {
        SuperFn {
            even: &self.even - &rhs.even,
            odd: &self.odd - &rhs.odd,
        }
    }
}

/// `(f0 + f1 t)(g0 + g1 t) = f0 g0 + (f0 g1 + f1 g0) t`; `t^2 = 0`.
impl Mul<&SuperFn> for &SuperFn {
    type Output = SuperFn;
    fn mul(self, rhs: &SuperFn) -> SuperFn {
        SuperFn {
            even: &self.even * &rhs.even,
            odd: &(&self.even * &rhs.odd) + &(&self.odd * &rhs.even),
        }
    }
}

impl Neg for &SuperFn {
    type Output = SuperFn;
    fn neg(self) -> SuperFn {
        SuperFn {
            even: -&self.even,
            odd: -&self.odd,
        }
    }
}

/// `{F, G} = F G' - F' G + (1/2) eta(F) etabar(G)`.
pub fn contact_bracket(f: &SuperFn, g: &SuperFn) -> SuperFn {
    let fg1 = &(f * &g.dx()) - &(&f.dx() * g);
    let corr = (&f.eta() * &g.eta_bar()).scale(&Rat::half());
    &fg1 + &corr
}

// ---------------------------------------------------------------------------
// Printing and parsing.
//
// Grammar: terms over tokens `p/q`, `x`, `theta`, `+ - * ^`. The printer
// emits terms sorted by x-degree then theta-degree, and the parser accepts
// everything the printer emits.
// ---------------------------------------------------------------------------

impl fmt::Display for SuperFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, bool, Rat)> = Vec::new();
        for (th, poly) in [(false, &self.even), (true, &self.odd)] {
            for d in 0..poly.coeffs().len() {
                let c = poly.coeff(d);
                if !c.is_zero() {
                    terms.push((d, th, c));
                }
            }
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (d, th, c)) in terms.into_iter().enumerate() {
            let neg = c < Rat::zero();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !(mag.is_one() && (d > 0 || th)) {
                factors.push(mag.to_string());
            }
            match d {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{d}")),
            }
            if th {
                factors.push("theta".into());
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SuperFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Debug)]
enum Token {
    Num(Rat),
    X,
    Theta,
    Plus,
    Minus,
    Star,
    Caret,
}

fn lex(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // a slash glues a denominator onto the literal
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == dstart {
                        return Err(Error::Parse(format!("missing denominator in `{s}`")));
                    }
                }
                let lit = &s[start..i];
                out.push(Token::Num(
                    lit.parse().map_err(|e: String| Error::Parse(e))?,
                ));
            }
            _ => {
                if s[i..].starts_with("theta") {
                    out.push(Token::Theta);
                    i += 5;
                } else if c == 'x' {
                    out.push(Token::X);
                    i += 1;
                } else {
                    return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<SuperFn> {
        let mut neg = false;
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                None => return Ok(acc),
                Some(t) => return Err(Error::Parse(format!("unexpected token {t:?}"))),
            }
        }
    }

    fn term(&mut self) -> Result<SuperFn> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SuperFn> {
        let base = match self.bump() {
            Some(Token::Num(r)) => SuperFn::constant(r),
            Some(Token::X) => SuperFn::x(),
            Some(Token::Theta) => SuperFn::theta(),
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        };
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let e = match self.bump() {
                Some(Token::Num(r)) if r.is_natural() => r.to_i64().unwrap() as usize,
                other => {
                    return Err(Error::Parse(format!(
                        "exponent must be a natural number, got {other:?}"
                    )))
                }
            };
            let mut acc = SuperFn::one();
            for _ in 0..e {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

impl FromStr for SuperFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<SuperFn> {
        let tokens = lex(s)?;
        if tokens.is_empty() {
            return Err(Error::Parse("empty expression".into()));
        }
        let mut p = Parser { tokens, pos: 0 };
        p.expr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn sf(s: &str) -> SuperFn {
        s.parse().unwrap()
    }

    #[test]
    fn eta_on_monomials() {
        assert_eq!(sf("x^2").eta(), sf("2*x*theta"));
        assert_eq!(sf("theta").eta(), sf("1"));
        assert_eq!(sf("x*theta").eta(), sf("x"));
    }

    #[test]
    fn eta_bar_on_monomials() {
        assert_eq!(sf("theta").eta_bar(), sf("1"));
        assert_eq!(sf("x^2").eta_bar(), sf("-2*x*theta"));
        assert_eq!(sf("x*theta").eta_bar(), sf("x"));
    }

    #[test]
    fn contact_bracket_examples() {
        assert_eq!(contact_bracket(&sf("x^2"), &sf("theta")), sf("-x*theta"));
        assert_eq!(contact_bracket(&sf("theta"), &sf("theta")), sf("1/2"));
        assert_eq!(contact_bracket(&sf("1"), &sf("x")), sf("1"));
    }

    #[test]
    fn theta_squared_vanishes() {
        let t = SuperFn::theta();
        assert!((&t * &t).is_zero());
    }

    #[test]
    fn eta_anticommutation_and_squares() {
        // eta etabar + etabar eta = 0, eta^2 = dx, etabar^2 = -dx on all
        // monomials up to degree 5.
        for d in 0..=5usize {
            for th in [false, true] {
                let m = SuperFn::monomial(d, th, rat!(1));
                let anti = &m.eta().eta_bar() + &m.eta_bar().eta();
                assert!(anti.is_zero(), "eta/etabar anticommutator on {m}");
                assert_eq!(m.eta().eta(), m.dx(), "eta^2 on {m}");
                assert_eq!(m.eta_bar().eta_bar(), -&m.dx(), "etabar^2 on {m}");
            }
        }
    }

    #[test]
    fn mixed_parity_rejected() {
        assert!(sf("x + theta").parity().is_err());
        assert_eq!(sf("x").parity().unwrap(), Parity::Even);
        assert_eq!(sf("x*theta").parity().unwrap(), Parity::Odd);
        assert_eq!(SuperFn::zero().parity().unwrap(), Parity::Even);
    }

    #[test]
    fn printer_format() {
        assert_eq!(sf("x + 2*theta").to_string(), "x + 2*theta");
        assert_eq!(sf("3/2*x*theta").to_string(), "3/2*x*theta");
        assert_eq!(sf("0").to_string(), "0");
        assert_eq!((-&sf("x*theta")).to_string(), "-x*theta");
        assert_eq!(sf("x^2 - 1/3").to_string(), "-1/3 + x^2");
    }

    #[test]
    fn print_parse_round_trip() {
        let cases = [
            "x^3 - 2*x*theta + 7/5",
            "theta",
            "-x",
            "1/2 + x + x^2 + theta + x*theta",
        ];
        for c in cases {
            let f = sf(c);
            let g: SuperFn = f.to_string().parse().unwrap();
            assert_eq!(f, g);
        }
    }
}
