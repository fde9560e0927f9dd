//! Expression language for holomorphic functions of `z`.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)*
//! atom  := 'z' | 'i' | number | 'exp' '(' expr ')' | '(' expr ')'
//! ```

use std::fmt;

use crate::analytic::Jet;
use crate::{Cx, Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Z,
    Const(Cx),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    PowInt(Box<Expr>, i32),
    Exp(Box<Expr>),
}

// builders named after the node they create
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(c: Cx) -> Expr {
        Expr::Const(c)
    }

    pub fn real(x: f64) -> Expr {
        Expr::Const(Cx::new(x, 0.0))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        Expr::PowInt(Box::new(a), n)
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    /// Evaluates the expression with `z` replaced by the jet `arg`.
    ///
    /// With `arg = Jet::variable(z0, k)` this is the order-`k` jet of the
    /// expression at `z0`; with any other jet it is the jet of the composition.
    pub fn eval_at_jet(&self, arg: &Jet) -> Result<Jet> {
        let order = arg.order();
        match self {
            Expr::Z => Ok(arg.clone()),
            Expr::Const(c) => Ok(Jet::constant(crate::ensure_finite(*c)?, order)),
            Expr::Add(a, b) => a.eval_at_jet(arg)?.add(&b.eval_at_jet(arg)?),
            Expr::Sub(a, b) => a.eval_at_jet(arg)?.sub(&b.eval_at_jet(arg)?),
            Expr::Mul(a, b) => a.eval_at_jet(arg)?.mul(&b.eval_at_jet(arg)?),
            Expr::Div(a, b) => a.eval_at_jet(arg)?.div(&b.eval_at_jet(arg)?),
            Expr::Neg(a) => Ok(a.eval_at_jet(arg)?.neg()),
            Expr::PowInt(a, n) => a.eval_at_jet(arg)?.powi(*n),
            Expr::Exp(a) => a.eval_at_jet(arg)?.exp(),
        }
    }

    pub fn eval_jet(&self, z: Cx, order: usize) -> Result<Jet> {
        self.eval_at_jet(&Jet::variable(z, order))
    }

    pub fn mentions_z(&self) -> bool {
        match self {
            Expr::Z => true,
            Expr::Const(_) => false,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.mentions_z() || b.mentions_z()
            }
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Exp(a) => a.mentions_z(),
        }
    }

    pub fn eval(&self, z: Cx) -> Result<Cx> {
        Ok(self.eval_jet(z, 0)?.value())
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(..) => 3,
            Expr::PowInt(..) => 4,
            Expr::Const(c) => match (c.re != 0.0, c.im != 0.0) {
                (true, true) => 1,
                (false, true) if c.im == 1.0 => 5,
                (false, true) => 2,
                _ if c.re.is_sign_negative() => 3,
                _ => 5,
            },
            Expr::Z | Expr::Exp(..) => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Z => write!(f, "z"),
            Expr::Const(c) => write_const(f, *c),
            Expr::Add(a, b) => {
                a.write_prec(f, 1)?;
                write!(f, "+")?;
                b.write_prec(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_prec(f, 1)?;
                write!(f, "-")?;
                b.write_prec(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_prec(f, 2)?;
                write!(f, "*")?;
                b.write_prec(f, 3)
            }
            Expr::Div(a, b) => {
                a.write_prec(f, 2)?;
                write!(f, "/")?;
                b.write_prec(f, 3)
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_prec(f, 3)
            }
            Expr::PowInt(a, n) => {
                a.write_prec(f, 4)?;
                write!(f, "^{n}")
            }
            Expr::Exp(a) => {
                write!(f, "exp(")?;
                a.write_prec(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Cx) -> fmt::Result {
    match (c.re != 0.0, c.im != 0.0) {
        (_, false) => write!(f, "{}", c.re),
        (false, true) if c.im == 1.0 => write!(f, "i"),
        (false, true) => write!(f, "{}*i", c.im),
        (true, true) => write!(f, "{}+{}*i", c.re, c.im),
    }
}

/// Pretty printer; `parse_expr` of the output reproduces parser-built trees exactly.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0)
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut parser = Parser { src: text, pos: 0 };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

/// Parses a complex literal such as `0.4+0.2*i`; the expression must not mention `z`.
pub fn parse_complex(text: &str) -> Result<Cx> {
    let expr = parse_expr(text)?;
    if expr.mentions_z() {
        return Err(Error::Parse {
            position: 0,
            message: "complex literal must not depend on z".into(),
        });
    }
    expr.eval(Cx::default())
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat('-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat('/') {
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.eat('^') {
            let negative = self.eat('-');
            self.skip_ws();
            let rest = self.rest();
            let len = rest
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(rest.len());
            if len == 0 {
                return Err(self.error("expected an integer exponent"));
            }
            let mut n: i32 = rest[..len]
                .parse()
                .map_err(|_| self.error("exponent out of range"))?;
            self.pos += len;
            if self.rest().starts_with('.') {
                return Err(self.error("exponents must be integer literals"));
            }
            if negative {
                n = -n;
            }
            base = Expr::powi(base, n);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let rest = self.rest();
                let end = rest
                    .find(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                    .unwrap_or(rest.len());
                let ident = &rest[..end];
                let start = self.pos;
                self.pos += end;
                match ident {
                    "z" => Ok(Expr::Z),
                    "i" => Ok(Expr::Const(Cx::new(0.0, 1.0))),
                    "exp" => {
                        if !self.eat('(') {
                            return Err(self.error("expected `(` after exp"));
                        }
                        let arg = self.expr()?;
                        if !self.eat(')') {
                            return Err(self.error("expected `)`"));
                        }
                        Ok(Expr::exp(arg))
                    }
                    _ => Err(Error::Parse {
                        position: start,
                        message: format!("unknown identifier `{ident}`"),
                    }),
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let bytes = self.rest().as_bytes();
        let mut end = 0;
        while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
            end += 1;
        }
        // optional exponent, only when followed by digits
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut k = end + 1;
            if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                k += 1;
            }
            if k < bytes.len() && bytes[k].is_ascii_digit() {
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                end = k;
            }
        }
        let literal = &self.rest()[..end];
        let value: f64 = literal
            .parse()
            .map_err(|_| self.error(&format!("invalid number `{literal}`")))?;
        if !value.is_finite() {
            return Err(self.error("number out of range"));
        }
        self.pos += end;
        Ok(Expr::real(value))
    }
}
