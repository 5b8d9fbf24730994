//! Element expressions: integer literals, `z`, named roots, `+ - * / ^`
//! and parentheses. Exponents are (optionally negative) integer literals.
//!
//! Parsing is field-independent; [`Expr::eval`] resolves the expression in
//! a concrete field.

use std::fmt;

use num_bigint::BigInt;

use super::{Field, FieldElement, RootBindings};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Syntax error with a 1-based column inside the expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at column {}", self.message, self.column)
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> std::result::Result<T, ExprError> {
        Err(ExprError { column: self.pos + 1, message: message.into() })
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

    fn expr(&mut self) -> std::result::Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> std::result::Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> std::result::Result<Expr, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> std::result::Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer exponent");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let e: i64 = match digits.parse() {
            Ok(e) => e,
            Err(_) => {
                self.pos = start;
                return self.err("exponent out of range");
            }
        };
        if self.peek() == Some(b'^') {
            return self.err("chained exponents need parentheses");
        }
        Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }))
    }

    fn atom(&mut self) -> std::result::Result<Expr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Int(digits.parse().expect("digits")))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Expr::Var(name.to_string()))
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of expression"),
        }
    }
}

pub fn parse(src: &str) -> std::result::Result<Expr, ExprError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        let c = p.src[p.pos] as char;
        return p.err(format!("unexpected '{c}'"));
    }
    Ok(e)
}

impl Expr {
    pub fn eval(&self, field: Field, roots: &RootBindings) -> Result<FieldElement> {
        Ok(match self {
            Expr::Int(n) => field.from_bigint(n),
            Expr::Var(name) if name == "z" => field.generator(),
            Expr::Var(name) => roots
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("unknown name {name:?}")))?,
            Expr::Neg(a) => -a.eval(field, roots)?,
            Expr::Add(a, b) => a.eval(field, roots)? + b.eval(field, roots)?,
            Expr::Sub(a, b) => a.eval(field, roots)? - b.eval(field, roots)?,
            Expr::Mul(a, b) => a.eval(field, roots)? * b.eval(field, roots)?,
            Expr::Div(a, b) => {
                a.eval(field, roots)?.arith(&b.eval(field, roots)?, super::ArithOp::Div)?
            }
            Expr::Pow(a, e) => a.eval(field, roots)?.try_pow(*e)?,
        })
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(src: &str, field: Field, roots: &RootBindings) -> Result<FieldElement> {
    parse(src)
        .map_err(|e| Error::Parse(format!("{src:?}: {e}")))?
        .eval(field, roots)
}
