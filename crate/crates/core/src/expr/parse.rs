//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := number | symbol | 'exp' '(' expr ')' | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```

use alloc::format;
use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::gen::GenExpr;
use super::rat::RatExpr;
use super::rational::Rational;
use super::{is_identifier, SymbolTable};
use crate::error::ExprError;

/// Parse `text` over the given symbols.
pub fn parse(text: &str, symbols: &SymbolTable) -> Result<RatExpr, ExprError> {
    let mut p = Parser { src: text, pos: 0, symbols };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

/// Parse an expression that may contain the imaginary unit `i`, returning
/// its real and imaginary parts. `i` may not occur in a denominator.
pub fn parse_complex(text: &str, symbols: &SymbolTable) -> Result<(RatExpr, RatExpr), ExprError> {
    let ext = symbols.with_extra("i")?;
    let i = ext.lookup("i").expect("just added");
    let e = parse(text, &ext)?;
    if e.den().symbols().contains(&i) {
        return Err(ExprError::ComplexDenominator);
    }
    let (re, im) = e.num().split_complex(i);
    let re = RatExpr::new(re, e.den().clone())?;
    let im = RatExpr::new(im, e.den().clone())?;
    Ok((re, im))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    symbols: &'a SymbolTable,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<RatExpr, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatExpr, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let at = self.pos;
                let rhs = self.unary()?;
                acc = acc.div(&rhs).map_err(|e| match e {
                    ExprError::DivisionByZero => ExprError::Syntax { pos: at, msg: "division by zero".to_string() },
                    other => other,
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatExpr, ExprError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatExpr, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let neg = self.eat('-');
        self.skip_ws();
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.err("expected an integer exponent"));
        }
        let e: i32 = digits.parse().map_err(|_| ExprError::Syntax { pos: at, msg: "exponent too large".to_string() })?;
        let e = if neg { -e } else { e };
        base.powi(e).map_err(|_| ExprError::Syntax { pos: at, msg: "negative power of zero".to_string() })
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if f(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<RatExpr, ExprError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_').to_string();
                debug_assert!(is_identifier(&name));
                match name.as_str() {
                    "exp" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        let p = arg.as_poly().ok_or_else(|| ExprError::ExpNotPolynomial(self.src[start..self.pos].to_string()))?;
                        Ok(GenExpr::exp_of(p).into())
                    }
                    "sqrt" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        let bad = || ExprError::SqrtNotPositiveRational(self.src[start..self.pos].to_string());
                        let q = arg.as_rational().ok_or_else(bad)?;
                        if !q.is_positive() {
                            return Err(bad());
                        }
                        Ok(RatExpr::sqrt_of(&q).expect("positive"))
                    }
                    _ => match self.symbols.lookup(&name) {
                        Some(s) => Ok(RatExpr::symbol(s)),
                        None => Err(ExprError::UnknownSymbol(name)),
                    },
                }
            }
            Some(c) => Err(self.err(&format!("unexpected character `{c}`"))),
        }
    }

    fn number(&mut self) -> Result<RatExpr, ExprError> {
        let start = self.pos;
        let int = self.take_while(|c| c.is_ascii_digit()).to_string();
        let mut frac = String::new();
        if self.peek() == Some('.') {
            self.pos += 1;
            frac = self.take_while(|c| c.is_ascii_digit()).to_string();
        }
        if int.is_empty() && frac.is_empty() {
            self.pos = start;
            return Err(self.err("malformed number"));
        }
        let digits = format!("{int}{frac}");
        let n: BigInt = digits.parse().map_err(|_| ExprError::Syntax { pos: start, msg: "malformed number".to_string() })?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        debug_assert!(!d.is_zero());
        Ok(RatExpr::constant(Rational::new(n, d)))
    }
}
