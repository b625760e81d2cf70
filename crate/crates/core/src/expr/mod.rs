//! Exact scalar expressions.
//!
//! A [`GenExpr`] is a finite sum of terms `q * sqrt(n) * m * exp(p)` where `q`
//! is rational, `n` a squarefree positive integer, `m` a monomial in the
//! chart's coordinates and parameters and `p` a polynomial. [`RatExpr`] is a
//! quotient of two such sums.
//!
//! Zero testing relies on the linear independence of `sqrt(n) * exp(p)` for
//! distinct squarefree `n` and distinct polynomials `p` over the field of
//! rational functions. Terms are grouped by `(p, n)` and a sum is zero exactly
//! when every group's polynomial part is zero, which is what the canonical
//! form records.

mod eval;
mod format;
mod gen;
mod monomial;
mod parse;
mod poly;
mod rat;
mod rational;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use eval::Value;
pub use gen::{GenExpr, TermKey};
pub use monomial::Monomial;
pub use parse::{parse, parse_complex};
pub use poly::Poly;
pub use rat::RatExpr;
pub use rational::{rat, Rational};

use crate::error::ExprError;

/// Index of a symbol inside a [`SymbolTable`]. Coordinates come first.
pub type Sym = u16;

/// Names of the coordinates followed by the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolTable {
    names: Vec<String>,
    coords: usize,
}

impl SymbolTable {
    pub fn new<S: AsRef<str>>(coords: &[S], params: &[S]) -> Result<Self, ExprError> {
        let mut names: Vec<String> = Vec::new();
        for n in coords.iter().chain(params.iter()) {
            let n = n.as_ref().trim();
            if !is_identifier(n) || is_reserved(n) {
                return Err(ExprError::Syntax { pos: 0, msg: alloc::format!("invalid symbol name `{n}`") });
            }
            if names.iter().any(|m| m == n) {
                return Err(ExprError::Syntax { pos: 0, msg: alloc::format!("duplicate symbol `{n}`") });
            }
            names.push(n.to_string());
        }
        Ok(SymbolTable { names, coords: coords.len() })
    }

    /// A table without coordinates, used for left-invariant models.
    pub fn params_only<S: AsRef<str>>(params: &[S]) -> Result<Self, ExprError> {
        Self::new::<S>(&[], params)
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.names.iter().position(|n| n == name).map(|i| i as Sym)
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s as usize]
    }

    pub fn num_coords(&self) -> usize {
        self.coords
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_coordinate(&self, s: Sym) -> bool {
        (s as usize) < self.coords
    }

    pub fn coordinate(&self, i: usize) -> Sym {
        assert!(i < self.coords, "coordinate index {i} out of range");
        i as Sym
    }

    pub fn coordinates(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.coords).map(|i| i as Sym)
    }

    pub fn parameters(&self) -> impl Iterator<Item = Sym> + '_ {
        (self.coords..self.names.len()).map(|i| i as Sym)
    }

    pub fn coordinate_names(&self) -> &[String] {
        &self.names[..self.coords]
    }

    pub fn parameter_names(&self) -> &[String] {
        &self.names[self.coords..]
    }

    /// Same table with one extra trailing parameter.
    pub fn with_extra(&self, name: &str) -> Result<Self, ExprError> {
        let mut params: Vec<String> = self.parameter_names().to_vec();
        params.push(name.to_string());
        SymbolTable::new(self.coordinate_names(), &params)
    }
}

/// A 4-dimensional coordinate chart with optional parameter symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    symbols: SymbolTable,
}

impl Chart {
    pub fn new<S: AsRef<str>>(coords: &[S], params: &[S]) -> Result<Self, ExprError> {
        if coords.len() != 4 {
            return Err(ExprError::Syntax { pos: 0, msg: alloc::format!("a chart needs exactly 4 coordinates, got {}", coords.len()) });
        }
        Ok(Chart { symbols: SymbolTable::new(coords, params)? })
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn parse(&self, text: &str) -> Result<RatExpr, ExprError> {
        parse(text, &self.symbols)
    }

    /// Evaluate at a point with named parameter values.
    pub fn evaluate(&self, f: &RatExpr, point: &[Rational; 4], params: &[(String, Rational)]) -> Result<Value, ExprError> {
        let t = &self.symbols;
        let lookup = |s: Sym| -> Option<Rational> {
            if t.is_coordinate(s) {
                Some(point[s as usize].clone())
            } else {
                params.iter().find(|(n, _)| n == t.name(s)).map(|(_, v)| v.clone())
            }
        };
        f.evaluate(&lookup).map_err(|e| match e {
            ExprError::Unbound(tag) => {
                let idx = tag.trim_start_matches('#').parse::<usize>().ok();
                ExprError::Unbound(idx.filter(|&i| i < t.len()).map_or(tag, |i| t.name(i as Sym).to_string()))
            }
            other => other,
        })
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_reserved(s: &str) -> bool {
    matches!(s, "exp" | "sqrt")
}
