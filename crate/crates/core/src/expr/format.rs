//! Canonical text output. Terms appear in `(exponent, monomial, radicand)`
//! order and the result parses back to the same expression.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::{One, Signed};

use super::gen::{GenExpr, TermKey};
use super::monomial::Monomial;
use super::poly::Poly;
use super::rat::RatExpr;
use super::rational::Rational;
use super::SymbolTable;

fn rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

fn monomial(m: &Monomial, t: &SymbolTable) -> Vec<String> {
    m.factors()
        .iter()
        .map(|&(s, e)| if e == 1 { t.name(s).to_string() } else { alloc::format!("{}^{}", t.name(s), e) })
        .collect()
}

fn signed_sum<'a>(terms: impl Iterator<Item = (Vec<String>, &'a Rational)>) -> String {
    let mut out = String::new();
    for (i, (factors, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut parts = Vec::new();
        if !mag.is_one() || factors.is_empty() {
            parts.push(rational(&mag));
        }
        parts.extend(factors);
        out.push_str(&parts.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_poly(p: &Poly, t: &SymbolTable) -> String {
    signed_sum(p.terms().map(|(m, c)| (monomial(m, t), c)))
}

fn key_factors(k: &TermKey, t: &SymbolTable) -> Vec<String> {
    let mut f = Vec::new();
    if !k.surd.is_one() {
        f.push(alloc::format!("sqrt({})", k.surd));
    }
    f.extend(monomial(&k.mono, t));
    if !k.exp.is_zero() {
        f.push(alloc::format!("exp({})", format_poly(&k.exp, t)));
    }
    f
}

pub fn format_gen(g: &GenExpr, t: &SymbolTable) -> String {
    signed_sum(g.terms().map(|(k, c)| (key_factors(k, t), c)))
}

impl RatExpr {
    /// Canonical text form over the given symbols.
    pub fn format(&self, t: &SymbolTable) -> String {
        let n = format_gen(self.num(), t);
        if self.den().is_one() {
            return n;
        }
        let d = format_gen(self.den(), t);
        let wrap = |s: String, g: &GenExpr| if g.len() > 1 || s.starts_with('-') { alloc::format!("({s})") } else { s };
        let d = if self.den().len() == 1 && d.contains('*') { alloc::format!("({d})") } else { wrap(d, self.den()) };
        alloc::format!("{}/{}", wrap(n, self.num()), d)
    }
}

impl GenExpr {
    pub fn format(&self, t: &SymbolTable) -> String {
        format_gen(self, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn round_trip() {
        let t = SymbolTable::new(&["x1", "y1", "x2", "y2"], &["k"]).unwrap();
        for src in [
            "exp(x1^2 + x2 + y1^2)",
            "-(1/2)*x1*exp(x1) + 3*sqrt(2)*y1^2 - 7",
            "(x1 + 1)/(x1 - y1)",
            "k/(2*x1)",
            "0",
        ] {
            let e = parse(src, &t).unwrap();
            let s = e.format(&t);
            let back = parse(&s, &t).unwrap();
            assert_eq!(back, e, "{src} -> {s}");
            assert_eq!(back.format(&t), s);
        }
        assert_eq!(parse("exp(x1^2 + x2 + y1^2)", &t).unwrap().format(&t), "exp(x1^2 + y1^2 + x2)");
    }
}
