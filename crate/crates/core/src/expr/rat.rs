use alloc::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::eval::Value;
use super::gen::{GenExpr, TermKey};
use super::poly::Poly;
use super::rational::Rational;
use super::Sym;
use crate::error::ExprError;

/// Quotient of two [`GenExpr`]s. Equality is semantic (cross-multiplication),
/// the representation is only lightly normalized.
#[derive(Debug, Clone)]
pub struct RatExpr {
    num: GenExpr,
    den: GenExpr,
}

impl PartialEq for RatExpr {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }
}

impl Eq for RatExpr {}

impl Default for RatExpr {
    fn default() -> Self {
        RatExpr::zero()
    }
}

impl From<GenExpr> for RatExpr {
    fn from(num: GenExpr) -> Self {
        RatExpr { num, den: GenExpr::one() }
    }
}

impl From<Rational> for RatExpr {
    fn from(q: Rational) -> Self {
        RatExpr::constant(q)
    }
}

impl RatExpr {
    pub fn zero() -> Self {
        GenExpr::zero().into()
    }

    pub fn one() -> Self {
        GenExpr::one().into()
    }

    pub fn int(n: i64) -> Self {
        GenExpr::int(n).into()
    }

    pub fn constant(q: Rational) -> Self {
        GenExpr::constant(q).into()
    }

    pub fn symbol(s: Sym) -> Self {
        GenExpr::symbol(s).into()
    }

    /// `sqrt(q)` for a positive rational.
    pub fn sqrt_of(q: &Rational) -> Option<Self> {
        GenExpr::sqrt_of(q).map(Into::into)
    }

    pub fn new(num: GenExpr, den: GenExpr) -> Result<Self, ExprError> {
        if den.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn num(&self) -> &GenExpr {
        &self.num
    }

    pub fn den(&self) -> &GenExpr {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The value as a rational number when it visibly is one.
    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_rational()?;
        let d = self.den.as_rational()?;
        Some(n / d)
    }

    /// A polynomial with no exponential or radical part, if the expression is one.
    pub fn as_poly(&self) -> Option<Poly> {
        let d = self.den.as_rational()?;
        Some(self.num.as_poly()?.scale(&(Rational::one() / d)))
    }

    fn normalized(mut num: GenExpr, mut den: GenExpr) -> RatExpr {
        if num.is_zero() {
            return RatExpr::zero();
        }
        // strip common units and shared monomial factors
        let cn = num.common_factor();
        let cd = den.common_factor();
        let unit = TermKey { exp: cd.exp.clone(), mono: cn.mono.gcd(&cd.mono), surd: cd.surd.clone() };
        if !unit.is_one() {
            num = num.div_key(&unit);
            den = den.div_key(&unit);
        }
        // monic denominator
        let (lead, _) = den.terms().next().map(|(k, c)| (k.clone(), c.clone())).expect("nonzero den");
        let lc = den.coeff(&lead).cloned().expect("lead present");
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.is_one() {
            return RatExpr { num, den };
        }
        // num = q * den
        if let Some(c) = num.coeff(&lead) {
            let c = c.clone();
            if num.len() == den.len() && num.sub(&den.scale(&c)).is_zero() {
                return RatExpr::constant(c);
            }
        }
        if let Some(dp) = den.as_poly() {
            if let Some(q) = div_by_poly(&num, &dp) {
                return q.into();
            }
        }
        RatExpr { num, den }
    }

    pub fn add(&self, other: &RatExpr) -> RatExpr {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return RatExpr::constant(a + b);
        }
        if self.den == other.den {
            return Self::normalized(self.num.add(&other.num), self.den.clone());
        }
        if let (Some(d1), Some(d2)) = (self.den.as_poly(), other.den.as_poly()) {
            if d1.len() <= d2.len() {
                if let Some(q) = d2.div_exact(&d1) {
                    let qn = self.num.mul(&GenExpr::from_poly(&q));
                    return Self::normalized(qn.add(&other.num), other.den.clone());
                }
            }
            if let Some(q) = d1.div_exact(&d2) {
                let qn = other.num.mul(&GenExpr::from_poly(&q));
                return Self::normalized(self.num.add(&qn), self.den.clone());
            }
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::normalized(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatExpr {
        RatExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatExpr) -> RatExpr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatExpr) -> RatExpr {
        if self.is_zero() || other.is_zero() {
            return RatExpr::zero();
        }
        if let Some(q) = other.as_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(&q);
        }
        // cross-cancel when one numerator equals the other denominator
        if self.num == other.den {
            return Self::normalized(other.num.clone(), self.den.clone());
        }
        if other.num == self.den {
            return Self::normalized(self.num.clone(), other.den.clone());
        }
        Self::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, q: &Rational) -> RatExpr {
        if q.is_zero() {
            return RatExpr::zero();
        }
        RatExpr { num: self.num.scale(q), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<RatExpr, ExprError> {
        RatExpr::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatExpr) -> Result<RatExpr, ExprError> {
        if other.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        if let Some(q) = other.as_rational() {
            return Ok(self.scale(&(Rational::one() / q)));
        }
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, e: i32) -> Result<RatExpr, ExprError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatExpr { num: base.num.pow(k), den: base.den.pow(k) })
    }

    pub fn derivative(&self, s: Sym) -> RatExpr {
        let dn = self.num.derivative(s);
        let dd = self.den.derivative(s);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(num, self.den.mul(&self.den))
    }

    pub fn substitute(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> Result<RatExpr, ExprError> {
        RatExpr::new(self.num.substitute(value), self.den.substitute(value))
    }

    /// Substitute expressions for symbols; symbols mapped to `None` stay.
    pub fn compose(&self, value: &dyn Fn(Sym) -> Option<RatExpr>) -> Result<RatExpr, ExprError> {
        let n = compose_gen(&self.num, value)?;
        let d = compose_gen(&self.den, value)?;
        n.div(&d)
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    /// True when every partial derivative with respect to the given symbols
    /// vanishes.
    pub fn is_constant_in(&self, syms: impl IntoIterator<Item = Sym>) -> bool {
        let present = self.symbols();
        syms.into_iter().filter(|s| present.contains(s)).all(|s| self.derivative(s).is_zero())
    }

    /// Exact square root when numerator and denominator are visibly squares
    /// (up to a rational radical).
    pub fn try_sqrt(&self) -> Option<RatExpr> {
        if self.is_zero() {
            return Some(RatExpr::zero());
        }
        if let (Some(n), Some(d)) = (self.num.try_sqrt(), self.den.try_sqrt()) {
            return Some(Self::normalized(n, d));
        }
        let nd = self.num.mul(&self.den);
        let r = nd.try_sqrt()?;
        Some(Self::normalized(r, self.den.clone()))
    }

    /// Evaluate with every free symbol bound.
    pub fn evaluate(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> Result<Value, ExprError> {
        let n = self.num.substitute(value);
        let d = self.den.substitute(value);
        if d.is_zero() {
            return Err(ExprError::Pole);
        }
        let vn = super::eval::value_of(&n)?;
        let vd = super::eval::value_of(&d)?;
        Ok(vn.div(&vd))
    }
}

fn compose_gen(g: &GenExpr, value: &dyn Fn(Sym) -> Option<RatExpr>) -> Result<RatExpr, ExprError> {
    let mut out = RatExpr::zero();
    for (k, c) in g.terms() {
        let mut t = RatExpr::constant(c.clone());
        for &(s, e) in k.mono.factors() {
            let f = value(s).unwrap_or_else(|| RatExpr::symbol(s));
            t = t.mul(&f.powi(e as i32)?);
        }
        if !k.exp.is_zero() {
            let inner = compose_gen(&GenExpr::from_poly(&k.exp), value)?;
            let p = inner.as_poly().ok_or_else(|| ExprError::ExpNotPolynomial(alloc::format!("{k:?}")))?;
            t = t.mul(&GenExpr::exp_of(p).into());
        }
        if !k.surd.is_one() {
            let r = Rational::from_integer(k.surd.clone().into());
            t = t.mul(&RatExpr::sqrt_of(&r).expect("positive radicand"));
        }
        out = out.add(&t);
    }
    Ok(out)
}

/// Divide a general expression by a polynomial group by group, when exact.
fn div_by_poly(num: &GenExpr, den: &Poly) -> Option<GenExpr> {
    if den.len() > num.len() * 4 + 4 {
        return None;
    }
    let mut groups: alloc::collections::BTreeMap<(Poly, BigUint), Poly> = alloc::collections::BTreeMap::new();
    for (k, c) in num.terms() {
        groups.entry((k.exp.clone(), k.surd.clone())).or_default().add_term(k.mono.clone(), c.clone());
    }
    let mut out = GenExpr::zero();
    for ((exp, surd), p) in groups {
        let q = p.div_exact(den)?;
        for (m, c) in q.terms() {
            out.add_term(TermKey { exp: exp.clone(), mono: m.clone(), surd: surd.clone() }, c.clone());
        }
    }
    Some(out)
}

impl core::ops::Add for &RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::add(self, rhs)
    }
}

impl core::ops::Sub for &RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::sub(self, rhs)
    }
}

impl core::ops::Mul for &RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::mul(self, rhs)
    }
}

impl core::ops::Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rational::rat;

    fn x(s: Sym) -> RatExpr {
        RatExpr::symbol(s)
    }

    #[test]
    fn cancels_polynomial_quotient() {
        let num = x(0).mul(&x(0)).sub(&x(1).mul(&x(1)));
        let den = x(0).sub(&x(1));
        let q = num.div(&den).unwrap();
        assert!(q.den().is_one());
        assert_eq!(q, x(0).add(&x(1)));
    }

    #[test]
    fn semantic_equality() {
        let a = x(0).div(&x(1)).unwrap();
        let b = x(0).scale(&rat(2, 1)).div(&x(1).scale(&rat(2, 1))).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, x(0));
    }

    #[test]
    fn quotient_rule() {
        let f = RatExpr::one().div(&x(0).add(&RatExpr::one())).unwrap();
        let d = f.derivative(0);
        let expect = RatExpr::int(-1).div(&x(0).add(&RatExpr::one()).powi(2).unwrap()).unwrap();
        assert_eq!(d, expect);
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(x(0).div(&RatExpr::zero()), Err(ExprError::DivisionByZero));
        let p = x(0).div(&x(0).sub(&RatExpr::one())).unwrap();
        let at_one = |s: Sym| (s == 0).then(|| rat(1, 1));
        assert_eq!(p.evaluate(&at_one), Err(ExprError::Pole));
    }

    #[test]
    fn radical_root() {
        let half = RatExpr::constant(rat(1, 2));
        let r = half.try_sqrt().unwrap();
        assert_eq!(r.mul(&r), half);
        let q = x(0).mul(&x(0)).scale(&rat(8, 1)).div(&x(1).mul(&x(1))).unwrap();
        let r = q.try_sqrt().unwrap();
        assert_eq!(r.mul(&r), q);
    }
}
