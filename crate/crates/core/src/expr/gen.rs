use alloc::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::poly::Poly;
use super::rational::{exact_sqrt, gcd_u, sqrt_parts, Rational};
use super::Sym;

/// Everything in a term except its rational coefficient.
///
/// The field order fixes the canonical term order: exponent polynomial,
/// then monomial, then radicand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    /// Polynomial inside `exp(..)`; the zero polynomial means no exponential.
    pub exp: Poly,
    pub mono: Monomial,
    /// Squarefree radicand; `1` means no square root.
    pub surd: BigUint,
}

impl TermKey {
    pub fn one() -> Self {
        TermKey { exp: Poly::zero(), mono: Monomial::one(), surd: BigUint::one() }
    }

    pub fn is_one(&self) -> bool {
        self.exp.is_zero() && self.mono.is_one() && self.surd.is_one()
    }

    /// Product of two keys; returns the rational factor pulled out of the
    /// radicands.
    fn mul(&self, other: &TermKey) -> (TermKey, BigUint) {
        let g = gcd_u(&self.surd, &other.surd);
        let surd = (&self.surd * &other.surd) / (&g * &g);
        (TermKey { exp: self.exp.add(&other.exp), mono: self.mono.mul(&other.mono), surd }, g)
    }
}

/// Exact sum of terms `q * sqrt(n) * monomial * exp(poly)` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GenExpr {
    terms: BTreeMap<TermKey, Rational>,
}

impl GenExpr {
    pub fn zero() -> Self {
        GenExpr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_term(TermKey::one(), c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    pub fn symbol(s: Sym) -> Self {
        Self::from_term(TermKey { mono: Monomial::var(s), ..TermKey::one() }, Rational::one())
    }

    pub fn from_term(key: TermKey, c: Rational) -> Self {
        let mut e = GenExpr::zero();
        e.add_term(key, c);
        e
    }

    pub fn from_poly(p: &Poly) -> Self {
        let mut e = GenExpr::zero();
        for (m, c) in p.terms() {
            e.add_term(TermKey { mono: m.clone(), ..TermKey::one() }, c.clone());
        }
        e
    }

    pub fn exp_of(p: Poly) -> Self {
        Self::from_term(TermKey { exp: p, ..TermKey::one() }, Rational::one())
    }

    /// `sqrt(q)` for a positive rational `q`.
    pub fn sqrt_of(q: &Rational) -> Option<Self> {
        let (c, s) = sqrt_parts(q)?;
        Some(Self::from_term(TermKey { surd: s, ..TermKey::one() }, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.iter().next().is_some_and(|(k, c)| k.is_one() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Rational)> {
        self.terms.iter()
    }

    pub fn single_term(&self) -> Option<(&TermKey, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub(crate) fn add_term(&mut self, key: TermKey, c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
            *e += c;
            e.is_zero()
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    /// The value as a rational number, if the expression is one.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (k, c) = self.terms.iter().next()?;
                k.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The plain polynomial part when there are no exponentials or radicals.
    pub fn as_poly(&self) -> Option<Poly> {
        let mut p = Poly::zero();
        for (k, c) in &self.terms {
            if !k.exp.is_zero() || !k.surd.is_one() {
                return None;
            }
            p.add_term(k.mono.clone(), c.clone());
        }
        Some(p)
    }

    pub fn add(&self, other: &GenExpr) -> GenExpr {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &GenExpr) -> GenExpr {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> GenExpr {
        GenExpr { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> GenExpr {
        if q.is_zero() {
            return GenExpr::zero();
        }
        GenExpr { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect() }
    }

    pub fn mul(&self, other: &GenExpr) -> GenExpr {
        if let Some(q) = other.as_rational() {
            return self.scale(&q);
        }
        if let Some(q) = self.as_rational() {
            return other.scale(&q);
        }
        let mut out = GenExpr::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let (k, g) = k1.mul(k2);
                let c = c1 * c2 * Rational::from_integer(BigInt::from(g));
                out.add_term(k, c);
            }
        }
        out
    }

    pub fn mul_term(&self, key: &TermKey, q: &Rational) -> GenExpr {
        let mut out = GenExpr::zero();
        for (k1, c1) in &self.terms {
            let (k, g) = k1.mul(key);
            out.add_term(k, c1 * q * Rational::from_integer(BigInt::from(g)));
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> GenExpr {
        let mut base = self.clone();
        let mut acc = GenExpr::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Partial derivative with respect to a symbol. Only coordinates are
    /// differentiated in practice; radicands are constants.
    pub fn derivative(&self, s: Sym) -> GenExpr {
        let mut out = GenExpr::zero();
        for (k, c) in &self.terms {
            if let Some((e, low)) = k.mono.derivative(s) {
                let key = TermKey { mono: low, ..k.clone() };
                out.add_term(key, c * Rational::from_integer(BigInt::from(e)));
            }
            let dp = k.exp.derivative(s);
            for (m, d) in dp.terms() {
                let key = TermKey { mono: k.mono.mul(m), ..k.clone() };
                out.add_term(key, c * d);
            }
        }
        out
    }

    pub fn substitute(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> GenExpr {
        let mut out = GenExpr::zero();
        for (k, c) in &self.terms {
            let mp = Poly::term(k.mono.clone(), c.clone()).substitute(value);
            let exp = k.exp.substitute(value);
            for (m, d) in mp.terms() {
                out.add_term(TermKey { exp: exp.clone(), mono: m.clone(), surd: k.surd.clone() }, d.clone());
            }
        }
        out
    }

    /// Every symbol occurring in a monomial or an exponent.
    pub fn symbols(&self) -> alloc::collections::BTreeSet<Sym> {
        let mut out = alloc::collections::BTreeSet::new();
        for k in self.terms.keys() {
            out.extend(k.mono.factors().iter().map(|&(s, _)| s));
            out.extend(k.exp.symbols());
        }
        out
    }

    pub fn mentions(&self, pred: impl Fn(Sym) -> bool) -> bool {
        self.symbols().into_iter().any(pred)
    }

    /// The greatest common "monomial part" of all terms: shared monomial
    /// factor, plus the exponential and radical when all terms agree on them.
    pub(crate) fn common_factor(&self) -> TermKey {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(k) => k.clone(),
            None => return TermKey::one(),
        };
        let mut out = first;
        for k in it {
            out.mono = out.mono.gcd(&k.mono);
            if out.exp != k.exp {
                out.exp = Poly::zero();
            }
            if out.surd != k.surd {
                out.surd = BigUint::one();
            }
        }
        out
    }

    /// Divide every term by a key known to divide all of them.
    pub(crate) fn div_key(&self, key: &TermKey) -> GenExpr {
        let neg_exp = key.exp.neg();
        let mut out = GenExpr::zero();
        for (k, c) in &self.terms {
            let mono = k.mono.div(&key.mono).expect("key must divide every term");
            // 1/sqrt(s) = sqrt(s)/s
            let (surd, q) = if key.surd.is_one() {
                (k.surd.clone(), Rational::one())
            } else {
                let g = gcd_u(&k.surd, &key.surd);
                let prod = &k.surd * &key.surd;
                let surd = &prod / (&g * &g);
                (surd, Rational::new(BigInt::from(g), BigInt::from(key.surd.clone())))
            };
            out.add_term(TermKey { exp: k.exp.add(&neg_exp), mono, surd }, c * q);
        }
        out
    }

    /// Exact square root, when the expression is visibly a square.
    pub fn try_sqrt(&self) -> Option<GenExpr> {
        if self.is_zero() {
            return Some(GenExpr::zero());
        }
        if let Some((k, c)) = self.single_term() {
            if !k.surd.is_one() {
                return None;
            }
            let mono = k.mono.sqrt()?;
            let exp = k.exp.scale(&Rational::new(1.into(), 2.into()));
            let root_c = GenExpr::sqrt_of(c)?;
            return Some(root_c.mul(&GenExpr::from_term(TermKey { exp, mono, surd: BigUint::one() }, Rational::one())));
        }
        // factor out a shared exponential, then treat the rest as a polynomial
        let common = self.common_factor();
        let shared = TermKey { mono: Monomial::one(), ..common };
        let rest = if shared.is_one() { self.clone() } else { self.div_key(&shared) };
        let p = rest.as_poly()?;
        let (_, lc) = p.leading()?;
        if !lc.is_positive() {
            return None;
        }
        let lc = lc.clone();
        let monic = p.scale(&(Rational::one() / &lc));
        let root = monic.sqrt_exact()?;
        let scale = match exact_sqrt(&lc) {
            Some(r) => GenExpr::constant(r),
            None => GenExpr::sqrt_of(&lc)?,
        };
        let shared_root = GenExpr::from_term(shared, Rational::one()).try_sqrt()?;
        Some(GenExpr::from_poly(&root).mul(&scale).mul(&shared_root))
    }

    /// Split an expression containing the imaginary unit `i` (a symbol) into
    /// real and imaginary parts.
    pub fn split_complex(&self, i: Sym) -> (GenExpr, GenExpr) {
        let mut re = GenExpr::zero();
        let mut im = GenExpr::zero();
        for (k, c) in &self.terms {
            let e = k.mono.exponent(i);
            let (_, rest) = k.mono.split(|s| s == i);
            let key = TermKey { mono: rest, ..k.clone() };
            match e % 4 {
                0 => re.add_term(key, c.clone()),
                1 => im.add_term(key, c.clone()),
                2 => re.add_term(key, -c),
                _ => im.add_term(key, -c),
            }
        }
        (re, im)
    }

    pub(crate) fn coeff(&self, key: &TermKey) -> Option<&Rational> {
        self.terms.get(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rational::rat;

    fn x(s: Sym) -> GenExpr {
        GenExpr::symbol(s)
    }

    #[test]
    fn exponential_law() {
        let e1 = GenExpr::exp_of(Poly::term(Monomial::var(0), rat(1, 1)));
        let e2 = GenExpr::exp_of(Poly::term(Monomial::var(1), rat(1, 1)));
        let both = GenExpr::exp_of(Poly::term(Monomial::var(0), rat(1, 1)).add(&Poly::term(Monomial::var(1), rat(1, 1))));
        assert!(e1.mul(&e2).sub(&both).is_zero());
        assert!(!x(0).mul(&e1).sub(&x(0)).is_zero());
    }

    #[test]
    fn radicals_multiply() {
        let s2 = GenExpr::sqrt_of(&rat(2, 1)).unwrap();
        let s3 = GenExpr::sqrt_of(&rat(3, 1)).unwrap();
        let s6 = GenExpr::sqrt_of(&rat(6, 1)).unwrap();
        assert!(s2.mul(&s2).sub(&GenExpr::int(2)).is_zero());
        assert!(s2.mul(&s3).sub(&s6).is_zero());
        let half = GenExpr::sqrt_of(&rat(1, 2)).unwrap();
        assert!(half.scale(&rat(2, 1)).sub(&s2).is_zero());
    }

    #[test]
    fn derivative_of_exponential() {
        // d/dx0 exp(x0^2) = 2 x0 exp(x0^2)
        let p = Poly::term(Monomial::pow_of(0, 2), rat(1, 1));
        let e = GenExpr::exp_of(p.clone());
        let d = e.derivative(0);
        let expect = x(0).scale(&rat(2, 1)).mul(&GenExpr::exp_of(p));
        assert_eq!(d, expect);
        assert!(e.derivative(1).is_zero());
    }

    #[test]
    fn square_roots() {
        let f = x(0).add(&GenExpr::int(1));
        let sq = f.mul(&f).scale(&rat(2, 1));
        let r = sq.try_sqrt().unwrap();
        assert!(r.mul(&r).sub(&sq).is_zero());
        let e = GenExpr::exp_of(Poly::term(Monomial::var(0), rat(2, 1))).scale(&rat(4, 1));
        let r = e.try_sqrt().unwrap();
        assert!(r.mul(&r).sub(&e).is_zero());
        assert!(x(0).try_sqrt().is_none());
    }

    #[test]
    fn complex_split() {
        // (1 - i*x0) with i = symbol 7
        let i = x(7);
        let z = GenExpr::one().sub(&i.mul(&x(0)));
        let (re, im) = z.mul(&i).split_complex(7);
        // i*(1 - i x0) = x0 + i
        assert_eq!(re, x(0));
        assert_eq!(im, GenExpr::one());
    }
}
