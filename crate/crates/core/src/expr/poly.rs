use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::rational::Rational;
use super::Sym;

/// Polynomial with rational coefficients in canonical form (no zero
/// coefficients). Used both as the exponent inside `exp(..)` and as the
/// polynomial layer of the algorithms that need a monomial order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Poly(BTreeMap<Monomial, Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.0.iter()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => self.0.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let e = self.0.entry(m.clone()).or_insert_with(Rational::zero);
            *e += c;
            e.is_zero()
        };
        if remove {
            self.0.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, c)| (m.clone(), c * k)).collect())
    }

    pub fn mul_term(&self, m: &Monomial, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(n, c)| (n.mul(m), c * k)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            for (n, d) in &other.0 {
                out.add_term(m.mul(n), c * d);
            }
        }
        out
    }

    pub fn derivative(&self, s: Sym) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            if let Some((e, low)) = m.derivative(s) {
                out.add_term(low, c * Rational::from_integer(e.into()));
            }
        }
        out
    }

    /// Substitute rational values for some symbols.
    pub fn substitute(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(s, e) in m.factors() {
                match value(s) {
                    Some(v) => coeff *= num_traits::pow(v, e as usize),
                    None => rest.push((s, e)),
                }
            }
            let mono = rest.into_iter().fold(Monomial::one(), |acc, (s, e)| acc.mul(&Monomial::pow_of(s, e)));
            out.add_term(mono, coeff);
        }
        out
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        self.0.keys().flat_map(|m| m.factors().iter().map(|&(s, _)| s))
    }

    /// Leading term under graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.0.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        let mut guard = 0usize;
        while !rem.is_zero() {
            guard += 1;
            if guard > 100_000 {
                return None;
            }
            let (rm, rc) = rem.leading()?;
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            rem = rem.sub(&divisor.mul_term(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// Exact square root with positive leading coefficient, if one exists
    /// with rational coefficients.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading()?;
        let root_m = lm.sqrt()?;
        let root_c = super::rational::exact_sqrt(lc)?;
        let mut root = Poly::term(root_m.clone(), root_c.clone());
        let two_lead_c = &root_c + &root_c;
        let mut rem = self.sub(&root.mul(&root));
        let mut guard = 0usize;
        while !rem.is_zero() {
            guard += 1;
            if guard > 10_000 {
                return None;
            }
            let (rm, rc) = rem.leading()?;
            if rm.grlex_cmp(&root_m) == core::cmp::Ordering::Less {
                return None;
            }
            let m = rm.div(&root_m)?;
            let c = rc / &two_lead_c;
            let t = Poly::term(m, c);
            // (r + t)^2 = r^2 + 2rt + t^2
            let two_r = root.scale(&Rational::from_integer(2.into()));
            rem = rem.sub(&two_r.mul(&t)).sub(&t.mul(&t));
            root = root.add(&t);
        }
        Some(root)
    }

    /// Positive rational content (gcd of numerators over lcm of denominators)
    /// carrying the sign of the leading coefficient.
    pub fn content(&self) -> Rational {
        use num_integer::Integer;
        let mut g = num_bigint::BigInt::zero();
        let mut l = num_bigint::BigInt::one();
        for c in self.0.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return Rational::one();
        }
        let mut k = Rational::new(g, l);
        if let Some((_, c)) = self.leading() {
            if c.is_negative() {
                k = -k;
            }
        }
        k
    }

    pub fn monomial_gcd(&self) -> Monomial {
        let mut it = self.0.keys();
        let first = match it.next() {
            Some(m) => m.clone(),
            None => return Monomial::one(),
        };
        it.fold(first, |acc, m| acc.gcd(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rational::rat;

    fn x() -> Poly {
        Poly::term(Monomial::var(0), rat(1, 1))
    }
    fn y() -> Poly {
        Poly::term(Monomial::var(1), rat(1, 1))
    }

    #[test]
    fn exact_division() {
        let f = x().add(&y());
        let g = x().sub(&y());
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&g), Some(f.clone()));
        assert_eq!(prod.add(&Poly::constant(rat(1, 1))).div_exact(&g), None);
    }

    #[test]
    fn square_root() {
        let f = x().scale(&rat(2, 1)).add(&y()).add(&Poly::constant(rat(1, 3)));
        let sq = f.mul(&f);
        let r = sq.sqrt_exact().unwrap();
        assert!(r == f || r == f.neg());
        assert!(sq.add(&x()).sqrt_exact().is_none());
    }

    #[test]
    fn content_and_gcd() {
        let f = x().scale(&rat(4, 3)).add(&x().mul(&y()).scale(&rat(-2, 9)));
        assert_eq!(f.monomial_gcd(), Monomial::var(0));
        assert_eq!(f.content(), rat(-2, 9));
    }
}
