use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Sym;

/// Product of symbol powers, stored sorted by symbol with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Sym, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Sym) -> Self {
        Monomial(alloc::vec![(s, 1)])
    }

    pub fn pow_of(s: Sym, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(alloc::vec![(s, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Sym) -> u32 {
        self.0.iter().find(|&&(t, _)| t == s).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when every exponent of `other` is covered.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == s {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((s, e - f));
                }
                j += 1;
            } else {
                out.push((s, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(s, e) in &self.0 {
            let f = other.exponent(s);
            if f > 0 {
                out.push((s, e.min(f)));
            }
        }
        Monomial(out)
    }

    /// Halve every exponent, if all are even.
    pub fn sqrt(&self) -> Option<Monomial> {
        if self.0.iter().all(|&(_, e)| e % 2 == 0) {
            Some(Monomial(self.0.iter().map(|&(s, e)| (s, e / 2)).collect()))
        } else {
            None
        }
    }

    /// Partial derivative: returns the exponent factor and the lowered monomial.
    pub fn derivative(&self, s: Sym) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|&(t, _)| t == s)?;
        let e = self.0[pos].1;
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 = e - 1;
        }
        Some((e, Monomial(out)))
    }

    /// Split into the part over the given symbols and the remainder.
    pub fn split(&self, keep: impl Fn(Sym) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().partition(|&&(s, _)| keep(s));
        (Monomial(a), Monomial(b))
    }

    /// Graded lexicographic comparison, a monomial order.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // lexicographic with smaller symbol index as the heavier variable
            let mut i = 0;
            loop {
                match (self.0.get(i), other.0.get(i)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(a, ea)), Some(&(b, eb))) => {
                        if a != b {
                            return b.cmp(&a);
                        }
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                    }
                }
                i += 1;
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_div() {
        let x = Monomial::var(0);
        let y = Monomial::var(1);
        let xy = x.mul(&y);
        let x2y = xy.mul(&x);
        assert_eq!(x2y.exponent(0), 2);
        assert_eq!(x2y.div(&xy), Some(x.clone()));
        assert_eq!(x.div(&y), None);
        assert_eq!(x2y.gcd(&xy.mul(&y)), xy);
        assert_eq!(x2y.degree(), 3);
    }

    #[test]
    fn grlex_is_compatible_with_multiplication() {
        let a = Monomial::pow_of(0, 2);
        let b = Monomial::var(0).mul(&Monomial::var(1));
        let c = Monomial::var(2);
        assert_eq!(a.grlex_cmp(&b), Ordering::Greater);
        assert_eq!(a.mul(&c).grlex_cmp(&b.mul(&c)), Ordering::Greater);
    }
}
