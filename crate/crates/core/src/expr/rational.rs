use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Shorthand for `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn to_f64(q: &Rational) -> f64 {
    match q.to_f64() {
        Some(v) => v,
        None => {
            // Ratio::to_f64 only fails on overflow; fall back to a scaled quotient.
            let n = q.numer().to_f64().unwrap_or(f64::NAN);
            let d = q.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub(crate) fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &rn * &rn == *n && &rd * &rd == *d {
        Some(Rational::new(BigInt::from(rn), BigInt::from(rd)))
    } else {
        None
    }
}

/// Split a positive integer as `k^2 * s` with `s` squarefree; returns `(k, s)`.
pub(crate) fn squarefree_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut k = BigUint::one();
    let mut s = BigUint::one();
    let mut rest = n.clone();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            k *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= &p;
            }
        }
        p += 1u32;
    }
    // leftover is 1 or a prime
    s *= rest;
    (k, s)
}

/// `sqrt(q)` for positive rational `q` written as `c * sqrt(s)` with rational
/// `c` and squarefree integer `s`.
pub(crate) fn sqrt_parts(q: &Rational) -> Option<(Rational, BigUint)> {
    if !q.is_positive() {
        return None;
    }
    // sqrt(n/d) = sqrt(n*d)/d
    let n = q.numer().magnitude();
    let d = q.denom().magnitude();
    let (k, s) = squarefree_split(&(n * d));
    Some((Rational::new(BigInt::from(k), BigInt::from(d.clone())), s))
}

pub(crate) fn gcd_u(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree() {
        let (k, s) = squarefree_split(&BigUint::from(72u32));
        assert_eq!((k, s), (BigUint::from(6u32), BigUint::from(2u32)));
        let (k, s) = squarefree_split(&BigUint::from(1u32));
        assert_eq!((k, s), (BigUint::one(), BigUint::one()));
    }

    #[test]
    fn sqrt_of_half() {
        let (c, s) = sqrt_parts(&rat(1, 2)).unwrap();
        assert_eq!(c, rat(1, 2));
        assert_eq!(s, BigUint::from(2u32));
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&rat(2, 1)), None);
        assert!(sqrt_parts(&rat(-1, 1)).is_none());
    }
}
