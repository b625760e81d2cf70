//! Small dense linear algebra over exact fields.
//!
//! Gaussian elimination picks the "simplest" nonzero pivot to limit
//! expression growth. Over [`RatExpr`] with parameters the ranks are generic
//! ranks: an entry that is a nonzero rational function counts as nonzero.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::expr::{RatExpr, Rational};

pub trait Scalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` on division by zero.
    fn div(&self, o: &Self) -> Option<Self>;
    /// Pivot preference: smaller is better.
    fn weight(&self) -> usize;
    /// The matrix with every symbol bound to a fixed rational, when all
    /// entries then evaluate exactly. Rank can only drop under this, so a
    /// full rank specialization certifies full generic rank.
    fn specialize(_m: &[Vec<Self>]) -> Option<Matrix<Rational>> {
        None
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn weight(&self) -> usize {
        (self.numer().bits() + self.denom().bits()) as usize
    }
}

impl Scalar for RatExpr {
    fn zero() -> Self {
        RatExpr::zero()
    }
    fn one() -> Self {
        RatExpr::one()
    }
    fn is_zero(&self) -> bool {
        RatExpr::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatExpr::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatExpr::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatExpr::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatExpr::neg(self)
    }
    fn div(&self, o: &Self) -> Option<Self> {
        RatExpr::div(self, o).ok()
    }
    fn weight(&self) -> usize {
        let base = self.num().len() + self.den().len();
        if self.as_rational().is_some() {
            base
        } else {
            base + 8
        }
    }
    fn specialize(m: &[Vec<Self>]) -> Option<Matrix<Rational>> {
        if m.iter().flatten().all(|e| e.as_rational().is_some()) {
            return None;
        }
        // fixed, unremarkable values keep results reproducible
        let at = |s: crate::expr::Sym| Some(Rational::new((97 + 31 * s as i64).into(), (13 + 7 * s as i64).into()));
        m.iter()
            .map(|row| row.iter().map(|e| e.evaluate(&at).ok().and_then(|v| v.exact().cloned())).collect())
            .collect()
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Scalar>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].weight());
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = F::one().div(&m[r][c]).expect("nonzero pivot");
        for j in c..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = m[r][j].mul(&f);
                    m[i][j] = m[i][j].sub(&v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Scalar>(vectors: &[Vec<F>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let full = vectors.len().min(vectors[0].len());
    if let Some(mut q) = F::specialize(vectors) {
        if rref(&mut q).len() == full {
            return full;
        }
    }
    let mut m = vectors.to_vec();
    rref(&mut m).len()
}

/// A basis of the span of the given vectors (a subset of them, in order).
pub fn span_basis<F: Scalar>(vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut basis: Vec<Vec<F>> = Vec::new();
    for v in vectors {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if rank(&trial) > basis.len() {
            basis.push(v.clone());
        }
    }
    basis
}

pub fn in_span<F: Scalar>(basis: &[Vec<F>], v: &[F]) -> bool {
    let mut trial = basis.to_vec();
    trial.push(v.to_vec());
    rank(&trial) == rank(basis)
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace<F: Scalar>(m: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].neg();
        }
        out.push(v);
    }
    out
}

/// Coordinates of `v` in the given basis, if it lies in the span.
pub fn coordinates<F: Scalar>(basis: &[Vec<F>], v: &[F]) -> Option<Vec<F>> {
    let n = v.len();
    let k = basis.len();
    // columns are basis vectors, augmented by v
    let mut m: Matrix<F> = (0..n).map(|i| {
        let mut row: Vec<F> = basis.iter().map(|b| b[i].clone()).collect();
        row.push(v[i].clone());
        row
    }).collect();
    let pivots = rref(&mut m);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![F::zero(); k];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][k].clone();
    }
    Some(x)
}

/// Dimension of the intersection of two spans.
pub fn intersection_dim<F: Scalar>(u: &[Vec<F>], w: &[Vec<F>]) -> usize {
    let mut all = u.to_vec();
    all.extend_from_slice(w);
    rank(u) + rank(w) - rank(&all)
}

/// Basis of the intersection of two spans.
pub fn intersection<F: Scalar>(u: &[Vec<F>], w: &[Vec<F>]) -> Vec<Vec<F>> {
    let u = span_basis(u);
    let w = span_basis(w);
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    let n = u[0].len();
    // solve sum a_i u_i - sum b_j w_j = 0
    let cols = u.len() + w.len();
    let m: Matrix<F> = (0..n)
        .map(|r| u.iter().map(|x| x[r].clone()).chain(w.iter().map(|x| x[r].neg())).collect())
        .collect();
    let ns = nullspace(&m, cols);
    let vecs: Vec<Vec<F>> = ns
        .iter()
        .map(|coef| {
            (0..n).fold(vec![F::zero(); n], |mut acc, r| {
                for (i, x) in u.iter().enumerate() {
                    acc[r] = acc[r].add(&coef[i].mul(&x[r]));
                }
                acc
            })
        })
        .collect();
    span_basis(&vecs)
}

pub fn mat_vec<F: Scalar>(m: &Matrix<F>, v: &[F]) -> Vec<F> {
    m.iter().map(|row| row.iter().zip(v).fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b)))).collect()
}

pub fn mat_mul<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).fold(F::zero(), |acc, (x, br)| acc.add(&x.mul(&br[j])))).collect())
        .collect()
}

pub fn identity<F: Scalar>(n: usize) -> Matrix<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

/// Determinant by cofactor expansion (no divisions).
pub fn det<F: Scalar>(m: &Matrix<F>) -> F {
    let n = m.len();
    match n {
        0 => F::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0])),
        _ => {
            let mut acc = F::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let c = m[0][j].mul(&det(&minor(m, 0, j)));
                acc = if j % 2 == 0 { acc.add(&c) } else { acc.sub(&c) };
            }
            acc
        }
    }
}

fn minor<F: Scalar>(m: &Matrix<F>, r: usize, c: usize) -> Matrix<F> {
    m.iter()
        .enumerate()
        .filter(|&(i, _)| i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
        .collect()
}

/// Inverse via the adjugate, `None` when the determinant is zero.
pub fn inverse<F: Scalar>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let d = det(m);
    if d.is_zero() {
        return None;
    }
    let mut inv = vec![vec![F::zero(); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            let c = det(&minor(m, j, i));
            let c = if (i + j) % 2 == 0 { c } else { c.neg() };
            *x = c.div(&d)?;
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::rat;

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let m = vec![q(&[1, 2, 3]), q(&[2, 4, 6]), q(&[0, 1, 1])];
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&m, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn parametric_rank() {
        let a = RatExpr::symbol(0);
        let b = RatExpr::symbol(1);
        let two = RatExpr::int(2);
        // specialization certifies this one
        assert_eq!(rank(&[vec![a.clone(), b.clone()], vec![b.clone(), a.clone()]]), 2);
        // and must not be trusted when it comes out deficient
        assert_eq!(rank(&[vec![a.clone(), b.clone()], vec![a.mul(&two), b.mul(&two)]]), 1);
        let d = a.sub(&RatExpr::constant(rat(97, 13)));
        assert_eq!(rank(&[vec![d.clone(), RatExpr::zero()], vec![RatExpr::zero(), RatExpr::one()]]), 2);
    }

    #[test]
    fn intersections() {
        let u = vec![q(&[1, 0, 0, 0]), q(&[0, 1, 0, 0])];
        let w = vec![q(&[0, 1, 0, 0]), q(&[0, 0, 1, 0])];
        assert_eq!(intersection_dim(&u, &w), 1);
        let i = intersection(&u, &w);
        assert_eq!(i.len(), 1);
        assert!(in_span(&[q(&[0, 1, 0, 0])], &i[0]));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![q(&[2, 1, 0, 0]), q(&[0, 1, 0, 3]), q(&[1, 0, 1, 0]), q(&[0, 0, 1, 1])];
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(4));
        assert_eq!(coordinates(&m, &q(&[2, 1, 0, 0])), Some(q(&[1, 0, 0, 0])));
    }
}
