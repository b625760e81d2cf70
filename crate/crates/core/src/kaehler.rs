//! Frame-diagonal metrics `G = diag(a, a, c, c)` on an adapted frame
//! `(X, JX, T, JT)`, the fundamental form `Ω(U,V) = G(U, JV)` and the
//! closedness of `Ω`.

use alloc::vec::Vec;

use crate::acstructure::columns;
use crate::error::{Error, Result};
use crate::expr::{RatExpr, Rational};
use crate::linalg::{self, Matrix};
use crate::vectorfield::VectorField;

#[derive(Debug, Clone)]
pub struct FrameMetric {
    pub frame: [VectorField; 4],
    pub a: RatExpr,
    pub c: RatExpr,
    inv: Matrix<RatExpr>,
}

impl FrameMetric {
    pub fn new(frame: [VectorField; 4], a: RatExpr, c: RatExpr) -> Result<Self> {
        let m = columns(&[&frame[0], &frame[1], &frame[2], &frame[3]]);
        let inv = linalg::inverse(&m).ok_or(Error::SingularFrame)?;
        Ok(FrameMetric { frame, a, c, inv })
    }

    /// The natural metric: the frame is orthonormal.
    pub fn natural(frame: [VectorField; 4]) -> Result<Self> {
        Self::new(frame, RatExpr::one(), RatExpr::one())
    }

    /// Coefficients of `u` in the frame.
    pub fn decompose(&self, u: &VectorField) -> Vec<RatExpr> {
        linalg::mat_vec(&self.inv, u.components())
    }

    /// `G` on frame coefficients.
    pub fn pairing_coeffs(&self, u: &[RatExpr], v: &[RatExpr]) -> RatExpr {
        let lo = u[0].mul(&v[0]).add(&u[1].mul(&v[1]));
        let hi = u[2].mul(&v[2]).add(&u[3].mul(&v[3]));
        self.a.mul(&lo).add(&self.c.mul(&hi))
    }

    pub fn pairing(&self, u: &VectorField, v: &VectorField) -> RatExpr {
        self.pairing_coeffs(&self.decompose(u), &self.decompose(v))
    }

    /// `Ω(U,V) = G(U, JV)`; on frame coefficients `J` is the standard block.
    pub fn omega(&self, u: &VectorField, v: &VectorField) -> RatExpr {
        let v = self.decompose(v);
        let jv = [v[1].neg(), v[0].clone(), v[3].neg(), v[2].clone()];
        self.pairing_coeffs(&self.decompose(u), &jv)
    }

    /// `J` acting on a field through its frame decomposition.
    pub fn j(&self, u: &VectorField) -> VectorField {
        let k = self.decompose(u);
        let f = &self.frame;
        f[1].scale(&k[0]).sub(&f[0].scale(&k[1])).add(&f[3].scale(&k[2])).sub(&f[2].scale(&k[3]))
    }
}

pub fn metric_pairing(m: &FrameMetric, u: &VectorField, v: &VectorField) -> RatExpr {
    m.pairing(u, v)
}

/// Left-hand sides of the four reduced closedness equations. Their
/// derivation already uses `[X,JX] = T`, so on a frame that is not adapted
/// they need not agree with [`d_omega_direct`].
pub fn closedness_residuals(m: &FrameMetric) -> [RatExpr; 4] {
    let [x, jx, t, jt] = &m.frame;
    let g = |u: &VectorField, v: &VectorField| m.pairing(u, v);
    let br = |u: &VectorField, v: &VectorField| u.bracket(v);
    let r1 = t.apply(&m.a).sub(&g(&br(t, x), x)).add(&g(&br(jx, t), jx));
    let r2 = jt.apply(&m.a).sub(&m.c).sub(&g(&br(jt, x), x)).add(&g(&br(jx, jt), jx));
    let r3 = x.apply(&m.c).sub(&g(&br(x, t), t)).add(&g(&br(jt, x), jt)).add(&g(&br(t, jt), jx));
    let r4 = jx.apply(&m.c).sub(&g(&br(jx, t), t)).add(&g(&br(jt, jx), jt)).sub(&g(&br(t, jt), x));
    [r1, r2, r3, r4]
}

/// `dΩ(U,V,W)` with the 1/3 normalization.
pub fn d_omega(m: &FrameMetric, u: &VectorField, v: &VectorField, w: &VectorField) -> RatExpr {
    let o = |p: &VectorField, q: &VectorField| m.omega(p, q);
    let s = u
        .apply(&o(v, w))
        .add(&v.apply(&o(w, u)))
        .add(&w.apply(&o(u, v)))
        .sub(&o(&u.bracket(v), w))
        .sub(&o(&w.bracket(u), v))
        .sub(&o(&v.bracket(w), u));
    s.scale(&Rational::new(1.into(), 3.into()))
}

/// `dΩ` on the triples `(X,JX,T)`, `(X,JX,JT)`, `(X,T,JT)`, `(JX,T,JT)`.
pub fn d_omega_direct(m: &FrameMetric) -> [RatExpr; 4] {
    let [x, jx, t, jt] = &m.frame;
    [d_omega(m, x, jx, t), d_omega(m, x, jx, jt), d_omega(m, x, t, jt), d_omega(m, jx, t, jt)]
}

pub fn is_almost_kaehler(m: &FrameMetric) -> bool {
    d_omega_direct(m).iter().all(RatExpr::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, Chart};

    #[test]
    fn flat_frame_constant_weights_closed() {
        let frame = core::array::from_fn(VectorField::coordinate);
        let m = FrameMetric::new(frame, RatExpr::int(3), RatExpr::constant(rat(1, 2))).unwrap();
        assert!(is_almost_kaehler(&m));
    }

    #[test]
    fn pairing_is_j_invariant() {
        let ch = Chart::new(&["x", "y", "u", "v"], &[]).unwrap();
        let frame = [
            VectorField::coordinate(0),
            VectorField::new([ch.parse("y").unwrap(), RatExpr::one(), RatExpr::zero(), RatExpr::zero()]),
            VectorField::coordinate(2),
            VectorField::new([RatExpr::zero(), RatExpr::zero(), ch.parse("x").unwrap(), RatExpr::one()]),
        ];
        let m = FrameMetric::new(frame, ch.parse("1 + x^2").unwrap(), RatExpr::int(2)).unwrap();
        let u = VectorField::new([ch.parse("x*y").unwrap(), RatExpr::one(), ch.parse("u").unwrap(), RatExpr::int(-1)]);
        let w = VectorField::new([RatExpr::one(), ch.parse("v").unwrap(), RatExpr::zero(), ch.parse("x - y").unwrap()]);
        assert_eq!(m.pairing(&m.j(&u), &m.j(&w)), m.pairing(&u, &w));
        assert_eq!(m.pairing(&u, &w), m.pairing(&w, &u));
        assert!(m.omega(&u, &w).add(&m.omega(&w, &u)).is_zero());
        assert_eq!(m.pairing(&m.frame[3], &m.frame[3]), RatExpr::int(2));
        assert!(m.pairing(&m.frame[0], &m.frame[1]).is_zero());
    }
}
