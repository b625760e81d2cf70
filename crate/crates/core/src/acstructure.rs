use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{RatExpr, Rational, Sym};
use crate::linalg::{self, Matrix};
use crate::vectorfield::VectorField;

/// Real and imaginary parts of the (1,0) fields `Z₁`, `Z₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrameSpec {
    pub z1: (VectorField, VectorField),
    pub z2: (VectorField, VectorField),
}

impl ComplexFrameSpec {
    /// `(Re Z₁, Im Z₁, Re Z₂, Im Z₂)`.
    pub fn real_frame(&self) -> [VectorField; 4] {
        [self.z1.0.clone(), self.z1.1.clone(), self.z2.0.clone(), self.z2.1.clone()]
    }
}

/// An almost complex structure on the chart. Column `j` of the matrix is
/// `J ∂_j` in coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostComplexStructure {
    m: Matrix<RatExpr>,
}

impl AlmostComplexStructure {
    /// Checks `J² = -id` symbolically.
    pub fn from_matrix(m: Matrix<RatExpr>) -> Result<Self> {
        assert!(m.len() == 4 && m.iter().all(|r| r.len() == 4), "J must be 4x4");
        let sq = linalg::mat_mul(&m, &m);
        for (i, row) in sq.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let target = if i == j { RatExpr::int(-1) } else { RatExpr::zero() };
                let r = x.sub(&target);
                if !r.is_zero() {
                    let residual = match r.as_rational() {
                        Some(q) => q.to_string(),
                        None => "a nonconstant expression".to_string(),
                    };
                    return Err(Error::NotAlmostComplex { row: i, col: j, residual });
                }
            }
        }
        Ok(AlmostComplexStructure { m })
    }

    /// The unique `J` with `JZ = iZ` on both fields, i.e.
    /// `J Re Z = -Im Z` and `J Im Z = Re Z`.
    pub fn from_complex_frame(spec: &ComplexFrameSpec) -> Result<Self> {
        let [r1, i1, r2, i2] = spec.real_frame();
        let f = columns(&[&r1, &i1, &r2, &i2]);
        let finv = linalg::inverse(&f).ok_or(Error::SingularFrame)?;
        let jf = columns(&[&i1.neg(), &r1, &i2.neg(), &r2]);
        Self::from_matrix(linalg::mat_mul(&jf, &finv))
    }

    /// The standard integrable structure `J∂x_k = ∂y_k` on `(x1, y1, x2, y2)`.
    pub fn standard() -> Self {
        let mut m = alloc::vec![alloc::vec![RatExpr::zero(); 4]; 4];
        m[1][0] = RatExpr::one();
        m[0][1] = RatExpr::int(-1);
        m[3][2] = RatExpr::one();
        m[2][3] = RatExpr::int(-1);
        AlmostComplexStructure { m }
    }

    pub fn matrix(&self) -> &Matrix<RatExpr> {
        &self.m
    }

    pub fn apply(&self, v: &VectorField) -> VectorField {
        VectorField::from_vec(linalg::mat_vec(&self.m, v.components()))
    }

    /// Matrix of `J` at a point, entries as constant expressions.
    pub fn matrix_at(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> Result<Matrix<RatExpr>> {
        self.m.iter().map(|row| row.iter().map(|x| x.substitute(value).map_err(Error::from)).collect()).collect()
    }

    /// `N(X,Y) = [JX,JY] - [X,Y] - J([JX,Y] + [X,JY])`.
    pub fn nijenhuis(&self, x: &VectorField, y: &VectorField) -> VectorField {
        let jx = self.apply(x);
        let jy = self.apply(y);
        let a = jx.bracket(&jy).sub(&x.bracket(y));
        let b = jx.bracket(y).add(&x.bracket(&jy));
        a.sub(&self.apply(&b))
    }

    /// `[V, JX] - J[V, X]`.
    pub fn automorphism_defect(&self, v: &VectorField, x: &VectorField) -> VectorField {
        v.bracket(&self.apply(x)).sub(&self.apply(&v.bracket(x)))
    }

    /// The defect is tensorial in `X`, so the coordinate fields suffice.
    pub fn is_infinitesimal_automorphism(&self, v: &VectorField) -> bool {
        (0..4).all(|i| self.automorphism_defect(v, &VectorField::coordinate(i)).is_zero())
    }

    pub fn is_integrable(&self) -> bool {
        (0..4).all(|i| (i + 1..4).all(|j| self.nijenhuis(&VectorField::coordinate(i), &VectorField::coordinate(j)).is_zero()))
    }
}

/// Matrix whose columns are the given fields.
pub(crate) fn columns(fields: &[&VectorField]) -> Matrix<RatExpr> {
    (0..4).map(|i| fields.iter().map(|f| f.components()[i].clone()).collect::<Vec<_>>()).collect()
}
