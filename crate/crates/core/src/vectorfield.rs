use alloc::string::String;
use alloc::vec::Vec;

use crate::error::ExprError;
use crate::expr::{RatExpr, Rational, Sym, SymbolTable, Value};

/// A vector field on a 4-dimensional chart, stored in the coordinate frame.
/// Coordinates are the first four symbols of the chart's table.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VectorField {
    c: [RatExpr; 4],
}

impl VectorField {
    pub fn new(c: [RatExpr; 4]) -> Self {
        VectorField { c }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The coordinate field `∂_i`.
    pub fn coordinate(i: usize) -> Self {
        let mut v = Self::zero();
        v.c[i] = RatExpr::one();
        v
    }

    pub fn from_vec(v: Vec<RatExpr>) -> Self {
        let c: [RatExpr; 4] = v.try_into().expect("exactly 4 components");
        VectorField { c }
    }

    pub fn components(&self) -> &[RatExpr; 4] {
        &self.c
    }

    pub fn to_vec(&self) -> Vec<RatExpr> {
        self.c.to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(RatExpr::is_zero)
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField { c: core::array::from_fn(|i| self.c[i].add(&o.c[i])) }
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        VectorField { c: core::array::from_fn(|i| self.c[i].sub(&o.c[i])) }
    }

    pub fn neg(&self) -> VectorField {
        VectorField { c: core::array::from_fn(|i| self.c[i].neg()) }
    }

    pub fn scale(&self, f: &RatExpr) -> VectorField {
        VectorField { c: core::array::from_fn(|i| self.c[i].mul(f)) }
    }

    pub fn scale_q(&self, q: &Rational) -> VectorField {
        VectorField { c: core::array::from_fn(|i| self.c[i].scale(q)) }
    }

    /// `V(f) = Σ Vⁱ ∂ᵢ f`.
    pub fn apply(&self, f: &RatExpr) -> RatExpr {
        (0..4).fold(RatExpr::zero(), |acc, i| {
            if self.c[i].is_zero() {
                acc
            } else {
                acc.add(&self.c[i].mul(&f.derivative(i as Sym)))
            }
        })
    }

    /// `[U,V]^k = Σ Uⁱ ∂ᵢ V^k − Vⁱ ∂ᵢ U^k`.
    pub fn bracket(&self, v: &VectorField) -> VectorField {
        VectorField { c: core::array::from_fn(|k| self.apply(&v.c[k]).sub(&v.apply(&self.c[k]))) }
    }

    pub fn evaluate_at(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> Result<[Value; 4], ExprError> {
        let mut out: [Value; 4] = core::array::from_fn(|_| Value::Exact(Rational::default()));
        for (o, e) in out.iter_mut().zip(&self.c) {
            *o = e.evaluate(value)?;
        }
        Ok(out)
    }

    /// Exact evaluation; `None` if some component needs a float.
    pub fn evaluate_exact(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> Result<Option<Vec<Rational>>, ExprError> {
        let v = self.evaluate_at(value)?;
        Ok(v.iter().map(|x| x.exact().cloned()).collect())
    }

    /// Substitute values for some symbols (for example a point, leaving
    /// parameters symbolic).
    pub fn substitute(&self, value: &dyn Fn(Sym) -> Option<Rational>) -> Result<VectorField, ExprError> {
        let mut out = VectorField::zero();
        for i in 0..4 {
            out.c[i] = self.c[i].substitute(value)?;
        }
        Ok(out)
    }

    pub fn format(&self, t: &SymbolTable) -> [String; 4] {
        core::array::from_fn(|i| self.c[i].format(t))
    }
}

/// Lie bracket of two fields.
pub fn lie_bracket(u: &VectorField, v: &VectorField) -> VectorField {
    u.bracket(v)
}

/// Point lookup closure for coordinates `point` and parameters bound by `params`.
pub fn point_lookup<'a>(point: &'a [Rational; 4], params: &'a dyn Fn(Sym) -> Option<Rational>) -> impl Fn(Sym) -> Option<Rational> + 'a {
    move |s: Sym| if (s as usize) < 4 { Some(point[s as usize].clone()) } else { params(s) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{rat, Chart};

    fn chart() -> Chart {
        Chart::new(&["x1", "y1", "x2", "y2"], &[]).unwrap()
    }

    fn field(ch: &Chart, c: [&str; 4]) -> VectorField {
        VectorField::new(c.map(|s| ch.parse(s).unwrap()))
    }

    #[test]
    fn kim_lee_brackets() {
        let ch = chart();
        let re1 = field(&ch, ["1/2", "0", "-x1", "y1"]);
        let im1 = field(&ch, ["0", "-1/2", "y1", "x1"]);
        let re2 = field(&ch, ["0", "0", "0", "-1"]);
        let im2 = field(&ch, ["2*y1", "0", "-(4*x1*y1 + 1)", "0"]);
        assert_eq!(re1.bracket(&im1), re2.neg());
        assert_eq!(im1.bracket(&im2), re1.scale_q(&rat(-2, 1)));
        assert!(re1.bracket(&re1).is_zero());
    }

    #[test]
    fn evaluates_at_point() {
        let ch = chart();
        let im2 = field(&ch, ["2*y1", "0", "-(4*x1*y1 + 1)", "0"]);
        let p = [rat(0, 1), rat(1, 1), rat(0, 1), rat(0, 1)];
        let none = |_: Sym| None;
        let v = im2.evaluate_exact(&point_lookup(&p, &none)).unwrap().unwrap();
        assert_eq!(v, [rat(2, 1), rat(0, 1), rat(-1, 1), rat(0, 1)]);
    }
}
