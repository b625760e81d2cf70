use alloc::format;

use num_traits::{ToPrimitive, Zero};

use super::gen::GenExpr;
use super::rational::{to_f64, Rational};
use crate::error::ExprError;

/// Result of evaluating an expression at a point: exact when no exponential
/// or radical survives, otherwise a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => to_f64(q),
            Value::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Approx(v) => *v == 0.0,
        }
    }

    pub fn add(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a + b),
            _ => Value::Approx(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Value::Exact(a * b),
            _ => Value::Approx(self.to_f64() * other.to_f64()),
        }
    }

    pub fn div(&self, other: &Value) -> Value {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) if !b.is_zero() => Value::Exact(a / b),
            _ => Value::Approx(self.to_f64() / other.to_f64()),
        }
    }
}

impl core::fmt::Display for Value {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Approx(v) => write!(f, "{v:e}"),
        }
    }
}

/// Value of an expression with no free symbols left.
pub(crate) fn value_of(g: &GenExpr) -> Result<Value, ExprError> {
    if let Some(q) = g.as_rational() {
        return Ok(Value::Exact(q));
    }
    let mut exact = Rational::zero();
    let mut approx = 0.0f64;
    let mut inexact = false;
    for (k, c) in g.terms() {
        if let Some(&(s, _)) = k.mono.factors().first() {
            return Err(ExprError::Unbound(format!("#{s}")));
        }
        let e = k.exp.as_constant().ok_or_else(|| {
            let s = k.exp.symbols().next().unwrap_or(0);
            ExprError::Unbound(format!("#{s}"))
        })?;
        if e.is_zero() && k.surd == num_bigint::BigUint::from(1u32) {
            exact += c;
            continue;
        }
        inexact = true;
        let mut v = to_f64(c);
        if !e.is_zero() {
            v *= libm::exp(to_f64(&e));
        }
        if k.surd != num_bigint::BigUint::from(1u32) {
            v *= libm::sqrt(k.surd.to_f64().unwrap_or(f64::NAN));
        }
        approx += v;
    }
    if !inexact {
        return Ok(Value::Exact(exact));
    }
    Ok(Value::Approx(approx + to_f64(&exact)))
}
