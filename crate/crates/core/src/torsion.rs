//! Pointwise analysis of the torsion bundle.
//!
//! Sections of the torsion bundle are the fields `N(∂i,∂j)`. At a point `p`
//! the Nijenhuis tensor is evaluated through these six values, so `τ` and
//! the checks on `V_p` are plain linear algebra over constant expressions.
//!
//! The distinguished field comes in two tiers. When `√s` (`s = α² + β²`) and
//! `√μ` are exact expressions on the chart, `X`, `JX`, `T`, `JT` are exact
//! fields. Otherwise only the direction `ξ` and its eigenvalue `μ` are exact
//! at `p` and the frame at `p` is computed in floating point from exact
//! derivatives.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::acstructure::AlmostComplexStructure;
use crate::error::{Error, Result};
use crate::expr::{RatExpr, Rational, Sym, Value};
use crate::linalg::{self, Matrix};
use crate::vectorfield::VectorField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fundamentality {
    Fundamental,
    NonFundamental,
}

/// Which member of the adapted pair to call `f′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sign {
    #[default]
    Canonical,
    Opposite,
}

/// A tangent vector at a point, exact when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum PointVector {
    Exact(Vec<RatExpr>),
    Approx(Vec<f64>),
}

impl PointVector {
    pub fn to_f64(&self) -> Result<Vec<f64>> {
        match self {
            PointVector::Exact(v) => v.iter().map(const_f64).collect(),
            PointVector::Approx(v) => Ok(v.clone()),
        }
    }

    pub fn neg(&self) -> PointVector {
        match self {
            PointVector::Exact(v) => PointVector::Exact(v.iter().map(RatExpr::neg).collect()),
            PointVector::Approx(v) => PointVector::Approx(v.iter().map(|x| -x).collect()),
        }
    }

    pub fn exact(&self) -> Option<&[RatExpr]> {
        match self {
            PointVector::Exact(v) => Some(v),
            PointVector::Approx(_) => None,
        }
    }
}

/// An ordered frame `(X, JX, T, JT)` at a point.
pub type FrameAt = [PointVector; 4];

/// The pointwise data at `p` that every later step uses.
#[derive(Debug, Clone)]
pub struct PointData {
    pub point: [Rational; 4],
    pub j: Matrix<RatExpr>,
    /// `N(∂i,∂j)` as fields, indexed by `i < j` in lexicographic order.
    pub sections: Vec<((usize, usize), VectorField)>,
    /// Their values at `p`.
    pub values: Vec<Vec<RatExpr>>,
}

pub(crate) const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn point_lookup(p: &[Rational; 4]) -> impl Fn(Sym) -> Option<Rational> + '_ {
    move |s: Sym| ((s as usize) < 4).then(|| p[s as usize].clone())
}

pub(crate) fn eval_field(v: &VectorField, p: &[Rational; 4]) -> Result<Vec<RatExpr>> {
    let look = point_lookup(p);
    v.components().iter().map(|c| c.substitute(&look).map_err(Error::from)).collect()
}

pub(crate) fn eval_scalar(f: &RatExpr, p: &[Rational; 4]) -> Result<RatExpr> {
    f.substitute(&point_lookup(p)).map_err(Error::from)
}

/// Float value of a constant expression.
pub(crate) fn const_f64(c: &RatExpr) -> Result<f64> {
    Ok(c.evaluate(&|_| None)?.to_f64())
}

impl PointData {
    pub fn new(j: &AlmostComplexStructure, p: &[Rational; 4]) -> Result<Self> {
        let sections: Vec<_> = PAIRS
            .iter()
            .map(|&(a, b)| ((a, b), j.nijenhuis(&VectorField::coordinate(a), &VectorField::coordinate(b))))
            .collect();
        let values = sections.iter().map(|(_, v)| eval_field(v, p)).collect::<Result<Vec<_>>>()?;
        Ok(PointData { point: p.clone(), j: j.matrix_at(&point_lookup(p))?, sections, values })
    }

    pub fn j_at(&self, v: &[RatExpr]) -> Vec<RatExpr> {
        linalg::mat_vec(&self.j, v)
    }

    /// `N_p(u, v)` from the six basic values.
    pub fn n_at(&self, u: &[RatExpr], v: &[RatExpr]) -> Vec<RatExpr> {
        let mut out = alloc::vec![RatExpr::zero(); 4];
        for (k, &(a, b)) in PAIRS.iter().enumerate() {
            let c = u[a].mul(&v[b]).sub(&u[b].mul(&v[a]));
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(&self.values[k]) {
                *o = o.add(&c.mul(x));
            }
        }
        out
    }

    /// A basis of `V_p`; when it is a plane the basis is `(v, J_p v)`.
    pub fn torsion_basis(&self) -> Vec<Vec<RatExpr>> {
        let basis = linalg::span_basis(&self.values);
        if basis.len() == 2 {
            let v = basis[0].clone();
            let jv = self.j_at(&v);
            return alloc::vec![v, jv];
        }
        basis
    }
}

/// `N(U,V)` for fields, assembled tensorially from the basic sections.
pub fn n_fields(sections: &[((usize, usize), VectorField)], u: &VectorField, v: &VectorField) -> VectorField {
    let (u, v) = (u.components(), v.components());
    let mut out = VectorField::zero();
    for ((a, b), s) in sections {
        let c = u[*a].mul(&v[*b]).sub(&u[*b].mul(&v[*a]));
        if !c.is_zero() {
            out = out.add(&s.scale(&c));
        }
    }
    out
}

pub fn torsion_space_at(j: &AlmostComplexStructure, p: &[Rational; 4]) -> Result<Vec<Vec<RatExpr>>> {
    Ok(PointData::new(j, p)?.torsion_basis())
}

/// A generating section `A` of the torsion bundle together with `JA` and
/// `T^A = [A, JA]`.
#[derive(Debug, Clone)]
pub struct Section {
    pub pair: Option<(usize, usize)>,
    pub a: VectorField,
    pub ja: VectorField,
    pub t: VectorField,
}

impl Section {
    pub fn new(j: &AlmostComplexStructure, a: VectorField, pair: Option<(usize, usize)>) -> Self {
        let ja = j.apply(&a);
        let t = a.bracket(&ja);
        Section { pair, a, ja, t }
    }
}

/// Generators `N(∂i,∂j)` with `[A,JA]_p ∉ V_p`, in order.
pub fn nondegenerate_sections(j: &AlmostComplexStructure, data: &PointData) -> Result<Vec<Section>> {
    let basis = data.torsion_basis();
    if basis.len() != 2 {
        return Err(Error::TorsionDimension(basis.len()));
    }
    let mut out = Vec::new();
    for (k, (pair, a)) in data.sections.iter().enumerate() {
        if data.values[k].iter().all(RatExpr::is_zero) {
            continue;
        }
        let s = Section::new(j, a.clone(), Some(*pair));
        let tp = eval_field(&s.t, &data.point)?;
        if !linalg::in_span(&basis, &tp) {
            out.push(s);
        }
    }
    Ok(out)
}

pub fn is_nondegenerate_at(j: &AlmostComplexStructure, p: &[Rational; 4]) -> Result<bool> {
    let data = PointData::new(j, p)?;
    Ok(!nondegenerate_sections(j, &data)?.is_empty())
}

/// Matrix of `τ: X ↦ N(X, T^A)_p` on the basis `(A_p, JA_p)`, column
/// convention, together with `α, β` where `τ(A) = αA + βJA`.
#[derive(Debug, Clone, PartialEq)]
pub struct TauMatrix {
    pub m: [[RatExpr; 2]; 2],
    pub alpha: RatExpr,
    pub beta: RatExpr,
}

impl TauMatrix {
    pub fn trace(&self) -> RatExpr {
        self.m[0][0].add(&self.m[1][1])
    }

    /// `λ² = α² + β²`.
    pub fn lambda_sq(&self) -> RatExpr {
        self.alpha.mul(&self.alpha).add(&self.beta.mul(&self.beta))
    }
}

pub fn tau_matrix_at(data: &PointData, s: &Section) -> Result<TauMatrix> {
    let p = &data.point;
    let a = eval_field(&s.a, p)?;
    let ja = eval_field(&s.ja, p)?;
    let t = eval_field(&s.t, p)?;
    let basis = alloc::vec![a.clone(), ja.clone()];
    let spectrum = |m: &str| Error::TauSpectrum(m.to_string());
    let ta = linalg::coordinates(&basis, &data.n_at(&a, &t)).ok_or_else(|| spectrum("N(A,T) leaves V_p"))?;
    let tja = linalg::coordinates(&basis, &data.n_at(&ja, &t)).ok_or_else(|| spectrum("N(JA,T) leaves V_p"))?;
    let m = [[ta[0].clone(), tja[0].clone()], [ta[1].clone(), tja[1].clone()]];
    if m[0][1] != m[1][0] || !m[1][1].add(&m[0][0]).is_zero() {
        return Err(spectrum("tau is not of the form [[a, b], [b, -a]]"));
    }
    let tm = TauMatrix { alpha: ta[0].clone(), beta: ta[1].clone(), m };
    if tm.lambda_sq().is_zero() {
        return Err(spectrum("tau vanishes on V_p"));
    }
    Ok(tm)
}

pub fn tau_matrix(j: &AlmostComplexStructure, a: &VectorField, p: &[Rational; 4]) -> Result<TauMatrix> {
    let data = PointData::new(j, p)?;
    let s = Section::new(j, a.clone(), None);
    let basis = data.torsion_basis();
    if basis.len() != 2 {
        return Err(Error::TorsionDimension(basis.len()));
    }
    if linalg::in_span(&basis, &eval_field(&s.t, p)?) {
        return Err(Error::Degenerate);
    }
    tau_matrix_at(&data, &s)
}

/// The +λ eigen-direction `ξ = gA + hJA` and its own eigenvalue
/// `μ = (g² + h²)λ`, so that `ξ/√μ` has eigenvalue 1.
pub(crate) fn eigen_coefficients(alpha: &RatExpr, beta: &RatExpr, lambda: &RatExpr, alpha_nonneg: bool) -> (RatExpr, RatExpr, RatExpr) {
    let s = alpha.mul(alpha).add(&beta.mul(beta));
    let two_s = s.scale(&Rational::from_integer(2.into()));
    if alpha_nonneg {
        let g = alpha.add(lambda);
        let mu = two_s.mul(&g);
        (g, beta.clone(), mu)
    } else {
        let h = lambda.sub(alpha);
        let mu = two_s.mul(&h);
        (beta.clone(), h, mu)
    }
}

pub(crate) fn positive_sqrt(x: &RatExpr, at_p: impl Fn(&RatExpr) -> Result<f64>) -> Result<Option<RatExpr>> {
    let Some(r) = x.try_sqrt() else { return Ok(None) };
    let v = at_p(&r)?;
    Ok(Some(if v < 0.0 { r.neg() } else { r }))
}

pub(crate) fn combine(g: &RatExpr, a: &[RatExpr], h: &RatExpr, b: &[RatExpr]) -> Vec<RatExpr> {
    a.iter().zip(b).map(|(x, y)| g.mul(x).add(&h.mul(y))).collect()
}

/// First nonzero component positive.
pub(crate) fn canonical_flip(v: &[RatExpr]) -> Result<bool> {
    for c in v {
        if !c.is_zero() {
            return Ok(const_f64(c)? < 0.0);
        }
    }
    Ok(false)
}

/// The distinguished field near `p`.
#[derive(Debug, Clone)]
pub struct DistinguishedField {
    pub generator: Option<(usize, usize)>,
    pub tau: TauMatrix,
    /// `λ` at `p`, exact when `λ²(p)` has an exact root.
    pub lambda_at: PointVector,
    /// Direction `ξ_p` in canonical sign, and its eigenvalue `μ_p`.
    pub xi_at: PointVector,
    pub mu_at: PointVector,
    /// `(X, JX, T, JT)` as exact fields (canonical sign), if available.
    pub fields: Option<[VectorField; 4]>,
    /// `(X, JX, T, JT)` at `p` in canonical sign.
    pub frame_at: FrameAt,
}

impl DistinguishedField {
    pub fn is_exact(&self) -> bool {
        self.fields.is_some()
    }

    /// The pair `(f′, f″)`; `f″ = (-X, -JX, T, JT)`.
    pub fn frames(&self, sign: Sign) -> (FrameAt, FrameAt) {
        let canon = self.frame_at.clone();
        let [x, jx, t, jt] = canon.clone();
        let other = [x.neg(), jx.neg(), t, jt];
        match sign {
            Sign::Canonical => (canon, other),
            Sign::Opposite => (other, canon),
        }
    }

    pub fn frame_fields(&self, sign: Sign) -> Option<[VectorField; 4]> {
        let [x, jx, t, jt] = self.fields.clone()?;
        Some(match sign {
            Sign::Canonical => [x, jx, t, jt],
            Sign::Opposite => [x.neg(), jx.neg(), t, jt],
        })
    }
}

/// Distinguished field built from a given generating section.
pub fn distinguished_from_section(j: &AlmostComplexStructure, data: &PointData, s: &Section) -> Result<DistinguishedField> {
    let p = &data.point;
    let tau = tau_matrix_at(data, s)?;
    let at_p = |f: &RatExpr| -> Result<f64> { const_f64(&eval_scalar(f, p)?) };
    let alpha_p = const_f64(&tau.alpha)?;
    let nonneg = alpha_p >= 0.0;
    let s_p = tau.lambda_sq();
    if const_f64(&s_p)? <= 0.0 {
        return Err(Error::NoDistinguishedField(format!("lambda^2 = {} is not positive", const_f64(&s_p)?)));
    }
    let a_p = eval_field(&s.a, p)?;
    let ja_p = eval_field(&s.ja, p)?;

    // pointwise direction
    let lambda_p = positive_sqrt(&s_p, const_f64)?;
    let (xi_at, mu_at, lambda_at, flip) = match &lambda_p {
        Some(l) => {
            let (g, h, mu) = eigen_coefficients(&tau.alpha, &tau.beta, l, nonneg);
            let xi = combine(&g, &a_p, &h, &ja_p);
            let flip = canonical_flip(&xi)?;
            let xi = if flip { xi.iter().map(RatExpr::neg).collect() } else { xi };
            (PointVector::Exact(xi), PointVector::Exact(alloc::vec![mu]), PointVector::Exact(alloc::vec![l.clone()]), flip)
        }
        None => {
            let (al, be) = (alpha_p, const_f64(&tau.beta)?);
            let l = libm::sqrt(al * al + be * be);
            let (g, h) = if nonneg { (al + l, be) } else { (be, l - al) };
            let a = a_p.iter().map(const_f64).collect::<Result<Vec<_>>>()?;
            let ja = ja_p.iter().map(const_f64).collect::<Result<Vec<_>>>()?;
            let mut xi: Vec<f64> = a.iter().zip(&ja).map(|(x, y)| g * x + h * y).collect();
            let flip = xi.iter().find(|v| **v != 0.0).is_some_and(|v| *v < 0.0);
            if flip {
                xi.iter_mut().for_each(|v| *v = -*v);
            }
            let mu = (g * g + h * h) * l;
            (PointVector::Approx(xi), PointVector::Approx(alloc::vec![mu]), PointVector::Approx(alloc::vec![l]), flip)
        }
    };

    // field-level coefficients α, β near p
    let (alpha, beta) = section_coefficients(data, s)?;
    let s_field = alpha.mul(&alpha).add(&beta.mul(&beta));

    if let Some(lambda) = positive_sqrt(&s_field, at_p)? {
        let (g, h, mu) = eigen_coefficients(&alpha, &beta, &lambda, nonneg);
        if let Some(root) = positive_sqrt(&mu, at_p)? {
            let sign = if flip { RatExpr::int(-1) } else { RatExpr::one() };
            let scale = sign.div(&root)?;
            let x = s.a.scale(&g.mul(&scale)).add(&s.ja.scale(&h.mul(&scale)));
            let jx = j.apply(&x);
            let t = x.bracket(&jx);
            let jt = j.apply(&t);
            let frame_at = [&x, &jx, &t, &jt].map(|f| eval_field(f, p).map(PointVector::Exact));
            let [a, b, c, d] = frame_at;
            return Ok(DistinguishedField {
                generator: s.pair,
                tau,
                lambda_at,
                xi_at,
                mu_at,
                fields: Some([x, jx, t, jt]),
                frame_at: [a?, b?, c?, d?],
            });
        }
    }

    let frame_at = numeric_frame(data, s, &alpha, &beta, nonneg, flip)?;
    Ok(DistinguishedField { generator: s.pair, tau, lambda_at, xi_at, mu_at, fields: None, frame_at })
}

/// `α, β` as functions near `p`, with `N(A, T^A) = αA + βJA`.
fn section_coefficients(data: &PointData, s: &Section) -> Result<(RatExpr, RatExpr)> {
    let n_field = n_fields(&data.sections, &s.a, &s.t);
    let basis = alloc::vec![s.a.to_vec(), s.ja.to_vec()];
    let coef = linalg::coordinates(&basis, &n_field.to_vec()).ok_or_else(|| Error::TauSpectrum("N(A,T) is not a section of V".to_string()))?;
    Ok((coef[0].clone(), coef[1].clone()))
}

/// The floating-point frame regardless of whether the exact tier applies.
/// Agrees with the exact frame when both exist.
pub fn numeric_frame_at(data: &PointData, s: &Section) -> Result<FrameAt> {
    let (alpha, beta) = section_coefficients(data, s)?;
    let at = |f: &RatExpr| -> Result<f64> { const_f64(&eval_scalar(f, &data.point)?) };
    let (al, be) = (at(&alpha)?, at(&beta)?);
    let nonneg = al >= 0.0;
    let l = libm::sqrt(al * al + be * be);
    let (g, h) = if nonneg { (al + l, be) } else { (be, l - al) };
    let a = eval_field(&s.a, &data.point)?.iter().map(const_f64).collect::<Result<Vec<_>>>()?;
    let ja = eval_field(&s.ja, &data.point)?.iter().map(const_f64).collect::<Result<Vec<_>>>()?;
    let flip = (0..4).map(|i| g * a[i] + h * ja[i]).find(|v| *v != 0.0).is_some_and(|v| v < 0.0);
    numeric_frame(data, s, &alpha, &beta, nonneg, flip)
}

/// Frame at `p` in floating point when `√μ` is not an exact expression.
///
/// With `ξ = gA + hJA`, `Jξ = gJA - hA` and `X = ξ/√μ`:
/// `T = [ξ,Jξ]/μ - (ξ(μ)Jξ - Jξ(μ)ξ)/(2μ²)` and
/// `[ξ,Jξ] = (g²+h²)T^A + c₁JA + c₂A` with
/// `c₁ = gA(g) + hJA(g) - gJA(h) + hA(h)`,
/// `c₂ = -gJA(g) - gA(h) + hA(g) - hJA(h)`.
pub(crate) fn numeric_frame(
    data: &PointData,
    s: &Section,
    alpha: &RatExpr,
    beta: &RatExpr,
    nonneg: bool,
    flip: bool,
) -> Result<FrameAt> {
    let p = &data.point;
    let at = |f: &RatExpr| -> Result<f64> { const_f64(&eval_scalar(f, p)?) };
    let vec_at = |v: &VectorField| -> Result<Vec<f64>> { eval_field(v, p)?.iter().map(const_f64).collect() };
    let sq = alpha.mul(alpha).add(&beta.mul(beta));
    let (al, be, sv) = (at(alpha)?, at(beta)?, at(&sq)?);
    let l = libm::sqrt(sv);
    // derivatives along A and JA
    let d = |v: &VectorField, f: &RatExpr| at(&v.apply(f));
    let (a_al, ja_al, a_be, ja_be, a_s, ja_s) = (d(&s.a, alpha)?, d(&s.ja, alpha)?, d(&s.a, beta)?, d(&s.ja, beta)?, d(&s.a, &sq)?, d(&s.ja, &sq)?);
    let (g, h, a_g, ja_g, a_h, ja_h) = if nonneg {
        (al + l, be, a_al + a_s / (2.0 * l), ja_al + ja_s / (2.0 * l), a_be, ja_be)
    } else {
        (be, l - al, a_be, ja_be, a_s / (2.0 * l) - a_al, ja_s / (2.0 * l) - ja_al)
    };
    let n2 = g * g + h * h;
    let mu = n2 * l;
    let a_mu = (2.0 * g * a_g + 2.0 * h * a_h) * l + n2 * a_s / (2.0 * l);
    let ja_mu = (2.0 * g * ja_g + 2.0 * h * ja_h) * l + n2 * ja_s / (2.0 * l);
    let c1 = g * a_g + h * ja_g - g * ja_h + h * a_h;
    let c2 = -g * ja_g - g * a_h + h * a_g - h * ja_h;
    let (a, ja, ta) = (vec_at(&s.a)?, vec_at(&s.ja)?, vec_at(&s.t)?);
    let xi: Vec<f64> = (0..4).map(|i| g * a[i] + h * ja[i]).collect();
    let jxi: Vec<f64> = (0..4).map(|i| g * ja[i] - h * a[i]).collect();
    let xi_mu = g * a_mu + h * ja_mu;
    let jxi_mu = g * ja_mu - h * a_mu;
    let t: Vec<f64> = (0..4)
        .map(|i| (n2 * ta[i] + c1 * ja[i] + c2 * a[i]) / mu - (xi_mu * jxi[i] - jxi_mu * xi[i]) / (2.0 * mu * mu))
        .collect();
    let jm: Vec<Vec<f64>> = data.j.iter().map(|r| r.iter().map(const_f64).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let jt: Vec<f64> = jm.iter().map(|r| r.iter().zip(&t).map(|(x, y)| x * y).sum()).collect();
    let sgn = if flip { -1.0 } else { 1.0 };
    let root = libm::sqrt(mu);
    let x: Vec<f64> = xi.iter().map(|v| sgn * v / root).collect();
    let jx: Vec<f64> = jxi.iter().map(|v| sgn * v / root).collect();
    Ok([PointVector::Approx(x), PointVector::Approx(jx), PointVector::Approx(t), PointVector::Approx(jt)])
}

pub fn distinguished_field(j: &AlmostComplexStructure, p: &[Rational; 4]) -> Result<DistinguishedField> {
    let data = PointData::new(j, p)?;
    let secs = nondegenerate_sections(j, &data)?;
    let s = secs.first().ok_or(Error::Degenerate)?;
    distinguished_from_section(j, &data, s)
}

pub fn adapted_frames_at(j: &AlmostComplexStructure, p: &[Rational; 4], sign: Sign) -> Result<(FrameAt, FrameAt)> {
    Ok(distinguished_field(j, p)?.frames(sign))
}

/// Dimensions of `V_p`, `V₋₂|p`, `V₋₃|p` from a generating section.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Filtration {
    pub dim_v: usize,
    pub dim_v2: usize,
    pub dim_v3: usize,
}

impl Filtration {
    pub fn fundamentality(&self) -> Option<Fundamentality> {
        match self.dim_v3 {
            4 => Some(Fundamentality::Fundamental),
            d if d == self.dim_v2 => Some(Fundamentality::NonFundamental),
            _ => None,
        }
    }
}

/// `V₋₂ = ⟨A, JA, T^A⟩_p`, `V₋₃ = V₋₂ + ⟨[A,T^A], [JA,T^A]⟩_p`. Brackets
/// with function coefficients only add vectors already in these spans.
pub fn filtration_from_section(data: &PointData, s: &Section) -> Result<Filtration> {
    let p = &data.point;
    let mut v2 = alloc::vec![eval_field(&s.a, p)?, eval_field(&s.ja, p)?, eval_field(&s.t, p)?];
    let dim_v2 = linalg::rank(&v2);
    v2.push(eval_field(&s.a.bracket(&s.t), p)?);
    v2.push(eval_field(&s.ja.bracket(&s.t), p)?);
    Ok(Filtration { dim_v: linalg::rank(&data.values), dim_v2, dim_v3: linalg::rank(&v2) })
}

pub fn filtration_at(j: &AlmostComplexStructure, p: &[Rational; 4]) -> Result<(Filtration, Fundamentality)> {
    let data = PointData::new(j, p)?;
    let secs = nondegenerate_sections(j, &data)?;
    let s = secs.first().ok_or(Error::Degenerate)?;
    let f = filtration_from_section(&data, s)?;
    let fund = f.fundamentality().ok_or(Error::TorsionDimension(f.dim_v3))?;
    Ok((f, fund))
}

/// Full record of the analysis at one point.
#[derive(Debug, Clone)]
pub struct TorsionAnalysis {
    pub point: [Rational; 4],
    pub v_basis: Vec<Vec<RatExpr>>,
    pub nondegenerate: bool,
    pub distinguished: Option<DistinguishedField>,
    pub filtration: Option<Filtration>,
    pub fundamentality: Option<Fundamentality>,
}

impl TorsionAnalysis {
    pub fn dim_v(&self) -> usize {
        self.v_basis.len()
    }

    /// `dim V_p = 4` lies outside the setting of the theory.
    pub fn outside_hypotheses(&self) -> bool {
        self.v_basis.len() == 4
    }
}

pub fn analyze(j: &AlmostComplexStructure, p: &[Rational; 4]) -> Result<TorsionAnalysis> {
    let data = PointData::new(j, p)?;
    let v_basis = data.torsion_basis();
    let mut out = TorsionAnalysis {
        point: p.clone(),
        v_basis,
        nondegenerate: false,
        distinguished: None,
        filtration: None,
        fundamentality: None,
    };
    if out.v_basis.len() != 2 {
        return Ok(out);
    }
    let secs = nondegenerate_sections(j, &data)?;
    let Some(s) = secs.first() else { return Ok(out) };
    out.nondegenerate = true;
    let f = filtration_from_section(&data, s)?;
    out.fundamentality = f.fundamentality();
    out.filtration = Some(f);
    out.distinguished = Some(distinguished_from_section(j, &data, s)?);
    Ok(out)
}

/// The +λ eigenline of `τ^A` at `p` for a given section, as a vector of
/// `V_p`. Used to check that the eigenspaces do not depend on `A`.
pub fn plus_eigenvector(data: &PointData, s: &Section) -> Result<Vec<RatExpr>> {
    let tau = tau_matrix_at(data, s)?;
    let a = eval_field(&s.a, &data.point)?;
    let ja = eval_field(&s.ja, &data.point)?;
    let sq = tau.lambda_sq();
    let nonneg = const_f64(&tau.alpha)? >= 0.0;
    let l = positive_sqrt(&sq, const_f64)?.ok_or_else(|| Error::TauSpectrum("lambda is not exact at p".to_string()))?;
    let (g, h, _) = eigen_coefficients(&tau.alpha, &tau.beta, &l, nonneg);
    Ok(combine(&g, &a, &h, &ja))
}

/// Value helper for reports.
pub fn value_at(f: &RatExpr, p: &[Rational; 4]) -> Result<Value> {
    Ok(f.evaluate(&point_lookup(p))?)
}
