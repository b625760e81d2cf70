//! Structure constants of 4-dimensional Lie algebras, their series and
//! center, the Killing form, and recognition of the catalog algebras used
//! in the theory.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::{RatExpr, Rational, SymbolTable};
use crate::linalg::{self, Matrix};
use crate::vectorfield::VectorField;

pub const DIM: usize = 4;

/// `c[i][j]` is the coordinate vector of `[e_i, e_j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    c: Vec<Vec<Vec<RatExpr>>>,
}

fn zero_vec() -> Vec<RatExpr> {
    vec![RatExpr::zero(); DIM]
}

fn unit(i: usize) -> Vec<RatExpr> {
    let mut v = zero_vec();
    v[i] = RatExpr::one();
    v
}

fn add_v(a: &[RatExpr], b: &[RatExpr]) -> Vec<RatExpr> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn scale_v(k: &RatExpr, a: &[RatExpr]) -> Vec<RatExpr> {
    a.iter().map(|x| k.mul(x)).collect()
}

fn sub_v(a: &[RatExpr], b: &[RatExpr]) -> Vec<RatExpr> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

fn is_zero_v(a: &[RatExpr]) -> bool {
    a.iter().all(RatExpr::is_zero)
}

impl StructureConstants {
    pub fn zero() -> Self {
        StructureConstants { c: vec![vec![zero_vec(); DIM]; DIM] }
    }

    /// Set `[e_i, e_j] = v` and `[e_j, e_i] = -v`.
    pub fn set(&mut self, i: usize, j: usize, v: Vec<RatExpr>) {
        assert!(i != j || is_zero_v(&v), "[e_i, e_i] must vanish");
        self.c[j][i] = v.iter().map(RatExpr::neg).collect();
        self.c[i][j] = v;
    }

    /// From `(i, j, k, value)` entries with 0-based indices; repeated
    /// `(i, j)` pairs accumulate. Checks the Jacobi identity.
    pub fn from_entries(entries: &[(usize, usize, usize, RatExpr)]) -> Result<Self> {
        let mut sc = Self::zero();
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= DIM || j >= DIM || k >= DIM {
                return Err(Error::InvalidStructureConstants(format!("index out of range in ({i},{j},{k})")));
            }
            if i == j {
                return Err(Error::InvalidStructureConstants(format!("[e{0},e{0}] must vanish", i + 1)));
            }
            let mut cur = sc.c[i][j].clone();
            cur[k] = cur[k].add(v);
            sc.set(i, j, cur);
        }
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((i, j, k)) = self.jacobi_failure() {
            return Err(Error::InvalidStructureConstants(format!("Jacobi identity for (e{}, e{}, e{})", i + 1, j + 1, k + 1)));
        }
        Ok(())
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[RatExpr] {
        &self.c[i][j]
    }

    pub fn bracket(&self, u: &[RatExpr], v: &[RatExpr]) -> Vec<RatExpr> {
        let mut out = zero_vec();
        for i in 0..DIM {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if i == j || v[j].is_zero() || is_zero_v(&self.c[i][j]) {
                    continue;
                }
                out = add_v(&out, &scale_v(&u[i].mul(&v[j]), &self.c[i][j]));
            }
        }
        out
    }

    /// Nonzero entries `(i, j, k, c_ij^k)` with `i < j`, 0-based.
    pub fn entries(&self) -> Vec<(usize, usize, usize, RatExpr)> {
        let mut out = Vec::new();
        for i in 0..DIM {
            for j in i + 1..DIM {
                for k in 0..DIM {
                    if !self.c[i][j][k].is_zero() {
                        out.push((i, j, k, self.c[i][j][k].clone()));
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.entries().is_empty()
    }

    fn jacobi_failure(&self) -> Option<(usize, usize, usize)> {
        for i in 0..DIM {
            for j in i + 1..DIM {
                for k in j + 1..DIM {
                    let (a, b, c) = (unit(i), unit(j), unit(k));
                    let t1 = self.bracket(&self.bracket(&a, &b), &c);
                    let t2 = self.bracket(&self.bracket(&b, &c), &a);
                    let t3 = self.bracket(&self.bracket(&c, &a), &b);
                    if !is_zero_v(&add_v(&add_v(&t1, &t2), &t3)) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_jacobi(&self) -> bool {
        self.jacobi_failure().is_none()
    }

    /// Matrix of `ad(x)`, column `j` is `[x, e_j]`.
    pub fn ad(&self, x: &[RatExpr]) -> Matrix<RatExpr> {
        let cols: Vec<Vec<RatExpr>> = (0..DIM).map(|j| self.bracket(x, &unit(j))).collect();
        (0..DIM).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect()
    }

    /// Structure constants in a new basis whose vectors (in old coordinates)
    /// are the given rows.
    pub fn change_basis(&self, basis: &[Vec<RatExpr>]) -> Result<StructureConstants> {
        let cols: Matrix<RatExpr> = (0..DIM).map(|r| basis.iter().map(|b| b[r].clone()).collect()).collect();
        let inv = linalg::inverse(&cols).ok_or(Error::Dependent)?;
        let mut out = Self::zero();
        for i in 0..DIM {
            for j in i + 1..DIM {
                let v = self.bracket(&basis[i], &basis[j]);
                out.set(i, j, linalg::mat_vec(&inv, &v));
            }
        }
        Ok(out)
    }

    pub fn substitute(&self, value: &dyn Fn(crate::expr::Sym) -> Option<Rational>) -> Result<StructureConstants> {
        let mut out = Self::zero();
        for i in 0..DIM {
            for j in i + 1..DIM {
                let v = self.c[i][j].iter().map(|x| x.substitute(value)).collect::<core::result::Result<Vec<_>, _>>()?;
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

/// Span of all brackets `[u, w]` with `u ∈ U`, `w ∈ W`.
pub fn bracket_span(sc: &StructureConstants, u: &[Vec<RatExpr>], w: &[Vec<RatExpr>]) -> Vec<Vec<RatExpr>> {
    let mut out = Vec::new();
    for a in u {
        for b in w {
            let v = sc.bracket(a, b);
            if !is_zero_v(&v) {
                out.push(v);
            }
        }
    }
    linalg::span_basis(&out)
}

pub fn full_basis() -> Vec<Vec<RatExpr>> {
    (0..DIM).map(unit).collect()
}

pub fn derived_algebra(sc: &StructureConstants) -> Vec<Vec<RatExpr>> {
    let g = full_basis();
    bracket_span(sc, &g, &g)
}

pub fn center(sc: &StructureConstants) -> Vec<Vec<RatExpr>> {
    // x central iff [x, e_j] = 0 for all j: stack the ad-columns as rows
    let mut rows: Matrix<RatExpr> = Vec::new();
    for j in 0..DIM {
        for k in 0..DIM {
            rows.push((0..DIM).map(|i| sc.c[i][j][k].clone()).collect());
        }
    }
    linalg::nullspace(&rows, DIM)
}

/// Decompose the brackets of a frame in the frame itself. Fails unless every
/// coefficient is constant on the chart.
pub fn frame_structure_constants(frame: &[VectorField; 4], symbols: &SymbolTable) -> Result<StructureConstants> {
    let cols = crate::acstructure::columns(&[&frame[0], &frame[1], &frame[2], &frame[3]]);
    let inv = linalg::inverse(&cols).ok_or(Error::SingularFrame)?;
    let mut sc = StructureConstants::zero();
    for i in 0..DIM {
        for j in i + 1..DIM {
            let b = frame[i].bracket(&frame[j]);
            let coef = linalg::mat_vec(&inv, b.components());
            let mut v = zero_vec();
            for (k, f) in coef.iter().enumerate() {
                if !f.is_constant_in(symbols.coordinates()) {
                    return Err(Error::NotLocallyHomogeneous { i: i + 1, j: j + 1, k: k + 1, coefficient: f.format(symbols) });
                }
                v[k] = constant_value(f)?;
            }
            sc.set(i, j, v);
        }
    }
    sc.validate()?;
    Ok(sc)
}

/// Drop the (vacuous) coordinate dependence of a constant expression by
/// evaluating at a point where the denominator does not vanish.
fn constant_value(f: &RatExpr) -> Result<RatExpr> {
    const TRIES: [[i64; 4]; 4] = [[0, 0, 0, 0], [1, 1, 1, 1], [1, 2, 3, 5], [-3, 7, 2, -11]];
    let mut last = None;
    for t in TRIES {
        let look = move |s: crate::expr::Sym| ((s as usize) < 4).then(|| Rational::from_integer(t[s as usize].into()));
        match f.substitute(&look) {
            Ok(v) => return Ok(v),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt").into())
}

/// Killing form `K(x, y) = tr(ad x ad y)` on the basis.
pub fn killing_form(sc: &StructureConstants) -> Matrix<RatExpr> {
    let ads: Vec<Matrix<RatExpr>> = (0..DIM).map(|i| sc.ad(&unit(i))).collect();
    (0..DIM)
        .map(|i| {
            (0..DIM)
                .map(|j| {
                    let p = linalg::mat_mul(&ads[i], &ads[j]);
                    (0..DIM).fold(RatExpr::zero(), |acc, k| acc.add(&p[k][k]))
                })
                .collect()
        })
        .collect()
}

/// Signature `(positive, negative, zero)` of a symmetric matrix by
/// congruence diagonalization; `None` if a sign cannot be decided.
pub fn signature(m: &Matrix<RatExpr>) -> Option<(usize, usize, usize)> {
    let n = m.len();
    let mut a = m.clone();
    let mut diag = Vec::new();
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&first) = active.first() {
        let _ = first;
        let piv = active.iter().copied().find(|&i| !a[i][i].is_zero());
        let p = match piv {
            Some(p) => p,
            None => {
                // all diagonal entries vanish: combine two indices
                let pair = active.iter().flat_map(|&i| active.iter().map(move |&j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero());
                match pair {
                    None => break,
                    Some((i, j)) => {
                        // e_i <- e_i + e_j
                        for k in 0..n {
                            a[i][k] = a[i][k].add(&a[j][k]);
                        }
                        for k in 0..n {
                            a[k][i] = a[k][i].add(&a[k][j]);
                        }
                        i
                    }
                }
            }
        };
        let d = a[p][p].clone();
        active.retain(|&i| i != p);
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = a[i][p].div(&d).ok()?;
            for k in 0..n {
                let v = f.mul(&a[p][k]);
                a[i][k] = a[i][k].sub(&v);
            }
            for k in 0..n {
                let v = f.mul(&a[k][p]);
                a[k][i] = a[k][i].sub(&v);
            }
        }
        diag.push(d);
    }
    let (mut pos, mut neg) = (0, 0);
    for d in &diag {
        let v = d.evaluate(&|_| None).ok()?.to_f64();
        if v > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    Some((pos, neg, n - pos - neg))
}

/// Invariants of an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraReport {
    /// `dim g′, dim g^(2), …` until stable.
    pub derived_dims: Vec<usize>,
    /// `dim g′ = dim g¹, dim g², dim g³, …` until stable.
    pub lower_central_dims: Vec<usize>,
    pub center_dim: usize,
    pub solvable: bool,
    pub nilpotent: bool,
    pub killing_rank: usize,
    pub killing_signature: Option<(usize, usize, usize)>,
    pub tag: Option<CatalogTag>,
}

impl AlgebraReport {
    pub fn dim_derived(&self) -> usize {
        self.derived_dims[0]
    }

    pub fn dim_derived2(&self) -> usize {
        self.derived_dims.get(1).copied().unwrap_or(self.derived_dims[0])
    }

    /// `dim g²` (`dim g¹ = dim g′`).
    pub fn dim_lower2(&self) -> usize {
        self.lower_central_dims.get(1).copied().unwrap_or(self.lower_central_dims[0])
    }

    pub fn dim_lower3(&self) -> usize {
        self.lower_central_dims.get(2).copied().unwrap_or(self.dim_lower2())
    }
}

pub fn series_and_center(sc: &StructureConstants) -> AlgebraReport {
    let g = full_basis();
    let mut derived_dims = Vec::new();
    let mut cur = bracket_span(sc, &g, &g);
    loop {
        derived_dims.push(cur.len());
        let next = bracket_span(sc, &cur, &cur);
        if next.len() == cur.len() || cur.is_empty() {
            if !cur.is_empty() && next.len() == cur.len() {
                derived_dims.push(next.len());
            }
            break;
        }
        cur = next;
    }
    let mut lower_central_dims = Vec::new();
    let mut cur = bracket_span(sc, &g, &g);
    loop {
        lower_central_dims.push(cur.len());
        let next = bracket_span(sc, &g, &cur);
        if next.len() == cur.len() || cur.is_empty() {
            if !cur.is_empty() && next.len() == cur.len() {
                lower_central_dims.push(next.len());
            }
            break;
        }
        cur = next;
    }
    let solvable = *derived_dims.last().unwrap() == 0;
    let nilpotent = *lower_central_dims.last().unwrap() == 0;
    let k = killing_form(sc);
    AlgebraReport {
        derived_dims,
        lower_central_dims,
        center_dim: center(sc).len(),
        solvable,
        nilpotent,
        killing_rank: linalg::rank(&k),
        killing_signature: signature(&k),
        tag: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogTag {
    Abelian,
    /// Heisenberg ⊕ line: `[e2,e3] = e1`.
    A31A1,
    /// `[e2,e4] = e1`, `[e3,e4] = e2`.
    A41,
    /// `[e1,e3] = e1`, `[e2,e3] = e1 + e2`, `e4` central.
    A32A1,
    NonSolvable,
    Other,
}

impl CatalogTag {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogTag::Abelian => "abelian",
            CatalogTag::A31A1 => "A3.1+A1",
            CatalogTag::A41 => "A4.1",
            CatalogTag::A32A1 => "A3.2+A1",
            CatalogTag::NonSolvable => "non-solvable",
            CatalogTag::Other => "other",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [CatalogTag::Abelian, CatalogTag::A31A1, CatalogTag::A41, CatalogTag::A32A1, CatalogTag::NonSolvable, CatalogTag::Other]
            .into_iter()
            .find(|t| t.name() == s)
    }

    /// The defining table, when there is one.
    pub fn representative(&self) -> Option<StructureConstants> {
        let e = |v: &[i64]| v.iter().map(|&x| RatExpr::int(x)).collect::<Vec<_>>();
        let mut sc = StructureConstants::zero();
        match self {
            CatalogTag::Abelian => {}
            CatalogTag::A31A1 => sc.set(1, 2, e(&[1, 0, 0, 0])),
            CatalogTag::A41 => {
                sc.set(1, 3, e(&[1, 0, 0, 0]));
                sc.set(2, 3, e(&[0, 1, 0, 0]));
            }
            CatalogTag::A32A1 => {
                sc.set(0, 2, e(&[1, 0, 0, 0]));
                sc.set(1, 2, e(&[1, 1, 0, 0]));
            }
            CatalogTag::NonSolvable => {
                // sl(2) ⊕ R: [h,x] = 2x, [h,y] = -2y, [x,y] = h
                sc.set(0, 1, e(&[0, 2, 0, 0]));
                sc.set(0, 2, e(&[0, 0, -2, 0]));
                sc.set(1, 2, e(&[1, 0, 0, 0]));
            }
            CatalogTag::Other => return None,
        }
        Some(sc)
    }
}

impl core::fmt::Display for CatalogTag {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of catalog recognition.
#[derive(Debug, Clone)]
pub struct Classification {
    pub tag: CatalogTag,
    pub report: AlgebraReport,
    /// Basis (rows, in the original coordinates) in which the table is the
    /// catalog one; `None` for `Other`.
    pub basis: Option<Vec<Vec<RatExpr>>>,
    /// For non-solvable algebras: whether `g = g′ ⊕ z(g)`.
    pub reductive_split: Option<bool>,
    pub note: Option<String>,
}

/// Small integer combinations of basis vectors, used when searching for
/// generic elements.
fn candidates() -> Vec<Vec<RatExpr>> {
    let mut out: Vec<Vec<RatExpr>> = full_basis();
    for i in 0..DIM {
        for j in 0..DIM {
            if i < j {
                out.push(add_v(&unit(i), &unit(j)));
            }
            if i != j {
                out.push(add_v(&unit(i), &scale_v(&RatExpr::int(2), &unit(j))));
            }
        }
    }
    out.push((0..DIM).map(|i| RatExpr::int(i as i64 + 1)).collect());
    out
}

fn confirm(sc: &StructureConstants, tag: CatalogTag, basis: Vec<Vec<RatExpr>>) -> Option<Vec<Vec<RatExpr>>> {
    let new = sc.change_basis(&basis).ok()?;
    (new == tag.representative()?).then_some(basis)
}

fn build_a41(sc: &StructureConstants) -> Option<Vec<Vec<RatExpr>>> {
    let right = |v: &[RatExpr], y: &[RatExpr]| sc.bracket(v, y);
    for e4 in candidates() {
        for e3 in full_basis() {
            let e2 = right(&e3, &e4);
            let e1 = right(&e2, &e4);
            if is_zero_v(&e1) {
                continue;
            }
            let b23 = sc.bracket(&e2, &e3);
            let Some(k) = linalg::coordinates(core::slice::from_ref(&e1), &b23) else { continue };
            let e3 = sub_v(&e3, &scale_v(&k[0], &e4));
            let basis = vec![e1, e2, e3, e4.clone()];
            if linalg::rank(&basis) < DIM {
                continue;
            }
            if let Some(b) = confirm(sc, CatalogTag::A41, basis) {
                return Some(b);
            }
        }
    }
    None
}

fn build_a31(sc: &StructureConstants) -> Option<Vec<Vec<RatExpr>>> {
    let z = center(sc);
    for i in 0..DIM {
        for j in i + 1..DIM {
            let e1 = sc.bracket(&unit(i), &unit(j));
            if is_zero_v(&e1) {
                continue;
            }
            for e4 in &z {
                let basis = vec![e1.clone(), unit(i), unit(j), e4.clone()];
                if linalg::rank(&basis) < DIM {
                    continue;
                }
                if let Some(b) = confirm(sc, CatalogTag::A31A1, basis) {
                    return Some(b);
                }
            }
        }
    }
    None
}

/// Outcome of the Jordan test on `ad` restricted to `g′`.
enum Jordan {
    Block { e3: Vec<RatExpr> },
    Diagonal,
    Split,
}

fn jordan_on_derived(sc: &StructureConstants, g1: &[Vec<RatExpr>], z: &[Vec<RatExpr>]) -> Option<Jordan> {
    let mut span: Vec<Vec<RatExpr>> = g1.to_vec();
    span.extend_from_slice(z);
    let y = full_basis().into_iter().find(|b| !linalg::in_span(&span, b))?;
    // R(u) = [u, y] on g′ in the basis g1
    let cols: Vec<Vec<RatExpr>> = g1.iter().map(|u| linalg::coordinates(g1, &sc.bracket(u, &y))).collect::<Option<_>>()?;
    let (a, b, c, d) = (&cols[0][0], &cols[1][0], &cols[0][1], &cols[1][1]);
    let tr = a.add(d);
    let det = a.mul(d).sub(&b.mul(c));
    let disc = tr.mul(&tr).sub(&det.scale(&Rational::from_integer(4.into())));
    if !disc.is_zero() {
        return Some(Jordan::Split);
    }
    if b.is_zero() && c.is_zero() {
        return Some(Jordan::Diagonal);
    }
    let rho = tr.scale(&Rational::new(1.into(), 2.into()));
    if rho.is_zero() {
        return Some(Jordan::Split);
    }
    Some(Jordan::Block { e3: scale_v(&RatExpr::one().div(&rho).ok()?, &y) })
}

fn build_a32(sc: &StructureConstants, g1: &[Vec<RatExpr>], z: &[Vec<RatExpr>], e3: Vec<RatExpr>) -> Option<Vec<Vec<RatExpr>>> {
    let e4 = z.first()?.clone();
    for u in g1 {
        let ru = sc.bracket(u, &e3);
        let e1 = sub_v(&ru, u);
        if is_zero_v(&e1) {
            continue;
        }
        let basis = vec![e1, u.clone(), e3.clone(), e4.clone()];
        if let Some(b) = confirm(sc, CatalogTag::A32A1, basis) {
            return Some(b);
        }
    }
    None
}

pub fn classify(sc: &StructureConstants) -> Classification {
    let mut report = series_and_center(sc);
    let fp = report.clone();
    let mut out = |tag: CatalogTag, basis: Option<Vec<Vec<RatExpr>>>, split: Option<bool>, note: Option<String>| {
        report.tag = Some(tag);
        Classification { tag, report: report.clone(), basis, reductive_split: split, note }
    };
    if sc.is_abelian() {
        return out(CatalogTag::Abelian, Some(full_basis()), None, None);
    }
    let g1 = derived_algebra(sc);
    let z = center(sc);
    if !fp.solvable {
        let mut all = g1.clone();
        all.extend_from_slice(&z);
        let split = g1.len() == 3 && z.len() == 1 && linalg::rank(&all) == DIM;
        let basis = split.then_some(all);
        return out(CatalogTag::NonSolvable, basis, Some(split), None);
    }
    if fp.nilpotent {
        let (tag, basis) = match g1.len() {
            1 => (CatalogTag::A31A1, build_a31(sc)),
            2 => (CatalogTag::A41, build_a41(sc)),
            _ => (CatalogTag::Other, None),
        };
        return match basis {
            Some(b) => out(tag, Some(b), None, None),
            None => out(CatalogTag::Other, None, None, Some(format!("nilpotent, fingerprint {:?}", fp.lower_central_dims))),
        };
    }
    if g1.len() == 2 && fp.dim_derived2() == 0 && fp.dim_lower2() == 2 && z.len() == 1 {
        if let Some(Jordan::Block { e3 }) = jordan_on_derived(sc, &g1, &z) {
            if let Some(b) = build_a32(sc, &g1, &z, e3) {
                return out(CatalogTag::A32A1, Some(b), None, None);
            }
        }
    }
    let note = format!(
        "derived {:?}, lower central {:?}, center {}, killing rank {}",
        fp.derived_dims, fp.lower_central_dims, fp.center_dim, fp.killing_rank
    );
    out(CatalogTag::Other, None, None, Some(note))
}

/// Subspaces used by the intersection statements.
#[derive(Debug, Clone)]
pub struct Filtrations {
    pub v: Vec<Vec<RatExpr>>,
    pub v2: Vec<Vec<RatExpr>>,
    pub v3: Vec<Vec<RatExpr>>,
}

/// `V₋₂ = V + [V,V]`, `V₋₃ = V₋₂ + [V,[V,V]]` inside the algebra.
pub fn filtrations(sc: &StructureConstants, v: &[Vec<RatExpr>]) -> Filtrations {
    let v = linalg::span_basis(v);
    let vv = bracket_span(sc, &v, &v);
    let mut v2 = v.clone();
    v2.extend(vv.iter().cloned());
    let v2 = linalg::span_basis(&v2);
    let vvv = bracket_span(sc, &v, &vv);
    let mut v3 = v2.clone();
    v3.extend(vvv);
    let v3 = linalg::span_basis(&v3);
    Filtrations { v, v2, v3 }
}

/// The equivalent statements for the catalog algebras, evaluated literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clauses {
    pub tag: CatalogTag,
    /// `(a)…(d)` for A4.1, `(a),(b)` for A3.2⊕A1.
    pub unprimed: Vec<(&'static str, bool)>,
    /// `(a′)…(d′)` for A4.1, `(a′),(b′)` for A3.2⊕A1.
    pub primed: Vec<(&'static str, bool)>,
}

impl Clauses {
    fn agree(v: &[(&str, bool)]) -> bool {
        v.windows(2).all(|w| w[0].1 == w[1].1)
    }

    pub fn unprimed_agree(&self) -> bool {
        Self::agree(&self.unprimed)
    }

    pub fn primed_agree(&self) -> bool {
        Self::agree(&self.primed)
    }
}

/// Evaluate the clauses. `eigenline` decides whether a line of `V` is one
/// of the τ-eigenlines `V±`; it is only consulted for A4.1 clause `(d)`.
pub fn evaluate_clauses(
    sc: &StructureConstants,
    tag: CatalogTag,
    v: &[Vec<RatExpr>],
    eigenline: &dyn Fn(&[RatExpr]) -> Option<bool>,
) -> Option<Clauses> {
    let f = filtrations(sc, v);
    let g1 = derived_algebra(sc);
    let cap = linalg::intersection(&f.v, &g1);
    let dim_cap = cap.len();
    let dim_cap2 = linalg::intersection_dim(&f.v2, &g1);
    match tag {
        CatalogTag::A41 => {
            let nonfund = f.v3.len() == f.v2.len();
            let fund = f.v3.len() == DIM;
            let g1_in_v2 = g1.iter().all(|x| linalg::in_span(&f.v2, x));
            let d = dim_cap == 1 && eigenline(&cap[0]).unwrap_or(false);
            Some(Clauses {
                tag,
                unprimed: vec![("a", dim_cap == 1), ("b", nonfund), ("c", g1_in_v2), ("d", d)],
                primed: vec![("a'", dim_cap == 0), ("b'", fund), ("c'", !g1_in_v2), ("d'", cap.is_empty())],
            })
        }
        CatalogTag::A32A1 => Some(Clauses {
            tag,
            unprimed: vec![("a", dim_cap == 1), ("b", dim_cap2 == 2)],
            primed: vec![("a'", dim_cap == 0), ("b'", dim_cap2 == 1)],
        }),
        _ => None,
    }
}

/// Checks of the general statements on the associated algebra.
#[derive(Debug, Clone)]
pub struct PropReport {
    pub dim_derived: usize,
    /// `2 ≤ dim g′ ≤ 3`.
    pub derived_in_range: bool,
    /// For non-solvable algebras: `dim g′ = 3` and `g = g′ ⊕ z(g)`.
    pub nonsolvable_split: Option<bool>,
    /// `z(g) ∩ V = {0}`.
    pub center_meets_v_trivially: bool,
    pub clauses: Option<Clauses>,
    pub violations: Vec<String>,
}

impl PropReport {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `v` defaults to the span of the first two basis vectors (`X`, `JX` of an
/// adapted frame).
pub fn check_structure_props(sc: &StructureConstants, v: Option<&[Vec<RatExpr>]>, eigenline: &dyn Fn(&[RatExpr]) -> Option<bool>) -> PropReport {
    let default_v = vec![unit(0), unit(1)];
    let v = v.unwrap_or(&default_v);
    let cls = classify(sc);
    let g1 = derived_algebra(sc);
    let z = center(sc);
    let mut violations = Vec::new();
    let in_range = (2..=3).contains(&g1.len());
    if !in_range {
        violations.push(format!("dim g' = {} is outside [2, 3]", g1.len()));
    }
    let split = cls.reductive_split;
    if split == Some(false) {
        violations.push("non-solvable algebra without the g' + z(g) split".into());
    }
    let center_ok = linalg::intersection_dim(&z, v) == 0;
    if !center_ok {
        violations.push("z(g) meets V".into());
    }
    let clauses = evaluate_clauses(sc, cls.tag, v, eigenline);
    if let Some(c) = &clauses {
        if !c.unprimed_agree() {
            violations.push(format!("{} clauses disagree: {:?}", cls.tag, c.unprimed));
        }
        if !c.primed_agree() {
            violations.push(format!("{} primed clauses disagree: {:?}", cls.tag, c.primed));
        }
    }
    PropReport {
        dim_derived: g1.len(),
        derived_in_range: in_range,
        nonsolvable_split: split,
        center_meets_v_trivially: center_ok,
        clauses,
        violations,
    }
}

/// Whether a linear map between algebras preserves brackets; `map` rows are
/// the images of the basis vectors.
pub fn is_homomorphism(src: &StructureConstants, dst: &StructureConstants, map: &[Vec<RatExpr>]) -> bool {
    let img = |v: &[RatExpr]| -> Vec<RatExpr> {
        (0..DIM).fold(zero_vec(), |acc, i| add_v(&acc, &scale_v(&v[i], &map[i])))
    };
    (0..DIM).all(|i| (i + 1..DIM).all(|j| img(src.basis_bracket(i, j)) == dst.bracket(&map[i], &map[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a41_series() {
        let sc = CatalogTag::A41.representative().unwrap();
        let r = series_and_center(&sc);
        assert_eq!(r.dim_derived(), 2);
        assert_eq!(r.dim_derived2(), 0);
        assert_eq!(r.dim_lower2(), 1);
        assert_eq!(r.dim_lower3(), 0);
        assert_eq!(r.center_dim, 1);
        assert!(r.nilpotent && r.solvable);
        assert_eq!(center(&sc), vec![unit(0)]);
    }

    #[test]
    fn a32_series() {
        let sc = CatalogTag::A32A1.representative().unwrap();
        let r = series_and_center(&sc);
        assert_eq!((r.dim_derived(), r.dim_derived2(), r.dim_lower2(), r.center_dim), (2, 0, 2, 1));
        assert!(r.solvable && !r.nilpotent);
    }

    #[test]
    fn catalog_recognized() {
        for tag in [CatalogTag::Abelian, CatalogTag::A31A1, CatalogTag::A41, CatalogTag::A32A1, CatalogTag::NonSolvable] {
            let sc = tag.representative().unwrap();
            assert_eq!(classify(&sc).tag, tag);
        }
    }

    #[test]
    fn jacobi_is_enforced() {
        let e = |i: usize| (i, i, 0usize, RatExpr::one());
        assert!(StructureConstants::from_entries(&[e(0)]).is_err());
        // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e2 plus a stray term
        let bad = [(0, 1, 2, RatExpr::one()), (1, 2, 0, RatExpr::one()), (0, 3, 0, RatExpr::one())];
        assert!(StructureConstants::from_entries(&bad).is_err());
    }
}
