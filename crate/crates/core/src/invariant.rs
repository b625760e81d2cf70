//! Left-invariant structures: a constant `J` on a Lie algebra, with all
//! brackets taken from structure constants. Entries may contain parameters;
//! ranks are then generic ranks over the field of rational functions.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::expr::{parse, RatExpr, Rational, Sym, SymbolTable};
use crate::liealg::{self, CatalogTag, Clauses, StructureConstants};
use crate::linalg::{self, Matrix};
use crate::torsion::{self, Fundamentality, PointVector};

#[derive(Debug, Clone)]
pub struct InvariantModel {
    pub sc: StructureConstants,
    pub j: Matrix<RatExpr>,
    /// Expressions assumed nonvanishing.
    pub constraints: Vec<RatExpr>,
    pub symbols: SymbolTable,
}

fn is_zero_v(v: &[RatExpr]) -> bool {
    v.iter().all(RatExpr::is_zero)
}

impl InvariantModel {
    pub fn new(sc: StructureConstants, j: Matrix<RatExpr>, constraints: Vec<RatExpr>, symbols: SymbolTable) -> Result<Self> {
        sc.validate()?;
        let sq = linalg::mat_mul(&j, &j);
        for (r, row) in sq.iter().enumerate() {
            for (c, x) in row.iter().enumerate() {
                let target = if r == c { RatExpr::int(-1) } else { RatExpr::zero() };
                if *x != target {
                    return Err(Error::NotAlmostComplex { row: r, col: c, residual: x.sub(&target).format(&symbols) });
                }
            }
        }
        Ok(InvariantModel { sc, j, constraints, symbols })
    }

    pub fn apply_j(&self, v: &[RatExpr]) -> Vec<RatExpr> {
        linalg::mat_vec(&self.j, v)
    }

    pub fn bracket(&self, u: &[RatExpr], v: &[RatExpr]) -> Vec<RatExpr> {
        self.sc.bracket(u, v)
    }

    /// `N(X,Y) = [JX,JY] - [X,Y] - J([JX,Y] + [X,JY])`.
    pub fn nijenhuis(&self, x: &[RatExpr], y: &[RatExpr]) -> Vec<RatExpr> {
        let jx = self.apply_j(x);
        let jy = self.apply_j(y);
        let a = self.bracket(&jx, &jy);
        let b = self.bracket(x, y);
        let c = self.bracket(&jx, y);
        let d = self.bracket(x, &jy);
        let inner: Vec<RatExpr> = c.iter().zip(&d).map(|(p, q)| p.add(q)).collect();
        let jc = self.apply_j(&inner);
        (0..4).map(|k| a[k].sub(&b[k]).sub(&jc[k])).collect()
    }

    pub fn has_parameters(&self) -> bool {
        !self.symbols.is_empty()
    }

    /// Bind every parameter. Fails when a constraint vanishes or `J` has a
    /// pole at the chosen values.
    pub fn specialize(&self, values: &[(String, Rational)]) -> Result<InvariantModel> {
        let look = |s: Sym| {
            let name = self.symbols.name(s);
            values.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone())
        };
        for c in &self.constraints {
            let v = c.substitute(&look)?;
            if v.is_zero() {
                return Err(Error::ConstraintViolated(c.format(&self.symbols)));
            }
        }
        let j = self.j.iter().map(|r| r.iter().map(|x| x.substitute(&look)).collect::<core::result::Result<Vec<_>, _>>()).collect::<core::result::Result<Vec<_>, _>>()?;
        let sc = self.sc.substitute(&look)?;
        InvariantModel::new(sc, j, Vec::new(), SymbolTable::params_only::<&str>(&[])?)
    }
}

pub fn nijenhuis_invariant(m: &InvariantModel, x: &[RatExpr], y: &[RatExpr]) -> Vec<RatExpr> {
    m.nijenhuis(x, y)
}

/// The `J` with `J(ξ) = Jξ`, `J(Jξ) = -ξ`, `J(η) = Jη`, `J(Jη) = -η`.
pub fn build_from_frame_spec(
    sc: StructureConstants,
    frame: [Vec<RatExpr>; 4],
    constraints: Vec<RatExpr>,
    symbols: SymbolTable,
) -> Result<InvariantModel> {
    let [xi, jxi, eta, jeta] = &frame;
    let cols = |vs: [&Vec<RatExpr>; 4]| -> Matrix<RatExpr> { (0..4).map(|r| vs.iter().map(|v| v[r].clone()).collect()).collect() };
    let f = cols([xi, jxi, eta, jeta]);
    let finv = linalg::inverse(&f).ok_or(Error::Dependent)?;
    let neg = |v: &Vec<RatExpr>| v.iter().map(RatExpr::neg).collect::<Vec<_>>();
    let (mxi, meta) = (neg(xi), neg(eta));
    let image = cols([jxi, &mxi, jeta, &meta]);
    InvariantModel::new(sc, linalg::mat_mul(&image, &finv), constraints, symbols)
}

/// The parametrized families of the theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// A4.1, `ξ = ke₁ + he₂` with `t = 0`, `y = kz/h`.
    A41NonFundamental,
    /// A4.1 normalized so that `N(ξ,η) = ξ`.
    A41Normalized,
    /// A3.2⊕A1 with `dim(V ∩ g′) = 1`.
    A32Family,
}

pub struct FamilyData {
    pub params: &'static [&'static str],
    /// `ξ, Jξ, η, Jη` in the basis `e₁..e₄`.
    pub frame: [[&'static str; 4]; 4],
    pub constraints: &'static [&'static str],
    /// The claimed `N(ξ,η)` as coefficients of `(ξ, Jξ, η, Jη)`.
    pub claim: [&'static str; 4],
    pub algebra: CatalogTag,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A41NonFundamental, Family::A41Normalized, Family::A32Family];

    pub fn name(&self) -> &'static str {
        match self {
            Family::A41NonFundamental => "a41-nonfundamental",
            Family::A41Normalized => "a41-normalized",
            Family::A32Family => "a32-family",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Self::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s))
    }

    pub fn data(&self) -> FamilyData {
        match self {
            Family::A41NonFundamental => FamilyData {
                params: &["k", "h", "a", "b", "c", "d", "x", "z"],
                frame: [
                    ["k", "h", "0", "0"],
                    ["a", "b", "c", "d"],
                    ["h*d", "0", "0", "0"],
                    ["x", "k*z/h", "z", "0"],
                ],
                constraints: &["h", "d", "z"],
                claim: ["-d*z/h", "0", "0", "0"],
                algebra: CatalogTag::A41,
            },
            Family::A41Normalized => FamilyData {
                params: &["k", "a", "b", "c", "d", "x", "z"],
                frame: [
                    ["k", "-d*z", "0", "0"],
                    ["a", "b", "c", "d"],
                    ["-d^2*z", "0", "0", "0"],
                    ["x", "-k/d", "z", "0"],
                ],
                constraints: &["d", "z"],
                claim: ["1", "0", "0", "0"],
                algebra: CatalogTag::A41,
            },
            Family::A32Family => FamilyData {
                params: &["k", "a", "b", "c", "d", "y", "t"],
                frame: [
                    ["k", "1", "0", "0"],
                    ["a", "b", "c", "d"],
                    ["c*(k + 1)", "c", "0", "0"],
                    ["2*a*c + (k - 1)*(y - 2*b*c)", "y", "2*c^2", "t"],
                ],
                constraints: &["c", "t - 2*c*d"],
                claim: ["c*(2*b*c - y)", "-c^2", "0", "0"],
                algebra: CatalogTag::A32A1,
            },
        }
    }
}

/// A family with its symbolic model and frame.
#[derive(Debug, Clone)]
pub struct FamilyModel {
    pub family: Family,
    pub model: InvariantModel,
    pub frame: [Vec<RatExpr>; 4],
    pub claim: [RatExpr; 4],
}

pub fn family_model(f: Family) -> Result<FamilyModel> {
    let d = f.data();
    let symbols = SymbolTable::params_only(d.params)?;
    let p = |s: &str| parse(s, &symbols).map_err(Error::from);
    let frame: [Vec<RatExpr>; 4] = {
        let mut out: Vec<Vec<RatExpr>> = Vec::new();
        for row in &d.frame {
            out.push(row.iter().map(|s| p(s)).collect::<Result<Vec<_>>>()?);
        }
        out.try_into().expect("four vectors")
    };
    let constraints = d.constraints.iter().map(|s| p(s)).collect::<Result<Vec<_>>>()?;
    let claim = [p(d.claim[0])?, p(d.claim[1])?, p(d.claim[2])?, p(d.claim[3])?];
    let sc = d.algebra.representative().expect("catalog algebra");
    let model = build_from_frame_spec(sc, frame.clone(), constraints, symbols)?;
    Ok(FamilyModel { family: f, model, frame, claim })
}

/// `N(ξ,η)` minus the claimed closed form; identically zero when the claim
/// holds.
pub fn verify_family(f: Family) -> Result<Vec<RatExpr>> {
    let fm = family_model(f)?;
    let [xi, _, eta, _] = &fm.frame;
    let n = fm.model.nijenhuis(xi, eta);
    let claimed = (0..4).fold(vec![RatExpr::zero(); 4], |acc, i| {
        acc.iter().zip(&fm.frame[i]).map(|(a, b)| a.add(&fm.claim[i].mul(b))).collect()
    });
    Ok(n.iter().zip(&claimed).map(|(a, b)| a.sub(b)).collect())
}

/// Where `V ∩ g′` sits inside `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intersection {
    Zero,
    VPlus,
    VMinus,
    /// A τ-eigenline whose sign could not be decided (symbolic parameters).
    Eigenline,
    OtherLine,
    Plane,
}

impl Intersection {
    pub fn name(&self) -> &'static str {
        match self {
            Intersection::Zero => "zero",
            Intersection::VPlus => "V+",
            Intersection::VMinus => "V-",
            Intersection::Eigenline => "eigenline",
            Intersection::OtherLine => "other-line",
            Intersection::Plane => "plane",
        }
    }
}

/// Torsion analysis carried out inside the algebra.
#[derive(Debug, Clone)]
pub struct InvariantAnalysis {
    pub v_basis: Vec<Vec<RatExpr>>,
    /// `A` and `T^A = [A, JA]`.
    pub generator: Vec<RatExpr>,
    pub t_generator: Vec<RatExpr>,
    pub dim_v2: usize,
    pub dim_v3: usize,
    pub fundamentality: Option<Fundamentality>,
    /// `τ^A(A) = αA + βJA`.
    pub alpha: RatExpr,
    pub beta: RatExpr,
    /// `λ`, `ξ`, `μ` when the parameters are bound.
    pub lambda: Option<RatExpr>,
    pub xi: Option<Vec<RatExpr>>,
    pub mu: Option<RatExpr>,
    /// `(X, JX, T, JT)` in canonical sign.
    pub frame: Option<[PointVector; 4]>,
    pub dim_v_cap_g1: usize,
    pub dim_v2_cap_g1: usize,
    pub intersection: Intersection,
    pub center_meets_v: bool,
    pub tag: CatalogTag,
    pub clauses: Option<Clauses>,
}

impl InvariantAnalysis {
    pub fn dim_v(&self) -> usize {
        self.v_basis.len()
    }
}

fn tau(m: &InvariantModel, a: &[RatExpr], ja: &[RatExpr], t: &[RatExpr]) -> Result<(RatExpr, RatExpr)> {
    let basis = vec![a.to_vec(), ja.to_vec()];
    let spectrum = |s: &str| Error::TauSpectrum(s.to_string());
    let ta = linalg::coordinates(&basis, &m.nijenhuis(a, t)).ok_or_else(|| spectrum("N(A,T) leaves V"))?;
    let tja = linalg::coordinates(&basis, &m.nijenhuis(ja, t)).ok_or_else(|| spectrum("N(JA,T) leaves V"))?;
    if tja[0] != ta[1] || !tja[1].add(&ta[0]).is_zero() {
        return Err(spectrum("tau is not of the form [[a, b], [b, -a]]"));
    }
    if ta[0].is_zero() && ta[1].is_zero() {
        return Err(spectrum("tau vanishes on V"));
    }
    Ok((ta[0].clone(), ta[1].clone()))
}

pub fn analyze_invariant(m: &InvariantModel) -> Result<InvariantAnalysis> {
    let e = liealg::full_basis();
    let mut images = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let n = m.nijenhuis(&e[i], &e[j]);
            if !is_zero_v(&n) {
                images.push(n);
            }
        }
    }
    let v = linalg::span_basis(&images);
    if v.len() != 2 {
        return Err(Error::TorsionDimension(v.len()));
    }
    // a generator whose bracket with its J-image leaves V
    let mut pick = None;
    for a in v.iter().chain(images.iter()) {
        let ja = m.apply_j(a);
        let t = m.bracket(a, &ja);
        if !linalg::in_span(&v, &t) {
            pick = Some((a.clone(), ja, t));
            break;
        }
    }
    let (a, ja, t) = pick.ok_or(Error::Degenerate)?;
    let v = vec![a.clone(), ja.clone()];
    let filt = liealg::filtrations(&m.sc, &v);
    let fundamentality = match filt.v3.len() {
        4 => Some(Fundamentality::Fundamental),
        d if d == filt.v2.len() => Some(Fundamentality::NonFundamental),
        _ => None,
    };
    let (alpha, beta) = tau(m, &a, &ja, &t)?;

    // pointwise quantities need signs, so only without parameters
    let mut lambda = None;
    let mut xi = None;
    let mut mu = None;
    let mut frame = None;
    if alpha.symbols().is_empty() && beta.symbols().is_empty() {
        let f = |c: &RatExpr| -> Result<f64> { Ok(c.evaluate(&|_| None)?.to_f64()) };
        let s = alpha.mul(&alpha).add(&beta.mul(&beta));
        if let Some(l) = torsion::positive_sqrt(&s, f)? {
            let nonneg = f(&alpha)? >= 0.0;
            let (g, h, mu_v) = torsion::eigen_coefficients(&alpha, &beta, &l, nonneg);
            let mut x = torsion::combine(&g, &a, &h, &ja);
            if torsion::canonical_flip(&x)? {
                x = x.iter().map(RatExpr::neg).collect();
            }
            let jx = m.apply_j(&x);
            let tt: Vec<RatExpr> = m.bracket(&x, &jx).iter().map(|c| c.div(&mu_v)).collect::<core::result::Result<_, _>>()?;
            let jt = m.apply_j(&tt);
            let fr = match torsion::positive_sqrt(&mu_v, f)? {
                Some(r) => {
                    let xs: Vec<RatExpr> = x.iter().map(|c| c.div(&r)).collect::<core::result::Result<_, _>>()?;
                    let jxs = m.apply_j(&xs);
                    [PointVector::Exact(xs), PointVector::Exact(jxs), PointVector::Exact(tt), PointVector::Exact(jt)]
                }
                None => {
                    let r = libm::sqrt(f(&mu_v)?);
                    let fl = |v: &[RatExpr]| v.iter().map(|c| f(c).map(|q| q / r)).collect::<Result<Vec<f64>>>();
                    [PointVector::Approx(fl(&x)?), PointVector::Approx(fl(&jx)?), PointVector::Exact(tt), PointVector::Exact(jt)]
                }
            };
            lambda = Some(l);
            xi = Some(x);
            mu = Some(mu_v);
            frame = Some(fr);
        }
    }

    let g1 = liealg::derived_algebra(&m.sc);
    let cap = linalg::intersection(&v, &g1);
    let dim_v2_cap_g1 = linalg::intersection_dim(&filt.v2, &g1);
    let eigen_of = |w: &[RatExpr]| -> Option<RatExpr> {
        // τ(w) = κ w
        let tw = m.nijenhuis(w, &t);
        linalg::coordinates(&[w.to_vec()], &tw).map(|k| k[0].clone())
    };
    let intersection = match cap.len() {
        0 => Intersection::Zero,
        1 => match eigen_of(&cap[0]) {
            None => Intersection::OtherLine,
            Some(k) => match k.evaluate(&|_| None) {
                Ok(val) if val.to_f64() > 0.0 => Intersection::VPlus,
                Ok(_) => Intersection::VMinus,
                Err(_) => Intersection::Eigenline,
            },
        },
        _ => Intersection::Plane,
    };
    let z = liealg::center(&m.sc);
    let center_meets_v = linalg::intersection_dim(&z, &v) > 0;
    let tag = liealg::classify(&m.sc).tag;
    let clauses = liealg::evaluate_clauses(&m.sc, tag, &v, &|w| Some(eigen_of(w).is_some()));
    Ok(InvariantAnalysis {
        v_basis: v,
        generator: a,
        t_generator: t,
        dim_v2: filt.v2.len(),
        dim_v3: filt.v3.len(),
        fundamentality,
        alpha,
        beta,
        lambda,
        xi,
        mu,
        frame,
        dim_v_cap_g1: cap.len(),
        dim_v2_cap_g1,
        intersection,
        center_meets_v,
        tag,
        clauses,
    })
}

/// One random draw of a family.
#[derive(Debug, Clone)]
pub struct Sample {
    pub values: Vec<(String, Rational)>,
    pub analysis: InvariantAnalysis,
}

/// Outcome of sampling: accepted draws and the number rejected for
/// violating a constraint or degenerating.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub samples: Vec<Sample>,
    pub rejected: usize,
}

impl SampleRun {
    /// Draws on which some clause group disagrees.
    pub fn disagreements(&self) -> Vec<&Sample> {
        self.samples
            .iter()
            .filter(|s| s.analysis.clauses.as_ref().is_none_or(|c| !c.unprimed_agree() || !c.primed_agree()))
            .collect()
    }
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let n: i64 = rng.gen_range(-6..=6);
    let d: i64 = rng.gen_range(1..=4);
    Rational::new(n.into(), d.into())
}

fn rejectable(e: &Error) -> bool {
    matches!(
        e,
        Error::ConstraintViolated(_) | Error::Degenerate | Error::TorsionDimension(_) | Error::Dependent | Error::TauSpectrum(_) | Error::Expr(_)
    )
}

/// Draw `count` accepted parameter assignments of a family.
pub fn sample_family<R: Rng + ?Sized>(f: Family, count: usize, rng: &mut R) -> Result<SampleRun> {
    let fm = family_model(f)?;
    let names: Vec<String> = fm.model.symbols.parameter_names().to_vec();
    let mut run = SampleRun { samples: Vec::new(), rejected: 0 };
    while run.samples.len() < count {
        if run.rejected > 50 * count + 100 {
            return Err(Error::ConstraintViolated(format!("could not draw {count} admissible samples")));
        }
        let values: Vec<(String, Rational)> = names.iter().map(|n| (n.clone(), random_rational(rng))).collect();
        match fm.model.specialize(&values).and_then(|m| analyze_invariant(&m)) {
            Ok(analysis) => run.samples.push(Sample { values, analysis }),
            Err(e) if rejectable(&e) => run.rejected += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(run)
}

/// Random invariant structures on an algebra from random rational frames.
pub fn sample_generic<R: Rng + ?Sized>(sc: &StructureConstants, count: usize, rng: &mut R) -> Result<SampleRun> {
    let mut run = SampleRun { samples: Vec::new(), rejected: 0 };
    while run.samples.len() < count {
        if run.rejected > 50 * count + 100 {
            return Err(Error::Degenerate);
        }
        let frame: [Vec<RatExpr>; 4] = core::array::from_fn(|_| (0..4).map(|_| RatExpr::constant(random_rational(rng))).collect());
        let built = build_from_frame_spec(sc.clone(), frame, Vec::new(), SymbolTable::params_only::<&str>(&[])?);
        match built.and_then(|m| analyze_invariant(&m)) {
            Ok(analysis) => run.samples.push(Sample { values: Vec::new(), analysis }),
            Err(e) if rejectable(&e) => run.rejected += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(run)
}
