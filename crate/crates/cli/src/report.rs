//! Machine report. Exact values are strings in the expression grammar so
//! they re-parse to the same canonical form; floating-point values only
//! appear where the frame has no exact expression at the point.

use std::fmt::Write as _;

use nijenhuis_core::expr::{RatExpr, SymbolTable};
use nijenhuis_core::torsion::PointVector;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Exact(String),
    Approx(f64),
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Num::Exact(s) => f.write_str(s),
            Num::Approx(x) => write!(f, "~{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    /// `coordinate` or `invariant`.
    pub model: String,
    pub coordinates: Vec<String>,
    pub parameters: Vec<String>,
    pub point: Option<Vec<String>>,
    /// `ok`, `degenerate`, `non-homogeneous` or `violation`.
    pub status: String,
    pub torsion: TorsionSection,
    pub frame: Option<FrameSection>,
    pub algebra: Option<AlgebraSection>,
    pub intersection: Option<IntersectionSection>,
    pub props: Option<PropsSection>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorsionSection {
    pub dim_v: usize,
    pub v_basis: Vec<Vec<String>>,
    pub nondegenerate: bool,
    pub outside_hypotheses: bool,
    pub dim_v2: Option<usize>,
    pub dim_v3: Option<usize>,
    pub fundamentality: Option<String>,
    pub generator: Option<String>,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub lambda: Option<Num>,
    pub xi: Option<Vec<Num>>,
    pub mu: Option<Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSection {
    /// `X, JX, T, JT` as fields on the chart, canonical sign.
    pub fields: Option<Vec<Vec<String>>>,
    /// The same frame at the point.
    pub at_point: Vec<Vec<Num>>,
    /// The partner `(-X, -JX, T, JT)` at the point.
    pub partner_at_point: Vec<Vec<Num>>,
}

impl FrameSection {
    pub fn at(frame: &[PointVector], t: &SymbolTable) -> Self {
        let partner = frame.iter().enumerate().map(|(i, v)| if i < 2 { nums(&v.neg(), t) } else { nums(v, t) }).collect();
        FrameSection { fields: None, at_point: frame.iter().map(|v| nums(v, t)).collect(), partner_at_point: partner }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraSection {
    /// `(i, j, k, c)`, 1-based: `[f_i, f_j]` has coefficient `c` on `f_k`.
    pub structure_constants: Vec<(usize, usize, usize, String)>,
    pub tag: String,
    pub derived_dims: Vec<usize>,
    pub lower_central_dims: Vec<usize>,
    pub center_dim: usize,
    pub solvable: bool,
    pub nilpotent: bool,
    pub killing_rank: usize,
    pub killing_signature: Option<(usize, usize, usize)>,
    /// Basis realizing the catalog table, in frame coordinates.
    pub catalog_basis: Option<Vec<Vec<String>>>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionSection {
    pub dim_v_cap_derived: usize,
    pub dim_v2_cap_derived: usize,
    pub kind: String,
    pub center_meets_v: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropsSection {
    pub dim_derived: usize,
    pub derived_in_range: bool,
    pub nonsolvable_split: Option<bool>,
    pub center_meets_v_trivially: bool,
    pub clauses: Option<ClauseSection>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseSection {
    pub algebra: String,
    pub unprimed: Vec<(String, bool)>,
    pub primed: Vec<(String, bool)>,
}

pub fn expr(e: &RatExpr, t: &SymbolTable) -> String {
    e.format(t)
}

pub fn vector(v: &[RatExpr], t: &SymbolTable) -> Vec<String> {
    v.iter().map(|e| e.format(t)).collect()
}

pub fn nums(p: &PointVector, t: &SymbolTable) -> Vec<Num> {
    match p {
        PointVector::Exact(v) => v.iter().map(|e| Num::Exact(e.format(t))).collect(),
        PointVector::Approx(v) => v.iter().map(|x| Num::Approx(*x)).collect(),
    }
}

pub fn num(p: &PointVector, t: &SymbolTable) -> Num {
    nums(p, t).into_iter().next().expect("scalar")
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Report> {
        serde_json::from_str(s)
    }

    pub fn render_text(&self) -> String {
        let mut o = String::new();
        let list = |v: &[String]| format!("({})", v.join(", "));
        let numl = |v: &[Num]| format!("({})", v.iter().map(Num::to_string).collect::<Vec<_>>().join(", "));
        let _ = writeln!(o, "{} [{} model] status: {}", self.id, self.model, self.status);
        if let Some(p) = &self.point {
            let _ = writeln!(o, "point {} = {}", list(&self.coordinates), list(p));
        }
        if !self.parameters.is_empty() {
            let _ = writeln!(o, "parameters: {}", self.parameters.join(", "));
        }
        let t = &self.torsion;
        let _ = writeln!(o, "\ntorsion");
        let _ = writeln!(o, "  dim V = {}{}", t.dim_v, if t.outside_hypotheses { " (outside hypotheses)" } else { "" });
        for b in &t.v_basis {
            let _ = writeln!(o, "    {}", list(b));
        }
        let _ = writeln!(o, "  non-degenerate: {}", t.nondegenerate);
        if let (Some(a), Some(b)) = (t.dim_v2, t.dim_v3) {
            let _ = writeln!(o, "  dim V-2 = {a}, dim V-3 = {b}");
        }
        if let Some(f) = &t.fundamentality {
            let _ = writeln!(o, "  {f}");
        }
        if let Some(g) = &t.generator {
            let _ = writeln!(o, "  generator A = {g}");
        }
        if let (Some(a), Some(b)) = (&t.alpha, &t.beta) {
            let _ = writeln!(o, "  tau(A) = alpha A + beta JA, alpha = {a}, beta = {b}");
        }
        if let (Some(l), Some(m)) = (&t.lambda, &t.mu) {
            let _ = writeln!(o, "  lambda = {l}, mu = {m}");
        }
        if let Some(x) = &t.xi {
            let _ = writeln!(o, "  xi = {}", numl(x));
        }
        if let Some(f) = &self.frame {
            let _ = writeln!(o, "\nadapted frame (X, JX, T, JT); the pair partner is (-X, -JX, T, JT)");
            for (n, v) in ["X", "JX", "T", "JT"].iter().zip(&f.at_point) {
                let _ = writeln!(o, "  {n:<2} = {}", numl(v));
            }
            if let Some(fields) = &f.fields {
                let _ = writeln!(o, "  as fields:");
                for (n, v) in ["X", "JX", "T", "JT"].iter().zip(fields) {
                    let _ = writeln!(o, "    {n:<2} = {}", list(v));
                }
            }
        }
        if let Some(a) = &self.algebra {
            let _ = writeln!(o, "\nassociated algebra: {}", a.tag);
            for (i, j, k, c) in &a.structure_constants {
                let _ = writeln!(o, "  [f{i}, f{j}] has {c} on f{k}");
            }
            let _ = writeln!(o, "  derived series {:?}, lower central series {:?}, center {}", a.derived_dims, a.lower_central_dims, a.center_dim);
            let _ = writeln!(o, "  solvable {}, nilpotent {}, Killing rank {}", a.solvable, a.nilpotent, a.killing_rank);
            if let Some(n) = &a.note {
                let _ = writeln!(o, "  {n}");
            }
        }
        if let Some(i) = &self.intersection {
            let _ = writeln!(
                o,
                "\nV cap g' = {} (dim {}), dim(V-2 cap g') = {}, center meets V: {}",
                i.kind, i.dim_v_cap_derived, i.dim_v2_cap_derived, i.center_meets_v
            );
        }
        if let Some(p) = &self.props {
            let _ = writeln!(o, "\nchecks");
            let _ = writeln!(o, "  dim g' = {} in [2, 3]: {}", p.dim_derived, p.derived_in_range);
            if let Some(s) = p.nonsolvable_split {
                let _ = writeln!(o, "  g = g' + z(g): {s}");
            }
            let _ = writeln!(o, "  z(g) cap V = 0: {}", p.center_meets_v_trivially);
            if let Some(c) = &p.clauses {
                let show = |v: &[(String, bool)]| v.iter().map(|(n, b)| format!("({n}) {b}")).collect::<Vec<_>>().join(", ");
                let _ = writeln!(o, "  {} clauses: {}", c.algebra, show(&c.unprimed));
                let _ = writeln!(o, "  {} primed clauses: {}", c.algebra, show(&c.primed));
            }
            for v in &p.violations {
                let _ = writeln!(o, "  VIOLATION {v}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(o, "note: {n}");
        }
        o
    }
}
