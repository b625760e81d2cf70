//! Evaluation of `[[expect]]` rows against an analysis outcome.

use std::collections::BTreeMap;

use nijenhuis_core::acstructure::{AlmostComplexStructure, ComplexFrameSpec};
use nijenhuis_core::expr::{self, RatExpr, SymbolTable};
use nijenhuis_core::invariant;
use nijenhuis_core::kaehler::{closedness_residuals, d_omega_direct, FrameMetric};
use nijenhuis_core::liealg::{self, Clauses, StructureConstants};
use nijenhuis_core::{linalg, torsion, VectorField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::Outcome;
use crate::spec::{self, Body, Expectation, Loaded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RowStatus {
    Pass,
    Fail,
    /// A known discrepancy with the printed value: the computed value is
    /// reported and the printed one flagged.
    Flagged,
}

impl RowStatus {
    pub fn label(self) -> &'static str {
        match self {
            RowStatus::Pass => "PASS",
            RowStatus::Fail => "FAIL",
            RowStatus::Flagged => "FLAGGED",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub entry: String,
    pub check: String,
    pub args: Vec<String>,
    pub cite: String,
    pub status: RowStatus,
    pub detail: String,
}

/// Outcome of one comparison: whether it matched, and both sides rendered.
struct Cmp {
    ok: bool,
    computed: String,
    expected: String,
}

fn cmp<T: PartialEq + std::fmt::Debug>(computed: T, expected: T) -> Cmp {
    Cmp { ok: computed == expected, computed: format!("{computed:?}"), expected: format!("{expected:?}") }
}

fn cmp_str(computed: &str, expected: &str) -> Cmp {
    Cmp { ok: computed == expected, computed: computed.into(), expected: expected.into() }
}

struct Ctx<'a> {
    loaded: &'a Loaded,
    out: &'a Outcome,
    named: BTreeMap<String, Vec<RatExpr>>,
    symbols: &'a SymbolTable,
}

type Res<T> = Result<T, String>;

impl Ctx<'_> {
    fn vector(&self, name: &str) -> Res<Vec<RatExpr>> {
        self.named.get(name).cloned().ok_or_else(|| format!("unknown vector `{name}`"))
    }

    fn value_vector(&self, v: &toml::Value) -> Res<Vec<RatExpr>> {
        match v {
            toml::Value::Array(items) if items.len() == 4 => items
                .iter()
                .map(|x| {
                    let s = x.as_str().ok_or("vector components are strings")?;
                    expr::parse(s, self.symbols).map_err(|e| e.to_string())
                })
                .collect(),
            toml::Value::Table(t) => {
                let terms = t
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), v.as_str().ok_or("coefficients are strings")?.to_string())))
                    .collect::<Res<BTreeMap<_, _>>>()?;
                spec::combination(&self.named, &terms, self.symbols)
            }
            _ => Err("expected four component strings or a { name = \"coefficient\" } table".into()),
        }
    }

    fn show(&self, v: &[RatExpr]) -> String {
        format!("({})", v.iter().map(|e| e.format(self.symbols)).collect::<Vec<_>>().join(", "))
    }

    fn cmp_vec(&self, computed: &[RatExpr], expected: &[RatExpr]) -> Cmp {
        let ok = computed.iter().zip(expected).all(|(a, b)| a.sub(b).is_zero());
        Cmp { ok, computed: self.show(computed), expected: self.show(expected) }
    }

    fn bracket(&self, u: &[RatExpr], v: &[RatExpr]) -> Vec<RatExpr> {
        match &self.loaded.body {
            Body::Coordinate { .. } => VectorField::from_vec(u.to_vec()).bracket(&VectorField::from_vec(v.to_vec())).to_vec(),
            Body::Invariant { model, .. } => model.bracket(u, v),
        }
    }

    fn nijenhuis(&self, u: &[RatExpr], v: &[RatExpr]) -> Vec<RatExpr> {
        match &self.loaded.body {
            Body::Coordinate { j, .. } => j.nijenhuis(&VectorField::from_vec(u.to_vec()), &VectorField::from_vec(v.to_vec())).to_vec(),
            Body::Invariant { model, .. } => model.nijenhuis(u, v),
        }
    }

    fn apply_j(&self, u: &[RatExpr]) -> Vec<RatExpr> {
        match &self.loaded.body {
            Body::Coordinate { j, .. } => j.apply(&VectorField::from_vec(u.to_vec())).to_vec(),
            Body::Invariant { model, .. } => model.apply_j(u),
        }
    }

    /// Structure constants of four vectors taken as a basis.
    fn constants_of(&self, basis: &[Vec<RatExpr>]) -> Res<StructureConstants> {
        match &self.loaded.body {
            Body::Coordinate { chart, .. } => {
                let f: [VectorField; 4] = basis.iter().map(|v| VectorField::from_vec(v.clone())).collect::<Vec<_>>().try_into().map_err(|_| "four vectors")?;
                liealg::frame_structure_constants(&f, chart.symbols()).map_err(|e| e.to_string())
            }
            Body::Invariant { model, .. } => model.sc.change_basis(basis).map_err(|e| e.to_string()),
        }
    }

    /// Vectors of the tangent space at the analysis point.
    fn at_point(&self, vs: &[Vec<RatExpr>]) -> Res<Vec<Vec<RatExpr>>> {
        match &self.loaded.body {
            Body::Coordinate { .. } => {
                let p = &self.out.torsion.as_ref().ok_or("no torsion analysis")?.point;
                let look = torsion::point_lookup(p);
                vs.iter().map(|v| v.iter().map(|c| c.substitute(&look).map_err(|e| e.to_string())).collect()).collect()
            }
            Body::Invariant { .. } => Ok(vs.to_vec()),
        }
    }

    fn v_basis(&self) -> Res<Vec<Vec<RatExpr>>> {
        if let Some(t) = &self.out.torsion {
            return Ok(t.v_basis.clone());
        }
        self.out.invariant.as_ref().map(|i| i.v_basis.clone()).ok_or_else(|| "no torsion analysis".into())
    }

    fn frame(&self) -> Res<&[Vec<RatExpr>; 4]> {
        self.out.frame.as_ref().ok_or_else(|| "no exact adapted frame".to_string())
    }

    fn metric(&self, e: &Expectation) -> Res<FrameMetric> {
        let [a, c] = args::<2>(e)?;
        let Body::Coordinate { chart, .. } = &self.loaded.body else {
            return Err("metric checks need a coordinate chart".into());
        };
        let frame = self.frame()?.clone().map(VectorField::from_vec);
        let a = chart.parse(a).map_err(|x| format!("a: {x}"))?;
        let c = chart.parse(c).map_err(|x| format!("c: {x}"))?;
        FrameMetric::new(frame, a, c).map_err(|x| x.to_string())
    }
}

fn args<const N: usize>(e: &Expectation) -> Res<[&str; N]> {
    let v: Vec<&str> = e.args.iter().map(String::as_str).collect();
    v.try_into().map_err(|_| format!("`{}` takes {N} argument(s)", e.check))
}

fn value(e: &Expectation) -> Res<&toml::Value> {
    e.value.as_ref().ok_or_else(|| format!("`{}` needs a value", e.check))
}

fn value_bool(e: &Expectation) -> Res<bool> {
    value(e)?.as_bool().ok_or_else(|| "expected a boolean value".into())
}

fn value_usize(e: &Expectation) -> Res<usize> {
    value(e)?.as_integer().and_then(|i| usize::try_from(i).ok()).ok_or_else(|| "expected a non-negative integer".into())
}

fn value_str(e: &Expectation) -> Res<&str> {
    value(e)?.as_str().ok_or_else(|| "expected a string value".into())
}

fn value_list(e: &Expectation, n: usize) -> Res<&Vec<toml::Value>> {
    match value(e)? {
        toml::Value::Array(a) if a.len() == n => Ok(a),
        _ => Err(format!("expected a list of {n}")),
    }
}

/// `Some(b)` when all clauses evaluate to `b`, `None` when they disagree.
fn clause_value(v: &[(&str, bool)]) -> Option<bool> {
    let first = v.first()?.1;
    v.iter().all(|(_, b)| *b == first).then_some(first)
}

fn clauses_of(ctx: &Ctx) -> Res<Clauses> {
    ctx.out.invariant.as_ref().and_then(|i| i.clauses.clone()).ok_or_else(|| "no clauses for this algebra".into())
}

fn run(ctx: &Ctx, e: &Expectation) -> Res<Cmp> {
    let r = &ctx.out.report;
    let need = |o: Option<usize>, what: &str| o.ok_or_else(|| format!("{what} was not computed"));
    Ok(match e.check.as_str() {
        "status" => cmp_str(&r.status, value_str(e)?),
        "nondegenerate" => cmp(r.torsion.nondegenerate, value_bool(e)?),
        "dim_v" => cmp(r.torsion.dim_v, value_usize(e)?),
        "dim_v2" => cmp(need(r.torsion.dim_v2, "V-2")?, value_usize(e)?),
        "dim_v3" => cmp(need(r.torsion.dim_v3, "V-3")?, value_usize(e)?),
        "fundamentality" => cmp_str(r.torsion.fundamentality.as_deref().unwrap_or("undetermined"), value_str(e)?),
        "algebra" => cmp_str(&r.algebra.as_ref().ok_or("no associated algebra")?.tag, value_str(e)?),
        "intersection" => cmp_str(&r.intersection.as_ref().ok_or("no intersection data")?.kind, value_str(e)?),
        "dim_v_cap_derived" => cmp(r.intersection.as_ref().ok_or("no intersection data")?.dim_v_cap_derived, value_usize(e)?),
        "dim_v2_cap_derived" => cmp(r.intersection.as_ref().ok_or("no intersection data")?.dim_v2_cap_derived, value_usize(e)?),
        "center_meets_v" => cmp(r.intersection.as_ref().ok_or("no intersection data")?.center_meets_v, value_bool(e)?),
        "props" => {
            let p = ctx.out.props.as_ref().ok_or("checks were not run")?;
            Cmp { ok: p.all_pass() == value_bool(e)?, computed: format!("violations {:?}", p.violations), expected: format!("pass = {}", value_bool(e)?) }
        }
        "clauses" | "primed_clauses" => {
            let c = clauses_of(ctx)?;
            let v = if e.check == "clauses" { &c.unprimed } else { &c.primed };
            let got = clause_value(v);
            Cmp { ok: got == Some(value_bool(e)?), computed: format!("{v:?}"), expected: format!("all {}", value_bool(e)?) }
        }
        "structure_constants" => {
            let sc = ctx.out.sc.as_ref().ok_or("no structure constants")?;
            let mut expected = Vec::new();
            for item in value(e)?.as_array().ok_or("expected a list of [i, j, k, \"c\"]")? {
                let q = item.as_array().filter(|a| a.len() == 4).ok_or("expected [i, j, k, \"c\"]")?;
                let idx = |n: usize| q[n].as_integer().filter(|i| (1..=4).contains(i)).map(|i| i as usize - 1).ok_or("indices run from 1 to 4");
                let c = expr::parse(q[3].as_str().ok_or("coefficient must be a string")?, ctx.symbols).map_err(|x| x.to_string())?;
                expected.push((idx(0)?, idx(1)?, idx(2)?, c));
            }
            let want = StructureConstants::from_entries(&expected).map_err(|x| x.to_string())?;
            let show = |s: &StructureConstants| {
                s.entries().iter().map(|(i, j, k, c)| format!("[{},{}]_{}={}", i + 1, j + 1, k + 1, c.format(ctx.symbols))).collect::<Vec<_>>().join(" ")
            };
            Cmp { ok: &want == sc, computed: show(sc), expected: show(&want) }
        }
        "bracket" | "nijenhuis" => {
            let [a, b] = args::<2>(e)?;
            let (u, v) = (ctx.vector(a)?, ctx.vector(b)?);
            let got = if e.check == "bracket" { ctx.bracket(&u, &v) } else { ctx.nijenhuis(&u, &v) };
            ctx.cmp_vec(&got, &ctx.value_vector(value(e)?)?)
        }
        "v_span" => {
            let want = value(e)?.as_array().ok_or("expected a list of vectors")?.iter().map(|v| ctx.value_vector(v)).collect::<Res<Vec<_>>>()?;
            let want = ctx.at_point(&want)?;
            let v = ctx.v_basis()?;
            let (rv, rw) = (linalg::rank(&v), linalg::rank(&want));
            let mut both = v.clone();
            both.extend(want.iter().cloned());
            let same = rv == rw && linalg::rank(&both) == rv;
            let show = |b: &[Vec<RatExpr>]| b.iter().map(|x| ctx.show(x)).collect::<Vec<_>>().join(" ");
            Cmp { ok: same, computed: format!("span {}", show(&v)), expected: format!("span {}", show(&want)) }
        }
        "eigenline" => {
            let [a] = args::<1>(e)?;
            let Body::Invariant { model, .. } = &ctx.loaded.body else {
                return Err("`eigenline` needs an invariant model".into());
            };
            let inv = ctx.out.invariant.as_ref().ok_or("no torsion analysis")?;
            let w = ctx.vector(a)?;
            let tw = model.nijenhuis(&w, &inv.t_generator);
            let got = match linalg::coordinates(std::slice::from_ref(&w), &tw) {
                None => "not an eigenline".to_string(),
                Some(k) => match k[0].evaluate(&|_| None).map(|v| v.to_f64()) {
                    Ok(x) if x > 0.0 => "V+".into(),
                    Ok(x) if x < 0.0 => "V-".into(),
                    Ok(_) => "kernel".into(),
                    Err(_) => format!("eigenvalue {} of undetermined sign", k[0].format(ctx.symbols)),
                },
            };
            cmp_str(&got, value_str(e)?)
        }
        "j" => {
            let [a] = args::<1>(e)?;
            ctx.cmp_vec(&ctx.apply_j(&ctx.vector(a)?), &ctx.value_vector(value(e)?)?)
        }
        "equals" => {
            let [a] = args::<1>(e)?;
            ctx.cmp_vec(&ctx.vector(a)?, &ctx.value_vector(value(e)?)?)
        }
        "frame" => {
            let got = ctx.frame()?;
            let want = value_list(e, 4)?.iter().map(|v| ctx.value_vector(v)).collect::<Res<Vec<_>>>()?;
            let eq = |a: &[RatExpr], b: &[RatExpr]| a.iter().zip(b).all(|(x, y)| x.sub(y).is_zero());
            let neg = |v: &[RatExpr]| v.iter().map(RatExpr::neg).collect::<Vec<_>>();
            let same = (0..4).all(|i| eq(&got[i], &want[i]));
            let partner = eq(&neg(&got[0]), &want[0]) && eq(&neg(&got[1]), &want[1]) && eq(&got[2], &want[2]) && eq(&got[3], &want[3]);
            let show = |f: &[Vec<RatExpr>]| f.iter().map(|v| ctx.show(v)).collect::<Vec<_>>().join(" ");
            Cmp { ok: same || partner, computed: show(got), expected: show(&want) }
        }
        "automorphism" | "commutes_with_frame" => {
            let Body::Coordinate { j, .. } = &ctx.loaded.body else {
                return Err(format!("`{}` needs a coordinate chart", e.check));
            };
            let mut bad = Vec::new();
            for a in &e.args {
                let f = VectorField::from_vec(ctx.vector(a)?);
                let ok = if e.check == "automorphism" {
                    j.is_infinitesimal_automorphism(&f)
                } else {
                    ctx.frame()?.iter().all(|x| f.bracket(&VectorField::from_vec(x.clone())).is_zero())
                };
                if !ok {
                    bad.push(a.clone());
                }
            }
            let all = bad.is_empty();
            Cmp { ok: all == value_bool(e)?, computed: if all { "all hold".into() } else { format!("fails for {}", bad.join(", ")) }, expected: format!("all hold = {}", value_bool(e)?) }
        }
        "homomorphism" => {
            let src: Vec<Vec<RatExpr>> = args::<4>(e)?.iter().map(|a| ctx.vector(a)).collect::<Res<_>>()?;
            let dst = value_list(e, 4)?.iter().map(|v| ctx.value_vector(v)).collect::<Res<Vec<_>>>()?;
            let (s, d) = (ctx.constants_of(&src)?, ctx.constants_of(&dst)?);
            let show = |s: &StructureConstants| {
                s.entries().iter().map(|(i, j, k, c)| format!("[{},{}]_{}={}", i + 1, j + 1, k + 1, c.format(ctx.symbols))).collect::<Vec<_>>().join(" ")
            };
            Cmp { ok: s == d, computed: format!("source {}", show(&s)), expected: format!("image {}", show(&d)) }
        }
        "same_structure" => {
            let Body::Coordinate { chart, j, .. } = &ctx.loaded.body else {
                return Err("`same_structure` needs a coordinate chart".into());
            };
            if e.args.len() != 8 {
                return Err("`same_structure` takes the 4 + 4 complex components of Z1 and Z2".into());
            }
            let src = &ctx.loaded.source;
            let fs = ComplexFrameSpec {
                z1: spec::complex_field(chart, src, "args[0..4]", &e.args[..4]).map_err(|x| x.to_string())?,
                z2: spec::complex_field(chart, src, "args[4..8]", &e.args[4..]).map_err(|x| x.to_string())?,
            };
            let got = match AlmostComplexStructure::from_complex_frame(&fs) {
                Ok(other) => {
                    let same = other.matrix().iter().flatten().zip(j.matrix().iter().flatten()).all(|(a, b)| a.sub(b).is_zero());
                    if same { "same J".to_string() } else { "a different J".to_string() }
                }
                Err(x) => format!("no structure ({x})"),
            };
            let want = if value_bool(e)? { "same J" } else { "a different J" };
            cmp_str(&got, want)
        }
        "family_residual" => {
            let Body::Invariant { family: Some(f), .. } = &ctx.loaded.body else {
                return Err("`family_residual` needs a family entry".into());
            };
            let r = invariant::verify_family(*f).map_err(|x| x.to_string())?;
            let zero = r.iter().all(RatExpr::is_zero);
            Cmp { ok: zero == value_bool(e)?, computed: format!("residual {}", ctx.show(&r)), expected: format!("zero = {}", value_bool(e)?) }
        }
        "sampled_clauses" => {
            let Body::Invariant { family: Some(f), .. } = &ctx.loaded.body else {
                return Err("`sampled_clauses` needs a family entry".into());
            };
            let n = value_usize(e)?;
            let seed = ctx.loaded.spec.id.bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64));
            let run = invariant::sample_family(*f, n, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(|x| x.to_string())?;
            let bad = run.disagreements().len();
            Cmp {
                ok: bad == 0 && run.samples.len() >= n,
                computed: format!("{} samples, {} disagreements, {} rejected draws", run.samples.len(), bad, run.rejected),
                expected: format!("{n} samples, 0 disagreements"),
            }
        }
        "metric_residuals" => {
            let m = ctx.metric(e)?;
            let want = value_list(e, 4)?
                .iter()
                .map(|v| expr::parse(v.as_str().ok_or("residuals are strings")?, ctx.symbols).map_err(|x| x.to_string()))
                .collect::<Res<Vec<_>>>()?;
            ctx.cmp_vec(&closedness_residuals(&m), &want)
        }
        "metric_closed" => {
            let m = ctx.metric(e)?;
            let sys = closedness_residuals(&m).iter().all(RatExpr::is_zero);
            let direct = d_omega_direct(&m).iter().all(RatExpr::is_zero);
            if sys != direct {
                return Err(format!("residual system says closed = {sys} but d(Omega) says {direct}"));
            }
            cmp(sys, value_bool(e)?)
        }
        other => return Err(format!("unknown check `{other}`")),
    })
}

pub fn evaluate(loaded: &Loaded, out: &Outcome, e: &Expectation) -> Row {
    let mut named = loaded.named.clone();
    if let Some(f) = &out.frame {
        for (n, v) in ["X", "JX", "T", "JT"].iter().zip(f) {
            named.entry(n.to_string()).or_insert_with(|| v.clone());
        }
    }
    let ctx = Ctx { loaded, out, named, symbols: loaded.symbols() };
    let (status, detail) = if e.cite.trim().is_empty() {
        (RowStatus::Fail, "expectation has no citation".to_string())
    } else {
        match (run(&ctx, e), &e.flag) {
            (Err(msg), _) => (RowStatus::Fail, msg),
            (Ok(c), None) if c.ok => (RowStatus::Pass, c.computed),
            (Ok(c), None) => (RowStatus::Fail, format!("expected {}, computed {}", c.expected, c.computed)),
            (Ok(c), Some(flag)) if !c.ok => {
                (RowStatus::Flagged, format!("computed value reported: {}; printed value flagged: {} ({flag})", c.computed, c.expected))
            }
            (Ok(c), Some(_)) => (RowStatus::Fail, format!("flagged discrepancy did not reproduce: computed {}", c.computed)),
        }
    };
    Row { entry: loaded.spec.id.clone(), check: e.check.clone(), args: e.args.clone(), cite: e.cite.clone(), status, detail }
}
