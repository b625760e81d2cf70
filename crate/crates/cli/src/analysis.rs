//! The analysis pipeline behind `analyze`, `classify` and `frames`.

use nijenhuis_core::expr::{RatExpr, Rational, SymbolTable};
use nijenhuis_core::invariant::{self, InvariantAnalysis, InvariantModel};
use nijenhuis_core::liealg::{self, Classification, PropReport, StructureConstants};
use nijenhuis_core::torsion::{self, TorsionAnalysis};
use nijenhuis_core::{linalg, Error, Fundamentality};

use crate::error::{CliError, Exit};
use crate::report::{self, AlgebraSection, ClauseSection, FrameSection, IntersectionSection, PropsSection, Report, TorsionSection};
use crate::spec::{Body, Loaded};

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    Degenerate(String),
    NonHomogeneous(String),
    Violation(Vec<String>),
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Degenerate(_) => "degenerate",
            Status::NonHomogeneous(_) => "non-homogeneous",
            Status::Violation(_) => "violation",
        }
    }

    pub fn exit(&self) -> Exit {
        match self {
            Status::Ok => Exit::Ok,
            Status::Degenerate(_) => Exit::Degenerate,
            Status::NonHomogeneous(_) => Exit::NonHomogeneous,
            Status::Violation(_) => Exit::Internal,
        }
    }
}

/// Everything computed for one spec; the report plus the exact objects the
/// corpus checks compare against.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub status: Status,
    /// `X, JX, T, JT` as exact components (fields or algebra vectors).
    pub frame: Option<[Vec<RatExpr>; 4]>,
    /// Structure constants in the adapted frame (coordinate models) or the
    /// model's own basis (invariant models).
    pub sc: Option<StructureConstants>,
    pub classification: Option<Classification>,
    pub invariant: Option<InvariantAnalysis>,
    pub props: Option<PropReport>,
    pub torsion: Option<TorsionAnalysis>,
}

fn standard_j() -> Vec<Vec<RatExpr>> {
    let v = |x: [i64; 4]| x.iter().map(|&q| RatExpr::int(q)).collect::<Vec<_>>();
    vec![v([0, -1, 0, 0]), v([1, 0, 0, 0]), v([0, 0, 0, -1]), v([0, 0, 1, 0])]
}

fn fundamentality_name(f: Fundamentality) -> String {
    match f {
        Fundamentality::Fundamental => "fundamental".into(),
        Fundamentality::NonFundamental => "non-fundamental".into(),
    }
}

pub fn fundamentality_from_name(s: &str) -> Option<Fundamentality> {
    match s {
        "fundamental" => Some(Fundamentality::Fundamental),
        "non-fundamental" => Some(Fundamentality::NonFundamental),
        _ => None,
    }
}

fn empty_table() -> SymbolTable {
    SymbolTable::params_only::<&str>(&[]).expect("empty table")
}

pub fn analyze(loaded: &Loaded, point: Option<&[Rational; 4]>) -> Result<Outcome, CliError> {
    let symbols = loaded.symbols().clone();
    let mut report = Report {
        id: loaded.spec.id.clone(),
        model: String::new(),
        coordinates: symbols.coordinate_names().to_vec(),
        parameters: symbols.parameter_names().to_vec(),
        point: None,
        status: String::new(),
        torsion: TorsionSection {
            dim_v: 0,
            v_basis: Vec::new(),
            nondegenerate: false,
            outside_hypotheses: false,
            dim_v2: None,
            dim_v3: None,
            fundamentality: None,
            generator: None,
            alpha: None,
            beta: None,
            lambda: None,
            xi: None,
            mu: None,
        },
        frame: None,
        algebra: None,
        intersection: None,
        props: None,
        notes: Vec::new(),
    };
    let mut out = Outcome {
        report: report.clone(),
        status: Status::Ok,
        frame: None,
        sc: None,
        classification: None,
        invariant: None,
        props: None,
        torsion: None,
    };
    match &loaded.body {
        Body::Coordinate { chart, j, .. } => {
            let p = point.unwrap_or(&loaded.point).clone();
            report.model = "coordinate".into();
            report.point = Some(p.iter().map(|q| RatExpr::constant(q.clone()).format(&empty_table())).collect());
            let ta = torsion::analyze(j, &p)?;
            let t = &mut report.torsion;
            t.dim_v = ta.dim_v();
            t.v_basis = ta.v_basis.iter().map(|v| report::vector(v, &symbols)).collect();
            t.outside_hypotheses = ta.outside_hypotheses();
            t.nondegenerate = ta.nondegenerate;
            if let Some(f) = &ta.filtration {
                t.dim_v2 = Some(f.dim_v2);
                t.dim_v3 = Some(f.dim_v3);
            }
            t.fundamentality = ta.fundamentality.map(fundamentality_name);
            if t.outside_hypotheses {
                report.notes.push("dim V = 4 lies outside the hypotheses of the theory".into());
            }
            let status = if ta.dim_v() != 2 {
                Some(format!("dim V = {} at the point", ta.dim_v()))
            } else if !ta.nondegenerate {
                Some("[A, JA] lies in V for every section A".to_string())
            } else {
                None
            };
            if let Some(msg) = status {
                out.status = Status::Degenerate(msg);
                out.torsion = Some(ta);
                return Ok(finish(out, report));
            }
            let d = ta.distinguished.as_ref().expect("non-degenerate analysis has a distinguished field");
            if let Some((i, k)) = d.generator {
                t.generator = Some(format!("N(d{}, d{})", i + 1, k + 1));
            }
            t.alpha = Some(report::expr(&d.tau.alpha, &symbols));
            t.beta = Some(report::expr(&d.tau.beta, &symbols));
            t.lambda = Some(report::num(&d.lambda_at, &symbols));
            t.mu = Some(report::num(&d.mu_at, &symbols));
            t.xi = Some(report::nums(&d.xi_at, &symbols));
            report.frame = Some(FrameSection {
                fields: d.fields.as_ref().map(|f| f.iter().map(|x| x.format(&symbols).to_vec()).collect()),
                ..FrameSection::at(&d.frame_at, &symbols)
            });
            let mut violations = Vec::new();
            if ta.filtration.map(|f| f.dim_v2) != Some(3) {
                violations.push("dim V-2 is not 3".to_string());
            }
            if ta.fundamentality.is_none() {
                violations.push("V-3 is neither V-2 nor the tangent space".to_string());
            }
            let Some(fields) = d.fields.clone() else {
                report.notes.push("the adapted frame has no exact expression on the chart; structure constants were not extracted".into());
                out.status = if violations.is_empty() { Status::Ok } else { Status::Violation(violations) };
                out.torsion = Some(ta);
                return Ok(finish(out, report));
            };
            let [x, _, tt, _] = &fields;
            if !j.nijenhuis(x, tt).sub(x).is_zero() {
                violations.push("N(X, T) != X for the normalized field".into());
            }
            out.frame = Some(fields.clone().map(|f| f.to_vec()));
            out.torsion = Some(ta);
            let sc = match liealg::frame_structure_constants(&fields, chart.symbols()) {
                Ok(sc) => sc,
                Err(e @ Error::NotLocallyHomogeneous { .. }) => {
                    out.status = Status::NonHomogeneous(e.to_string());
                    return Ok(finish(out, report));
                }
                Err(e) => return Err(e.into()),
            };
            let model = InvariantModel::new(sc.clone(), standard_j(), Vec::new(), empty_table())?;
            let inv = invariant::analyze_invariant(&model)?;
            let e3 = liealg::full_basis()[2].clone();
            let props = liealg::check_structure_props(&sc, None, &|w| Some(is_tau_invariant(&model, w, &e3)));
            violations.extend(props.violations.iter().cloned());
            algebra_sections(&mut report, &sc, &inv, &props, &empty_table());
            out.status = if violations.is_empty() { Status::Ok } else { Status::Violation(violations) };
            out.sc = Some(sc.clone());
            out.classification = Some(liealg::classify(&sc));
            out.invariant = Some(inv);
            out.props = Some(props);
        }
        Body::Invariant { model, .. } => {
            report.model = "invariant".into();
            let inv = match invariant::analyze_invariant(model) {
                Ok(a) => a,
                Err(e @ (Error::TorsionDimension(_) | Error::Degenerate)) => {
                    out.status = Status::Degenerate(e.to_string());
                    if let Error::TorsionDimension(d) = e {
                        report.torsion.dim_v = d;
                    }
                    return Ok(finish(out, report));
                }
                Err(e) => return Err(e.into()),
            };
            let t = &mut report.torsion;
            t.dim_v = inv.dim_v();
            t.v_basis = inv.v_basis.iter().map(|v| report::vector(v, &symbols)).collect();
            t.nondegenerate = true;
            t.dim_v2 = Some(inv.dim_v2);
            t.dim_v3 = Some(inv.dim_v3);
            t.fundamentality = inv.fundamentality.map(fundamentality_name);
            t.generator = Some(format!("({})", report::vector(&inv.generator, &symbols).join(", ")));
            t.alpha = Some(report::expr(&inv.alpha, &symbols));
            t.beta = Some(report::expr(&inv.beta, &symbols));
            t.lambda = inv.lambda.as_ref().map(|l| report::Num::Exact(report::expr(l, &symbols)));
            t.mu = inv.mu.as_ref().map(|l| report::Num::Exact(report::expr(l, &symbols)));
            t.xi = inv.xi.as_ref().map(|x| report::vector(x, &symbols).into_iter().map(report::Num::Exact).collect());
            if inv.frame.is_none() {
                report.notes.push("tau coefficients depend on parameters; the frame is computed per sample, not symbolically".into());
            }
            report.frame = inv.frame.as_ref().map(|f| FrameSection::at(f, &symbols));
            out.frame = inv.frame.as_ref().and_then(|f| {
                let [a, b, c, d] = f;
                Some([a.exact()?.to_vec(), b.exact()?.to_vec(), c.exact()?.to_vec(), d.exact()?.to_vec()])
            });
            let mut violations = Vec::new();
            if inv.dim_v2 != 3 {
                violations.push(format!("dim V-2 = {}", inv.dim_v2));
            }
            if let Some([x, _, tt, _]) = &out.frame {
                if &model.nijenhuis(x, tt) != x {
                    violations.push("N(X, T) != X for the normalized field".into());
                }
            }
            let t_gen = inv.t_generator.clone();
            let props = liealg::check_structure_props(&model.sc, Some(&inv.v_basis), &|w| Some(is_tau_invariant(model, w, &t_gen)));
            violations.extend(props.violations.iter().cloned());
            algebra_sections(&mut report, &model.sc, &inv, &props, &symbols);
            out.status = if violations.is_empty() { Status::Ok } else { Status::Violation(violations) };
            out.sc = Some(model.sc.clone());
            out.classification = Some(liealg::classify(&model.sc));
            out.invariant = Some(inv);
            out.props = Some(props);
        }
    }
    Ok(finish(out, report))
}

/// A line `⟨w⟩` of `V` is a τ-eigenline iff `N(w, T) ∥ w`.
fn is_tau_invariant(m: &InvariantModel, w: &[RatExpr], t: &[RatExpr]) -> bool {
    let tw = m.nijenhuis(w, t);
    linalg::rank(&[w.to_vec(), tw]) <= 1
}

fn algebra_sections(report: &mut Report, sc: &StructureConstants, inv: &InvariantAnalysis, props: &PropReport, symbols: &SymbolTable) {
    let cls = liealg::classify(sc);
    let r = &cls.report;
    report.algebra = Some(AlgebraSection {
        structure_constants: sc.entries().iter().map(|(i, j, k, c)| (i + 1, j + 1, k + 1, c.format(symbols))).collect(),
        tag: cls.tag.name().into(),
        derived_dims: r.derived_dims.clone(),
        lower_central_dims: r.lower_central_dims.clone(),
        center_dim: r.center_dim,
        solvable: r.solvable,
        nilpotent: r.nilpotent,
        killing_rank: r.killing_rank,
        killing_signature: r.killing_signature,
        catalog_basis: cls.basis.as_ref().map(|b| b.iter().map(|v| report::vector(v, symbols)).collect()),
        note: cls.note.clone(),
    });
    report.intersection = Some(IntersectionSection {
        dim_v_cap_derived: inv.dim_v_cap_g1,
        dim_v2_cap_derived: inv.dim_v2_cap_g1,
        kind: inv.intersection.name().into(),
        center_meets_v: inv.center_meets_v,
    });
    let clause = |v: &[(&str, bool)]| v.iter().map(|(n, b)| (n.to_string(), *b)).collect::<Vec<_>>();
    report.props = Some(PropsSection {
        dim_derived: props.dim_derived,
        derived_in_range: props.derived_in_range,
        nonsolvable_split: props.nonsolvable_split,
        center_meets_v_trivially: props.center_meets_v_trivially,
        clauses: props.clauses.as_ref().map(|c| ClauseSection { algebra: c.tag.name().into(), unprimed: clause(&c.unprimed), primed: clause(&c.primed) }),
        violations: props.violations.clone(),
    });
}

fn finish(mut out: Outcome, mut report: Report) -> Outcome {
    report.status = out.status.name().into();
    match &out.status {
        Status::Degenerate(m) | Status::NonHomogeneous(m) => report.notes.push(m.clone()),
        Status::Violation(v) => report.notes.extend(v.iter().map(|m| format!("invariant violated: {m}"))),
        Status::Ok => {}
    }
    out.report = report;
    out
}
