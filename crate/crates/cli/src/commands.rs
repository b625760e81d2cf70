//! Command bodies. Each returns its standard output and exit code so the
//! binary stays a thin shell and tests can call them directly.

use std::fmt::Write as _;
use std::path::Path;

use nijenhuis_core::expr::RatExpr;
use nijenhuis_core::invariant::{self, Family};
use nijenhuis_core::kaehler::{closedness_residuals, d_omega_direct, FrameMetric};
use nijenhuis_core::VectorField;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::{self, Outcome};
use crate::corpus;
use crate::error::{CliError, Exit};
use crate::report::Num;
use crate::spec::{self, Body};

pub struct Output {
    pub stdout: String,
    pub exit: Exit,
}

fn load_and_analyze(path: &Path, point: Option<&str>) -> Result<(spec::Loaded, Outcome), CliError> {
    let loaded = spec::load_file(path)?;
    let p = point.map(spec::parse_point).transpose()?;
    if p.is_some() && matches!(loaded.body, Body::Invariant { .. }) {
        return Err(CliError::Usage("--point does not apply to invariant models".into()));
    }
    let out = analysis::analyze(&loaded, p.as_ref())?;
    Ok((loaded, out))
}

pub fn analyze(path: &Path, point: Option<&str>, json: Option<&Path>) -> Result<Output, CliError> {
    let (_, out) = load_and_analyze(path, point)?;
    if let Some(j) = json {
        let body = out.report.to_json();
        if j == Path::new("-") {
            return Ok(Output { stdout: body, exit: out.status.exit() });
        }
        std::fs::write(j, body)?;
    }
    Ok(Output { stdout: out.report.render_text(), exit: out.status.exit() })
}

pub fn classify(path: &Path) -> Result<Output, CliError> {
    let (_, out) = load_and_analyze(path, None)?;
    let mut o = String::new();
    match (&out.report.algebra, &out.classification) {
        (Some(a), Some(c)) => {
            let _ = writeln!(o, "{}: {}", out.report.id, a.tag);
            for (i, j, k, v) in &a.structure_constants {
                let _ = writeln!(o, "  [f{i}, f{j}] has {v} on f{k}");
            }
            let _ = writeln!(o, "  derived series {:?}, lower central series {:?}, center {}", a.derived_dims, a.lower_central_dims, a.center_dim);
            if let Some(s) = a.killing_signature {
                let _ = writeln!(o, "  Killing form rank {}, signature (+{}, -{}, 0:{})", a.killing_rank, s.0, s.1, s.2);
            }
            if let Some(b) = &a.catalog_basis {
                let _ = writeln!(o, "  catalog basis:");
                for (n, v) in b.iter().enumerate() {
                    let _ = writeln!(o, "    e{} = ({})", n + 1, v.join(", "));
                }
            }
            if let Some(split) = c.reductive_split {
                let _ = writeln!(o, "  g = g' + z(g): {split}");
            }
            if let Some(n) = &a.note {
                let _ = writeln!(o, "  {n}");
            }
        }
        _ => {
            let _ = writeln!(o, "{}: no associated algebra ({})", out.report.id, out.report.status);
            for n in &out.report.notes {
                let _ = writeln!(o, "  {n}");
            }
        }
    }
    Ok(Output { stdout: o, exit: out.status.exit() })
}

pub fn frames(path: &Path, point: Option<&str>) -> Result<Output, CliError> {
    let (_, out) = load_and_analyze(path, point)?;
    let mut o = String::new();
    let Some(f) = &out.report.frame else {
        let _ = writeln!(o, "{}: no adapted frame ({})", out.report.id, out.report.status);
        return Ok(Output { stdout: o, exit: out.status.exit() });
    };
    let pos = |v: &[Num]| v.iter().map(Num::to_string).collect::<Vec<_>>();
    let names = ["X", "JX", "T", "JT"];
    if let Some(p) = &out.report.point {
        let _ = writeln!(o, "{} at ({})", out.report.id, p.join(", "));
    } else {
        let _ = writeln!(o, "{}", out.report.id);
    }
    let _ = writeln!(o, "f' (canonical sign)");
    for (n, v) in names.iter().zip(&f.at_point) {
        let _ = writeln!(o, "  {n:<2} = ({})", pos(v).join(", "));
    }
    let _ = writeln!(o, "f'' (partner)");
    for (n, v) in names.iter().zip(&f.partner_at_point) {
        let _ = writeln!(o, "  {n:<2} = ({})", pos(v).join(", "));
    }
    if let Some(fields) = &f.fields {
        let _ = writeln!(o, "f' as fields on the chart");
        for (n, v) in names.iter().zip(fields) {
            let _ = writeln!(o, "  {n:<2} = ({})", v.join(", "));
        }
    }
    Ok(Output { stdout: o, exit: out.status.exit() })
}

pub fn kaehler_check(path: &Path, a: &str, c: &str) -> Result<Output, CliError> {
    let (loaded, out) = load_and_analyze(path, None)?;
    let Body::Coordinate { chart, .. } = &loaded.body else {
        return Err(CliError::Usage("kaehler-check needs a coordinate chart".into()));
    };
    let Some(frame) = &out.frame else {
        return Ok(Output {
            stdout: format!("{}: no exact adapted frame ({}); the metric system needs exact frame fields\n", out.report.id, out.report.status),
            exit: if out.status.exit() == Exit::Ok { Exit::Internal } else { out.status.exit() },
        });
    };
    let parse = |s: &str, what: &str| chart.parse(s).map_err(|e| CliError::Parse(format!("--{what}: {e}")));
    let (a, c) = (parse(a, "a")?, parse(c, "c")?);
    let m = FrameMetric::new(frame.clone().map(VectorField::from_vec), a, c)?;
    let sym = chart.symbols();
    let res = closedness_residuals(&m);
    let dw = d_omega_direct(&m);
    let zero = |v: &[RatExpr]| v.iter().all(RatExpr::is_zero);
    let mut o = String::new();
    let _ = writeln!(o, "{}: G = a (X*X + JX*JX) + c (T*T + JT*JT)", out.report.id);
    let _ = writeln!(o, "closedness residuals:");
    for (n, r) in ["T(a)", "JT(a) - c", "X(c)", "JX(c)"].iter().zip(&res) {
        let _ = writeln!(o, "  {n:<10} {}", r.format(sym));
    }
    let _ = writeln!(o, "dOmega on (X,JX,T), (X,JX,JT), (X,T,JT), (JX,T,JT):");
    for r in &dw {
        let _ = writeln!(o, "  {}", r.format(sym));
    }
    let (s, d) = (zero(&res), zero(&dw));
    let _ = writeln!(o, "almost Kaehler: {}", if s && d { "yes" } else { "no" });
    let _ = writeln!(o, "positivity of a and c is not checked");
    let _ = writeln!(o, "remark: the claim that homogeneous examples carry no invariant almost Kaehler structure is not machine-checked here");
    let exit = if s == d { Exit::Ok } else { Exit::Internal };
    if s != d {
        let _ = writeln!(o, "VIOLATION: residual system and dOmega disagree");
    }
    Ok(Output { stdout: o, exit })
}

pub fn family_check(name: &str) -> Result<Output, CliError> {
    let f = Family::from_name(name).ok_or_else(|| {
        let names: Vec<_> = Family::ALL.iter().map(|f| f.name()).collect();
        CliError::Usage(format!("unknown family `{name}` (known: {})", names.join(", ")))
    })?;
    let fm = invariant::family_model(f)?;
    let sym = &fm.model.symbols;
    let mut o = String::new();
    let mut ok = true;
    let _ = writeln!(o, "family {} on {}", f.name(), f.data().algebra);
    let res = invariant::verify_family(f)?;
    let zero = res.iter().all(RatExpr::is_zero);
    ok &= zero;
    let _ = writeln!(o, "  N(xi, eta) - claim = ({})  {}", res.iter().map(|r| r.format(sym)).collect::<Vec<_>>().join(", "), if zero { "zero" } else { "NONZERO" });
    let a = invariant::analyze_invariant(&fm.model)?;
    if let Some(c) = &a.clauses {
        let show = |v: &[(&str, bool)]| v.iter().map(|(n, b)| format!("({n}) {b}")).collect::<Vec<_>>().join(", ");
        let _ = writeln!(o, "  symbolic clauses: {}", show(&c.unprimed));
        let _ = writeln!(o, "  symbolic primed clauses: {}", show(&c.primed));
        ok &= c.unprimed_agree() && c.primed_agree();
    }
    let run = invariant::sample_family(f, 100, &mut ChaCha8Rng::seed_from_u64(0x5eed))?;
    let bad = run.disagreements().len();
    ok &= bad == 0 && run.samples.len() >= 100;
    let _ = writeln!(o, "  sampled: {} assignments, {} disagreements, {} draws rejected by constraints", run.samples.len(), bad, run.rejected);
    let _ = writeln!(o, "{}", if ok { "PASS" } else { "FAIL" });
    Ok(Output { stdout: o, exit: if ok { Exit::Ok } else { Exit::CorpusFailure } })
}

pub fn verify_corpus(dir: &Path, jobs: Option<usize>) -> Result<Output, CliError> {
    let r = corpus::verify(dir, jobs)?;
    Ok(Output { stdout: r.render(), exit: r.exit() })
}
