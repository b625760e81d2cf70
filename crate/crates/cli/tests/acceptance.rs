//! Acceptance run: one PASS/FAIL line per criterion. Most criteria are read
//! off the corpus rows, so the corpus and this file cannot drift apart; the
//! rest recompute directly against the library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use nijenhuis_cli::analysis::{self, Outcome};
use nijenhuis_cli::checks::{Row, RowStatus};
use nijenhuis_cli::corpus;
use nijenhuis_cli::spec::{self, Body, Loaded};
use nijenhuis_core::expr::{rat, Rational, RatExpr};
use nijenhuis_core::invariant::{self, Family};
use nijenhuis_core::kaehler::{closedness_residuals, d_omega_direct, FrameMetric};
use nijenhuis_core::liealg::{self, CatalogTag};
use nijenhuis_core::torsion::{self, PointData, Section};
use nijenhuis_core::{linalg, VectorField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn entry(file: &str) -> PathBuf {
    corpus_dir().join(file)
}

fn load(file: &str) -> Result<(Loaded, Outcome), String> {
    let l = spec::load_file(&entry(file)).map_err(|e| e.to_string())?;
    let o = analysis::analyze(&l, None).map_err(|e| e.to_string())?;
    Ok((l, o))
}

/// Rows of `file` selected by check name and (optionally) arguments; every
/// selected row must carry `want` and at least one must exist per selector.
fn rows(file: &str, selectors: &[(&str, &[&str])], want: RowStatus) -> Check {
    let all = corpus::verify_entry(&entry(file));
    let mut n = 0;
    for (check, args) in selectors {
        let hit: Vec<&Row> = all.iter().filter(|r| r.check == *check && (args.is_empty() || r.args == *args)).collect();
        if hit.is_empty() {
            return Err(format!("{file}: no row {check}{args:?}"));
        }
        for r in hit {
            if r.status != want {
                return Err(format!("{file}: {check}{:?} is {} ({})", r.args, r.status.label(), r.detail));
            }
            n += 1;
        }
    }
    Ok(format!("{n} rows"))
}

fn all_of(parts: Vec<Check>) -> Check {
    let mut notes = Vec::new();
    for p in parts {
        notes.push(p?);
    }
    Ok(notes.join(", "))
}

fn c1() -> Check {
    let pairs: &[(&str, &[&str])] = &[
        ("bracket", &["ReZ1", "ImZ1"]),
        ("bracket", &["ImZ1", "ImZ2"]),
        ("bracket", &["ReZ1", "ReZ2"]),
        ("bracket", &["ReZ1", "ImZ2"]),
        ("bracket", &["ImZ1", "ReZ2"]),
        ("bracket", &["ReZ2", "ImZ2"]),
    ];
    rows("kim_lee.toml", pairs, RowStatus::Pass)
}

fn c2() -> Check {
    let sel: &[(&str, &[&str])] = &[
        ("frame", &[]),
        ("structure_constants", &[]),
        ("bracket", &["X", "JX"]),
        ("bracket", &["X", "JT"]),
        ("algebra", &[]),
        ("fundamentality", &[]),
        ("intersection", &[]),
    ];
    rows("kim_lee.toml", sel, RowStatus::Pass)
}

fn c3() -> Check {
    let sel: &[(&str, &[&str])] = &[
        ("automorphism", &["V1", "V2", "V3", "V4"]),
        ("bracket", &["V2", "V3"]),
        ("bracket", &["V3", "V4"]),
        ("homomorphism", &[]),
    ];
    rows("kim_lee.toml", sel, RowStatus::Pass)
}

fn c4() -> Check {
    let sel: &[(&str, &[&str])] = &[
        ("frame", &[]),
        ("algebra", &[]),
        ("dim_v_cap_derived", &[]),
        ("dim_v2_cap_derived", &[]),
        ("automorphism", &["W1", "W2", "W3", "W4"]),
    ];
    rows("a32_example.toml", sel, RowStatus::Pass)
}

fn c5() -> Check {
    let mut parts = Vec::new();
    for f in Family::ALL {
        let r = invariant::verify_family(f).map_err(|e| e.to_string())?;
        if !r.iter().all(RatExpr::is_zero) {
            return Err(format!("{} residual nonzero", f.name()));
        }
    }
    for file in ["family_a41_nonfundamental.toml", "family_a41_normalized.toml", "family_a32_family.toml"] {
        parts.push(rows(file, &[("family_residual", &[]), ("nijenhuis", &[])], RowStatus::Pass));
    }
    all_of(parts)
}

fn c6() -> Check {
    let mut out = Vec::new();
    for (i, f) in Family::ALL.into_iter().enumerate() {
        let run = invariant::sample_family(f, 100, &mut ChaCha8Rng::seed_from_u64(100 + i as u64)).map_err(|e| e.to_string())?;
        if run.samples.len() < 100 || !run.disagreements().is_empty() {
            return Err(format!("{}: {} samples, {} disagreements", f.name(), run.samples.len(), run.disagreements().len()));
        }
        out.push(format!("{} x{}", f.name(), run.samples.len()));
    }
    for file in ["family_a41_nonfundamental.toml", "family_a41_normalized.toml", "family_a32_family.toml"] {
        rows(file, &[("sampled_clauses", &[]), ("clauses", &[]), ("primed_clauses", &[])], RowStatus::Pass)?;
    }
    Ok(out.join(", "))
}

fn c7() -> Check {
    all_of(vec![
        rows("a41_fundamental.toml", &[("nijenhuis", &["xi", "eta"]), ("fundamentality", &[]), ("equals", &["T"])], RowStatus::Pass),
        rows("a41_fundamental.toml", &[("frame", &[])], RowStatus::Flagged),
        rows("a32_zero_intersection.toml", &[("nijenhuis", &["X", "T"]), ("fundamentality", &[])], RowStatus::Pass),
        rows("a32_fundamental.toml", &[("nijenhuis", &["xi", "eta"]), ("fundamentality", &[])], RowStatus::Pass),
    ])
}

fn c8() -> Check {
    rows("kim_lee.toml", &[("metric_residuals", &[]), ("metric_closed", &[])], RowStatus::Pass)?;
    let (l, o) = load("kim_lee.toml")?;
    let Body::Coordinate { chart, .. } = &l.body else { return Err("not a chart".into()) };
    let frame = o.frame.ok_or("no exact frame")?.map(VectorField::from_vec);
    let zero = |v: &[RatExpr]| v.iter().all(RatExpr::is_zero);
    let e = chart.parse("exp(x1^2 + x2 + y1^2)").map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut cases = vec![(RatExpr::int(5), RatExpr::constant(rat(3, 7))), (e.clone(), e.scale(&rat(1, 2)))];
    for i in 0..20 {
        let k = RatExpr::constant(rat(rng.gen_range(1..=9), rng.gen_range(1..=5)));
        if i % 2 == 0 {
            let a = e.mul(&k);
            cases.push((a.clone(), a.scale(&rat(1, 2))));
        } else {
            let p = format!("{}*x1 + {}*y2^2 + {}", rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(1..=4));
            let q = chart.parse(&p).map_err(|e| e.to_string())?;
            cases.push((e.mul(&q), k.add(&q)));
        }
    }
    let mut closed = 0;
    for (a, c) in &cases {
        let m = FrameMetric::new(frame.clone(), a.clone(), c.clone()).map_err(|e| e.to_string())?;
        let (s, d) = (zero(&closedness_residuals(&m)), zero(&d_omega_direct(&m)));
        if s != d {
            return Err(format!("system {s} vs dOmega {d} for a = {}", a.format(chart.symbols())));
        }
        closed += s as usize;
    }
    Ok(format!("{} weight pairs agree, {closed} closed", cases.len()))
}

fn coordinate_invariants(l: &Loaded, o: &Outcome) -> Result<(), String> {
    let Body::Coordinate { j, .. } = &l.body else { unreachable!() };
    let d: Vec<VectorField> = (0..4).map(VectorField::coordinate).collect();
    let f = RatExpr::int(1).add(&RatExpr::symbol(0).mul(&RatExpr::symbol(0)));
    for a in &d {
        for b in &d {
            let n = j.nijenhuis(a, b);
            if !n.add(&j.nijenhuis(b, a)).is_zero() {
                return Err("N not antisymmetric".into());
            }
            if !j.nijenhuis(a, &j.apply(b)).add(&j.apply(&n)).is_zero() {
                return Err("N(X, JY) != -J N(X, Y)".into());
            }
            if !j.nijenhuis(&a.scale(&f), b).sub(&n.scale(&f)).is_zero() {
                return Err("N not tensorial".into());
            }
        }
    }
    if o.torsion.as_ref().is_none_or(|t| t.v_basis.len() != 2) {
        return Ok(());
    }
    let data = PointData::new(j, &l.point).map_err(|e| e.to_string())?;
    let v = data.torsion_basis();
    for a in &v {
        for b in &v {
            if !data.n_at(a, b).iter().all(RatExpr::is_zero) {
                return Err("N does not vanish on V x V".into());
            }
        }
    }
    let secs = torsion::nondegenerate_sections(j, &data).map_err(|e| e.to_string())?;
    let e0 = torsion::plus_eigenvector(&data, &secs[0]).map_err(|e| e.to_string())?;
    let mut all = secs.clone();
    all.push(Section::new(j, secs[0].a.scale(&f), None));
    for s in &all {
        let tau = torsion::tau_matrix_at(&data, s).map_err(|e| e.to_string())?;
        if !tau.trace().is_zero() {
            return Err("tau has nonzero trace".into());
        }
        if torsion::filtration_from_section(&data, s).map_err(|e| e.to_string())?.dim_v2 != 3 {
            return Err("dim V-2 != 3".into());
        }
        let e = torsion::plus_eigenvector(&data, s).map_err(|e| e.to_string())?;
        if linalg::rank(&[e0.clone(), e]) != 1 {
            return Err("V+ depends on the section".into());
        }
    }
    Ok(())
}

fn invariant_invariants(l: &Loaded, o: &Outcome) -> Result<(), String> {
    let Body::Invariant { model, .. } = &l.body else { unreachable!() };
    let basis = liealg::full_basis();
    for a in &basis {
        for b in &basis {
            let n = model.nijenhuis(a, b);
            let m = model.nijenhuis(b, a);
            if !n.iter().zip(&m).all(|(x, y)| x.add(y).is_zero()) {
                return Err("N not antisymmetric".into());
            }
            let l = model.nijenhuis(a, &model.apply_j(b));
            let r = model.apply_j(&n);
            if !l.iter().zip(&r).all(|(x, y)| x.add(y).is_zero()) {
                return Err("N(X, JY) != -J N(X, Y)".into());
            }
        }
    }
    let Some(inv) = &o.invariant else { return Ok(()) };
    for a in &inv.v_basis {
        for b in &inv.v_basis {
            if !model.nijenhuis(a, b).iter().all(RatExpr::is_zero) {
                return Err("N does not vanish on V x V".into());
            }
        }
    }
    if inv.dim_v2 != 3 {
        return Err("dim V-2 != 3".into());
    }
    // tau in the basis (A, JA) is [[alpha, beta], [beta, -alpha]]
    let ja = model.apply_j(&inv.generator);
    let ab = vec![inv.generator.clone(), ja.clone()];
    let t1 = linalg::coordinates(&ab, &model.nijenhuis(&inv.generator, &inv.t_generator)).ok_or("N(A, T) leaves V")?;
    let t2 = linalg::coordinates(&ab, &model.nijenhuis(&ja, &inv.t_generator)).ok_or("N(JA, T) leaves V")?;
    if !t1[0].add(&t2[1]).is_zero() {
        return Err("tau has nonzero trace".into());
    }
    Ok(())
}

fn c9() -> Check {
    let mut n = 0;
    for path in corpus::entries(&corpus_dir()).map_err(|e| e.to_string())? {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let (l, o) = load(&name)?;
        match &l.body {
            Body::Coordinate { .. } => coordinate_invariants(&l, &o),
            Body::Invariant { .. } => invariant_invariants(&l, &o),
        }
        .map_err(|e| format!("{name}: {e}"))?;
        if let Some(sc) = &o.sc {
            if !sc.satisfies_jacobi() {
                return Err(format!("{name}: Jacobi fails"));
            }
            let d = liealg::derived_algebra(sc).len();
            if !(2..=3).contains(&d) {
                return Err(format!("{name}: dim g' = {d}"));
            }
        }
        if let Some(p) = &o.props {
            if !p.center_meets_v_trivially {
                return Err(format!("{name}: z(g) meets V"));
            }
        }
        n += 1;
    }
    Ok(format!("{n} entries"))
}

fn value_at(f: &RatExpr, p: &[Rational; 4]) -> Option<f64> {
    f.evaluate(&|s| p.get(s as usize).cloned()).ok().map(|v| v.to_f64()).filter(|x| x.is_finite())
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-5 * a.abs().max(b.abs()).max(1.0)
}

/// Central difference of `f` along coordinate `k`.
fn fd(f: &RatExpr, p: &[Rational; 4], k: usize, h: &Rational) -> Option<f64> {
    let (mut lo, mut hi) = (p.clone(), p.clone());
    hi[k] += h;
    lo[k] -= h;
    Some((value_at(f, &hi)? - value_at(f, &lo)?) / (2.0 * nijenhuis_core::expr::Value::Exact(h.clone()).to_f64()))
}

fn random_point(rng: &mut ChaCha8Rng) -> [Rational; 4] {
    std::array::from_fn(|_| rat(rng.gen_range(-12..=12), rng.gen_range(1..=7)))
}

fn finite_differences(l: &Loaded, rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let h = rat(1, 100_000);
    let fields: Vec<(&String, VectorField)> = l.named.iter().map(|(n, v)| (n, VectorField::from_vec(v.clone()))).collect();
    let mut checked = 0;
    let mut points = 0;
    let mut tries = 0;
    while points < 10 {
        tries += 1;
        if tries > 200 {
            return Err("no admissible random points".into());
        }
        let p = random_point(rng);
        // skip points where something is singular
        let ok = fields.iter().all(|(_, f)| f.components().iter().all(|c| (0..4).all(|k| fd(c, &p, k, &h).is_some())));
        if !ok {
            continue;
        }
        points += 1;
        for (n, f) in &fields {
            for c in f.components() {
                for k in 0..4 {
                    let s = value_at(&c.derivative(k as u16), &p).ok_or("derivative singular")?;
                    let e = fd(c, &p, k, &h).unwrap();
                    if !close(s, e) {
                        return Err(format!("d/d{k} of a component of {n}: {s} vs {e}"));
                    }
                    checked += 1;
                }
            }
        }
        for (i, (nu, u)) in fields.iter().enumerate() {
            for (nv, v) in &fields[i + 1..] {
                let b = u.bracket(v);
                for m in 0..4 {
                    let s = value_at(&b.components()[m], &p).ok_or("bracket singular")?;
                    let mut e = 0.0;
                    for k in 0..4 {
                        let uk = value_at(&u.components()[k], &p).unwrap();
                        let vk = value_at(&v.components()[k], &p).unwrap();
                        e += uk * fd(&v.components()[m], &p, k, &h).unwrap() - vk * fd(&u.components()[m], &p, k, &h).unwrap();
                    }
                    if !close(s, e) {
                        return Err(format!("[{nu}, {nv}] component {m}: {s} vs {e}"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn random_basis(rng: &mut ChaCha8Rng) -> Vec<Vec<RatExpr>> {
    loop {
        let b: Vec<Vec<RatExpr>> =
            (0..4).map(|_| (0..4).map(|_| RatExpr::constant(rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))).collect()).collect();
        if linalg::rank(&b) == 4 {
            return b;
        }
    }
}

fn c10() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut entries, mut checked) = (0, 0);
    for path in corpus::entries(&corpus_dir()).map_err(|e| e.to_string())? {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let l = spec::load_file(&path).map_err(|e| e.to_string())?;
        if matches!(l.body, Body::Coordinate { .. }) {
            checked += finite_differences(&l, &mut rng).map_err(|e| format!("{name}: {e}"))?;
            entries += 1;
        }
    }
    let tags = [CatalogTag::Abelian, CatalogTag::A31A1, CatalogTag::A41, CatalogTag::A32A1, CatalogTag::NonSolvable];
    for tag in tags {
        let rep = tag.representative().ok_or("no representative")?;
        for _ in 0..50 {
            let sc = rep.change_basis(&random_basis(&mut rng)).map_err(|e| e.to_string())?;
            let got = liealg::classify(&sc).tag;
            if got != tag {
                return Err(format!("{tag} conjugate classified as {got}"));
            }
        }
    }
    Ok(format!("{checked} derivative and bracket values on {entries} chart entries, {} conjugations", 50 * tags.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Kim-Lee real frame brackets", c1),
        ("Kim-Lee adapted frame, structure constants, A4.1, V cap g' = V-", c2),
        ("Kim-Lee automorphisms and the isomorphism onto the associated algebra", c3),
        ("A3.2+A1 example: frame, class, intersections, automorphisms", c4),
        ("family identities, symbolic in the parameters", c5),
        ("clause equivalences on sampled parameters", c6),
        ("A4.1 and A3.2+A1 invariant models, flagged T factor", c7),
        ("metric closedness system against dOmega", c8),
        ("structural invariants over the corpus", c9),
        ("finite differences and classification under conjugation", c10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(note) => println!("PASS {:>2}  {name} ({note})", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2}  {name}: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
