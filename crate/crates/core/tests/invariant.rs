mod common;

use common::*;
use nijenhuis_core::expr::{rat, RatExpr, SymbolTable};
use nijenhuis_core::invariant::{self, Family, Intersection, InvariantModel};
use nijenhuis_core::liealg::{self, CatalogTag};
use nijenhuis_core::torsion::{self, PointVector};
use nijenhuis_core::Fundamentality;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(x: &[i64]) -> Vec<RatExpr> {
    x.iter().map(|&q| RatExpr::int(q)).collect()
}

fn model(tag: CatalogTag, frame: [&[i64]; 4]) -> InvariantModel {
    let sc = tag.representative().unwrap();
    let frame = frame.map(v);
    invariant::build_from_frame_spec(sc, frame, Vec::new(), SymbolTable::params_only::<&str>(&[]).unwrap()).unwrap()
}

fn exact(p: &PointVector) -> Vec<RatExpr> {
    p.exact().expect("exact frame vector").to_vec()
}

#[test]
fn families_have_zero_residual() {
    for f in Family::ALL {
        let r = invariant::verify_family(f).unwrap();
        assert!(r.iter().all(RatExpr::is_zero), "{}: {r:?}", f.name());
    }
}

#[test]
fn family_eta_is_bracket() {
    for f in Family::ALL {
        let fm = invariant::family_model(f).unwrap();
        let [xi, jxi, eta, jeta] = &fm.frame;
        assert_eq!(&fm.model.bracket(xi, jxi), eta, "{}", f.name());
        assert_eq!(&fm.model.apply_j(xi), jxi);
        assert_eq!(&fm.model.apply_j(eta), jeta);
    }
}

#[test]
fn section_212_model() {
    let m = model(CatalogTag::A41, [&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 1, 0, 0], &[1, 0, -1, 0]]);
    let n = m.nijenhuis(&v(&[0, 0, 1, 0]), &v(&[0, 1, 0, 0]));
    assert_eq!(n, v(&[0, 0, 0, 1]));
    let a = invariant::analyze_invariant(&m).unwrap();
    assert_eq!(a.fundamentality, Some(Fundamentality::Fundamental));
    assert_eq!(a.intersection, Intersection::Zero);
    let [x, jx, t, jt] = a.frame.unwrap();
    let r = RatExpr::sqrt_of(&rat(1, 2)).unwrap();
    assert_eq!(exact(&x), vec![RatExpr::zero(), RatExpr::zero(), r.clone(), r.clone()]);
    assert_eq!(exact(&jx), vec![RatExpr::zero(), RatExpr::zero(), r.neg(), r.clone()]);
    // the computed T differs from the printed 2/sqrt(2) factor
    assert_eq!(exact(&t), v(&[0, 1, 0, 0]));
    assert_eq!(exact(&jt), v(&[1, 0, -1, 0]));
    let c = a.clauses.unwrap();
    assert!(c.primed.iter().all(|(_, b)| *b));
    assert!(c.unprimed.iter().all(|(_, b)| !*b));
}

#[test]
fn section_222_models() {
    let m = model(CatalogTag::A32A1, [&[0, 0, 1, 0], &[1, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 1]]);
    assert_eq!(m.nijenhuis(&v(&[0, 0, 1, 0]), &v(&[-1, 0, 0, 0])), v(&[0, 0, 1, 0]));
    let a = invariant::analyze_invariant(&m).unwrap();
    assert_eq!(a.fundamentality, Some(Fundamentality::NonFundamental));
    assert_eq!((a.dim_v_cap_g1, a.dim_v2_cap_g1), (0, 1));
    let [x, _, t, _] = a.frame.unwrap();
    assert_eq!(exact(&x), v(&[0, 0, 1, 0]));
    assert_eq!(exact(&t), v(&[-1, 0, 0, 0]));

    let m = model(CatalogTag::A32A1, [&[0, 0, 1, 0], &[0, 1, 0, 1], &[-1, -1, 0, 0], &[0, 1, 2, 0]]);
    assert_eq!(m.nijenhuis(&v(&[0, 0, 1, 0]), &v(&[-1, -1, 0, 0])), v(&[0, 0, -2, 0]));
    let a = invariant::analyze_invariant(&m).unwrap();
    assert_eq!(a.fundamentality, Some(Fundamentality::Fundamental));
    assert_eq!((a.dim_v_cap_g1, a.dim_v2_cap_g1), (0, 1));
    assert!(a.clauses.unwrap().primed.iter().all(|(_, b)| *b));
}

#[test]
fn kim_lee_invariant_model_matches_coordinates() {
    let kl = kim_lee();
    let frame = torsion::analyze(&kl.j, &origin()).unwrap().distinguished.unwrap().fields.unwrap();
    let sc = liealg::frame_structure_constants(&frame, kl.chart.symbols()).unwrap();
    let j = vec![v(&[0, -1, 0, 0]), v(&[1, 0, 0, 0]), v(&[0, 0, 0, -1]), v(&[0, 0, 1, 0])];
    let m = InvariantModel::new(sc, j, Vec::new(), SymbolTable::params_only::<&str>(&[]).unwrap()).unwrap();
    let a = invariant::analyze_invariant(&m).unwrap();
    assert_eq!(a.tag, CatalogTag::A41);
    assert_eq!(a.fundamentality, Some(Fundamentality::NonFundamental));
    assert_eq!(a.intersection, Intersection::VMinus);
    assert!(!a.center_meets_v);
    let c = a.clauses.unwrap();
    assert!(c.unprimed.iter().all(|(_, b)| *b), "{c:?}");
    // invariant N agrees with the coordinate N pushed through the frame
    let inv = nijenhuis_core::linalg::inverse(&(0..4).map(|r| frame.iter().map(|f| f.components()[r].clone()).collect()).collect()).unwrap();
    let e = liealg::full_basis();
    for i in 0..4 {
        for k in i + 1..4 {
            let n = kl.j.nijenhuis(&frame[i], &frame[k]);
            let coords = nijenhuis_core::linalg::mat_vec(&inv, n.components());
            assert_eq!(coords, m.nijenhuis(&e[i], &e[k]));
        }
    }
}

#[test]
fn symbolic_family_clauses() {
    for f in Family::ALL {
        let fm = invariant::family_model(f).unwrap();
        let a = invariant::analyze_invariant(&fm.model).unwrap();
        let c = a.clauses.unwrap();
        assert!(c.unprimed.iter().all(|(_, b)| *b), "{}: {c:?}", f.name());
        assert!(c.primed.iter().all(|(_, b)| !*b), "{}: {c:?}", f.name());
        assert_eq!(a.dim_v2, 3);
    }
}

#[test]
fn sampled_clauses_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for f in Family::ALL {
        let run = invariant::sample_family(f, 100, &mut rng).unwrap();
        assert!(run.disagreements().is_empty(), "{}", f.name());
        for s in &run.samples {
            assert_eq!(s.analysis.dim_v2, 3);
            assert!(!s.analysis.center_meets_v);
        }
    }
    for tag in [CatalogTag::A41, CatalogTag::A32A1] {
        let run = invariant::sample_generic(&tag.representative().unwrap(), 100, &mut rng).unwrap();
        assert!(run.disagreements().is_empty(), "{tag}");
    }
}
