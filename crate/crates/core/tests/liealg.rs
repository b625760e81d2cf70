mod common;

use common::*;
use nijenhuis_core::expr::{rat, RatExpr};
use nijenhuis_core::liealg::{self, CatalogTag, StructureConstants};
use nijenhuis_core::torsion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(x: &[i64]) -> Vec<RatExpr> {
    x.iter().map(|&q| RatExpr::int(q)).collect()
}

#[test]
fn kim_lee_frame_is_a41() {
    let kl = kim_lee();
    let a = torsion::analyze(&kl.j, &origin()).unwrap();
    let frame = a.distinguished.unwrap().fields.unwrap();
    let sc = liealg::frame_structure_constants(&frame, kl.chart.symbols()).unwrap();
    let mut expect = StructureConstants::zero();
    expect.set(0, 1, v(&[0, 0, 1, 0]));
    expect.set(0, 3, v(&[0, 1, 0, 0]));
    assert_eq!(sc, expect);
    let c = liealg::classify(&sc);
    assert_eq!(c.tag, CatalogTag::A41);
    let report = liealg::check_structure_props(&sc, None, &|_| Some(true));
    assert!(report.all_pass(), "{:?}", report.violations);
    assert_eq!(report.dim_derived, 2);
}

#[test]
fn kim_lee_automorphisms_match_frame_algebra() {
    let kl = kim_lee();
    for f in &kl.v {
        assert!(kl.j.is_infinitesimal_automorphism(f));
    }
    let [v1, v2, v3, v4] = &kl.v;
    assert_eq!(v2.bracket(v3), v1.scale_q(&rat(-2, 1)));
    assert_eq!(v3.bracket(v4), v2.scale_q(&rat(4, 1)));
    let frame = torsion::analyze(&kl.j, &origin()).unwrap().distinguished.unwrap().fields.unwrap();
    for a in &kl.v {
        for x in &frame {
            assert!(a.bracket(x).is_zero());
        }
    }
    let src_basis = [v1.scale_q(&rat(-2, 1)), v2.clone(), v3.clone(), v4.clone()];
    let src = liealg::frame_structure_constants(&src_basis, kl.chart.symbols()).unwrap();
    let dst = liealg::frame_structure_constants(&frame, kl.chart.symbols()).unwrap();
    let map = [v(&[0, 0, 1, 0]), v(&[0, 1, 0, 0]), v(&[-1, 0, 0, 0]), v(&[0, 0, 0, -4])];
    assert!(liealg::is_homomorphism(&src, &dst, &map));
}

#[test]
fn a32_frame_is_a32() {
    let ex = a32_example();
    let sc = liealg::frame_structure_constants(&ex.e, ex.chart.symbols()).unwrap();
    assert_eq!(sc, CatalogTag::A32A1.representative().unwrap());
    let frame = torsion::analyze(&ex.j, &origin()).unwrap().distinguished.unwrap().fields.unwrap();
    let fsc = liealg::frame_structure_constants(&frame, ex.chart.symbols()).unwrap();
    assert_eq!(liealg::classify(&fsc).tag, CatalogTag::A32A1);
    let report = liealg::check_structure_props(&fsc, None, &|_| None);
    assert!(report.all_pass(), "{:?}", report.violations);
    assert!(report.center_meets_v_trivially);
    let clauses = report.clauses.unwrap();
    assert_eq!(clauses.unprimed, vec![("a", true), ("b", true)]);
    for w in &ex.w {
        assert!(ex.j.is_infinitesimal_automorphism(w));
    }
}

#[test]
fn non_constant_structure_functions_are_rejected() {
    let ex = a32_example();
    let mut frame = ex.e.clone();
    frame[0] = frame[0].scale(&ex.chart.parse("1 + x3^2").unwrap());
    let err = liealg::frame_structure_constants(&frame, ex.chart.symbols()).unwrap_err();
    assert!(matches!(err, nijenhuis_core::error::Error::NotLocallyHomogeneous { .. }), "{err}");
}

fn random_basis(rng: &mut ChaCha8Rng) -> Vec<Vec<RatExpr>> {
    loop {
        let b: Vec<Vec<RatExpr>> = (0..4)
            .map(|_| (0..4).map(|_| RatExpr::constant(rat(rng.gen_range(-4..=4), rng.gen_range(1..=3)))).collect())
            .collect();
        if nijenhuis_core::linalg::rank(&b) == 4 {
            return b;
        }
    }
}

#[test]
fn classification_survives_basis_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for tag in [CatalogTag::Abelian, CatalogTag::A31A1, CatalogTag::A41, CatalogTag::A32A1, CatalogTag::NonSolvable] {
        let rep = tag.representative().unwrap();
        for _ in 0..50 {
            let sc = rep.change_basis(&random_basis(&mut rng)).unwrap();
            assert!(sc.satisfies_jacobi());
            let c = liealg::classify(&sc);
            assert_eq!(c.tag, tag);
            if let Some(b) = c.basis {
                if tag != CatalogTag::NonSolvable {
                    assert_eq!(sc.change_basis(&b).unwrap(), rep);
                }
            }
        }
    }
}

#[test]
fn solvable_catalog_killing_degenerate_on_derived() {
    for tag in [CatalogTag::A31A1, CatalogTag::A41, CatalogTag::A32A1] {
        let sc = tag.representative().unwrap();
        let k = liealg::killing_form(&sc);
        for x in liealg::derived_algebra(&sc) {
            let kx = nijenhuis_core::linalg::mat_vec(&k, &x);
            assert!(kx.iter().all(RatExpr::is_zero), "{tag}");
        }
    }
    let r = liealg::series_and_center(&CatalogTag::NonSolvable.representative().unwrap());
    assert_eq!(r.killing_rank, 3);
    assert_eq!(r.killing_signature, Some((2, 1, 1)));
}
