mod common;

use common::*;
use nijenhuis_core::expr::{rat, RatExpr};
use nijenhuis_core::torsion::{self, PointData, Section, Sign};
use nijenhuis_core::Fundamentality;

#[test]
fn kim_lee_analysis() {
    let kl = kim_lee();
    let a = torsion::analyze(&kl.j, &origin()).unwrap();
    assert_eq!(a.dim_v(), 2);
    assert!(a.nondegenerate);
    let f = a.filtration.unwrap();
    assert_eq!((f.dim_v2, f.dim_v3), (3, 3));
    assert_eq!(a.fundamentality, Some(Fundamentality::NonFundamental));
    let d = a.distinguished.unwrap();
    let [x, jx, t, jt] = d.fields.clone().expect("exact tier");
    let r2 = RatExpr::sqrt_of(&rat(1, 2)).unwrap();
    let (re1, im1) = &kl.spec.z1;
    let (re2, im2) = &kl.spec.z2;
    let xs = im1.scale(&r2);
    assert!(x == xs || x == xs.neg(), "{x:?}");
    let s = if x == xs { RatExpr::one() } else { RatExpr::int(-1) };
    assert_eq!(jx, re1.scale(&r2).scale(&s));
    assert_eq!(t, re2.scale_q(&rat(1, 2)));
    assert_eq!(jt, im2.scale_q(&rat(-1, 2)));
    let (f1, f2) = d.frames(Sign::Canonical);
    assert_eq!(f1[2], f2[2]);
    assert_eq!(f1[0], f2[0].neg());
}

#[test]
fn a32_example_analysis() {
    let ex = a32_example();
    let a = torsion::analyze(&ex.j, &origin()).unwrap();
    assert!(a.nondegenerate);
    assert_eq!(a.fundamentality, Some(Fundamentality::NonFundamental));
    let [x, jx, t, jt] = a.distinguished.unwrap().fields.unwrap();
    let r2 = RatExpr::sqrt_of(&rat(1, 2)).unwrap();
    let [e1, e2, e3, e4] = &ex.e;
    let xs = e2.sub(e3).scale(&r2);
    assert!(x == xs || x == xs.neg());
    let s = if x == xs { RatExpr::one() } else { RatExpr::int(-1) };
    assert_eq!(jx, e2.add(e3).scale(&r2).scale(&s));
    assert_eq!(t, e1.add(e2));
    assert_eq!(jt, e3.scale_q(&rat(2, 1)).add(e4));
}

#[test]
fn rescaled_generator_gives_same_field_and_numeric_tier_agrees() {
    let kl = kim_lee();
    let p = [rat(1, 3), rat(-1, 2), rat(2, 1), rat(1, 5)];
    let data = PointData::new(&kl.j, &p).unwrap();
    let secs = torsion::nondegenerate_sections(&kl.j, &data).unwrap();
    let base = torsion::distinguished_from_section(&kl.j, &data, &secs[0]).unwrap();
    let f = kl.chart.parse("1 + x1^2 + y2^2").unwrap();
    let scaled = Section::new(&kl.j, secs[0].a.scale(&f), None);
    let other = torsion::distinguished_from_section(&kl.j, &data, &scaled).unwrap();
    assert_eq!(base.fields.as_ref().unwrap()[0], other.fields.as_ref().unwrap()[0]);
    assert_eq!(base.fields.as_ref().unwrap()[2], other.fields.as_ref().unwrap()[2]);
}

#[test]
fn numeric_tier_matches_exact_tier() {
    let kl = kim_lee();
    let p = [rat(1, 3), rat(-1, 2), rat(2, 1), rat(1, 5)];
    let data = PointData::new(&kl.j, &p).unwrap();
    let secs = torsion::nondegenerate_sections(&kl.j, &data).unwrap();
    let f = kl.chart.parse("1 + x1^2 + y1*y2").unwrap();
    for s in [secs[0].clone(), Section::new(&kl.j, secs[0].a.scale(&f), None)] {
        let exact = torsion::distinguished_from_section(&kl.j, &data, &s).unwrap();
        let num = torsion::numeric_frame_at(&data, &s).unwrap();
        for (e, n) in exact.frame_at.iter().zip(&num) {
            let e = e.to_f64().unwrap();
            let n = n.to_f64().unwrap();
            for (a, b) in e.iter().zip(&n) {
                assert!((a - b).abs() < 1e-9, "{e:?} vs {n:?}");
            }
        }
    }
}
