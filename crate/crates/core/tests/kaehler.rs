mod common;

use common::*;
use nijenhuis_core::expr::{rat, RatExpr};
use nijenhuis_core::kaehler::{closedness_residuals, d_omega_direct, FrameMetric};
use nijenhuis_core::torsion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kim_lee_frame() -> (KimLee, [nijenhuis_core::VectorField; 4]) {
    let kl = kim_lee();
    let f = torsion::analyze(&kl.j, &origin()).unwrap().distinguished.unwrap().fields.unwrap();
    (kl, f)
}

fn all_zero(v: &[RatExpr]) -> bool {
    v.iter().all(RatExpr::is_zero)
}

#[test]
fn constant_weights_force_c_zero() {
    let (_, f) = kim_lee_frame();
    let c = RatExpr::constant(rat(3, 7));
    let m = FrameMetric::new(f, RatExpr::int(5), c.clone()).unwrap();
    let r = closedness_residuals(&m);
    assert_eq!(r, [RatExpr::zero(), c.neg(), RatExpr::zero(), RatExpr::zero()]);
    assert!(!all_zero(&d_omega_direct(&m)));
}

#[test]
fn exponential_solution_is_closed() {
    let (kl, f) = kim_lee_frame();
    let a = kl.chart.parse("exp(x1^2 + x2 + y1^2)").unwrap();
    let c = kl.chart.parse("exp(x1^2 + x2 + y1^2)/2").unwrap();
    let m = FrameMetric::new(f.clone(), a.clone(), c).unwrap();
    assert!(all_zero(&closedness_residuals(&m)));
    assert!(all_zero(&d_omega_direct(&m)));
    let m = FrameMetric::new(f, a.clone(), a).unwrap();
    let r = closedness_residuals(&m);
    assert!(!r[1].is_zero());
    assert!(r[0].is_zero() && r[2].is_zero() && r[3].is_zero());
    assert!(!all_zero(&d_omega_direct(&m)));
}

#[test]
fn residuals_reduce_on_kim_lee() {
    let (kl, f) = kim_lee_frame();
    let [x, jx, t, jt] = f.clone();
    for (a, c) in [("x1^2*y2 + 3", "y1 - x2^2 + 1"), ("exp(y1)*x2", "exp(x1 + y2)")] {
        let a = kl.chart.parse(a).unwrap();
        let c = kl.chart.parse(c).unwrap();
        let m = FrameMetric::new(f.clone(), a.clone(), c.clone()).unwrap();
        let reduced = [t.apply(&a), jt.apply(&a).sub(&c), x.apply(&c), jx.apply(&c)];
        assert_eq!(closedness_residuals(&m), reduced);
    }
}

#[test]
fn d_omega_agrees_with_system_on_random_weights() {
    let (kl, f) = kim_lee_frame();
    let e = kl.chart.parse("exp(x1^2 + x2 + y1^2)").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut zeros = 0;
    for i in 0..20 {
        let k = RatExpr::constant(rat(rng.gen_range(1..=9), rng.gen_range(1..=5)));
        let (a, c) = if i % 2 == 0 {
            let a = e.mul(&k);
            (a.clone(), a.scale(&rat(1, 2)))
        } else {
            let p = format!("{}*x1 + {}*y2^2 + {}", rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(1..=4));
            let q = kl.chart.parse(&p).unwrap();
            (e.mul(&q), k.add(&q))
        };
        let m = FrameMetric::new(f.clone(), a, c).unwrap();
        let sys = all_zero(&closedness_residuals(&m));
        assert_eq!(sys, all_zero(&d_omega_direct(&m)));
        zeros += sys as usize;
    }
    assert_eq!(zeros, 10);
}

#[test]
fn natural_metric_frames_are_isometric() {
    let (kl, _) = kim_lee_frame();
    let p = [rat(1, 2), rat(-1, 3), rat(2, 1), rat(0, 1)];
    let q = [rat(-2, 1), rat(1, 1), rat(1, 5), rat(3, 1)];
    let at = |pt: &[nijenhuis_core::expr::Rational; 4]| torsion::analyze(&kl.j, pt).unwrap().distinguished.unwrap().fields.unwrap();
    let (fp, fq) = (at(&p), at(&q));
    let mp = FrameMetric::natural(fp.clone()).unwrap();
    let mq = FrameMetric::natural(fq.clone()).unwrap();
    // the frame-preserving identification sends frame[i] at p to frame[i] at q
    for i in 0..4 {
        for j in 0..4 {
            let gp = torsion::value_at(&mp.pairing(&fp[i], &fp[j]), &p).unwrap();
            let gq = torsion::value_at(&mq.pairing(&fq[i], &fq[j]), &q).unwrap();
            assert_eq!(gp, gq);
        }
    }
}
