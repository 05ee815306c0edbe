mod common;

use proptest::prelude::*;
use strat_mech_core::bundle::{left_i, mech_connection, TangentAtFrame};
use strat_mech_core::dynamics::geodesic_flow;
use strat_mech_core::liealg::{fundamental_field, pairing, Pair5, SkewMatrix5, Vec5};
use strat_mech_core::momenta::*;
use strat_mech_core::sample;
use strat_mech_core::strata::IsotropyType;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_matches_definition(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let s = sample::phase_point(&mut r, IsotropyType::L0Trivial);
        let m = mu_full(&s).value;
        prop_assert!((m - mu_by_definition(&s.q, &s.p)).norm() < 1e-14);
        let x = sample::skew(&mut r, 1.0);
        prop_assert!((pairing(&m, &x) - s.p.dot(&fundamental_field(&x, &s.q))).abs() < 1e-13);
    }

    #[test]
    fn equivariance(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let s = sample::phase_point(&mut r, IsotropyType::L0Trivial);
        let g = sample::rotation(&mut r);
        let lhs = mu_full(&s.transform(&g)).value;
        let rhs = mu_full(&s).value.conjugate(&g);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn bilinear_in_the_covector(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut r = common::rng(seed);
        let q = sample::config(&mut r);
        let p1: Pair5 = Pair5::from_column_slice(sample::gaussian::<_, 10>(&mut r).as_slice());
        let p2: Pair5 = Pair5::from_column_slice(sample::gaussian::<_, 10>(&mut r).as_slice());
        let lhs = mu_by_definition(&q, &(p1 * a + p2 * b));
        let rhs = mu_by_definition(&q, &p1) * a + mu_by_definition(&q, &p2) * b;
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn w_momentum_is_the_connection(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let f = sample::frame(&mut r, 0.0);
        let t = TangentAtFrame::projected(f, sample::gaussian::<_, 4>(&mut r));
        prop_assert!((mu_w(&t) - mech_connection(&t)).abs() < 1e-14);
    }

    #[test]
    fn j_w_is_phase_invariant(seed in any::<u64>(), theta in -6.0f64..6.0) {
        let mut r = common::rng(seed);
        let st = sample::regular_state(&mut r, &Default::default());
        let t = TangentAtFrame::projected(st.frame, st.lifted_covector());
        let j0 = j_w(&t, &st.spin.representative()).unwrap();
        prop_assert!(j0.abs() < 1e-12);
        let rot = st.gauge_rotate(theta);
        let t = TangentAtFrame::projected(rot.frame, rot.lifted_covector());
        let j1 = j_w(&t, &rot.spin.representative()).unwrap();
        prop_assert!((j1 - j0).abs() < 1e-12);
        let off = TangentAtFrame::projected(st.frame, st.lifted_covector() + left_i(st.frame.coords()) * 0.3);
        prop_assert!((j_w(&off, &st.spin.representative()).unwrap() - 0.3).abs() < 1e-12);
    }
}

#[test]
fn startup_self_test_passes() {
    self_test().unwrap();
}

#[test]
fn conserved_along_the_exact_flow() {
    let mut r = common::rng(21);
    for _ in 0..10 {
        let s = sample::phase_point(&mut r, IsotropyType::L0Trivial);
        let m0 = mu_full(&s).value;
        let mut worst: f64 = 0.0;
        for k in 0..=1000 {
            let f = geodesic_flow(&s, 0.1 * k as f64);
            worst = worst.max((mu_full(&f).value - m0).norm());
        }
        assert!(worst < 1e-10, "{worst}");
    }
}

/// Covectors annihilating the span of the configuration have zero momentum.
#[test]
fn vanishes_on_the_annihilator() {
    let mut r = common::rng(23);
    for _ in 0..20 {
        let q = sample::config(&mut r);
        let c = sample::gaussian::<_, 2>(&mut r);
        // p = q A with A symmetric gives μ = q (A - A^T) q^T = 0.
        let a = nalgebra::Matrix2::new(c[0], c[1], c[1], -0.3 * c[0]);
        let p = q * a;
        let m = mu_by_definition(&q, &p);
        assert!(m.norm() < 1e-12, "{}", m.norm());
    }
    let mut q = Pair5::zeros();
    q.set_column(0, &Vec5::x());
    q.set_column(1, &Vec5::y());
    let mut p = Pair5::zeros();
    p.set_column(0, &Vec5::x());
    assert_eq!(mu_by_definition(&q, &p), SkewMatrix5::zero());
}
