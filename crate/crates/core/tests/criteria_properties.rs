use core::f64::consts::PI;

use lrn_core::criteria::{
    counterexample_exact_weights, counterexample_t_star, ghz_classify, rationality_test, shannon_entropy,
    theorem1_check, theorem2_check, typicality_log_ratio, ExactWeight, GhzClass, Status, TypicalityParams,
    DEFAULT_Q_MAX_RAT, DEFAULT_TAU_INT, DEFAULT_TAU_RAT,
};
use lrn_core::mps::{PhaseTerm, WeightSpectrum};
use lrn_core::C64;
use proptest::prelude::*;

fn ghz_spectrum(alpha_sq: f64) -> WeightSpectrum {
    WeightSpectrum::constant(&[alpha_sq.sqrt(), (1.0 - alpha_sq).sqrt()])
}

proptest! {
    #[test]
    fn rationals_are_recovered(p in -1000i64..=1000, q in 1u64..=1000) {
        let (a, b) = rationality_test(p as f64 / q as f64, 1000, 1e-12).expect("rational");
        prop_assert_eq!(a as i128 * q as i128, p as i128 * b as i128);
        prop_assert!(b <= q);
    }

    #[test]
    fn theorem2_is_scale_invariant(ws in prop::collection::vec(1i64..=50, 2..=4), scale in 1i64..=20) {
        let total: i64 = ws.iter().sum();
        let plain: Vec<ExactWeight> = ws.iter().map(|&w| ExactWeight::rational(w, total).unwrap()).collect();
        let scaled: Vec<ExactWeight> = ws.iter().map(|&w| ExactWeight::rational(w * scale, total * scale).unwrap()).collect();
        let a = theorem2_check(&plain, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
        let b = theorem2_check(&scaled, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.status, Status::Inconclusive);
    }

    #[test]
    fn entropy_bounded_by_log_support(ws in prop::collection::vec(0.0f64..1.0, 1..=8)) {
        prop_assume!(ws.iter().sum::<f64>() > 1e-6);
        let total: f64 = ws.iter().sum();
        let p: Vec<f64> = ws.iter().map(|w| w / total).collect();
        let h = shannon_entropy(&p).unwrap();
        prop_assert!(h >= 0.0 && h <= (p.len() as f64).log2() + 1e-12);
    }
}

#[test]
fn ghz_grid_agrees_with_entropy_criterion() {
    for k in 0..=100i64 {
        let a = k as f64 / 100.0;
        let class = ghz_classify(&ExactWeight::rational(k, 100).unwrap()).unwrap();
        let verdict = theorem1_check(&ghz_spectrum(a), 1..=1, DEFAULT_TAU_INT).unwrap();
        let expected = match k {
            0 | 100 => GhzClass::Stabilizer,
            50 => GhzClass::Srn,
            _ => GhzClass::Lrn,
        };
        assert_eq!(class, expected, "alpha^2 = {a}");
        assert_eq!(verdict.status == Status::LrnCertified, class == GhzClass::Lrn, "alpha^2 = {a}");
    }
}

#[test]
fn chi3_phases_give_residue_classes() {
    // α₀ = 1, α₁ = 2cos(φN): with φ = π/2 the second weight vanishes on odd N.
    let mut w = WeightSpectrum::new(vec![vec![PhaseTerm::new(C64::new(1.0, 0.0), 0.0)], vec![]]);
    w.push_term(1, PhaseTerm::new(C64::new(1.0, 0.0), PI / 2.0));
    w.push_term(1, PhaseTerm::new(C64::new(1.0, 0.0), -PI / 2.0));
    let v = theorem1_check(&w, 1..=1, DEFAULT_TAU_INT).unwrap();
    assert_eq!(v.status, Status::Inconclusive);
    assert_eq!(v.evidence.classes.len(), 4);
}

#[test]
fn counterexample_ratio_is_irrational() {
    let t = counterexample_t_star().unwrap();
    let v = theorem2_check(&counterexample_exact_weights(t), DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
    assert_eq!(v.status, Status::ExactSrnExcluded);
    assert!(v.evidence.ratios.iter().any(|r| r.exact.as_ref().is_some_and(|s| !s.is_rational())));
}

#[test]
fn typicality_decreasing_and_negative() {
    let p = TypicalityParams::default();
    let values: Vec<f64> = (20..=40).map(|n| typicality_log_ratio(n, &p)).collect();
    assert!(values.iter().all(|&v| v < 0.0));
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}
