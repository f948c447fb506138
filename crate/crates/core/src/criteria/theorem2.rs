use alloc::vec::Vec;

use super::{Evidence, ExactWeight, RatioEvidence, Status, SymbolicRatio, Verdict};
use crate::criteria::rationality_test;

pub const DEFAULT_Q_MAX_RAT: u64 = 1_000_000;
pub const DEFAULT_TAU_RAT: f64 = 1e-9;

/// Necessary condition for an exact short-range fixed point: every ratio
/// `|α_i|⁴/|α_j|⁴` is rational. Irrationality is only certified symbolically.
pub fn theorem2_check(weights: &[ExactWeight], q_max: u64, tau_rat: f64) -> Verdict {
    let usable: Vec<usize> = (0..weights.len()).filter(|&k| !weights[k].is_zero()).collect();
    let mut evidence = Evidence::default();
    let mut excluded = false;
    for (a, &i) in usable.iter().enumerate() {
        for &j in &usable[a + 1..] {
            let (wi, wj) = (&weights[i], &weights[j]);
            let x = {
                let r = wi.value() / wj.value();
                r * r
            };
            let entry = match SymbolicRatio::squared_ratio(wi, wj) {
                Some(s) => {
                    let rational = s.is_rational();
                    excluded |= !rational;
                    RatioEvidence { i, j, value: s.value(), exact: Some(s), rational, heuristic: false, approximant: None }
                }
                None => {
                    let approx = rationality_test(x, q_max, tau_rat);
                    RatioEvidence {
                        i,
                        j,
                        value: x,
                        exact: None,
                        rational: approx.is_some(),
                        heuristic: true,
                        approximant: approx,
                    }
                }
            };
            evidence.ratios.push(entry);
        }
    }
    Verdict {
        status: if excluded { Status::ExactSrnExcluded } else { Status::Inconclusive },
        evidence,
        residue_class: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexample_is_excluded() {
        let w = alloc::vec![
            ExactWeight::rational(1, 10).unwrap(),
            ExactWeight::scaled_root((1, 10), (1, 3), 4).unwrap(),
            ExactWeight::Float(0.023),
            ExactWeight::Float(1.0 - 0.1 - 0.0759835685651593 - 0.023),
        ];
        let v = theorem2_check(&w, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
        assert_eq!(v.status, Status::ExactSrnExcluded);
        let r = &v.evidence.ratios[0];
        assert_eq!((r.i, r.j), (0, 1));
        assert_eq!(r.exact.as_ref().unwrap().display(), "3^(1/2)");
        assert!(v.evidence.ratios.iter().skip(1).all(|r| r.heuristic));
    }

    #[test]
    fn equal_weights_are_inconclusive() {
        let w = alloc::vec![ExactWeight::rational(1, 2).unwrap(), ExactWeight::rational(1, 2).unwrap()];
        let v = theorem2_check(&w, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
        assert_eq!(v.status, Status::Inconclusive);
        assert!(v.evidence.ratios[0].rational);
        assert_eq!(v.evidence.ratios[0].value, 1.0);
    }

    #[test]
    fn one_third_two_thirds() {
        let w = alloc::vec![ExactWeight::rational(1, 3).unwrap(), ExactWeight::rational(2, 3).unwrap()];
        let v = theorem2_check(&w, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.evidence.ratios[0].value, 0.25);
    }

    #[test]
    fn float_irrationality_is_never_certified() {
        let w = alloc::vec![ExactWeight::Float(0.1), ExactWeight::Float(0.1 * 3f64.powf(-0.25))];
        let v = theorem2_check(&w, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
        assert_eq!(v.status, Status::Inconclusive);
        assert!(!v.evidence.ratios[0].rational);
        assert!(v.evidence.ratios[0].heuristic);
    }

    #[test]
    fn zero_weights_are_skipped() {
        let w = alloc::vec![ExactWeight::rational(0, 1).unwrap(), ExactWeight::rational(1, 1).unwrap()];
        let v = theorem2_check(&w, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT);
        assert!(v.evidence.ratios.is_empty());
        assert_eq!(v.status, Status::Inconclusive);
    }
}
