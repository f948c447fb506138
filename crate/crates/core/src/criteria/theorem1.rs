use alloc::vec::Vec;
use core::ops::RangeInclusive;

use num_integer::Integer;

use super::{shannon_entropy, ClassEntropy, Evidence, Status, Verdict, WindowStats};
use crate::criteria::rationality_test;
use crate::math;
use crate::mps::{evaluate_weights, WeightSpectrum};
use crate::{Error, Result};

pub const DEFAULT_TAU_INT: f64 = 1e-6;
pub const DEFAULT_N_WINDOW: RangeInclusive<u64> = 1000..=2000;
/// Largest denominator accepted when testing `φ/2π` for rationality.
pub const PHASE_Q_MAX: u64 = 10_000;

fn entropy_at(w: &WeightSpectrum, n: u64) -> Result<Option<f64>> {
    match evaluate_weights(w, n) {
        Ok(p) => Ok(Some(shannon_entropy(&p)?)),
        Err(Error::DegenerateNormalization { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Sufficient condition for long-range nonstabilizerness: the weight entropy
/// stays away from the integers in the large-`N` limit.
pub fn theorem1_check(w: &WeightSpectrum, window: RangeInclusive<u64>, tau_int: f64) -> Result<Verdict> {
    if w.len() <= 1 {
        return Ok(Verdict {
            status: Status::Inconclusive,
            evidence: Evidence {
                classes: alloc::vec![ClassEntropy {
                    modulus: 1,
                    residue: 0,
                    entropy: Some(0.0),
                    integer_distance: Some(0.0),
                }],
                min_integer_distance: Some(0.0),
                ..Default::default()
            },
            residue_class: None,
        });
    }

    let mut modulus: u64 = 1;
    let mut commensurate = true;
    for phi in w.phases() {
        match rationality_test(phi / (2.0 * core::f64::consts::PI), PHASE_Q_MAX, 1e-9) {
            Some((_, q)) => modulus = modulus.lcm(&q),
            None => {
                commensurate = false;
                break;
            }
        }
    }

    if commensurate {
        let mut classes = Vec::new();
        for r in 1..=modulus {
            let h = entropy_at(w, r)?;
            classes.push(ClassEntropy {
                modulus,
                residue: r % modulus,
                entropy: h,
                integer_distance: h.map(math::distance_to_naturals),
            });
        }
        let examined: Vec<&ClassEntropy> = classes.iter().filter(|c| c.entropy.is_some()).collect();
        if examined.is_empty() {
            return Err(Error::DegenerateNormalization { n: modulus, norm: 0.0 });
        }
        let min = examined.iter().filter_map(|c| c.integer_distance).fold(f64::INFINITY, f64::min);
        let certified = min > tau_int;
        let residue_class = if certified || modulus == 1 {
            None
        } else {
            examined
                .iter()
                .find(|c| c.integer_distance.is_some_and(|d| d > tau_int))
                .map(|c| (modulus, c.residue))
        };
        return Ok(Verdict {
            status: if certified { Status::LrnCertified } else { Status::Inconclusive },
            evidence: Evidence { classes, min_integer_distance: Some(min), ..Default::default() },
            residue_class,
        });
    }

    let (lo, hi) = (*window.start(), *window.end());
    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    let mut min = f64::INFINITY;
    let mut vanishing = 0;
    for n in window {
        match entropy_at(w, n)? {
            Some(h) => {
                inf = inf.min(h);
                sup = sup.max(h);
                min = min.min(math::distance_to_naturals(h));
            }
            None => vanishing += 1,
        }
    }
    if !min.is_finite() {
        return Err(Error::DegenerateNormalization { n: lo, norm: 0.0 });
    }
    Ok(Verdict {
        status: if min > tau_int { Status::LrnCertified } else { Status::Inconclusive },
        evidence: Evidence {
            window: Some(WindowStats { n_min: lo, n_max: hi, inf, sup, min_integer_distance: min, vanishing }),
            min_integer_distance: Some(min),
            ..Default::default()
        },
        residue_class: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::binary_entropy;
    use crate::mps::PhaseTerm;
    use crate::C64;
    use core::f64::consts::PI;

    fn ghz(p: f64) -> WeightSpectrum {
        WeightSpectrum::constant(&[p.sqrt(), (1.0 - p).sqrt()])
    }

    fn chi3(phi: f64) -> WeightSpectrum {
        WeightSpectrum::new(alloc::vec![
            alloc::vec![PhaseTerm::new(C64::new(1.0, 0.0), 0.0)],
            alloc::vec![
                PhaseTerm::new(C64::new(1.0, 0.0), phi),
                PhaseTerm::new(C64::new(1.0, 0.0), -phi)
            ],
        ])
    }

    #[test]
    fn ghz_03_is_certified() {
        let v = theorem1_check(&ghz(0.3), DEFAULT_N_WINDOW, DEFAULT_TAU_INT).unwrap();
        assert_eq!(v.status, Status::LrnCertified);
        let h = v.evidence.classes[0].entropy.unwrap();
        assert!((h - binary_entropy(0.3)).abs() < 1e-12);
        assert!((h - 0.8813).abs() < 1e-4);
    }

    #[test]
    fn ghz_half_is_inconclusive() {
        let v = theorem1_check(&ghz(0.5), DEFAULT_N_WINDOW, DEFAULT_TAU_INT).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert!((v.evidence.classes[0].entropy.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_block_is_inconclusive_with_zero_entropy() {
        let v = theorem1_check(&WeightSpectrum::constant(&[1.0]), DEFAULT_N_WINDOW, DEFAULT_TAU_INT).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.evidence.classes[0].entropy, Some(0.0));
    }

    #[test]
    fn chi3_phases() {
        let check = |phi: f64| theorem1_check(&chi3(phi), DEFAULT_N_WINDOW, DEFAULT_TAU_INT).unwrap();
        let v = check(PI / 2.0);
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.evidence.classes[0].modulus, 4);
        assert_eq!(check(PI / 3.0).status, Status::Inconclusive);
        let v = check(2.0 * PI / 5.0);
        assert_eq!(v.status, Status::LrnCertified);
        assert_eq!(v.evidence.classes.len(), 5);
    }

    #[test]
    fn incommensurate_phase_uses_window() {
        let v = theorem1_check(&chi3(1.0), 1000..=1200, DEFAULT_TAU_INT).unwrap();
        let w = v.evidence.window.expect("window stats");
        assert!(w.inf <= w.sup);
        assert_eq!((w.n_min, w.n_max), (1000, 1200));
    }
}
