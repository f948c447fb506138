use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result, C64};

/// One term `c e^{iφN}` of a block coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTerm {
    pub c: C64,
    /// Phase in `(-π, π]`.
    pub phase: f64,
}

impl PhaseTerm {
    pub fn new(c: C64, phase: f64) -> Self {
        Self { c, phase: math::wrap_phase(phase) }
    }
}

/// Block coefficients `α_k(N) = Σ_j c_j e^{iφ_j N}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightSpectrum {
    pub blocks: Vec<Vec<PhaseTerm>>,
}

pub const DEGENERATE_NORM: f64 = 1e-14;

impl WeightSpectrum {
    pub fn new(blocks: Vec<Vec<PhaseTerm>>) -> Self {
        Self { blocks }
    }

    /// One N-independent real coefficient per block.
    pub fn constant(coefficients: &[f64]) -> Self {
        Self {
            blocks: coefficients
                .iter()
                .map(|&c| alloc::vec![PhaseTerm::new(C64::new(c, 0.0), 0.0)])
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Adds a term to block `k`, merging with an existing term of the same phase.
    pub fn push_term(&mut self, k: usize, term: PhaseTerm) {
        let terms = &mut self.blocks[k];
        match terms.iter_mut().find(|t| phase_close(t.phase, term.phase)) {
            Some(t) => t.c += term.c,
            None => terms.push(term),
        }
    }

    /// Unnormalized `α_k(N)`.
    pub fn amplitudes(&self, n: u64) -> Vec<C64> {
        self.blocks
            .iter()
            .map(|terms| {
                terms
                    .iter()
                    .map(|t| {
                        // reduce the angle before multiplying to keep precision at large N
                        let turns = t.phase / (2.0 * core::f64::consts::PI);
                        let frac = reduced_product(turns, n);
                        t.c * C64::from_polar(1.0, 2.0 * core::f64::consts::PI * frac)
                    })
                    .sum()
            })
            .collect()
    }

    pub fn phases(&self) -> Vec<f64> {
        self.blocks.iter().flatten().map(|t| t.phase).collect()
    }
}

/// Fractional part of `x·n`, computed without forming the full product.
fn reduced_product(x: f64, n: u64) -> f64 {
    let hi = (n >> 20) as f64;
    let lo = (n & 0xFFFFF) as f64;
    let a = x * hi * 1_048_576.0;
    let b = x * lo;
    let fa = a - math::floor(a);
    let fb = b - math::floor(b);
    let s = fa + fb;
    s - math::floor(s)
}

fn phase_close(a: f64, b: f64) -> bool {
    math::abs(math::wrap_phase(a - b)) < 1e-12
}

/// `p_k(N) = |α_k(N)|² / Σ_j |α_j(N)|²`.
pub fn evaluate_weights(w: &WeightSpectrum, n: u64) -> Result<Vec<f64>> {
    let amps = w.amplitudes(n);
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let norm = math::sqrt(total);
    if norm < DEGENERATE_NORM {
        return Err(Error::DegenerateNormalization { n, norm });
    }
    Ok(amps.iter().map(|a| a.norm_sqr() / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

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
    fn ghz_is_half_half() {
        let w = WeightSpectrum::constant(&[1.0, 1.0]);
        for n in [1, 2, 7, 1000] {
            assert_eq!(evaluate_weights(&w, n).unwrap(), alloc::vec![0.5, 0.5]);
        }
    }

    #[test]
    fn chi3_phi_pi() {
        for n in 1..8 {
            let p = evaluate_weights(&chi3(PI), n).unwrap();
            assert!((p[0] - 0.2).abs() < 1e-12 && (p[1] - 0.8).abs() < 1e-12);
        }
    }

    #[test]
    fn chi3_half_pi_odd_sites() {
        for n in [1, 3, 5, 101] {
            let p = evaluate_weights(&chi3(PI / 2.0), n).unwrap();
            assert!((p[0] - 1.0).abs() < 1e-12 && p[1] < 1e-12);
        }
    }

    #[test]
    fn all_vanishing_is_degenerate() {
        let w = WeightSpectrum::new(alloc::vec![alloc::vec![
            PhaseTerm::new(C64::new(1.0, 0.0), PI / 2.0),
            PhaseTerm::new(C64::new(1.0, 0.0), -PI / 2.0)
        ]]);
        assert!(matches!(evaluate_weights(&w, 1), Err(Error::DegenerateNormalization { n: 1, .. })));
    }

    #[test]
    fn phases_are_wrapped_and_merged() {
        let mut w = WeightSpectrum::new(alloc::vec![Vec::new()]);
        w.push_term(0, PhaseTerm::new(C64::new(1.0, 0.0), 3.0 * PI));
        w.push_term(0, PhaseTerm::new(C64::new(2.0, 0.0), -PI));
        assert_eq!(w.blocks[0].len(), 1);
        assert!((w.blocks[0][0].phase - PI).abs() < 1e-12);
        assert_eq!(w.blocks[0][0].c, C64::new(3.0, 0.0));
    }
}
