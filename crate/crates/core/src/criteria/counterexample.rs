//! Four-branch state `Σ_k α_k |k k … k⟩` with `|α₁|² = 1/10`,
//! `|α₂|² = 3^{-1/4}/10`, `|α₃|² = t` and the remainder on `|α₄|²`.

use alloc::vec::Vec;

use super::entropy::shannon_entropy;
use super::rational::ExactWeight;
use crate::math;
use crate::{Error, Result};

const W1: f64 = 0.1;

fn w2() -> f64 {
    0.1 * math::powf(3.0, -0.25)
}

/// `(|α₁|², |α₂|², |α₃|², |α₄|²)` at parameter `t`.
pub fn counterexample_weights(t: f64) -> [f64; 4] {
    [W1, w2(), t, 1.0 - t - W1 - w2()]
}

/// Entropy of the four weights at `t`.
pub fn counterexample_entropy(t: f64) -> Result<f64> {
    shannon_entropy(&counterexample_weights(t))
}

/// The `t ∈ (0, 0.1)` at which the weight entropy equals one bit, by bisection.
pub fn counterexample_t_star() -> Result<f64> {
    let f = |t: f64| counterexample_entropy(t).map(|h| h - 1.0);
    let (mut lo, mut hi) = (1e-12, 0.1);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo * fhi > 0.0 {
        return Err(Error::Numerical("entropy does not cross one bit on (0, 0.1)"));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid)? < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Weights in exact form where known: `1/10`, `(1/10)·(1/3)^{1/4}`, and
/// floats for `t` and the remainder.
pub fn counterexample_exact_weights(t: f64) -> Vec<ExactWeight> {
    let w = counterexample_weights(t);
    alloc::vec![
        ExactWeight::rational(1, 10).expect("valid"),
        ExactWeight::scaled_root((1, 10), (1, 3), 4).expect("valid"),
        ExactWeight::Float(w[2]),
        ExactWeight::Float(w[3]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_star_near_0_0237() {
        let t = counterexample_t_star().unwrap();
        assert!((t - 0.023).abs() < 1e-3, "t* = {t}");
        assert!((counterexample_entropy(t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_weights_agree_with_floats() {
        let t = 0.02;
        let f = counterexample_weights(t);
        for (e, x) in counterexample_exact_weights(t).iter().zip(f) {
            assert!((e.value() - x).abs() < 1e-15);
        }
    }
}
