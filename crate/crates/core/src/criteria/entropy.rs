use crate::math;
use crate::{Error, Result};

/// Base-2 Shannon entropy with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    let sum: f64 = p.iter().sum();
    if math::abs(sum - 1.0) > 1e-9 || p.iter().any(|&x| !(-1e-15..=1.0 + 1e-15).contains(&x)) {
        return Err(Error::NotNormalized { sum });
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * math::log2(x)).sum::<f64>().max(0.0))
}
