use crate::math;

/// Parameters of the circuit-counting estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypicalityParams {
    /// `D_N = ⌈log₂ N⌉^depth_exponent`.
    pub depth_exponent: f64,
    pub eps0: f64,
    /// `ε_N = ε₀ / N^α`.
    pub alpha: f64,
    /// Size of the gate set.
    pub n_g: u32,
    /// `polylog(x) = (ln x)^polylog_exponent`.
    pub polylog_exponent: f64,
}

impl Default for TypicalityParams {
    fn default() -> Self {
        Self { depth_exponent: 2.0, eps0: 0.01, alpha: 1.0, n_g: 3, polylog_exponent: 2.0 }
    }
}

/// `ln n_C + ln n_S - ln n_B`: log of (circuits × stabilizer states) over the
/// number of ε-distinguishable states. Negative values mean most states are
/// out of reach of depth-`D_N` circuits acting on stabilizer states.
pub fn typicality_log_ratio(n: u32, params: &TypicalityParams) -> f64 {
    let nf = n as f64;
    let depth = math::powf(math::ceil(math::log2(nf)), params.depth_exponent);
    let eps = params.eps0 / math::powf(nf, params.alpha);
    let ln_b = (1.0 - eps * eps) * math::powf(2.0, nf - 1.0);
    let ln_s = nf * nf / 2.0 * core::f64::consts::LN_2;
    let gates = nf * depth;
    let ln_c = gates * math::powf(math::ln(gates / eps), params.polylog_exponent) * math::ln(params.n_g as f64);
    ln_c + ln_s - ln_b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_at_thirty() {
        let v = typicality_log_ratio(30, &TypicalityParams::default());
        assert!(v < 0.0);
        // dominated by -2^29
        assert!((v / -(2f64.powi(29)) - 1.0).abs() < 0.01);
    }

    #[test]
    fn hand_value_at_twenty() {
        // D = 25, ε = 5e-4, ln n_C = 500·ln(1e6)²·ln 3
        let p = TypicalityParams::default();
        let ln_c = 500.0 * (1e6f64).ln().powi(2) * 3f64.ln();
        let ln_s = 200.0 * 2f64.ln();
        let ln_b = (1.0 - 2.5e-7) * 2f64.powi(19);
        assert!((typicality_log_ratio(20, &p) - (ln_c + ln_s - ln_b)).abs() < 1e-6);
    }

    #[test]
    fn decreasing_from_twenty() {
        let p = TypicalityParams::default();
        let vals: alloc::vec::Vec<f64> = (20..=40).map(|n| typicality_log_ratio(n, &p)).collect();
        assert!(vals.iter().all(|&v| v < 0.0));
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }
}
