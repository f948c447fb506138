//! Verdicts on weight spectra: the sufficient long-range condition, the
//! necessary exact short-range condition, GHZ classification and the
//! typicality estimate.

mod counterexample;
mod entropy;
mod ghz;
mod rational;
mod theorem1;
mod theorem2;
mod typicality;

use alloc::vec::Vec;

pub use counterexample::{
    counterexample_entropy, counterexample_exact_weights, counterexample_t_star, counterexample_weights,
};
pub use entropy::shannon_entropy;
pub use ghz::{ghz_classify, GhzClass};
pub use rational::{rationality_test, ExactWeight, SymbolicRatio};
pub use theorem1::{theorem1_check, DEFAULT_N_WINDOW, DEFAULT_TAU_INT, PHASE_Q_MAX};
pub use theorem2::{theorem2_check, DEFAULT_Q_MAX_RAT, DEFAULT_TAU_RAT};
pub use typicality::{typicality_log_ratio, TypicalityParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    LrnCertified,
    ExactSrnExcluded,
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::LrnCertified => "LRN_CERTIFIED",
            Status::ExactSrnExcluded => "EXACT_SRN_EXCLUDED",
            Status::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// Entropy of the block weights on one residue class `N ≡ residue (mod modulus)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEntropy {
    pub modulus: u64,
    pub residue: u64,
    /// `None` when every weight vanishes on the class.
    pub entropy: Option<f64>,
    pub integer_distance: Option<f64>,
}

/// Entropy range over a window of system sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowStats {
    pub n_min: u64,
    pub n_max: u64,
    pub inf: f64,
    pub sup: f64,
    pub min_integer_distance: f64,
    pub vanishing: u64,
}

/// Rationality of one ratio `|α_i|⁴ / |α_j|⁴`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioEvidence {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    /// Exact form when both weights are exact.
    pub exact: Option<SymbolicRatio>,
    pub rational: bool,
    /// Decided from floating-point data by continued fractions.
    pub heuristic: bool,
    pub approximant: Option<(i64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Evidence {
    pub classes: Vec<ClassEntropy>,
    pub window: Option<WindowStats>,
    pub min_integer_distance: Option<f64>,
    pub ratios: Vec<RatioEvidence>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Evidence,
    /// `(s, r)`: a residue class `N ≡ r (mod s)` on which the condition holds
    /// when it fails on others.
    pub residue_class: Option<(u64, u64)>,
}
