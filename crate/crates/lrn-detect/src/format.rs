//! Input files: tensors and weight lists as JSON, tableaux as text.

use std::path::Path;

use lrn_core::criteria::ExactWeight;
use lrn_core::linalg::CMat;
use lrn_core::mps::MpsTensor;
use lrn_core::stabilizer::StabilizerTableau;
use lrn_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::{DetectError, Result};
use crate::weights::WeightJson;

/// `{"d", "chi", "matrices"}` with `matrices[i][row][col] = [re, im]`, plus
/// optional exact block weights `|α_k|²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub d: usize,
    pub chi: usize,
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_weights: Option<Vec<WeightJson>>,
}

impl TensorFile {
    pub fn from_tensor(a: &MpsTensor) -> Self {
        let matrices = a
            .matrices()
            .iter()
            .map(|m| (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect())
            .collect();
        Self { d: a.d(), chi: a.chi(), matrices, exact_weights: None }
    }

    pub fn with_weights(mut self, w: Vec<ExactWeight>) -> Self {
        self.exact_weights = Some(w.into_iter().map(WeightJson).collect());
        self
    }

    pub fn tensor(&self) -> Result<MpsTensor> {
        if self.d == 0 || self.chi == 0 {
            return Err(DetectError::Format("d and chi must be positive".into()));
        }
        if self.matrices.len() != self.d {
            return Err(DetectError::Format(format!("expected {} matrices, found {}", self.d, self.matrices.len())));
        }
        let mut mats = Vec::with_capacity(self.d);
        for (i, m) in self.matrices.iter().enumerate() {
            if m.len() != self.chi || m.iter().any(|row| row.len() != self.chi) {
                return Err(DetectError::Format(format!("matrix {i} is not {0} x {0}", self.chi)));
            }
            if m.iter().flatten().flatten().any(|x| !x.is_finite()) {
                return Err(DetectError::Format(format!("matrix {i} has non-finite entries")));
            }
            mats.push(CMat::from_fn(self.chi, self.chi, |r, c| C64::new(m[r][c][0], m[r][c][1])));
        }
        Ok(MpsTensor::new(mats)?)
    }

    pub fn weights(&self) -> Option<Vec<ExactWeight>> {
        self.exact_weights.as_ref().map(|w| w.iter().map(|x| x.0.clone()).collect())
    }
}

/// `{"exact_weights": [...]}`: block weights without a tensor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightFile {
    pub exact_weights: Vec<WeightJson>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumInput {
    Tensor(TensorFile),
    Weights(Vec<ExactWeight>),
}

/// Parses either a tensor file or a weight file.
pub fn parse_spectrum_input(text: &str) -> Result<SpectrumInput> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("matrices").is_some() {
        Ok(SpectrumInput::Tensor(serde_json::from_value(v)?))
    } else if v.get("exact_weights").is_some() {
        let w: WeightFile = serde_json::from_value(v)?;
        if w.exact_weights.is_empty() {
            return Err(DetectError::Format("exact_weights is empty".into()));
        }
        Ok(SpectrumInput::Weights(w.exact_weights.into_iter().map(|x| x.0).collect()))
    } else {
        Err(DetectError::Format("expected a tensor (\"matrices\") or a weight list (\"exact_weights\")".into()))
    }
}

pub fn parse_tableau(text: &str) -> Result<StabilizerTableau> {
    Ok(StabilizerTableau::from_text(text)?)
}

pub fn tableau_text(t: &StabilizerTableau) -> String {
    t.to_text()
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| DetectError::io(path, e))
}
