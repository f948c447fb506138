//! Serializable views of core results.

use lrn_core::criteria::{Evidence, RatioEvidence, Verdict};
use lrn_core::mps::{CanonicalForm, FixedPointState, RgTraceRow, WeightSpectrum};
use lrn_core::C64;
use serde::{Deserialize, Serialize};

use crate::request::AnalysisRequest;

/// Everything written for one run: the request (for replay), the overall
/// status, the exit code and the pipeline-specific result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub request: AnalysisRequest,
    pub status: String,
    pub exit_code: i32,
    pub result: serde_json::Value,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockView {
    pub weight: [f64; 2],
    pub bond_dim: usize,
    pub group: Option<usize>,
    pub gauge_phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupView {
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalView {
    pub blocking: usize,
    pub normalization: f64,
    pub blocks: Vec<BlockView>,
    pub groups: Vec<GroupView>,
}

impl From<&CanonicalForm> for CanonicalView {
    fn from(cf: &CanonicalForm) -> Self {
        Self {
            blocking: cf.blocking,
            normalization: cf.normalization,
            blocks: cf
                .blocks
                .iter()
                .map(|b| BlockView {
                    weight: pair(b.weight),
                    bond_dim: b.tensor.chi(),
                    group: b.group,
                    gauge_phase: b.gauge_phase,
                })
                .collect(),
            groups: cf
                .groups
                .iter()
                .map(|g| GroupView { representative: g.representative, members: g.members.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermView {
    pub c: [f64; 2],
    pub phase: f64,
}

/// `spectrum[k]` lists the terms `c e^{iφN}` of block `k`.
pub fn weight_view(w: &WeightSpectrum) -> Vec<Vec<TermView>> {
    w.blocks.iter().map(|b| b.iter().map(|t| TermView { c: pair(t.c), phase: t.phase }).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedBlockView {
    pub label: usize,
    pub bond_dim: usize,
    pub schmidt_weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointView {
    pub steps: usize,
    pub physical_dim: usize,
    pub cf_sites_per_site: u64,
    pub blocking: usize,
    pub blocks: Vec<FixedBlockView>,
}

impl From<&FixedPointState> for FixedPointView {
    fn from(f: &FixedPointState) -> Self {
        Self {
            steps: f.steps,
            physical_dim: f.physical_dim,
            cf_sites_per_site: f.cf_sites_per_site,
            blocking: f.blocking,
            blocks: f
                .blocks
                .iter()
                .map(|b| FixedBlockView {
                    label: b.label,
                    bond_dim: b.bond_dim(),
                    schmidt_weights: b.schmidt_weights.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRowView {
    pub step: usize,
    pub physical_dim: usize,
    pub lambda2: Vec<f64>,
    pub cross: f64,
}

impl From<&RgTraceRow> for TraceRowView {
    fn from(r: &RgTraceRow) -> Self {
        Self { step: r.step, physical_dim: r.physical_dim, lambda2: r.lambda2.clone(), cross: r.cross }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassView {
    pub modulus: u64,
    pub residue: u64,
    pub entropy: Option<f64>,
    pub integer_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowView {
    pub n_min: u64,
    pub n_max: u64,
    pub inf: f64,
    pub sup: f64,
    pub min_integer_distance: f64,
    pub vanishing: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioView {
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub exact: Option<String>,
    pub rational: bool,
    pub heuristic: bool,
    pub approximant: Option<(i64, u64)>,
}

impl From<&RatioEvidence> for RatioView {
    fn from(r: &RatioEvidence) -> Self {
        Self {
            i: r.i,
            j: r.j,
            value: r.value,
            exact: r.exact.as_ref().map(|s| s.display()),
            rational: r.rational,
            heuristic: r.heuristic,
            approximant: r.approximant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictView {
    pub status: String,
    pub residue_class: Option<(u64, u64)>,
    pub min_integer_distance: Option<f64>,
    pub classes: Vec<ClassView>,
    pub window: Option<WindowView>,
    pub ratios: Vec<RatioView>,
}

impl From<&Verdict> for VerdictView {
    fn from(v: &Verdict) -> Self {
        let Evidence { classes, window, min_integer_distance, ratios } = &v.evidence;
        Self {
            status: v.status.label().into(),
            residue_class: v.residue_class,
            min_integer_distance: *min_integer_distance,
            classes: classes
                .iter()
                .map(|c| ClassView {
                    modulus: c.modulus,
                    residue: c.residue,
                    entropy: c.entropy,
                    integer_distance: c.integer_distance,
                })
                .collect(),
            window: window.as_ref().map(|w| WindowView {
                n_min: w.n_min,
                n_max: w.n_max,
                inf: w.inf,
                sup: w.sup,
                min_integer_distance: w.min_integer_distance,
                vanishing: w.vanishing,
            }),
            ratios: ratios.iter().map(RatioView::from).collect(),
        }
    }
}
