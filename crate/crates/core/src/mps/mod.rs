//! Translation-invariant matrix product states: transfer operators, canonical
//! form, gauge relations and the renormalization-group flow.

mod canonical;
pub mod fixtures;
mod gauge;
mod normal;
mod rg;
mod tensor;
mod transfer;
mod weights;

pub use canonical::{
    canonical_decompose, canonical_decompose_with, BlockGroup, CanonicalBlock, CanonicalForm, CanonicalOptions,
    DEFAULT_Q_MAX, DEFAULT_TAU_BLOCK,
};
pub use gauge::{gauge_equivalent, local_orthogonal, GaugeRelation, DEFAULT_TAU_LO};
pub use normal::{is_normal, is_normal_with, NormalityWitness, DEFAULT_MAX_ITER};
pub use rg::{
    compress_physical, rg_fixed_point, rg_fixed_point_from, rg_step, FixedBlock, FixedPointState, RgStep,
    RgTraceRow, DEFAULT_RG_MAX_ITER, DEFAULT_RG_TOL, DEFAULT_TAU_RANK,
};
pub use tensor::{MpsTensor, DEFAULT_PHYS_CAP};
pub use transfer::{
    correlation_length, mixed_transfer, sorted_eigenvalues, spectral, spectral_of, transfer_matrix,
    CorrelationLength, SpectralData, TransferOperator, DEFAULT_TAU_SPEC,
};
pub use weights::{evaluate_weights, PhaseTerm, WeightSpectrum, DEGENERATE_NORM};

/// Block a tensor `q` times with the default physical-dimension cap.
pub fn block_tensor(a: &MpsTensor, q: usize) -> crate::Result<MpsTensor> {
    a.block(q, DEFAULT_PHYS_CAP)
}
