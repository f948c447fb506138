//! Exact small-instance reference engine: dense states, brickwork circuits,
//! entropies, partial transposes and the light-cone reduction of shallow
//! circuits.

mod circuit;
mod clifford;
mod cone;
mod density;
mod experiment;
mod partition;
mod state;

pub use circuit::{apply_brickwork, brickwork_pairs, random_brickwork, BrickworkCircuit, TwoSiteGate};
pub use clifford::{
    apply_clifford, apply_pauli, dense_clifford_state, gate_matrix, stabilizer_dense_state, stabilizer_residual,
};
pub use cone::{causal_cone_reduce, BoundaryChannel, CausalCone};
pub use density::{
    fannes_check, flatness_check, mutual_information, partial_transpose, proportionality_residual, random_density,
    reduced_density, region_entropy, trace_distance_mixed, trace_distance_pure, von_neumann_entropy, FannesReport,
    DEFAULT_TAU_FLAT, DENSITY_CAP, EIGEN_FLOOR, PSD_TOL,
};
pub use experiment::{
    fixed_point_probabilities, invariance_on_state, invariance_sweep, lemma_invariance_experiment, lemma_invariance_sweep,
    InvarianceReport, SiteView,
};
pub use partition::Partition;
pub use state::{lift_fixed_point, materialize_fixed_point, materialize_mps, mps_amplitudes, DenseState, AMP_CAP};
