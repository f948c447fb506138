use alloc::vec::Vec;

use super::circuit::{apply_brickwork, BrickworkCircuit};
use super::density::mutual_information;
use super::partition::Partition;
use super::state::{materialize_fixed_point, DenseState};
use crate::criteria::shannon_entropy;
use crate::mps::{evaluate_weights, FixedPointState};
use crate::{math, Error, Result};

/// How the sites of a fixed-point state are presented to the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SiteView {
    /// One circuit site per coarse site.
    #[default]
    Native,
    /// Sites of dimension `2^m` split into `m` qubits.
    Qubits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub before: f64,
    pub after: f64,
    /// `H({p_k})` of the block weights.
    pub shannon: f64,
    pub partition: Partition,
    pub seed: u64,
    pub depth: usize,
}

impl InvarianceReport {
    /// Largest pairwise disagreement of the three numbers.
    pub fn max_deviation(&self) -> f64 {
        let (a, b, c) = (self.before, self.after, self.shannon);
        math::abs(a - b).max(math::abs(a - c)).max(math::abs(b - c))
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() < tol
    }
}

/// Mutual information across the depth-`D` partition before and after a
/// seeded random brickwork circuit, compared with `H({p_k})`.
///
/// The partition is shifted by one site so that its boundaries cut gates of
/// the first layer.
pub fn invariance_on_state(psi: &DenseState, probabilities: &[f64], depth: usize, seed: u64) -> Result<InvarianceReport> {
    let mut reports = invariance_sweep(psi, probabilities, depth, &[seed])?;
    Ok(reports.remove(0))
}

/// [`invariance_on_state`] for several circuit seeds, sharing the `before` value.
pub fn invariance_sweep(
    psi: &DenseState,
    probabilities: &[f64],
    depth: usize,
    seeds: &[u64],
) -> Result<Vec<InvarianceReport>> {
    let partition = Partition::for_depth(psi.n_sites(), depth)?.rotated(1);
    let shannon = shannon_entropy(probabilities)?;
    let before = mutual_information(psi, &partition.a, &partition.b)?;
    seeds
        .iter()
        .map(|&seed| {
            let q = BrickworkCircuit::random(psi.n_sites(), psi.local_dim(), depth, seed);
            let phi = apply_brickwork(psi, &q)?;
            let after = mutual_information(&phi, &partition.a, &partition.b)?;
            Ok(InvarianceReport { before, after, shannon, partition: partition.clone(), seed, depth })
        })
        .collect()
}

/// Block probabilities `p_k` of a fixed point on `n` coarse sites.
pub fn fixed_point_probabilities(f: &FixedPointState, n: usize) -> Result<Vec<f64>> {
    evaluate_weights(&f.weights, n as u64 * f.cf_sites_per_site)
}

/// Runs the invariance experiment on the fixed point materialized on `n`
/// circuit sites (qubits when `view` is [`SiteView::Qubits`]).
pub fn lemma_invariance_experiment(
    f: &FixedPointState,
    n: usize,
    depth: usize,
    seed: u64,
    view: SiteView,
) -> Result<InvarianceReport> {
    let mut reports = lemma_invariance_sweep(f, n, depth, &[seed], view)?;
    Ok(reports.remove(0))
}

/// [`lemma_invariance_experiment`] over several circuit seeds with one
/// materialization of the state.
pub fn lemma_invariance_sweep(
    f: &FixedPointState,
    n: usize,
    depth: usize,
    seeds: &[u64],
    view: SiteView,
) -> Result<Vec<InvarianceReport>> {
    let per_site = match view {
        SiteView::Native => 1,
        SiteView::Qubits => {
            let m = f.physical_dim.trailing_zeros() as usize;
            if f.physical_dim != 1 << m || m == 0 {
                return Err(Error::BadFactorization { dim: f.physical_dim, product: 1 << m });
            }
            m
        }
    };
    if n % per_site != 0 {
        return Err(Error::GeometryMismatch(alloc::format!(
            "{n} qubits do not fill whole sites of {per_site} qubits"
        )));
    }
    let coarse = n / per_site;
    let mut psi = materialize_fixed_point(f, coarse)?;
    if view == SiteView::Qubits {
        psi = psi.as_qubits()?;
    }
    invariance_sweep(&psi, &fixed_point_probabilities(f, coarse)?, depth, seeds)
}
