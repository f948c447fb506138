use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::DenseState;
use crate::linalg::{self, CMat};
use crate::{Error, Result};

/// One two-site gate; `matrix` is `d² × d²` with the first site major.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSiteGate {
    pub sites: (usize, usize),
    pub matrix: CMat,
}

impl TwoSiteGate {
    pub fn adjoint(&self) -> Self {
        Self { sites: self.sites, matrix: self.matrix.adjoint() }
    }
}

/// Brickwork circuit on a ring. Layer `ℓ` acts on the pairs `(j, j+1)` with
/// `j ≡ ℓ (mod 2)`; the pair `(n−1, 0)` closes the ring on odd layers when `n`
/// is even.
#[derive(Debug, Clone, PartialEq)]
pub struct BrickworkCircuit {
    pub n_sites: usize,
    pub local_dim: usize,
    pub layers: Vec<Vec<TwoSiteGate>>,
}

/// Site pairs of layer `layer` on a ring of `n` sites.
pub fn brickwork_pairs(n: usize, layer: usize) -> Vec<(usize, usize)> {
    let offset = layer % 2;
    let mut pairs: Vec<(usize, usize)> = (offset..n.saturating_sub(1)).step_by(2).map(|j| (j, j + 1)).collect();
    if offset == 1 && n % 2 == 0 && n > 2 {
        pairs.push((n - 1, 0));
    }
    pairs
}

impl BrickworkCircuit {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Circuit with every gate the identity.
    pub fn identity(n_sites: usize, local_dim: usize, depth: usize) -> Self {
        let dim = local_dim * local_dim;
        let layers = (0..depth)
            .map(|l| {
                brickwork_pairs(n_sites, l)
                    .into_iter()
                    .map(|sites| TwoSiteGate { sites, matrix: CMat::identity(dim, dim) })
                    .collect()
            })
            .collect();
        Self { n_sites, local_dim, layers }
    }

    /// Haar-random gates from a ChaCha8 stream seeded with `seed`.
    pub fn random(n_sites: usize, local_dim: usize, depth: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = local_dim * local_dim;
        let layers = (0..depth)
            .map(|l| {
                brickwork_pairs(n_sites, l)
                    .into_iter()
                    .map(|sites| TwoSiteGate { sites, matrix: linalg::haar_unitary(dim, &mut rng) })
                    .collect()
            })
            .collect();
        Self { n_sites, local_dim, layers }
    }

    /// `Q†`: layers reversed, gates adjointed.
    pub fn inverse(&self) -> Self {
        let layers = self
            .layers
            .iter()
            .rev()
            .map(|layer| layer.iter().map(TwoSiteGate::adjoint).collect())
            .collect();
        Self { n_sites: self.n_sites, local_dim: self.local_dim, layers }
    }

    /// Gates in application order.
    pub fn gates(&self) -> impl Iterator<Item = &TwoSiteGate> {
        self.layers.iter().flatten()
    }

    /// Largest `‖U†U − 1‖_F` over the gates.
    pub fn unitarity_defect(&self) -> f64 {
        self.gates().map(|g| linalg::unitarity_defect(&g.matrix)).fold(0.0, f64::max)
    }
}

/// `random_brickwork(n, D, seed)` on qubits.
pub fn random_brickwork(n_sites: usize, depth: usize, seed: u64) -> BrickworkCircuit {
    BrickworkCircuit::random(n_sites, 2, depth, seed)
}

pub fn apply_brickwork(psi: &DenseState, q: &BrickworkCircuit) -> Result<DenseState> {
    if psi.n_sites() != q.n_sites || psi.local_dim() != q.local_dim {
        return Err(Error::GeometryMismatch(alloc::format!(
            "state has {} sites of dimension {}, circuit expects {} of dimension {}",
            psi.n_sites(),
            psi.local_dim(),
            q.n_sites,
            q.local_dim
        )));
    }
    let mut out = psi.clone();
    for g in q.gates() {
        out.apply_two(g.sites.0, g.sites.1, &g.matrix)?;
    }
    Ok(out)
}
