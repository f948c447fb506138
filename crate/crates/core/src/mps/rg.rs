use alloc::vec::Vec;

use crate::linalg::{self, CMat};
use crate::math;
use crate::mps::canonical::{canonical_decompose_with, CanonicalForm, CanonicalOptions};
use crate::mps::transfer::{mixed_transfer, positive_fixed_points, sorted_eigenvalues, transfer_matrix};
use crate::mps::weights::WeightSpectrum;
use crate::mps::MpsTensor;
use crate::{Error, Result, C64};

pub const DEFAULT_TAU_RANK: f64 = 1e-10;
pub const DEFAULT_RG_TOL: f64 = 1e-12;
pub const DEFAULT_RG_MAX_ITER: usize = 60;

/// One coarse-graining step: `V A′` equals the two-site tensor, `V† V = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RgStep {
    /// `d_in × d′` isometry from the effective space into the blocked physical space.
    pub isometry: CMat,
    pub tensor: MpsTensor,
    /// Singular values of the blocked tensor viewed as a map from bond to physical space.
    pub singular_values: Vec<f64>,
}

/// Keeps the support of `A` viewed as a `d × χ²` map, without blocking.
pub fn compress_physical(a: &MpsTensor, tau_rank: f64) -> Result<RgStep> {
    let chi = a.chi();
    let m = CMat::from_fn(a.d(), chi * chi, |i, k| a.matrix(i)[(k / chi, k % chi)]);
    factor(&m, chi, tau_rank)
}

/// Blocks two sites and factors the result into an isometry and a reduced tensor.
pub fn rg_step(a: &MpsTensor, tau_rank: f64) -> Result<RgStep> {
    let chi = a.chi();
    let d = a.d();
    let mut m = CMat::zeros(d * d, chi * chi);
    for i1 in 0..d {
        for i2 in 0..d {
            let p = a.matrix(i1) * a.matrix(i2);
            let row = i1 * d + i2;
            for k in 0..chi * chi {
                m[(row, k)] = p[(k / chi, k % chi)];
            }
        }
    }
    factor(&m, chi, tau_rank)
}

fn factor(m: &CMat, chi: usize, tau_rank: f64) -> Result<RgStep> {
    let svd = linalg::svd(m);
    let s_max = svd.s.first().copied().unwrap_or(0.0);
    if s_max == 0.0 {
        return Err(Error::InvalidTensor("tensor vanishes identically".into()));
    }
    for &s in &svd.s {
        let rel = s / s_max;
        if rel >= 0.5 * tau_rank && rel <= 2.0 * tau_rank {
            return Err(Error::RankTolerance { cutoff: tau_rank, singular_value: rel });
        }
    }
    let keep = svd.s.iter().filter(|&&s| s > tau_rank * s_max).count();
    let isometry = svd.u.columns(0, keep).into_owned();
    let mats = (0..keep)
        .map(|j| CMat::from_fn(chi, chi, |r, c| svd.v_adj[(j, r * chi + c)] * svd.s[j]))
        .collect();
    Ok(RgStep { isometry, tensor: MpsTensor::new(mats)?, singular_values: svd.s })
}

/// A fixed-point block: `A^j_{αβ} = √λ_α V^j_{(αβ)}` in the gauge where the
/// left fixed point is the identity and the right one is `diag(λ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedBlock {
    /// Schmidt weights of the link state, descending, summing to one.
    pub schmidt_weights: Vec<f64>,
    /// `d′ × χ²` isometry from the link pair `(l, r)` (index `l χ + r`) into the site space.
    pub isometry: CMat,
    pub tensor: MpsTensor,
    /// Index of the block in the weight spectrum.
    pub label: usize,
}

impl FixedBlock {
    pub fn bond_dim(&self) -> usize {
        self.schmidt_weights.len()
    }
}

/// Per-iteration record of the flow.
#[derive(Debug, Clone, PartialEq)]
pub struct RgTraceRow {
    pub step: usize,
    pub physical_dim: usize,
    /// `|λ₂|/|λ₁|` of each block.
    pub lambda2: Vec<f64>,
    /// Largest Frobenius norm of a mixed transfer operator between distinct blocks.
    pub cross: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointState {
    pub blocks: Vec<FixedBlock>,
    /// Block coefficients, with `N` counted in canonical-form sites.
    pub weights: WeightSpectrum,
    /// Physical dimension `d′` of one coarse site.
    pub physical_dim: usize,
    /// Canonical-form sites per coarse site (`2^steps`).
    pub cf_sites_per_site: u64,
    /// Input sites per canonical-form site.
    pub blocking: usize,
    pub steps: usize,
    /// Isometry from the compressed site space at the start of the flow into the (blocked) input site space.
    pub compression: CMat,
    /// Isometry of every step, `d_{k}² × d_{k+1}`.
    pub step_isometries: Vec<CMat>,
    pub trace: Vec<RgTraceRow>,
}

impl FixedPointState {
    /// Fixed point made of `χ = 1` blocks, block `k` on local basis state `k`.
    pub fn product_blocks(weights: WeightSpectrum) -> Self {
        let k = weights.len();
        let blocks = (0..k)
            .map(|g| {
                let mats = (0..k)
                    .map(|j| CMat::from_element(1, 1, C64::new(if j == g { 1.0 } else { 0.0 }, 0.0)))
                    .collect();
                let mut iso = CMat::zeros(k, 1);
                iso[(g, 0)] = C64::new(1.0, 0.0);
                FixedBlock {
                    schmidt_weights: alloc::vec![1.0],
                    isometry: iso,
                    tensor: MpsTensor::new(mats).expect("valid"),
                    label: g,
                }
            })
            .collect();
        Self {
            blocks,
            weights,
            physical_dim: k,
            cf_sites_per_site: 1,
            blocking: 1,
            steps: 0,
            compression: CMat::identity(k, k),
            step_isometries: Vec::new(),
            trace: Vec::new(),
        }
    }

    /// Replaces the block coefficients, e.g. with exactly known weights.
    pub fn with_weights(mut self, weights: WeightSpectrum) -> Result<Self> {
        if weights.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch { expected: self.blocks.len(), found: weights.len() });
        }
        self.weights = weights;
        Ok(self)
    }

    /// `(left, right)` link dimensions of each block.
    pub fn site_structure(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.bond_dim(), b.bond_dim())).collect()
    }

    /// Dimension `Σ_k χ_k²` of the link basis of one site.
    pub fn link_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.bond_dim() * b.bond_dim()).sum()
    }

    /// Input sites per coarse site.
    pub fn input_sites_per_site(&self) -> u64 {
        self.blocking as u64 * self.cf_sites_per_site
    }
}

/// Runs the canonical decomposition and the RG flow of its dominant blocks.
pub fn rg_fixed_point(a: &MpsTensor, tol: f64, max_iter: usize) -> Result<FixedPointState> {
    let cf = canonical_decompose_with(a, &CanonicalOptions::default())?;
    rg_fixed_point_from(&cf, tol, max_iter, DEFAULT_TAU_RANK)
}

fn sub_blocks(joint: &MpsTensor, dims: &[usize]) -> Vec<MpsTensor> {
    let mut off = 0;
    dims.iter()
        .map(|&c| {
            let mats = joint.matrices().iter().map(|m| m.view((off, off), (c, c)).into_owned()).collect();
            off += c;
            MpsTensor::new(mats).expect("valid")
        })
        .collect()
}

fn flow_row(step: usize, joint: &MpsTensor, dims: &[usize]) -> Result<RgTraceRow> {
    let parts = sub_blocks(joint, dims);
    let mut lambda2 = Vec::with_capacity(parts.len());
    for p in &parts {
        let ev = sorted_eigenvalues(&transfer_matrix(p).matrix)?;
        let rho = ev[0].norm();
        lambda2.push(if ev.len() > 1 && rho > 0.0 { ev[1].norm() / rho } else { 0.0 });
    }
    let mut cross: f64 = 0.0;
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            cross = cross.max(linalg::frobenius(&mixed_transfer(&parts[i], &parts[j])));
        }
    }
    Ok(RgTraceRow { step, physical_dim: joint.d(), lambda2, cross })
}

/// RG flow starting from an existing canonical form.
pub fn rg_fixed_point_from(
    cf: &CanonicalForm,
    tol: f64,
    max_iter: usize,
    tau_rank: f64,
) -> Result<FixedPointState> {
    let reps = cf.representatives();
    let dims: Vec<usize> = reps.iter().map(|r| r.chi()).collect();
    let joint = MpsTensor::direct_sum(&reps)?;
    let first = compress_physical(&joint, tau_rank)?;
    let compression = first.isometry;
    let mut joint = first.tensor;
    let mut trace = Vec::new();
    let mut isometries = Vec::new();
    let mut step = 0;
    loop {
        let row = flow_row(step, &joint, &dims)?;
        let worst = row.lambda2.iter().copied().fold(row.cross, f64::max);
        trace.push(row);
        if worst < tol {
            break;
        }
        if step == max_iter {
            return Err(Error::ConvergenceFailure { what: "RG flow", iterations: max_iter, residual: worst });
        }
        let next = rg_step(&joint, tau_rank)?;
        isometries.push(next.isometry);
        joint = next.tensor;
        step += 1;
    }
    let parts = sub_blocks(&joint, &dims);
    let blocks = parts
        .iter()
        .enumerate()
        .map(|(g, p)| fixed_block(p, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(FixedPointState {
        blocks,
        weights: cf.weights.clone(),
        physical_dim: joint.d(),
        cf_sites_per_site: 1u64 << step,
        blocking: cf.blocking,
        steps: step,
        compression,
        step_isometries: isometries,
        trace,
    })
}

fn fixed_block(f: &MpsTensor, label: usize) -> Result<FixedBlock> {
    let chi = f.chi();
    let t = transfer_matrix(f).matrix;
    let rho = sorted_eigenvalues(&t)?[0].norm();
    let f = f.scaled(C64::new(1.0 / math::sqrt(rho), 0.0));
    let t = t.unscale(rho);
    let (r, l) = positive_fixed_points(&t, chi, 1.0)?;
    let lh = linalg::psd_power(&l, 0.5, 0.0);
    let lih = linalg::psd_power(&l, -0.5, 0.0);
    let rt = &lh * &r * &lh;
    let rt = rt.unscale(rt.trace().re);
    let (mut vals, vecs) = linalg::eigh(&rt);
    vals.reverse();
    let u = CMat::from_fn(chi, chi, |i, j| vecs[(i, chi - 1 - j)]);
    let gauge = &lih * &u;
    let gauge_inv = u.adjoint() * &lh;
    let tensor = f.conjugated(&gauge, &gauge_inv);
    let d = tensor.d();
    let isometry = CMat::from_fn(d, chi * chi, |j, k| {
        let (a, b) = (k / chi, k % chi);
        tensor.matrix(j)[(a, b)] / math::sqrt(vals[a])
    });
    Ok(FixedBlock { schmidt_weights: vals, isometry, tensor, label })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::fixtures;
    use crate::mps::gauge::gauge_equivalent;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_step_is_trivial() {
        let s = rg_step(&fixtures::product(), DEFAULT_TAU_RANK).unwrap();
        assert_eq!(s.tensor.d(), 1);
        assert_eq!(s.isometry.nrows(), 4);
        assert!((s.isometry[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((s.tensor.matrix(0)[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ghz_step_is_gauge_equivalent_after_relabeling() {
        let g = fixtures::ghz();
        let s = rg_step(&g, DEFAULT_TAU_RANK).unwrap();
        assert_eq!(s.tensor.d(), 2);
        // A′^j = Σ_i u_{ji} A^i for a unitary u; undo it by projecting onto GHZ's matrices.
        let u = CMat::from_fn(2, 2, |j, i| (g.matrix(i).adjoint() * s.tensor.matrix(j)).trace());
        let relabeled = g.physical_map(&u).unwrap();
        assert!(linalg::unitarity_defect(&u) < 1e-12);
        assert!(relabeled.distance(&s.tensor) < 1e-12);
    }

    #[test]
    fn step_squares_the_transfer_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a = MpsTensor::random(2, 2, &mut rng);
        let s = rg_step(&a, DEFAULT_TAU_RANK).unwrap();
        let t = transfer_matrix(&a).matrix;
        let t2 = transfer_matrix(&s.tensor).matrix;
        assert!(linalg::frobenius(&(&t * &t - t2)) < 1e-10 * linalg::frobenius(&(&t * &t)));
        let vv = s.isometry.adjoint() * &s.isometry;
        assert!((vv - CMat::identity(s.tensor.d(), s.tensor.d())).norm() < 1e-12);
    }

    #[test]
    fn random_normal_flow_converges() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = MpsTensor::random(2, 2, &mut rng);
        let fp = rg_fixed_point(&a, DEFAULT_RG_TOL, DEFAULT_RG_MAX_ITER).unwrap();
        assert_eq!(fp.blocks.len(), 1);
        let w = &fp.blocks[0].schmidt_weights;
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        assert!(w.iter().all(|&x| x > 0.0));
        let v = &fp.blocks[0].isometry;
        assert!((v.adjoint() * v - CMat::identity(4, 4)).norm() < 1e-8);
    }

    #[test]
    fn ghz_fixed_point_two_blocks() {
        let fp = rg_fixed_point(&fixtures::ghz(), DEFAULT_RG_TOL, DEFAULT_RG_MAX_ITER).unwrap();
        assert_eq!(fp.steps, 0);
        assert_eq!(fp.blocks.len(), 2);
        for b in &fp.blocks {
            assert_eq!(b.schmidt_weights, alloc::vec![1.0]);
        }
        let amps = fp.weights.amplitudes(5);
        assert!(amps.iter().all(|a| (a - C64::new(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn fixed_point_is_gauge_equivalent_to_next_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = MpsTensor::random(2, 2, &mut rng);
        let fp = rg_fixed_point(&a, DEFAULT_RG_TOL, DEFAULT_RG_MAX_ITER).unwrap();
        let f = &fp.blocks[0].tensor;
        let next = rg_step(f, DEFAULT_TAU_RANK).unwrap().tensor;
        let t = transfer_matrix(f).matrix;
        let t2 = transfer_matrix(&next).matrix;
        assert!(linalg::frobenius(&(t - t2)) < 1e-10);
        assert!(gauge_equivalent(f, f, 1e-10).unwrap().is_some());
    }
}
