use alloc::format;
use alloc::vec::Vec;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, CMat};
use crate::math;
use crate::mps::gauge::gauge_equivalent_normal;
use crate::mps::normal::is_normal;
use crate::mps::tensor::DEFAULT_PHYS_CAP;
use crate::mps::transfer::{
    positive_fixed_points, sorted_eigenvalues, spectral_of, transfer_matrix, DEFAULT_TAU_SPEC,
};
use crate::mps::weights::{PhaseTerm, WeightSpectrum};
use crate::mps::MpsTensor;
use crate::{Error, Result, C64};

pub const DEFAULT_TAU_BLOCK: f64 = 1e-10;
pub const DEFAULT_Q_MAX: usize = 8;

/// Blocks with `|μ|` at least this close to one are kept in the weight spectrum.
const DOMINANT: f64 = 1e-8;
/// Relative eigenvalue below which a fixed point is treated as rank deficient.
const RANK_REL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalOptions {
    pub tau_block: f64,
    pub tau_spec: f64,
    pub q_max: usize,
    pub phys_cap: usize,
}

impl Default for CanonicalOptions {
    fn default() -> Self {
        Self {
            tau_block: DEFAULT_TAU_BLOCK,
            tau_spec: DEFAULT_TAU_SPEC,
            q_max: DEFAULT_Q_MAX,
            phys_cap: DEFAULT_PHYS_CAP,
        }
    }
}

/// A normal block `μ_k A_k` of the canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalBlock {
    pub weight: C64,
    /// Normal tensor with unit spectral radius and a real positive largest entry.
    pub tensor: MpsTensor,
    /// `χ × χ_k` basis of the block inside the (blocked) input bond space.
    pub basis: CMat,
    /// `χ_k × χ` left inverse of `basis`.
    pub cobasis: CMat,
    /// Group of gauge-equivalent dominant blocks, `None` for subdominant blocks.
    pub group: Option<usize>,
    /// `A_k = e^{iψ} X A_rep X^{-1}` relative to the group representative.
    pub gauge_phase: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockGroup {
    pub representative: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm {
    /// Number of input sites grouped into one canonical-form site.
    pub blocking: usize,
    /// Factor `√ρ` removed from the input so that the largest `|μ_k|` is one.
    pub normalization: f64,
    pub blocks: Vec<CanonicalBlock>,
    pub groups: Vec<BlockGroup>,
    /// Columns are the block bases; `G^{-1} A G` is block upper triangular
    /// with the blocks on the diagonal (nilpotent blocks included).
    pub gauge: Option<CMat>,
    /// One entry per group, in canonical-form sites.
    pub weights: WeightSpectrum,
}

impl CanonicalForm {
    pub fn dominant(&self) -> impl Iterator<Item = &CanonicalBlock> {
        self.blocks.iter().filter(|b| b.group.is_some())
    }

    pub fn representatives(&self) -> Vec<&MpsTensor> {
        self.groups.iter().map(|g| &self.blocks[g.representative].tensor).collect()
    }
}

struct Leaf {
    tensor: MpsTensor,
    basis: CMat,
    cobasis: CMat,
    rho: f64,
}

pub fn canonical_decompose(a: &MpsTensor, tau_block: f64) -> Result<CanonicalForm> {
    canonical_decompose_with(a, &CanonicalOptions { tau_block, ..Default::default() })
}

pub fn canonical_decompose_with(a: &MpsTensor, opts: &CanonicalOptions) -> Result<CanonicalForm> {
    let t = transfer_matrix(a).matrix;
    let ev = sorted_eigenvalues(&t)?;
    let rho0 = ev.first().map_or(0.0, |l| l.norm());
    if rho0 <= 1e-300 {
        return Err(Error::DecompositionFailure {
            reason: "transfer operator is nilpotent".into(),
            spectrum: ev.iter().map(|l| l.norm()).collect(),
        });
    }
    let norm = math::sqrt(rho0);
    let base = a.scaled(C64::new(1.0 / norm, 0.0));

    let mut q = 1usize;
    let (leaves, gauge) = loop {
        let blocked = base.block(q, opts.phys_cap)?;
        let mut leaves = Vec::new();
        let chi = blocked.chi();
        split(blocked, CMat::identity(chi, chi), CMat::identity(chi, chi), opts, 0, &mut leaves)?;
        let gauge = CMat::from_columns(
            &leaves.iter().flat_map(|l| l.basis.column_iter().map(|c| c.into_owned())).collect::<Vec<_>>(),
        );
        let mut period = 1usize;
        for leaf in leaves.iter().filter(|l| l.rho > 0.0) {
            let s = spectral_of(&transfer_matrix(&leaf.tensor).matrix, opts.tau_spec)?;
            period = period.lcm(&s.peripheral.len().max(1));
        }
        if period == 1 {
            break (leaves, gauge);
        }
        q *= period;
        if q > opts.q_max {
            return Err(Error::DecompositionFailure {
                reason: format!("peripheral period requires blocking {q} > {} sites", opts.q_max),
                spectrum: ev.iter().map(|l| l.norm() / rho0).collect(),
            });
        }
    };

    let mut blocks = Vec::new();
    for leaf in leaves.into_iter().filter(|l| l.rho > 0.0) {
        let (theta, _) = largest_entry_phase(&leaf.tensor);
        let magnitude = math::sqrt(leaf.rho);
        let weight = C64::from_polar(magnitude, theta);
        let tensor = leaf.tensor.scaled(C64::new(1.0, 0.0) / weight);
        let witness = is_normal(&tensor, opts.tau_spec)?;
        if !witness.normal {
            return Err(Error::DecompositionFailure {
                reason: format!("block of bond dimension {} is not normal", tensor.chi()),
                spectrum: linalg::eigvalsh(&witness.right_fixed),
            });
        }
        blocks.push(CanonicalBlock {
            weight,
            tensor,
            basis: leaf.basis,
            cobasis: leaf.cobasis,
            group: None,
            gauge_phase: 0.0,
        });
    }

    // Order blocks by where their basis sits in the bond space, dominant first,
    // and remove the per-site global phase of the first dominant block.
    blocks.sort_by_key(|b| (b.weight.norm() < 1.0 - DOMINANT, leading_row(&b.basis)));
    if let Some(first) = blocks.iter().find(|b| b.weight.norm() >= 1.0 - DOMINANT) {
        let rot = C64::from_polar(1.0, -first.weight.arg());
        for b in &mut blocks {
            b.weight *= rot;
        }
    }

    let mut groups: Vec<BlockGroup> = Vec::new();
    let mut weights = WeightSpectrum::default();
    for k in 0..blocks.len() {
        if blocks[k].weight.norm() < 1.0 - DOMINANT {
            continue;
        }
        let mut found = None;
        for (g, group) in groups.iter().enumerate() {
            let rep = &blocks[group.representative].tensor;
            if let Some(rel) = gauge_equivalent_normal(&blocks[k].tensor, rep, 1e-9)? {
                found = Some((g, rel.phase));
                break;
            }
        }
        let (g, psi) = match found {
            Some(v) => v,
            None => {
                groups.push(BlockGroup { representative: k, members: Vec::new() });
                weights.blocks.push(Vec::new());
                (groups.len() - 1, 0.0)
            }
        };
        groups[g].members.push(k);
        blocks[k].group = Some(g);
        blocks[k].gauge_phase = psi;
        let theta = blocks[k].weight.arg();
        weights.push_term(g, PhaseTerm::new(C64::new(1.0, 0.0), theta + psi));
    }

    Ok(CanonicalForm { blocking: q, normalization: norm, blocks, groups, gauge: Some(gauge), weights })
}

fn leading_row(basis: &CMat) -> usize {
    let norms: Vec<f64> = basis.row_iter().map(|r| r.norm()).collect();
    let top = norms.iter().copied().fold(0.0, f64::max);
    norms.iter().position(|&n| n >= top * (1.0 - 1e-9)).unwrap_or(0)
}

/// Phase of the largest-modulus entry (first in index order among near ties).
fn largest_entry_phase(t: &MpsTensor) -> (f64, f64) {
    let top = t.max_abs();
    for m in t.matrices() {
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                let z = m[(r, c)];
                if z.norm() >= top * (1.0 - 1e-9) {
                    return (z.arg(), top);
                }
            }
        }
    }
    (0.0, top)
}

fn split(
    t: MpsTensor,
    basis: CMat,
    cobasis: CMat,
    opts: &CanonicalOptions,
    depth: usize,
    out: &mut Vec<Leaf>,
) -> Result<()> {
    let chi = t.chi();
    let tm = transfer_matrix(&t).matrix;
    let ev = sorted_eigenvalues(&tm)?;
    let rho = ev.first().map_or(0.0, |l| l.norm());
    let scale = t.max_abs();
    if rho <= 1e-14 * (scale * scale).max(1e-300) || rho < 1e-28 {
        out.push(Leaf { tensor: t, basis, cobasis, rho: 0.0 });
        return Ok(());
    }
    if chi == 1 {
        out.push(Leaf { tensor: t, basis, cobasis, rho });
        return Ok(());
    }
    let (x, y) = positive_fixed_points(&tm, chi, rho)?;

    let (xv, xe) = linalg::eigh(&x);
    let xtop = xv.last().copied().unwrap_or(0.0);
    let support: Vec<usize> = (0..chi).filter(|&k| xv[k] > RANK_REL * xtop).collect();
    if support.len() < chi {
        let qs = CMat::from_columns(&support.iter().map(|&k| xe.column(k).into_owned()).collect::<Vec<_>>());
        return triangular_split(t, basis, cobasis, &qs, &xv, opts, depth, out);
    }
    let (yv, ye) = linalg::eigh(&y);
    let ytop = yv.last().copied().unwrap_or(0.0);
    let kernel: Vec<usize> = (0..chi).filter(|&k| yv[k] <= RANK_REL * ytop).collect();
    if !kernel.is_empty() {
        let qs = CMat::from_columns(&kernel.iter().map(|&k| ye.column(k).into_owned()).collect::<Vec<_>>());
        return triangular_split(t, basis, cobasis, &qs, &yv, opts, depth, out);
    }

    // Both fixed points are faithful: in the gauge where X = 1 the fixed
    // space of the transfer operator is the commutant of the Kraus operators.
    let xh = linalg::psd_power(&x, 0.5, 0.0);
    let xih = linalg::psd_power(&x, -0.5, 0.0);
    let g = t.conjugated(&xh, &xih);
    let gm = transfer_matrix(&g).matrix;
    let target = C64::new(rho, 0.0);
    let k = ev.iter().filter(|l| (**l - target).norm() <= 1e-6 * rho).count();
    if k <= 1 {
        out.push(Leaf { tensor: t, basis, cobasis, rho });
        return Ok(());
    }
    let n = gm.nrows();
    let d = linalg::svd(&(&gm - CMat::identity(n, n) * target));
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c72_6e00 + depth as u64);
    let mut h = CMat::zeros(chi, chi);
    for j in n - k..n {
        let f = linalg::unvec_row(&d.v_adj.row(j).adjoint(), chi);
        let herm = linalg::hermitian_part(&f);
        let anti = (&f - f.adjoint()) * C64::new(0.0, -0.5);
        h += herm * C64::new(rng.random_range(-1.0..1.0), 0.0);
        h += anti * C64::new(rng.random_range(-1.0..1.0), 0.0);
    }
    let (hv, he) = linalg::eigh(&h);
    let spread = hv.iter().map(|v| math::abs(*v)).fold(0.0, f64::max).max(1e-300);
    let mut clusters: Vec<Vec<usize>> = alloc::vec![alloc::vec![0]];
    for j in 1..chi {
        if hv[j] - hv[j - 1] > 1e-6 * spread {
            clusters.push(Vec::new());
        }
        clusters.last_mut().expect("nonempty").push(j);
    }
    if clusters.len() < 2 {
        return Err(Error::DecompositionFailure {
            reason: format!("commutant of dimension {k} did not split the bond space"),
            spectrum: hv,
        });
    }
    let spaces: Vec<CMat> = clusters
        .iter()
        .map(|c| CMat::from_columns(&c.iter().map(|&j| he.column(j).into_owned()).collect::<Vec<_>>()))
        .collect();
    let gscale = g.max_abs().max(1.0);
    for (a_idx, va) in spaces.iter().enumerate() {
        for (b_idx, vb) in spaces.iter().enumerate() {
            if a_idx == b_idx {
                continue;
            }
            let leak = g.matrices().iter().map(|m| linalg::frobenius(&(vb.adjoint() * m * va))).fold(0.0, f64::max);
            if leak > opts.tau_block * gscale * chi as f64 * 100.0 {
                return Err(Error::DecompositionFailure {
                    reason: format!("commutant eigenspaces leak {leak:e} under the tensor"),
                    spectrum: hv,
                });
            }
        }
    }
    for v in spaces {
        let child = g.compressed(&v, &v.adjoint());
        let child_basis = &basis * &xh * &v;
        let child_cobasis = v.adjoint() * &xih * &cobasis;
        split(child, child_basis, child_cobasis, opts, depth + 1, out)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn triangular_split(
    t: MpsTensor,
    basis: CMat,
    cobasis: CMat,
    qs: &CMat,
    fixed_spectrum: &[f64],
    opts: &CanonicalOptions,
    depth: usize,
    out: &mut Vec<Leaf>,
) -> Result<()> {
    let qp = linalg::orthogonal_complement(qs);
    let scale = t.max_abs().max(1.0);
    let leak = t
        .matrices()
        .iter()
        .map(|m| linalg::frobenius(&(qp.adjoint() * m * qs)))
        .fold(0.0, f64::max);
    if leak > opts.tau_block * scale * t.chi() as f64 * 100.0 {
        return Err(Error::DecompositionFailure {
            reason: format!("invariant subspace leaks {leak:e}"),
            spectrum: fixed_spectrum.to_vec(),
        });
    }
    for v in [qs, &qp] {
        let child = t.compressed(v, &v.adjoint());
        split(child, &basis * v, v.adjoint() * &cobasis, opts, depth + 1, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::fixtures;
    use crate::mps::gauge::local_orthogonal;
    use core::f64::consts::PI;
    use rand::SeedableRng;

    #[test]
    fn normal_input_is_single_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = MpsTensor::random(2, 3, &mut rng);
        let cf = canonical_decompose(&a, DEFAULT_TAU_BLOCK).unwrap();
        assert_eq!(cf.blocks.len(), 1);
        assert!((cf.blocks[0].weight - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(cf.blocking, 1);
    }

    #[test]
    fn ghz_two_product_blocks() {
        let cf = canonical_decompose(&fixtures::ghz(), DEFAULT_TAU_BLOCK).unwrap();
        assert_eq!(cf.blocks.len(), 2);
        assert_eq!(cf.groups.len(), 2);
        for b in &cf.blocks {
            assert!((b.weight - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert_eq!(b.tensor.chi(), 1);
        }
        assert!(local_orthogonal(&cf.blocks[0].tensor, &cf.blocks[1].tensor, 1e-10).unwrap());
    }

    #[test]
    fn chi3_merges_conjugate_phases() {
        let phi = 2.0 * PI / 5.0;
        let cf = canonical_decompose(&fixtures::chi3_example(phi), DEFAULT_TAU_BLOCK).unwrap();
        assert_eq!(cf.blocks.len(), 3);
        let mut phases: Vec<f64> = cf.blocks.iter().map(|b| b.weight.arg()).collect();
        phases.sort_by(f64::total_cmp);
        assert!((phases[0] + phi).abs() < 1e-10 && phases[1].abs() < 1e-10 && (phases[2] - phi).abs() < 1e-10);
        assert_eq!(cf.groups.len(), 2);
        let big = cf.weights.blocks.iter().find(|t| t.len() == 2).expect("merged group");
        let mut ph: Vec<f64> = big.iter().map(|t| t.phase).collect();
        ph.sort_by(f64::total_cmp);
        assert!((ph[0] + phi).abs() < 1e-10 && (ph[1] - phi).abs() < 1e-10);
        for n in 1..10u64 {
            let amps = cf.weights.amplitudes(n);
            let target = 2.0 * (phi * n as f64).cos();
            assert!(amps.iter().any(|a| (a.re - target).abs() < 1e-10 && a.im.abs() < 1e-10));
        }
    }

    #[test]
    fn multiplicity_sums_coefficients() {
        let cf = canonical_decompose(&fixtures::ghz_multiplicity(2, 3), DEFAULT_TAU_BLOCK).unwrap();
        assert_eq!(cf.blocks.len(), 5);
        let mut cs: Vec<f64> = cf.weights.blocks.iter().map(|t| t[0].c.re).collect();
        cs.sort_by(f64::total_cmp);
        assert_eq!(cs, alloc::vec![2.0, 3.0]);
    }

    #[test]
    fn periodic_tensor_is_blocked() {
        let a = MpsTensor::from_real(&[&[&[0.0, 1.0], &[0.0, 0.0]], &[&[0.0, 0.0], &[1.0, 0.0]]]).unwrap();
        let cf = canonical_decompose(&a, DEFAULT_TAU_BLOCK).unwrap();
        assert_eq!(cf.blocking, 2);
        assert_eq!(cf.blocks.len(), 2);
    }

    #[test]
    fn triangular_tensor_keeps_diagonal_blocks() {
        let a = MpsTensor::from_real(&[&[&[1.0, 0.7], &[0.0, 0.5]], &[&[0.0, 0.2], &[0.0, 0.0]]]).unwrap();
        let cf = canonical_decompose(&a, DEFAULT_TAU_BLOCK).unwrap();
        assert_eq!(cf.blocks.len(), 2);
        let mut mags: Vec<f64> = cf.blocks.iter().map(|b| b.weight.norm()).collect();
        mags.sort_by(f64::total_cmp);
        assert!((mags[1] - 1.0).abs() < 1e-12);
        assert!((mags[0] - 0.5).abs() < 1e-10);
        assert_eq!(cf.groups.len(), 1);
    }

    #[test]
    fn direct_sum_of_random_blocks_recovers_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = MpsTensor::random(3, 2, &mut rng);
        let b = MpsTensor::random(3, 2, &mut rng);
        let ra = crate::mps::transfer::sorted_eigenvalues(&transfer_matrix(&a).matrix).unwrap()[0].norm();
        let rb = crate::mps::transfer::sorted_eigenvalues(&transfer_matrix(&b).matrix).unwrap()[0].norm();
        let a = a.scaled(C64::new(1.0 / ra.sqrt(), 0.0));
        let b = b.scaled(C64::new(0.5 / rb.sqrt(), 0.0));
        let x = linalg::complex_gaussian_matrix(4, 4, &mut rng);
        let xi = linalg::inverse(&x).unwrap();
        let sum = MpsTensor::direct_sum(&[&a, &b]).unwrap().conjugated(&x, &xi);
        let cf = canonical_decompose(&sum, DEFAULT_TAU_BLOCK).unwrap();
        assert_eq!(cf.blocks.len(), 2);
        let mut mags: Vec<f64> = cf.blocks.iter().map(|b| b.weight.norm()).collect();
        mags.sort_by(f64::total_cmp);
        assert!((mags[0] - 0.5).abs() < 1e-8 && (mags[1] - 1.0).abs() < 1e-12);
    }
}
