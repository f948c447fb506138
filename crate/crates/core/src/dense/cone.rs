use alloc::vec::Vec;

use super::circuit::{apply_brickwork, BrickworkCircuit, TwoSiteGate};
use super::density::reduced_density;
use super::partition::{Partition, Region};
use super::state::{apply_axis, DenseState};
use crate::linalg::{self, CMat};
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Channel left by the circuit gates that straddle one region boundary:
/// `ℰ(ρ) = Σ_k K_k ρ K_k†`, from the input sites `inputs` to `outputs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryChannel {
    /// `"A_L"`, `"A_R"`, `"B_L"` or `"B_R"`.
    pub label: &'static str,
    /// Input sites in ring order.
    pub inputs: Vec<usize>,
    /// Output sites inside `A` or `B`, in ring order.
    pub outputs: Vec<usize>,
    /// Sites of `C′` traced out by the channel.
    pub traced: Vec<usize>,
    pub kraus: Vec<CMat>,
}

impl BoundaryChannel {
    pub fn apply(&self, rho: &CMat) -> CMat {
        let dim = self.kraus.first().map_or(0, |k| k.nrows());
        let mut out = CMat::zeros(dim, dim);
        for k in &self.kraus {
            out += k * rho * k.adjoint();
        }
        out
    }

    /// `‖Σ_k K_k† K_k − 1‖_F`.
    pub fn cptp_defect(&self) -> f64 {
        let n = self.kraus.first().map_or(0, |k| k.ncols());
        let mut s = CMat::zeros(n, n);
        for k in &self.kraus {
            s += k.adjoint() * k;
        }
        linalg::frobenius(&(s - CMat::identity(n, n)))
    }
}

/// Reduced gate network of a brickwork circuit on a partition: the local
/// unitaries `U_A`, `U_B` (as gate lists) and the boundary channels.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalCone {
    pub partition: Partition,
    pub depth: usize,
    pub local_dim: usize,
    pub u_a: Vec<TwoSiteGate>,
    pub u_b: Vec<TwoSiteGate>,
    pub channels: Vec<BoundaryChannel>,
    /// Sites of `A` (resp. `B`) on which the reduced map is the identity.
    pub a_center: Vec<usize>,
    pub b_center: Vec<usize>,
    /// Input sites traced out directly.
    pub traced_inputs: Vec<usize>,
}

fn forward_cone(q: &BrickworkCircuit, layer: usize, sites: (usize, usize)) -> Vec<bool> {
    let mut f = alloc::vec![false; q.n_sites];
    f[sites.0] = true;
    f[sites.1] = true;
    for later in &q.layers[layer + 1..] {
        for g in later {
            if f[g.sites.0] || f[g.sites.1] {
                f[g.sites.0] = true;
                f[g.sites.1] = true;
            }
        }
    }
    f
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// Sites of an arc of the ring in ring order.
fn ring_order(mask: &[bool]) -> Vec<usize> {
    let n = mask.len();
    let start = (0..n).find(|&s| mask[s] && !mask[(s + n - 1) % n]).unwrap_or(0);
    (0..n).map(|k| (start + k) % n).filter(|&s| mask[s]).collect()
}

/// Unitary of a gate list restricted to `sites` (first site most significant).
fn local_unitary(gates: &[&TwoSiteGate], sites: &[usize], d: usize) -> CMat {
    let k = sites.len();
    let dim = d.pow(k as u32);
    let pos = |s: usize| sites.iter().position(|&x| x == s).expect("gate inside support");
    let mut u = CMat::zeros(dim, dim);
    for col in 0..dim {
        let mut psi = alloc::vec![ZERO; dim];
        psi[col] = C64::new(1.0, 0.0);
        for g in gates {
            super::state::apply_axis_square(&mut psi, d, k, &[pos(g.sites.0), pos(g.sites.1)], &g.matrix);
        }
        for (row, v) in psi.into_iter().enumerate() {
            u[(row, col)] = v;
        }
    }
    u
}

/// Classifies every gate by its forward light cone and assembles `U_A`, `U_B`
/// and the boundary channels.
pub fn causal_cone_reduce(q: &BrickworkCircuit, p: &Partition) -> Result<CausalCone> {
    if q.n_sites != p.n_sites {
        return Err(Error::GeometryMismatch(alloc::format!(
            "circuit has {} sites, partition {}",
            q.n_sites,
            p.n_sites
        )));
    }
    p.validate(q.depth())?;
    let n = q.n_sites;
    let d = q.local_dim;
    let region: Vec<Region> = (0..n).map(|s| p.region_of(s)).collect();
    let too_small = || Error::PartitionTooSmall { required: 2 * q.depth() + 2, found: p.a.len().min(p.b.len()) };

    let mut g_a = Vec::new();
    let mut g_b = Vec::new();
    let mut boundary: Vec<&TwoSiteGate> = Vec::new();
    for (l, layer) in q.layers.iter().enumerate() {
        for g in layer {
            let f = forward_cone(q, l, g.sites);
            let hit = |r: Region| (0..n).any(|s| f[s] && region[s] == r);
            let (a, b, c1, c2) = (hit(Region::A), hit(Region::B), hit(Region::C1), hit(Region::C2));
            if a && b {
                return Err(too_small());
            }
            match (a, b, c1 || c2) {
                (true, false, false) => g_a.push(g),
                (false, true, false) => g_b.push(g),
                (false, false, true) => {}
                _ => boundary.push(g),
            }
        }
    }

    // Connected components of the boundary gates.
    let mut parent: Vec<usize> = (0..boundary.len()).collect();
    for i in 0..boundary.len() {
        for j in 0..i {
            let (x, y) = (boundary[i].sites, boundary[j].sites);
            if x.0 == y.0 || x.0 == y.1 || x.1 == y.0 || x.1 == y.1 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    let mut roots: Vec<usize> = (0..boundary.len()).map(|i| find(&mut parent, i)).collect();
    let comp_of = roots.clone();
    roots.sort_unstable();
    roots.dedup();

    let mut channels = Vec::new();
    let mut covered = alloc::vec![false; n];
    for &root in &roots {
        let gates: Vec<&TwoSiteGate> =
            boundary.iter().zip(&comp_of).filter(|(_, &c)| c == root).map(|(g, _)| *g).collect();
        let mut mask = alloc::vec![false; n];
        for g in &gates {
            mask[g.sites.0] = true;
            mask[g.sites.1] = true;
        }
        let inputs = ring_order(&mask);
        let touches = |r: Region| inputs.iter().any(|&s| region[s] == r);
        let label = match (touches(Region::A), touches(Region::B), touches(Region::C1), touches(Region::C2)) {
            (true, false, false, true) => "A_L",
            (true, false, true, false) => "A_R",
            (false, true, true, false) => "B_L",
            (false, true, false, true) => "B_R",
            _ => return Err(too_small()),
        };
        let kept: Vec<usize> = (0..inputs.len()).filter(|&k| matches!(region[inputs[k]], Region::A | Region::B)).collect();
        let env: Vec<usize> = (0..inputs.len()).filter(|&k| !kept.contains(&k)).collect();
        let v = local_unitary(&gates, &inputs, d);
        let kraus = kraus_from_unitary(&v, inputs.len(), &kept, &env, d);
        inputs.iter().for_each(|&s| covered[s] = true);
        channels.push(BoundaryChannel {
            label,
            outputs: kept.iter().map(|&k| inputs[k]).collect(),
            traced: env.iter().map(|&k| inputs[k]).collect(),
            inputs,
            kraus,
        });
    }
    channels.sort_by_key(|c| c.label);

    let undo = |gates: &[&TwoSiteGate]| gates.iter().rev().map(|g| g.adjoint()).collect::<Vec<_>>();
    Ok(CausalCone {
        partition: p.clone(),
        depth: q.depth(),
        local_dim: d,
        u_a: undo(&g_a),
        u_b: undo(&g_b),
        channels,
        a_center: p.a.iter().copied().filter(|&s| !covered[s]).collect(),
        b_center: p.b.iter().copied().filter(|&s| !covered[s]).collect(),
        traced_inputs: p.c().into_iter().filter(|&s| !covered[s]).collect(),
    })
}

/// `K_k[o, i] = ⟨k, o| V |i⟩` with `k` running over the traced positions.
fn kraus_from_unitary(v: &CMat, k: usize, kept: &[usize], env: &[usize], d: usize) -> Vec<CMat> {
    let n_out = d.pow(kept.len() as u32);
    let n_env = d.pow(env.len() as u32);
    let dim = v.ncols();
    let row_of = |e: usize, o: usize| {
        let mut digits = alloc::vec![0usize; k];
        let (mut e, mut o) = (e, o);
        for &p in env.iter().rev() {
            digits[p] = e % d;
            e /= d;
        }
        for &p in kept.iter().rev() {
            digits[p] = o % d;
            o /= d;
        }
        digits.iter().fold(0, |acc, &x| acc * d + x)
    };
    (0..n_env)
        .map(|e| CMat::from_fn(n_out, dim, |o, i| v[(row_of(e, o), i)]))
        .collect()
}

/// Multi-axis register with a site label per axis (`None` for environments).
struct Register {
    amps: Vec<C64>,
    dims: Vec<usize>,
    labels: Vec<Option<usize>>,
}

impl Register {
    fn permute(&mut self, order: &[usize]) {
        let dims: Vec<usize> = order.iter().map(|&k| self.dims[k]).collect();
        let mut old_strides = alloc::vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            old_strides[k] = old_strides[k + 1] * self.dims[k + 1];
        }
        let strides: Vec<usize> = order.iter().map(|&k| old_strides[k]).collect();
        let mut out = alloc::vec![ZERO; self.amps.len()];
        let mut digits = alloc::vec![0usize; dims.len()];
        for slot in out.iter_mut() {
            let src: usize = digits.iter().zip(&strides).map(|(x, s)| x * s).sum();
            *slot = self.amps[src];
            for t in (0..dims.len()).rev() {
                digits[t] += 1;
                if digits[t] < dims[t] {
                    break;
                }
                digits[t] = 0;
            }
        }
        self.amps = out;
        self.labels = order.iter().map(|&k| self.labels[k]).collect();
        self.dims = dims;
    }

    /// Moves the axes of `sites` (in order) to the end.
    fn gather_last(&mut self, sites: &[usize]) -> Vec<usize> {
        let pos: Vec<usize> = sites
            .iter()
            .map(|&s| self.labels.iter().position(|&l| l == Some(s)).expect("site present"))
            .collect();
        let mut order: Vec<usize> = (0..self.dims.len()).filter(|k| !pos.contains(k)).collect();
        order.extend(&pos);
        self.permute(&order);
        pos
    }

    fn apply_channel(&mut self, ch: &BoundaryChannel, d: usize) {
        self.gather_last(&ch.inputs);
        let keep = self.dims.len() - ch.inputs.len();
        let merged: usize = self.dims[keep..].iter().product();
        let mut dims: Vec<usize> = self.dims[..keep].to_vec();
        dims.push(merged);
        let n_out = d.pow(ch.outputs.len() as u32);
        let mut stinespring = CMat::zeros(ch.kraus.len() * n_out, merged);
        for (e, k) in ch.kraus.iter().enumerate() {
            stinespring.view_mut((e * n_out, 0), (n_out, merged)).copy_from(k);
        }
        self.amps = apply_axis(&self.amps, &dims, keep, &stinespring);
        self.dims.truncate(keep);
        self.labels.truncate(keep);
        self.dims.push(ch.kraus.len());
        self.labels.push(None);
        for &s in &ch.outputs {
            self.dims.push(d);
            self.labels.push(Some(s));
        }
    }

    /// Density matrix of the listed sites, everything else traced.
    fn reduce(mut self, sites: &[usize]) -> CMat {
        let pos: Vec<usize> = sites
            .iter()
            .map(|&s| self.labels.iter().position(|&l| l == Some(s)).expect("site present"))
            .collect();
        let mut order = pos.clone();
        order.extend((0..self.dims.len()).filter(|k| !pos.contains(k)));
        self.permute(&order);
        let rows: usize = self.dims[..sites.len()].iter().product();
        let cols = self.amps.len() / rows;
        let m = CMat::from_fn(rows, cols, |r, c| self.amps[r * cols + c]);
        &m * m.adjoint()
    }
}

impl CausalCone {
    /// `σ_AB` assembled from the reduced network: identity on the centers,
    /// boundary channels on `Tr_C |ψ⟩⟨ψ|`.
    pub fn sigma_from_channels(&self, psi: &DenseState) -> Result<CMat> {
        if psi.n_sites() != self.partition.n_sites || psi.local_dim() != self.local_dim {
            return Err(Error::GeometryMismatch("state does not match the partition".into()));
        }
        let mut reg = Register {
            amps: psi.amplitudes().to_vec(),
            dims: alloc::vec![self.local_dim; psi.n_sites()],
            labels: (0..psi.n_sites()).map(Some).collect(),
        };
        for ch in &self.channels {
            reg.apply_channel(ch, self.local_dim);
        }
        Ok(reg.reduce(&self.partition.ab()))
    }

    /// `U_A ⊗ U_B (Tr_{C′} Q|ψ⟩⟨ψ|Q†) U_A† ⊗ U_B†`, computed on the full state.
    pub fn sigma_reference(&self, q: &BrickworkCircuit, psi: &DenseState) -> Result<CMat> {
        let mut phi = apply_brickwork(psi, q)?;
        for g in self.u_a.iter().chain(&self.u_b) {
            phi.apply_two(g.sites.0, g.sites.1, &g.matrix)?;
        }
        reduced_density(&phi, &self.partition.ab())
    }

    /// Largest CPTP defect over the boundary channels.
    pub fn cptp_defect(&self) -> f64 {
        self.channels.iter().map(BoundaryChannel::cptp_defect).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::circuit::random_brickwork;
    use crate::dense::density::random_density;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn depth_zero_is_identity() {
        let p = Partition::for_depth(8, 0).unwrap();
        let q = random_brickwork(8, 0, 1);
        let cone = causal_cone_reduce(&q, &p).unwrap();
        assert!(cone.channels.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let psi = DenseState::random(8, 2, &mut rng).unwrap();
        let s = cone.sigma_from_channels(&psi).unwrap();
        let r = reduced_density(&psi, &p.ab()).unwrap();
        assert!(linalg::frobenius(&(s - r)) < 1e-12);
    }

    #[test]
    fn aligned_boundaries_need_no_channels() {
        let p = Partition::for_depth(16, 1).unwrap();
        let q = random_brickwork(16, 1, 42);
        let cone = causal_cone_reduce(&q, &p).unwrap();
        assert!(cone.channels.is_empty());
        assert_eq!(cone.u_a.len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = DenseState::random(16, 2, &mut rng).unwrap();
        let direct = cone.sigma_from_channels(&psi).unwrap();
        let reference = cone.sigma_reference(&q, &psi).unwrap();
        assert!(linalg::frobenius(&(direct - reference)) < 1e-10);
    }

    #[test]
    fn depth_one_sixteen_sites() {
        let p = Partition::for_depth(16, 1).unwrap().rotated(1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let psi = DenseState::random(16, 2, &mut rng).unwrap();
        let q = random_brickwork(16, 1, 42);
        let cone = causal_cone_reduce(&q, &p).unwrap();
        let labels: Vec<&str> = cone.channels.iter().map(|c| c.label).collect();
        assert_eq!(labels, ["A_L", "A_R", "B_L", "B_R"]);
        assert!(cone.channels.iter().all(|c| c.inputs.len() == 2 && c.outputs.len() == 1));
        assert_eq!(cone.a_center, [2, 3]);
        assert!(cone.cptp_defect() < 1e-12);
        let direct = cone.sigma_from_channels(&psi).unwrap();
        let reference = cone.sigma_reference(&q, &psi).unwrap();
        assert!(linalg::frobenius(&(direct - reference)) < 1e-10);
    }

    #[test]
    fn undersized_regions_are_rejected() {
        let q = random_brickwork(12, 2, 1);
        let p = Partition::with_sizes(12, 3, 3, 3).unwrap();
        assert!(matches!(causal_cone_reduce(&q, &p), Err(Error::PartitionTooSmall { .. })));
    }

    #[test]
    fn channels_preserve_trace() {
        let p = Partition::for_depth(16, 1).unwrap().rotated(1);
        let q = random_brickwork(16, 1, 7);
        let cone = causal_cone_reduce(&q, &p).unwrap();
        assert!(!cone.channels.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for ch in &cone.channels {
            let dim = ch.kraus[0].ncols();
            for _ in 0..10 {
                let rho = random_density(dim, 2, &mut rng);
                assert!((ch.apply(&rho).trace().re - 1.0).abs() < 1e-12);
            }
        }
    }
}
