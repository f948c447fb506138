use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMat;
use crate::math;
use crate::mps::{FixedPointState, MpsTensor};
use crate::{Error, Result, C64};

/// Largest amplitude vector the dense engine will build.
pub const AMP_CAP: u128 = 1 << 24;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Normalized pure state of `n_sites` sites of dimension `d`, big-endian
/// (site 0 is the most significant digit).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n_sites: usize,
    d: usize,
    amps: Vec<C64>,
}

pub(crate) fn checked_size(d: usize, n: usize) -> Result<usize> {
    let required = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > AMP_CAP {
        return Err(Error::SizeCap { required, cap: AMP_CAP });
    }
    Ok(required as usize)
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    math::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

impl DenseState {
    /// Normalizes `amps`; fails with `ZeroState` if the vector vanishes.
    pub fn new(n_sites: usize, d: usize, mut amps: Vec<C64>) -> Result<Self> {
        let len = checked_size(d, n_sites)?;
        if amps.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: amps.len() });
        }
        let nrm = norm(&amps);
        if nrm.is_nan() || nrm <= 1e-300 {
            return Err(Error::ZeroState);
        }
        amps.iter_mut().for_each(|a| *a /= nrm);
        Ok(Self { n_sites, d, amps })
    }

    pub fn basis(n_sites: usize, d: usize, index: usize) -> Result<Self> {
        let len = checked_size(d, n_sites)?;
        if index >= len {
            return Err(Error::DimensionMismatch { expected: len, found: index });
        }
        let mut amps = alloc::vec![ZERO; len];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_sites, d, amps })
    }

    /// Gaussian random vector, normalized.
    pub fn random<R: Rng + ?Sized>(n_sites: usize, d: usize, rng: &mut R) -> Result<Self> {
        let len = checked_size(d, n_sites)?;
        let amps = (0..len)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(n_sites, d, amps)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn local_dim(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &DenseState) -> Result<C64> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch { expected: self.amps.len(), found: other.amps.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Reads each site of dimension `2^m` as `m` qubits (same amplitudes).
    pub fn as_qubits(&self) -> Result<DenseState> {
        let m = self.d.trailing_zeros() as usize;
        if self.d != 1 << m {
            return Err(Error::BadFactorization { dim: self.d, product: 1 << m });
        }
        Ok(DenseState { n_sites: self.n_sites * m, d: 2, amps: self.amps.clone() })
    }

    /// Applies a one-site operator (`d × d`) in place.
    pub fn apply_one(&mut self, site: usize, op: &CMat) -> Result<()> {
        self.check_site(site)?;
        apply_axis_square(&mut self.amps, self.d, self.n_sites, &[site], op);
        Ok(())
    }

    /// Applies a two-site operator (`d² × d²`, first site major) in place.
    pub fn apply_two(&mut self, a: usize, b: usize, op: &CMat) -> Result<()> {
        self.check_site(a)?;
        self.check_site(b)?;
        if a == b {
            return Err(Error::RepeatedTarget);
        }
        apply_axis_square(&mut self.amps, self.d, self.n_sites, &[a, b], op);
        Ok(())
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.n_sites {
            return Err(Error::TargetOutOfRange { target: site, n: self.n_sites });
        }
        Ok(())
    }
}

/// Applies a square operator on the listed sites (first listed = most
/// significant in the operator's index) of a uniform-dimension register.
pub(crate) fn apply_axis_square(amps: &mut [C64], d: usize, n: usize, sites: &[usize], op: &CMat) {
    let k = sites.len();
    let block = d.pow(k as u32);
    debug_assert_eq!(op.nrows(), block);
    let strides: Vec<usize> = sites.iter().map(|&s| d.pow((n - 1 - s) as u32)).collect();
    let offsets: Vec<usize> = (0..block)
        .map(|mut idx| {
            let mut off = 0;
            for t in (0..k).rev() {
                off += (idx % d) * strides[t];
                idx /= d;
            }
            off
        })
        .collect();
    let mut buf = alloc::vec![ZERO; block];
    for base in 0..amps.len() {
        if strides.iter().any(|&s| (base / s) % d != 0) {
            continue;
        }
        for (slot, &off) in buf.iter_mut().zip(&offsets) {
            *slot = amps[base + off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (c, &v) in buf.iter().enumerate() {
                acc += op[(r, c)] * v;
            }
            amps[base + off] = acc;
        }
    }
}

/// Unnormalized `tr(A^{i_1} ⋯ A^{i_N})` for every index string, big-endian.
pub fn mps_amplitudes(a: &MpsTensor, n: usize) -> Result<Vec<C64>> {
    let len = checked_size(a.d(), n)?;
    if n == 0 {
        return Err(Error::InvalidTensor("at least one site is required".into()));
    }
    let d = a.d();
    let mut out = alloc::vec![ZERO; len];
    // Depth-first walk with a stack of prefix products.
    let mut stack: Vec<CMat> = Vec::with_capacity(n);
    let mut digits = alloc::vec![0usize; n];
    stack.push(a.matrix(0).clone());
    let mut depth = 0;
    loop {
        if depth + 1 == n {
            let idx = digits.iter().fold(0, |acc, &x| acc * d + x);
            out[idx] = stack[depth].trace();
            // advance
            loop {
                digits[depth] += 1;
                if digits[depth] < d {
                    stack[depth] = if depth == 0 {
                        a.matrix(digits[0]).clone()
                    } else {
                        &stack[depth - 1] * a.matrix(digits[depth])
                    };
                    break;
                }
                digits[depth] = 0;
                stack.pop();
                if depth == 0 {
                    return Ok(out);
                }
                depth -= 1;
            }
        } else {
            depth += 1;
            let next = &stack[depth - 1] * a.matrix(0);
            stack.push(next);
        }
    }
}

/// Normalized dense state generated by a translation-invariant MPS on `n` sites.
pub fn materialize_mps(a: &MpsTensor, n: usize) -> Result<DenseState> {
    DenseState::new(n, a.d(), mps_amplitudes(a, n)?)
}

/// Dense fixed-point state on `n` coarse sites: `Σ_k α_k |v(A_k)⟩`, with each
/// block built from its Schmidt weights and isometry as
/// `A^j_{ab} = √λ_a V^j_{(a b)}`.
pub fn materialize_fixed_point(f: &FixedPointState, n: usize) -> Result<DenseState> {
    let len = checked_size(f.physical_dim, n)?;
    let alphas = f.weights.amplitudes(n as u64 * f.cf_sites_per_site);
    let mut amps = alloc::vec![ZERO; len];
    for block in &f.blocks {
        let alpha = alphas[block.label];
        if alpha.norm() == 0.0 {
            continue;
        }
        let chi = block.bond_dim();
        let mats = (0..f.physical_dim)
            .map(|j| {
                CMat::from_fn(chi, chi, |a, b| {
                    block.isometry[(j, a * chi + b)] * math::sqrt(block.schmidt_weights[a])
                })
            })
            .collect();
        let v = mps_amplitudes(&MpsTensor::new(mats)?, n)?;
        for (o, x) in amps.iter_mut().zip(v) {
            *o += alpha * x;
        }
    }
    DenseState::new(n, f.physical_dim, amps)
}

/// Replaces site axis `axis` of a register with dims `dims` by `op.nrows()`
/// values, `new[.., r, ..] = Σ_c op[r, c] old[.., c, ..]`.
pub(crate) fn apply_axis(amps: &[C64], dims: &[usize], axis: usize, op: &CMat) -> Vec<C64> {
    let outer: usize = dims[..axis].iter().product();
    let inner: usize = dims[axis + 1..].iter().product();
    let n_in = dims[axis];
    let n_out = op.nrows();
    debug_assert_eq!(op.ncols(), n_in);
    let mut out = alloc::vec![ZERO; outer * n_out * inner];
    for o in 0..outer {
        for c in 0..n_in {
            let src = &amps[(o * n_in + c) * inner..(o * n_in + c + 1) * inner];
            for r in 0..n_out {
                let w = op[(r, c)];
                if w == ZERO {
                    continue;
                }
                let dst = &mut out[(o * n_out + r) * inner..(o * n_out + r + 1) * inner];
                for (x, y) in dst.iter_mut().zip(src) {
                    *x += w * y;
                }
            }
        }
    }
    out
}

/// Pulls a fixed-point state back to the canonical-form sites it came from,
/// undoing every RG step and the initial compression.
pub fn lift_fixed_point(state: &DenseState, f: &FixedPointState) -> Result<DenseState> {
    let mut dims = alloc::vec![state.local_dim(); state.n_sites()];
    let mut amps = state.amplitudes().to_vec();
    for iso in f.step_isometries.iter().rev() {
        let d_fine = integer_sqrt(iso.nrows());
        for k in 0..dims.len() {
            let axis = dims.len() - 1 - k;
            amps = apply_axis(&amps, &dims, axis, iso);
            dims[axis] = iso.nrows();
        }
        dims = dims.iter().flat_map(|_| [d_fine, d_fine]).collect();
        checked_size(d_fine, dims.len())?;
    }
    for axis in 0..dims.len() {
        amps = apply_axis(&amps, &dims, axis, &f.compression);
        dims[axis] = f.compression.nrows();
    }
    DenseState::new(dims.len(), f.compression.nrows(), amps)
}

fn integer_sqrt(x: usize) -> usize {
    let r = math::round(math::sqrt(x as f64)) as usize;
    debug_assert_eq!(r * r, x);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::fixtures;
    use crate::mps::{rg_fixed_point, WeightSpectrum};
    use core::f64::consts::PI;

    #[test]
    fn product_and_ghz() {
        let p = materialize_mps(&fixtures::product(), 5).unwrap();
        assert!((p.amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        let g = materialize_mps(&fixtures::ghz(), 4).unwrap();
        let s = core::f64::consts::FRAC_1_SQRT_2;
        assert!((g.amplitudes()[0].re - s).abs() < 1e-15);
        assert!((g.amplitudes()[15].re - s).abs() < 1e-15);
        assert!(g.amplitudes()[1..15].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn chi3_two_cos() {
        let st = materialize_mps(&fixtures::chi3_example(PI / 3.0), 3).unwrap();
        let r = st.amplitudes()[7] / st.amplitudes()[0];
        assert!((r - C64::new(-2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_state_is_reported() {
        let a = MpsTensor::from_real(&[&[&[0.0]], &[&[0.0]]]).unwrap();
        assert_eq!(materialize_mps(&a, 3), Err(Error::ZeroState));
    }

    #[test]
    fn size_cap() {
        let err = materialize_mps(&fixtures::ghz(), 25).unwrap_err();
        assert!(matches!(err, Error::SizeCap { .. }));
    }

    #[test]
    fn two_site_operator_matches_kron() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2);
        let psi = DenseState::random(3, 2, &mut rng).unwrap();
        let g = crate::linalg::haar_unitary(4, &mut rng);
        let mut a = psi.clone();
        a.apply_two(0, 1, &g).unwrap();
        let full = crate::linalg::kron(&g, &CMat::identity(2, 2));
        let v = crate::linalg::CVec::from_column_slice(psi.amplitudes());
        let w = full * v;
        for (x, y) in a.amplitudes().iter().zip(w.iter()) {
            assert!((x - y).norm() < 1e-12);
        }
        // reversed site order means the operator's first factor acts on site 2
        let mut b = psi.clone();
        b.apply_two(2, 0, &g).unwrap();
        assert!((norm(b.amplitudes()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_point_product_blocks() {
        let f = FixedPointState::product_blocks(WeightSpectrum::constant(&[1.0, 1.0]));
        let st = materialize_fixed_point(&f, 4).unwrap();
        let g = materialize_mps(&fixtures::ghz(), 4).unwrap();
        assert!((st.overlap(&g).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lifted_fixed_point_matches_original() {
        let a = fixtures::chi3_example(PI / 3.0);
        let f = rg_fixed_point(&a, 1e-12, 60).unwrap();
        for n in 1..=6 {
            let st = lift_fixed_point(&materialize_fixed_point(&f, n).unwrap(), &f).unwrap();
            let direct = materialize_mps(&a, st.n_sites() * f.blocking).unwrap();
            assert_eq!(f.blocking, 1);
            assert!((st.overlap(&direct).unwrap().norm() - 1.0).abs() < 1e-10, "n = {n}");
        }
    }
}
