use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use crate::linalg::{self, CMat};
use crate::{Error, Result, C64};

/// Largest physical dimension produced by blocking unless configured otherwise.
pub const DEFAULT_PHYS_CAP: usize = 4096;

/// Local tensor `A^i_{αβ}` of a translation-invariant MPS: `d` matrices of size `χ×χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MpsTensor {
    d: usize,
    chi: usize,
    matrices: Vec<CMat>,
}

impl MpsTensor {
    pub fn new(matrices: Vec<CMat>) -> Result<Self> {
        let d = matrices.len();
        if d == 0 {
            return Err(Error::InvalidTensor("no physical index".into()));
        }
        let chi = matrices[0].nrows();
        if chi == 0 {
            return Err(Error::InvalidTensor("bond dimension is zero".into()));
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.nrows() != chi || m.ncols() != chi {
                return Err(Error::InvalidTensor(format!(
                    "matrix {i} is {}x{}, expected {chi}x{chi}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidTensor(format!("matrix {i} has a non-finite entry")));
            }
        }
        Ok(Self { d, chi, matrices })
    }

    /// Builds a tensor from real entries, `entries[i][row][col]`.
    pub fn from_real(entries: &[&[&[f64]]]) -> Result<Self> {
        let mats = entries
            .iter()
            .map(|rows| {
                let n = rows.len();
                CMat::from_fn(n, rows.first().map_or(0, |r| r.len()), |r, c| {
                    C64::new(rows[r][c], 0.0)
                })
            })
            .collect();
        Self::new(mats)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn matrix(&self, i: usize) -> &CMat {
        &self.matrices[i]
    }

    pub fn into_matrices(self) -> Vec<CMat> {
        self.matrices
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            d: self.d,
            chi: self.chi,
            matrices: self.matrices.iter().map(|m| m * s).collect(),
        }
    }

    /// `X^{-1} A^i X` for every `i`, given `X` and its inverse.
    pub fn conjugated(&self, x: &CMat, x_inv: &CMat) -> Self {
        Self {
            d: self.d,
            chi: x.ncols(),
            matrices: self.matrices.iter().map(|m| x_inv * m * x).collect(),
        }
    }

    /// Restriction `Q A^i P` to a subspace given by a basis `P` and cobasis `Q`.
    pub fn compressed(&self, basis: &CMat, cobasis: &CMat) -> Self {
        Self {
            d: self.d,
            chi: basis.ncols(),
            matrices: self.matrices.iter().map(|m| cobasis * m * basis).collect(),
        }
    }

    /// Mixes the physical index: `B^j = Σ_i u[(j, i)] A^i`.
    pub fn physical_map(&self, u: &CMat) -> Result<Self> {
        if u.ncols() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: u.ncols() });
        }
        let mats = (0..u.nrows())
            .map(|j| {
                let mut m = CMat::zeros(self.chi, self.chi);
                for (i, a) in self.matrices.iter().enumerate() {
                    m += a * u[(j, i)];
                }
                m
            })
            .collect();
        Self::new(mats)
    }

    /// Groups `q` sites into one with physical dimension `d^q`.
    ///
    /// Physical indices are big-endian: `i = i_1 d^{q-1} + … + i_q`, and the
    /// matrix is the ordered product `A^{i_1} ⋯ A^{i_q}`.
    pub fn block(&self, q: usize, cap: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidTensor("blocking order must be positive".into()));
        }
        let dim = checked_pow(self.d, q).filter(|&v| v <= cap).ok_or(Error::DimensionCap {
            dim: checked_pow(self.d, q).unwrap_or(usize::MAX),
            cap,
        })?;
        let mut mats = self.matrices.clone();
        for _ in 1..q {
            let mut next = Vec::with_capacity(mats.len() * self.d);
            for m in &mats {
                for a in &self.matrices {
                    next.push(m * a);
                }
            }
            mats = next;
        }
        debug_assert_eq!(mats.len(), dim);
        Ok(Self { d: dim, chi: self.chi, matrices: mats })
    }

    /// Block-diagonal direct sum over a shared physical index.
    pub fn direct_sum(parts: &[&MpsTensor]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::InvalidTensor("empty direct sum".into()))?;
        let d = first.d;
        let chi: usize = parts.iter().map(|p| p.chi).sum();
        let mut mats = alloc::vec![CMat::zeros(chi, chi); d];
        let mut off = 0;
        for p in parts {
            if p.d != d {
                return Err(Error::DimensionMismatch { expected: d, found: p.d });
            }
            for (i, m) in p.matrices.iter().enumerate() {
                mats[i].view_mut((off, off), (p.chi, p.chi)).copy_from(m);
            }
            off += p.chi;
        }
        Self::new(mats)
    }

    /// Largest entry modulus over all matrices.
    pub fn max_abs(&self) -> f64 {
        self.matrices
            .iter()
            .flat_map(|m| m.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_i ‖A^i - B^i‖_F²`, square-rooted.
    pub fn distance(&self, other: &MpsTensor) -> f64 {
        let s: f64 = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let f = linalg::frobenius(&(a - b));
                f * f
            })
            .sum();
        crate::math::sqrt(s)
    }

    /// Tensor with i.i.d. complex Gaussian entries.
    pub fn random<R: Rng + ?Sized>(d: usize, chi: usize, rng: &mut R) -> Self {
        let mats = (0..d).map(|_| linalg::complex_gaussian_matrix(chi, chi, rng)).collect();
        Self { d, chi, matrices: mats }
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mps::fixtures;

    #[test]
    fn rejects_ragged_input() {
        let a = CMat::zeros(2, 2);
        let b = CMat::zeros(3, 3);
        assert!(matches!(MpsTensor::new(alloc::vec![a, b]), Err(Error::InvalidTensor(_))));
        assert!(MpsTensor::new(Vec::new()).is_err());
    }

    #[test]
    fn rejects_nan() {
        let mut a = CMat::zeros(1, 1);
        a[(0, 0)] = C64::new(f64::NAN, 0.0);
        assert!(MpsTensor::new(alloc::vec![a]).is_err());
    }

    #[test]
    fn block_one_is_identity() {
        let g = fixtures::ghz();
        assert_eq!(g.block(1, DEFAULT_PHYS_CAP).unwrap(), g);
    }

    #[test]
    fn ghz_block_two_has_two_nonzero_matrices() {
        let b = fixtures::ghz().block(2, DEFAULT_PHYS_CAP).unwrap();
        assert_eq!(b.d(), 4);
        let nonzero: Vec<usize> = (0..4).filter(|&i| b.matrix(i).norm() > 0.0).collect();
        assert_eq!(nonzero, alloc::vec![0, 3]);
    }

    #[test]
    fn block_respects_cap() {
        let g = fixtures::ghz();
        assert!(matches!(g.block(13, 4096), Err(Error::DimensionCap { dim: 8192, cap: 4096 })));
    }

    #[test]
    fn block_order_is_big_endian() {
        let a = fixtures::chi3_example(0.7);
        let b = a.block(2, DEFAULT_PHYS_CAP).unwrap();
        // index 1 = (i1, i2) = (0, 1)
        assert_eq!(b.matrix(1), &(a.matrix(0) * a.matrix(1)));
    }
}
