//! Hand-built tensors used by tests, examples and the acceptance suite.

use alloc::vec::Vec;

use crate::linalg::CMat;
use crate::mps::MpsTensor;
use crate::C64;

fn diag(entries: &[C64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
}

fn real_diag(entries: &[f64]) -> CMat {
    let v: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
    diag(&v)
}

/// `A⁰ = [1]`, `A¹ = [0]`: the product state `|0…0⟩`.
pub fn product() -> MpsTensor {
    MpsTensor::from_real(&[&[&[1.0]], &[&[0.0]]]).expect("valid")
}

/// `A⁰ = diag(1, 0)`, `A¹ = diag(0, 1)`: `|0…0⟩ + |1…1⟩`.
pub fn ghz() -> MpsTensor {
    MpsTensor::new(alloc::vec![real_diag(&[1.0, 0.0]), real_diag(&[0.0, 1.0])]).expect("valid")
}

/// Three-dimensional bond with `A⁰ = E₁₁`, `A¹ = diag(0, e^{iφ}, e^{-iφ})`,
/// generating `|0…0⟩ + 2cos(φN)|1…1⟩`.
pub fn chi3_example(phi: f64) -> MpsTensor {
    let z = C64::new(0.0, 0.0);
    let a0 = diag(&[C64::new(1.0, 0.0), z, z]);
    let a1 = diag(&[z, C64::from_polar(1.0, phi), C64::from_polar(1.0, -phi)]);
    MpsTensor::new(alloc::vec![a0, a1]).expect("valid")
}

/// GHZ with block multiplicities: `A⁰ = 1_n ⊕ 0_m`, `A¹ = 0_n ⊕ 1_m`,
/// generating `n|0…0⟩ + m|1…1⟩`.
pub fn ghz_multiplicity(n: usize, m: usize) -> MpsTensor {
    let mut a0 = alloc::vec![1.0; n];
    a0.extend(core::iter::repeat(0.0).take(m));
    let mut a1 = alloc::vec![0.0; n];
    a1.extend(core::iter::repeat(1.0).take(m));
    MpsTensor::new(alloc::vec![real_diag(&a0), real_diag(&a1)]).expect("valid")
}

/// Four product blocks on a four-level site, `A^i = E_{ii}`.
///
/// Generates `Σ_k |k…k⟩`; the block weights of the four-branch superposition
/// are supplied separately because they do not scale with `N`.
pub fn four_branch() -> MpsTensor {
    let mats = (0..4)
        .map(|i| {
            let mut e = [0.0; 4];
            e[i] = 1.0;
            real_diag(&e)
        })
        .collect();
    MpsTensor::new(mats).expect("valid")
}
