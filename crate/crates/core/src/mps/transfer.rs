use alloc::vec::Vec;

use crate::linalg::{self, CMat, CVec};
use crate::math;
use crate::mps::MpsTensor;
use crate::{Error, Result, C64};

pub const DEFAULT_TAU_SPEC: f64 = 1e-9;

/// Relative width used to group numerically coincident eigenvalues.
const CLUSTER_REL: f64 = 1e-6;

/// `𝔼_A = Σ_i A^i ⊗ conj(A^i)` in the row-major `(αα′),(ββ′)` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferOperator {
    pub dim: usize,
    pub physical_dim: usize,
    pub bond_dim: usize,
    pub matrix: CMat,
}

pub fn transfer_matrix(a: &MpsTensor) -> TransferOperator {
    TransferOperator {
        dim: a.chi() * a.chi(),
        physical_dim: a.d(),
        bond_dim: a.chi(),
        matrix: mixed_transfer(a, a),
    }
}

/// `Σ_i A^i ⊗ conj(B^i)`; acts as `X ↦ Σ_i A^i X B^{i†}` on row-major vectorized matrices.
pub fn mixed_transfer(a: &MpsTensor, b: &MpsTensor) -> CMat {
    let mut out = CMat::zeros(a.chi() * b.chi(), a.chi() * b.chi());
    for (ai, bi) in a.matrices().iter().zip(b.matrices()) {
        out += linalg::kron(ai, &bi.map(|z| z.conj()));
    }
    out
}

/// Eigen-decomposition of a transfer operator restricted to its peripheral spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    /// All eigenvalues, sorted by descending modulus.
    pub eigenvalues: Vec<C64>,
    pub spectral_radius: f64,
    /// Eigenvalues with modulus at least `ρ(1 - τ_spec)`, with multiplicity.
    pub peripheral: Vec<C64>,
    /// Columns `L_m` with `L_m† 𝔼 = λ_m L_m†`.
    pub left: CMat,
    /// Columns `R_m` with `𝔼 R_m = λ_m R_m`, normalized so that `L† R = 1`.
    pub right: CMat,
}

impl SpectralData {
    /// Spectral projector `Σ R_m L_m†` over the peripheral eigenvalues within `tol` of `lambda`.
    pub fn projector(&self, lambda: C64, tol: f64) -> CMat {
        let n = self.left.nrows();
        let mut p = CMat::zeros(n, n);
        for (m, &l) in self.peripheral.iter().enumerate() {
            if (l - lambda).norm() <= tol {
                p += self.right.column(m) * self.left.column(m).adjoint();
            }
        }
        p
    }

    /// Modulus of the largest eigenvalue outside the peripheral set, relative to ρ.
    pub fn subleading_ratio(&self) -> f64 {
        if self.spectral_radius == 0.0 {
            return 0.0;
        }
        self.eigenvalues
            .get(self.peripheral.len())
            .map_or(0.0, |l| l.norm() / self.spectral_radius)
    }
}

pub fn sorted_eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let mut ev = linalg::eigenvalues(m)?;
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()).then(b.arg().total_cmp(&a.arg())));
    Ok(ev)
}

/// Groups values that lie within `width` of the running cluster mean.
fn cluster(values: &[C64], width: f64) -> Vec<(C64, usize)> {
    let mut out: Vec<(C64, Vec<C64>)> = Vec::new();
    for &v in values {
        match out.iter_mut().find(|(c, _)| (*c - v).norm() <= width) {
            Some((c, members)) => {
                members.push(v);
                let k = members.len() as f64;
                *c = members.iter().sum::<C64>() / k;
            }
            None => out.push((v, alloc::vec![v])),
        }
    }
    out.into_iter().map(|(c, m)| (c, m.len())).collect()
}

/// Biorthonormal left/right eigenvectors for one eigenvalue cluster.
fn eigenspace(t: &CMat, lambda: C64, mult: usize, tau: f64) -> Result<(CMat, CMat)> {
    let n = t.nrows();
    let scale = linalg::frobenius(t).max(1.0);
    let shifted = t - CMat::identity(n, n) * lambda;
    let d = linalg::svd(&shifted);
    // The `mult` smallest singular values must all vanish for a semisimple eigenvalue.
    let geometric = d.s.iter().filter(|&&s| s <= tau.max(1e-12) * scale * 10.0).count();
    if geometric < mult {
        return Err(Error::NonDiagonalizablePeripheral {
            eigenvalue: lambda,
            algebraic: mult,
            geometric,
        });
    }
    let idx: Vec<usize> = (n - mult..n).collect();
    let right = CMat::from_fn(n, mult, |i, j| d.v_adj[(idx[j], i)].conj());
    let left = CMat::from_fn(n, mult, |i, j| d.u[(i, idx[j])]);
    let g = left.adjoint() * &right;
    let gs = linalg::svd(&g);
    let smallest = gs.s.last().copied().unwrap_or(0.0);
    if smallest < math::sqrt(tau) {
        return Err(Error::NonDiagonalizablePeripheral {
            eigenvalue: lambda,
            algebraic: mult,
            geometric: gs.s.iter().filter(|&&s| s >= math::sqrt(tau)).count(),
        });
    }
    let right = right * linalg::inverse(&g)?;
    Ok((left, right))
}

/// Full spectrum plus biorthonormalized peripheral eigenvectors.
pub fn spectral(t: &TransferOperator, tau_spec: f64) -> Result<SpectralData> {
    spectral_of(&t.matrix, tau_spec)
}

pub fn spectral_of(t: &CMat, tau_spec: f64) -> Result<SpectralData> {
    let n = t.nrows();
    let eigenvalues = sorted_eigenvalues(t)?;
    let rho = eigenvalues.first().map_or(0.0, |l| l.norm());
    if rho <= f64::MIN_POSITIVE {
        return Ok(SpectralData {
            eigenvalues,
            spectral_radius: 0.0,
            peripheral: Vec::new(),
            left: CMat::zeros(n, 0),
            right: CMat::zeros(n, 0),
        });
    }
    let cut = rho * (1.0 - tau_spec);
    let per: Vec<C64> = eigenvalues.iter().copied().take_while(|l| l.norm() >= cut).collect();
    let clusters = cluster(&per, CLUSTER_REL * rho);
    let mut peripheral = Vec::with_capacity(per.len());
    let mut lefts = Vec::new();
    let mut rights = Vec::new();
    for (lambda, mult) in clusters {
        let (l, r) = eigenspace(t, lambda, mult, tau_spec)?;
        for k in 0..mult {
            peripheral.push(lambda);
            lefts.push(l.column(k).into_owned());
            rights.push(r.column(k).into_owned());
        }
    }
    let left = CMat::from_columns(&lefts);
    let right = CMat::from_columns(&rights);
    Ok(SpectralData {
        eigenvalues,
        spectral_radius: rho,
        peripheral,
        left: if lefts.is_empty() { CMat::zeros(n, 0) } else { left },
        right: if rights.is_empty() { CMat::zeros(n, 0) } else { right },
    })
}

/// Positive right and left fixed points `X = unvec(P vec 1)`, `Y = unvec(P† vec 1)`
/// of the eigenvalue `ρ` of a transfer operator on `χ×χ` matrices.
///
/// Falls back to a one-dimensional eigenvector when the eigenvalue is not semisimple.
pub(crate) fn positive_fixed_points(t: &CMat, chi: usize, rho: f64) -> Result<(CMat, CMat)> {
    let n = t.nrows();
    let ev = sorted_eigenvalues(t)?;
    let target = C64::new(rho, 0.0);
    let mult = ev.iter().filter(|l| (**l - target).norm() <= CLUSTER_REL * rho).count().max(1);
    let id = linalg::vec_row(&CMat::identity(chi, chi));
    let (x, y) = match eigenspace(t, target, mult, DEFAULT_TAU_SPEC) {
        Ok((l, r)) => {
            let x: CVec = &r * (l.adjoint() * &id);
            let y: CVec = &l * (r.adjoint() * &id);
            (x, y)
        }
        Err(Error::NonDiagonalizablePeripheral { .. }) => {
            let shifted = t - CMat::identity(n, n) * target;
            let d = linalg::svd(&shifted);
            let x = d.v_adj.row(n - 1).adjoint();
            let y = d.u.column(n - 1).into_owned();
            (x, y)
        }
        Err(e) => return Err(e),
    };
    Ok((to_positive(&linalg::unvec_row(&x, chi)), to_positive(&linalg::unvec_row(&y, chi))))
}

/// Hermitian part with the global phase and sign fixed so the trace is positive, unit max eigenvalue.
fn to_positive(m: &CMat) -> CMat {
    let tr = m.trace();
    let phase = if tr.norm() > 1e-300 { tr.conj() / tr.norm() } else { C64::new(1.0, 0.0) };
    let h = linalg::hermitian_part(&(m * phase));
    let top = linalg::eigvalsh(&h).last().copied().unwrap_or(0.0);
    if top > 0.0 {
        h.unscale(top)
    } else {
        h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CorrelationLength {
    Finite(f64),
    /// More than one peripheral eigenvalue: the family is a multi-block superposition.
    MultiBlock,
}

pub fn correlation_length(s: &SpectralData) -> CorrelationLength {
    if s.peripheral.len() > 1 {
        return CorrelationLength::MultiBlock;
    }
    let r = s.subleading_ratio();
    if r < 1e-14 {
        CorrelationLength::Finite(0.0)
    } else {
        CorrelationLength::Finite(-1.0 / math::ln(r))
    }
}
