use crate::linalg::{self, CMat};
use crate::mps::transfer::{spectral_of, transfer_matrix, DEFAULT_TAU_SPEC};
use crate::mps::MpsTensor;
use crate::{Error, Result};

pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Outcome of a normality test together with the fixed points that decided it.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalityWitness {
    pub normal: bool,
    /// Fixed point of `X ↦ Σ A X A†`, unit largest eigenvalue.
    pub right_fixed: CMat,
    /// Fixed point of `Y ↦ Σ A† Y A`, unit largest eigenvalue.
    pub left_fixed: CMat,
    pub peripheral_count: usize,
    pub spectral_radius: f64,
}

/// Lazy power iteration `X ← (X + Φ(X)/ρ)/2` from the identity.
fn power_fixed_point<F>(chi: usize, rho: f64, tol: f64, max_iter: usize, apply: F) -> Result<CMat>
where
    F: Fn(&CMat) -> CMat,
{
    let mut x = CMat::identity(chi, chi);
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let next = (&x + apply(&x).unscale(rho)).scale(0.5);
        let n = linalg::frobenius(&next);
        if n == 0.0 {
            return Ok(next);
        }
        let next = next.unscale(n);
        residual = linalg::frobenius(&(&next - &x));
        x = next;
        if residual < tol {
            return Ok(linalg::hermitian_part(&x));
        }
    }
    Err(Error::ConvergenceFailure { what: "fixed-point power iteration", iterations: max_iter, residual })
}

fn full_rank(h: &CMat, tau: f64) -> bool {
    let ev = linalg::eigvalsh(h);
    let top = ev.last().copied().unwrap_or(0.0);
    top > 0.0 && ev[0] > tau.max(1e-9) * top
}

/// Normality test: unique full-rank fixed points on both sides and a single peripheral eigenvalue.
pub fn is_normal(a: &MpsTensor, tau: f64) -> Result<NormalityWitness> {
    is_normal_with(a, tau, DEFAULT_MAX_ITER)
}

pub fn is_normal_with(a: &MpsTensor, tau: f64, max_iter: usize) -> Result<NormalityWitness> {
    let chi = a.chi();
    let t = transfer_matrix(a).matrix;
    let empty = || NormalityWitness {
        normal: false,
        right_fixed: CMat::zeros(chi, chi),
        left_fixed: CMat::zeros(chi, chi),
        peripheral_count: 0,
        spectral_radius: 0.0,
    };
    let spec = match spectral_of(&t, DEFAULT_TAU_SPEC) {
        Ok(s) => s,
        Err(Error::NonDiagonalizablePeripheral { .. }) => return Ok(empty()),
        Err(e) => return Err(e),
    };
    let rho = spec.spectral_radius;
    if rho == 0.0 {
        return Ok(empty());
    }
    let tol = 1e-13 * (chi as f64);
    let x = power_fixed_point(chi, rho, tol, max_iter, |x| {
        a.matrices().iter().map(|m| m * x * m.adjoint()).sum()
    })?;
    let y = power_fixed_point(chi, rho, tol, max_iter, |y| {
        a.matrices().iter().map(|m| m.adjoint() * y * m).sum()
    })?;
    let normal = spec.peripheral.len() == 1 && full_rank(&x, tau) && full_rank(&y, tau);
    Ok(NormalityWitness {
        normal,
        right_fixed: x,
        left_fixed: y,
        peripheral_count: spec.peripheral.len(),
        spectral_radius: rho,
    })
}
