use crate::linalg::{self, CMat};
use crate::math;
use crate::mps::normal::is_normal;
use crate::mps::transfer::{mixed_transfer, positive_fixed_points, sorted_eigenvalues, transfer_matrix};
use crate::mps::MpsTensor;
use crate::{Error, Result};

pub const DEFAULT_TAU_LO: f64 = 1e-10;

/// `‖Σ_i A^i ⊗ conj(B^i)‖_F < τ`.
pub fn local_orthogonal(a: &MpsTensor, b: &MpsTensor, tau: f64) -> Result<bool> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch { expected: a.d(), found: b.d() });
    }
    Ok(linalg::frobenius(&mixed_transfer(a, b)) < tau)
}

/// A phase and gauge with `A^i = e^{iφ} X B^i X^{-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeRelation {
    pub phase: f64,
    pub x: CMat,
}

/// Finds `φ` and `X` with `A^i = e^{iφ} X B^i X^{-1}` for normal `A`, `B`.
pub fn gauge_equivalent(a: &MpsTensor, b: &MpsTensor, tau: f64) -> Result<Option<GaugeRelation>> {
    if a.d() != b.d() {
        return Err(Error::DimensionMismatch { expected: a.d(), found: b.d() });
    }
    if !is_normal(a, 1e-10)?.normal || !is_normal(b, 1e-10)?.normal {
        return Err(Error::NotNormalInput);
    }
    gauge_equivalent_normal(a, b, tau)
}

/// Same as [`gauge_equivalent`] without re-checking normality.
pub(crate) fn gauge_equivalent_normal(
    a: &MpsTensor,
    b: &MpsTensor,
    tau: f64,
) -> Result<Option<GaugeRelation>> {
    let chi = b.chi();
    if a.chi() != chi {
        return Ok(None);
    }
    let tb = transfer_matrix(b).matrix;
    let rho_b = sorted_eigenvalues(&tb)?.first().map_or(0.0, |l| l.norm());
    let rho_a = sorted_eigenvalues(&transfer_matrix(a).matrix)?.first().map_or(0.0, |l| l.norm());
    if rho_a == 0.0 || rho_b == 0.0 || math::abs(rho_a - rho_b) > 1e-8 * rho_b {
        return Ok(None);
    }
    let m = mixed_transfer(a, b);
    let top = match sorted_eigenvalues(&m)?.first() {
        Some(&l) => l,
        None => return Ok(None),
    };
    if top.norm() < rho_b * (1.0 - 1e-8) {
        return Ok(None);
    }
    let phase = top.arg();
    let n = m.nrows();
    let d = linalg::svd(&(&m - CMat::identity(n, n) * top));
    let z = linalg::unvec_row(&d.v_adj.row(n - 1).adjoint(), chi);
    let (r_b, _) = positive_fixed_points(&tb, chi, rho_b)?;
    let x = z * linalg::inverse(&r_b)?;
    let x_inv = match x.clone().try_inverse() {
        Some(v) => v,
        None => return Ok(None),
    };
    let e = top / top.norm();
    let scale = a.max_abs().max(1e-300);
    for (ai, bi) in a.matrices().iter().zip(b.matrices()) {
        let rebuilt = &x * bi * &x_inv * e;
        if linalg::frobenius(&(ai - rebuilt)) > tau.max(1e-9) * scale * (chi as f64) {
            return Ok(None);
        }
    }
    Ok(Some(GaugeRelation { phase, x }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn product_pair_is_orthogonal() {
        let a = MpsTensor::from_real(&[&[&[1.0]], &[&[0.0]]]).unwrap();
        let b = MpsTensor::from_real(&[&[&[0.0]], &[&[1.0]]]).unwrap();
        assert!(local_orthogonal(&a, &b, DEFAULT_TAU_LO).unwrap());
        assert!(!local_orthogonal(&a, &a, DEFAULT_TAU_LO).unwrap());
        assert_eq!(gauge_equivalent(&a, &b, 1e-10).unwrap(), None);
    }

    #[test]
    fn global_phase_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = MpsTensor::random(2, 2, &mut rng);
        let phi0 = 0.9;
        let b = a.scaled(C64::from_polar(1.0, phi0));
        let rel = gauge_equivalent(&a, &b, 1e-10).unwrap().expect("equivalent");
        // A = e^{-iφ₀} B
        assert!((rel.phase + phi0).abs() < 1e-9);
        let x = rel.x.unscale(rel.x[(0, 0)].norm()) * (rel.x[(0, 0)].conj() / rel.x[(0, 0)].norm());
        assert!((x - CMat::identity(2, 2)).norm() < 1e-8);
    }

    #[test]
    fn similarity_is_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = MpsTensor::random(2, 2, &mut rng);
        let x = linalg::complex_gaussian_matrix(2, 2, &mut rng);
        let x_inv = linalg::inverse(&x).unwrap();
        // B = X A X^{-1}
        let b = a.conjugated(&x_inv, &x);
        let rel = gauge_equivalent(&a, &b, 1e-10).unwrap().expect("equivalent");
        assert!(rel.phase.abs() < 1e-9);
        // A = X' B X'^{-1} with X' ∝ X^{-1}
        let ratio = &rel.x * &x;
        let s = ratio[(0, 0)];
        assert!((ratio.unscale(1.0) - CMat::identity(2, 2) * s).norm() < 1e-8 * s.norm());
    }

    #[test]
    fn ghz_blocks_are_orthogonal() {
        let a = MpsTensor::from_real(&[&[&[1.0]], &[&[0.0]]]).unwrap();
        let b = MpsTensor::from_real(&[&[&[0.0]], &[&[1.0]]]).unwrap();
        assert!(local_orthogonal(&a, &b, DEFAULT_TAU_LO).unwrap());
    }
}
