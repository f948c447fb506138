use alloc::vec::Vec;

use rand::Rng;

use super::state::DenseState;
use crate::linalg::{self, CMat};
use crate::math;
use crate::{Error, Result, C64};

/// Largest reduced-density dimension the engine will build.
pub const DENSITY_CAP: usize = 1 << 12;

/// Eigenvalues at or below this are dropped from entropies.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Eigenvalues below `-PSD_TOL` make a matrix non-PSD.
pub const PSD_TOL: f64 = 1e-9;

/// Default modulus tolerance of the flatness check.
pub const DEFAULT_TAU_FLAT: f64 = 1e-9;

fn check_region(psi: &DenseState, region: &[usize]) -> Result<()> {
    let n = psi.n_sites();
    let mut seen = alloc::vec![false; n];
    for &s in region {
        if s >= n {
            return Err(Error::InvalidRegion(alloc::format!("site {s} out of range for {n} sites")));
        }
        if seen[s] {
            return Err(Error::InvalidRegion(alloc::format!("site {s} listed twice")));
        }
        seen[s] = true;
    }
    Ok(())
}

/// `ψ` reshaped with the sites of `region` (in the given order) as rows and
/// the remaining sites (ascending) as columns, stored row-major.
fn matricize(psi: &DenseState, region: &[usize]) -> (Vec<C64>, usize, usize) {
    let n = psi.n_sites();
    let d = psi.local_dim();
    let mut in_region = alloc::vec![false; n];
    region.iter().for_each(|&s| in_region[s] = true);
    let rest: Vec<usize> = (0..n).filter(|&s| !in_region[s]).collect();
    let rows = d.pow(region.len() as u32);
    let cols = d.pow(rest.len() as u32);
    // Contribution of digit 1 at each site to the flat row-major index.
    let mut stride = alloc::vec![0usize; n];
    for (k, &s) in region.iter().enumerate() {
        stride[s] = d.pow((region.len() - 1 - k) as u32) * cols;
    }
    for (k, &s) in rest.iter().enumerate() {
        stride[s] = d.pow((rest.len() - 1 - k) as u32);
    }
    let mut out = alloc::vec![C64::new(0.0, 0.0); rows * cols];
    let mut digits = alloc::vec![0usize; n];
    let mut pos = 0usize;
    for &amp in psi.amplitudes() {
        out[pos] = amp;
        // Odometer increment, last site fastest.
        for k in (0..n).rev() {
            digits[k] += 1;
            pos += stride[k];
            if digits[k] < d {
                break;
            }
            pos -= d * stride[k];
            digits[k] = 0;
        }
    }
    (out, rows, cols)
}

/// `M M†` for a row-major `rows × cols` matrix.
fn gram(m: &[C64], rows: usize, cols: usize) -> CMat {
    let mut g = CMat::zeros(rows, rows);
    for i in 0..rows {
        let ri = &m[i * cols..(i + 1) * cols];
        for j in i..rows {
            let rj = &m[j * cols..(j + 1) * cols];
            let (mut re, mut im) = (0.0, 0.0);
            for (x, y) in ri.iter().zip(rj) {
                re += x.re * y.re + x.im * y.im;
                im += x.im * y.re - x.re * y.im;
            }
            g[(i, j)] = C64::new(re, im);
            g[(j, i)] = C64::new(re, -im);
        }
    }
    g
}

/// `ρ_R = Tr_{R̄} |ψ⟩⟨ψ|`, with rows ordered by the sites of `region` as given.
pub fn reduced_density(psi: &DenseState, region: &[usize]) -> Result<CMat> {
    check_region(psi, region)?;
    let dim = (psi.local_dim() as u128).pow(region.len() as u32);
    if dim > DENSITY_CAP as u128 {
        return Err(Error::SizeCap { required: dim, cap: DENSITY_CAP as u128 });
    }
    let (m, rows, cols) = matricize(psi, region);
    Ok(gram(&m, rows, cols))
}

fn entropy_of_spectrum(values: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &mu in values {
        if mu < -PSD_TOL {
            return Err(Error::NotPsd { eigenvalue: mu });
        }
        if mu > EIGEN_FLOOR {
            s -= mu * math::log2(mu);
        }
    }
    Ok(s.max(0.0))
}

/// `-Σ μ log₂ μ` over the eigenvalues of a Hermitian PSD matrix.
pub fn von_neumann_entropy(rho: &CMat) -> Result<f64> {
    entropy_of_spectrum(&linalg::eigvalsh(rho))
}

/// Entanglement entropy of `region` in a pure state, computed on the smaller
/// side of the cut.
pub fn region_entropy(psi: &DenseState, region: &[usize]) -> Result<f64> {
    check_region(psi, region)?;
    if region.is_empty() || region.len() == psi.n_sites() {
        return Ok(0.0);
    }
    let complement: Vec<usize>;
    let side = if 2 * region.len() <= psi.n_sites() {
        region
    } else {
        complement = (0..psi.n_sites()).filter(|s| !region.contains(s)).collect();
        &complement
    };
    let small = psi.local_dim().pow(side.len() as u32);
    if small > DENSITY_CAP {
        return Err(Error::SizeCap { required: small as u128, cap: DENSITY_CAP as u128 });
    }
    let (m, rows, cols) = matricize(psi, side);
    entropy_of_spectrum(&linalg::eigvalsh(&gram(&m, rows, cols)))
}

/// `I(A:B) = S(A) + S(B) − S(AB)` of a pure state.
pub fn mutual_information(psi: &DenseState, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.iter().any(|s| b.contains(s)) {
        return Err(Error::OverlappingRegions);
    }
    let ab: Vec<usize> = a.iter().chain(b).copied().collect();
    Ok(region_entropy(psi, a)? + region_entropy(psi, b)? - region_entropy(psi, &ab)?)
}

/// `√(1 − |⟨ψ|φ⟩|²)`, clamped to `[0, 1]`.
pub fn trace_distance_pure(psi: &DenseState, phi: &DenseState) -> Result<f64> {
    if psi.local_dim() != phi.local_dim() || psi.n_sites() != phi.n_sites() {
        return Err(Error::DimensionMismatch {
            expected: psi.amplitudes().len(),
            found: phi.amplitudes().len(),
        });
    }
    let ov = psi.overlap(phi)?.norm_sqr();
    Ok(math::sqrt((1.0 - ov).clamp(0.0, 1.0)))
}

fn check_psd(rho: &CMat) -> Result<()> {
    let min = linalg::eigvalsh(rho).first().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(Error::NotPsd { eigenvalue: min });
    }
    Ok(())
}

/// Half the trace norm of `ρ − σ`.
pub fn trace_distance_mixed(rho: &CMat, sigma: &CMat) -> Result<f64> {
    if rho.shape() != sigma.shape() {
        return Err(Error::DimensionMismatch { expected: rho.nrows(), found: sigma.nrows() });
    }
    check_psd(rho)?;
    check_psd(sigma)?;
    Ok(0.5 * linalg::eigvalsh(&(rho - sigma)).iter().map(|&x| math::abs(x)).sum::<f64>())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FannesReport {
    pub delta: f64,
    /// `|S(ρ) − S(σ)|`.
    pub entropy_gap: f64,
    /// `δ|R| + H_bin(δ)`.
    pub bound: f64,
}

impl FannesReport {
    pub fn slack(&self) -> f64 {
        self.bound - self.entropy_gap
    }

    pub fn holds(&self) -> bool {
        self.slack() >= -1e-12
    }
}

/// Entropy continuity bound on a region of `region_qubits` qubits.
pub fn fannes_check(rho: &CMat, sigma: &CMat, region_qubits: usize) -> Result<FannesReport> {
    if rho.nrows() > 1usize << region_qubits {
        return Err(Error::DimensionMismatch { expected: 1 << region_qubits, found: rho.nrows() });
    }
    let delta = trace_distance_mixed(rho, sigma)?;
    let gap = math::abs(von_neumann_entropy(rho)? - von_neumann_entropy(sigma)?);
    let bound = delta * region_qubits as f64 + math::binary_entropy(delta.min(1.0));
    Ok(FannesReport { delta, entropy_gap: gap, bound })
}

/// Partial transpose of a matrix on subsystems of dimensions `dims` over the
/// subsystems listed in `transposed`.
pub fn partial_transpose(rho: &CMat, dims: &[usize], transposed: &[usize]) -> Result<CMat> {
    let product: usize = dims.iter().product();
    if product != rho.nrows() || rho.nrows() != rho.ncols() {
        return Err(Error::BadFactorization { dim: rho.nrows(), product });
    }
    if let Some(&bad) = transposed.iter().find(|&&t| t >= dims.len()) {
        return Err(Error::InvalidRegion(alloc::format!("subsystem {bad} out of range")));
    }
    let k = dims.len();
    let split = |mut x: usize| {
        let mut out = alloc::vec![0usize; k];
        for t in (0..k).rev() {
            out[t] = x % dims[t];
            x /= dims[t];
        }
        out
    };
    let join = |digits: &[usize]| digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x);
    let mut out = CMat::zeros(product, product);
    for r in 0..product {
        let rd = split(r);
        for c in 0..product {
            let mut rr = rd.clone();
            let mut cc = split(c);
            for &t in transposed {
                core::mem::swap(&mut rr[t], &mut cc[t]);
            }
            out[(join(&rr), join(&cc))] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// True iff every eigenvalue of `ρ^{T_A}` with modulus above `tau` has the
/// same modulus within `tau`.
pub fn flatness_check(rho: &CMat, dims: &[usize], transposed: &[usize], tau: f64) -> Result<bool> {
    let pt = partial_transpose(rho, dims, transposed)?;
    let mods: Vec<f64> = linalg::eigvalsh(&pt).iter().map(|&x| math::abs(x)).filter(|&m| m > tau).collect();
    let (lo, hi) = mods.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &m| (lo.min(m), hi.max(m)));
    Ok(mods.is_empty() || hi - lo <= tau)
}

/// `‖P² − νP⁴‖ / ‖P²‖` with `P = ρ^{T_A}` and `ν` the least-squares fit.
pub fn proportionality_residual(rho: &CMat, dims: &[usize], transposed: &[usize]) -> Result<f64> {
    let p = partial_transpose(rho, dims, transposed)?;
    let p2 = &p * &p;
    let p4 = &p2 * &p2;
    let dot = |x: &CMat, y: &CMat| x.iter().zip(y.iter()).map(|(a, b)| (a.conj() * b).re).sum::<f64>();
    let den = dot(&p4, &p4);
    let n2 = linalg::frobenius(&p2);
    if n2 == 0.0 || den == 0.0 {
        return Ok(0.0);
    }
    let nu = dot(&p4, &p2) / den;
    Ok(linalg::frobenius(&(&p2 - p4.scale(nu))) / n2)
}

/// Random density matrix `G G† / tr` with `G` a `dim × rank` Gaussian matrix.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> CMat {
    let g = linalg::complex_gaussian_matrix(dim, rank.max(1), rng);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho.map(|z| z / C64::new(tr, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::materialize_mps;
    use crate::mps::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(v: &[f64]) -> CMat {
        CMat::from_fn(v.len(), v.len(), |i, j| if i == j { C64::new(v[i], 0.0) } else { C64::new(0.0, 0.0) })
    }

    #[test]
    fn ghz_reduced_density() {
        let g = materialize_mps(&fixtures::ghz(), 4).unwrap();
        let rho = reduced_density(&g, &[0, 1]).unwrap();
        assert!(linalg::frobenius(&(rho.clone() - diag(&[0.5, 0.0, 0.0, 0.5]))) < 1e-12);
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
        assert!((region_entropy(&g, &[0, 1]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_mutual_information() {
        let g = materialize_mps(&fixtures::ghz(), 8).unwrap();
        assert!((mutual_information(&g, &[0, 1], &[4, 5]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_is_pure() {
        let p = materialize_mps(&fixtures::product(), 4).unwrap();
        let rho = reduced_density(&p, &[1, 2]).unwrap();
        assert!((linalg::frobenius(&(&rho * &rho - &rho))) < 1e-12);
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn trace_distances() {
        let a = DenseState::basis(2, 2, 0).unwrap();
        let b = DenseState::basis(2, 2, 3).unwrap();
        assert!((trace_distance_pure(&a, &a).unwrap()).abs() < 1e-12);
        assert!((trace_distance_pure(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let c = DenseState::new(2, 2, alloc::vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)])
            .unwrap();
        assert!((trace_distance_pure(&a, &c).unwrap() - s).abs() < 1e-12);
    }

    #[test]
    fn fannes_closed_form() {
        let r = fannes_check(&diag(&[1.0, 0.0]), &diag(&[0.5, 0.5]), 1).unwrap();
        assert!((r.delta - 0.5).abs() < 1e-12);
        assert!((r.entropy_gap - 1.0).abs() < 1e-12);
        assert!((r.bound - 1.5).abs() < 1e-12);
        assert!(r.holds());
        let same = fannes_check(&diag(&[0.3, 0.7]), &diag(&[0.3, 0.7]), 1).unwrap();
        assert_eq!(same.delta, 0.0);
        assert!(same.slack().abs() < 1e-12);
    }

    #[test]
    fn not_psd_is_reported() {
        let bad = diag(&[1.5, -0.5]);
        assert!(matches!(von_neumann_entropy(&bad), Err(Error::NotPsd { .. })));
        assert!(matches!(trace_distance_mixed(&bad, &diag(&[1.0, 0.0])), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn partial_transpose_of_bell_pair() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let bell = DenseState::new(2, 2, alloc::vec![C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)])
            .unwrap();
        let rho = reduced_density(&bell, &[0, 1]).unwrap();
        let pt = partial_transpose(&rho, &[2, 2], &[0]).unwrap();
        let ev = linalg::eigvalsh(&pt);
        assert!((ev[0] + 0.5).abs() < 1e-12);
        assert!(ev[1..].iter().all(|x| (x - 0.5).abs() < 1e-12));
        assert!(flatness_check(&rho, &[2, 2], &[0], DEFAULT_TAU_FLAT).unwrap());
        assert!(proportionality_residual(&rho, &[2, 2], &[0]).unwrap() < 1e-12);
        assert!(matches!(partial_transpose(&rho, &[2, 3], &[0]), Err(Error::BadFactorization { .. })));
    }

    #[test]
    fn maximally_mixed_is_flat() {
        let rho = diag(&[0.25; 4]);
        assert!(flatness_check(&rho, &[2, 2], &[1], DEFAULT_TAU_FLAT).unwrap());
    }

    #[test]
    fn unequal_classical_mixture_is_not_flat() {
        let rho = diag(&[0.2, 0.0, 0.0, 0.8]);
        assert!(!flatness_check(&rho, &[2, 2], &[0], DEFAULT_TAU_FLAT).unwrap());
        assert!(proportionality_residual(&rho, &[2, 2], &[0]).unwrap() > 1e-3);
    }

    #[test]
    fn random_density_is_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random_density(8, 3, &mut rng);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(linalg::eigvalsh(&rho)[0] > -1e-12);
    }
}
