//! Dense complex linear algebra on top of `nalgebra`.
//!
//! Vectorization is row-major throughout: the matrix entry `X[a][b]` of a
//! `n x n` matrix lives at index `a * n + b`. With this convention
//! `(A ⊗ B) vec(X) = vec(A X Bᵀ)`, so `Σ A ⊗ conj(A)` acts as `X ↦ Σ A X A†`.

use alloc::vec::Vec;

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::math;
use crate::{Error, Result, C64};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = CMat::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn frobenius(m: &CMat) -> f64 {
    math::sqrt(m.iter().map(|z| z.norm_sqr()).sum())
}

pub fn vec_row(m: &CMat) -> CVec {
    let (r, c) = m.shape();
    CVec::from_fn(r * c, |k, _| m[(k / c, k % c)])
}

pub fn unvec_row(v: &CVec, n: usize) -> CMat {
    debug_assert_eq!(v.len(), n * n);
    CMat::from_fn(n, n, |i, j| v[i * n + j])
}

pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Indices of the rows of `h` that are not identically zero. Restricting to
/// them keeps the symmetric QR sweep away from exactly zero blocks, where it
/// can return non-finite values.
fn support(h: &CMat) -> Vec<usize> {
    (0..h.nrows()).filter(|&i| h.row(i).iter().any(|z| *z != C64::new(0.0, 0.0))).collect()
}

fn principal(h: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), idx.len(), |i, j| h[(idx[i], idx[j])])
}

/// Eigenvalues of a general complex square matrix, via the complex Schur form.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(alloc::vec![m[(0, 0)]]);
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 100_000)
        .ok_or(Error::Numerical("Schur decomposition did not converge"))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Eigenvalues (ascending) and unit eigenvectors (columns) of a Hermitian matrix.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let h = hermitian_part(h);
    let idx = support(&h);
    let mut pairs: Vec<(f64, DVector<C64>)> = Vec::with_capacity(n);
    if !idx.is_empty() {
        let eig = principal(&h, &idx).symmetric_eigen();
        for (k, &v) in eig.eigenvalues.iter().enumerate() {
            let mut u = DVector::zeros(n);
            for (r, &i) in idx.iter().enumerate() {
                u[i] = eig.eigenvectors[(r, k)];
            }
            pairs.push((v, u));
        }
    }
    for i in (0..n).filter(|i| !idx.contains(i)) {
        let mut u = DVector::zeros(n);
        u[i] = C64::new(1.0, 0.0);
        pairs.push((0.0, u));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = CMat::from_fn(n, n, |i, j| pairs[j].1[i]);
    (values, vectors)
}

/// Eigenvalues (ascending) of a Hermitian matrix.
pub fn eigvalsh(h: &CMat) -> Vec<f64> {
    let n = h.nrows();
    let h = hermitian_part(h);
    let idx = support(&h);
    if idx.is_empty() {
        return alloc::vec![0.0; n];
    }
    let sub = principal(&h, &idx);
    let mut v: Vec<f64> = sub.symmetric_eigenvalues().iter().copied().collect();
    if v.iter().any(|x| !x.is_finite()) {
        if let Ok(z) = eigenvalues(&sub) {
            v = z.iter().map(|z| z.re).collect();
        }
    }
    v.resize(n, 0.0);
    v.sort_by(f64::total_cmp);
    v
}

/// Thin singular value decomposition `m = u diag(s) v_adj`, singular values descending.
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v_adj: CMat,
}

pub fn svd(m: &CMat) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd {
            u: CMat::zeros(r, 0),
            s: Vec::new(),
            v_adj: CMat::zeros(0, c),
        };
    }
    let d = m.clone().svd(true, true);
    Svd {
        u: d.u.expect("u requested"),
        s: d.singular_values.iter().copied().collect(),
        v_adj: d.v_t.expect("v requested"),
    }
}

/// Orthonormal bases of the right and left null spaces of a square matrix.
///
/// Columns of the first matrix span `{x : m x ≈ 0}`, columns of the second
/// span `{y : y† m ≈ 0}`. Singular values at or below `tol` count as zero.
pub fn null_spaces(m: &CMat, tol: f64) -> (CMat, CMat) {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    let d = svd(m);
    let idx: Vec<usize> = (0..n).filter(|&k| d.s[k] <= tol).collect();
    let right = CMat::from_fn(n, idx.len(), |i, j| d.v_adj[(idx[j], i)].conj());
    let left = CMat::from_fn(n, idx.len(), |i, j| d.u[(i, idx[j])]);
    (right, left)
}

/// Orthonormal basis for the column span of `m`, keeping singular values above `tol`.
pub fn range_basis(m: &CMat, tol: f64) -> CMat {
    let d = svd(m);
    let k = d.s.iter().take_while(|&&s| s > tol).count();
    d.u.columns(0, k).into_owned()
}

/// Orthonormal completion: columns spanning the orthogonal complement of `q`'s columns.
pub fn orthogonal_complement(q: &CMat) -> CMat {
    let n = q.nrows();
    let proj = CMat::identity(n, n) - q * q.adjoint();
    range_basis(&proj, 1e-8)
}

/// `h^p` for a Hermitian positive semidefinite `h`; eigenvalues below `floor` are zeroed.
pub fn psd_power(h: &CMat, p: f64, floor: f64) -> CMat {
    let (vals, vecs) = eigh(h);
    let n = vals.len();
    let mut out = CMat::zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        if l <= floor {
            continue;
        }
        let w = math::powf(l, p);
        let col = vecs.column(k);
        out += (col * col.adjoint()).scale(w);
    }
    out
}

pub fn inverse(m: &CMat) -> Result<CMat> {
    m.clone()
        .try_inverse()
        .ok_or(Error::Numerical("matrix is singular"))
}

/// Haar-random unitary from the QR decomposition of a complex Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let n = d.norm();
        let phase = if n > 0.0 { d / n } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Deviation of `u† u` from the identity in Frobenius norm.
pub fn unitarity_defect(u: &CMat) -> f64 {
    let n = u.ncols();
    frobenius(&(u.adjoint() * u - CMat::identity(n, n)))
}
