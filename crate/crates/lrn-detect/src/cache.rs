//! On-disk memoization of transfer-matrix spectra, keyed by a hash of the tensor.

use std::path::Path;

use lrn_core::mps::{sorted_eigenvalues, transfer_matrix, MpsTensor};
use lrn_core::C64;
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::format::TensorFile;

fn key(a: &MpsTensor) -> Result<String> {
    let bytes = serde_json::to_vec(&TensorFile::from_tensor(a))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

/// Transfer-matrix eigenvalues ordered by decreasing modulus, read from
/// `dir` when present and stored there otherwise. Cache write failures are
/// not errors.
pub fn transfer_spectrum(a: &MpsTensor, dir: Option<&Path>) -> Result<Vec<C64>> {
    let Some(dir) = dir else {
        return Ok(sorted_eigenvalues(&transfer_matrix(a).matrix)?);
    };
    let path = dir.join(format!("{}.json", key(a)?));
    if let Ok(text) = std::fs::read_to_string(&path) {
        if let Ok(pairs) = serde_json::from_str::<Vec<[f64; 2]>>(&text) {
            return Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect());
        }
    }
    let ev = sorted_eigenvalues(&transfer_matrix(a).matrix)?;
    let pairs: Vec<[f64; 2]> = ev.iter().map(|z| [z.re, z.im]).collect();
    if std::fs::create_dir_all(dir).is_ok() {
        let _ = std::fs::write(&path, serde_json::to_string(&pairs)?);
    }
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrn_core::mps::fixtures;

    #[test]
    fn cached_equals_fresh() {
        let dir = tempfile::tempdir().unwrap();
        let a = fixtures::chi3_example(0.7);
        let fresh = transfer_spectrum(&a, None).unwrap();
        let first = transfer_spectrum(&a, Some(dir.path())).unwrap();
        let second = transfer_spectrum(&a, Some(dir.path())).unwrap();
        assert_eq!(fresh, first);
        assert_eq!(first, second);
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
