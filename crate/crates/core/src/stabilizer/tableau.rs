use alloc::string::String;
use alloc::vec::Vec;

use super::gf2::{self, BitRow};
use super::pauli::PauliString;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(a) | Gate::S(a) | Gate::X(a) | Gate::Y(a) | Gate::Z(a) => (a, None),
            Gate::Cnot(a, b) | Gate::Cz(a, b) => (a, Some(b)),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in core::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::TargetOutOfRange { target: q, n });
            }
        }
        if b == Some(a) {
            return Err(Error::RepeatedTarget);
        }
        Ok(())
    }
}

/// Conjugates a Pauli string by a Clifford gate, `P ← U P U†`.
pub fn conjugate(p: &mut PauliString, gate: Gate) {
    match gate {
        Gate::H(a) => {
            let (x, z) = (p.x(a), p.z(a));
            p.negate_if(x && z);
            p.set_x(a, z);
            p.set_z(a, x);
        }
        Gate::S(a) => {
            let (x, z) = (p.x(a), p.z(a));
            p.negate_if(x && z);
            p.set_z(a, z ^ x);
        }
        Gate::X(a) => p.negate_if(p.z(a)),
        Gate::Z(a) => p.negate_if(p.x(a)),
        Gate::Y(a) => p.negate_if(p.x(a) ^ p.z(a)),
        Gate::Cnot(c, t) => {
            let (xc, zc, xt, zt) = (p.x(c), p.z(c), p.x(t), p.z(t));
            p.negate_if(xc && zt && !(xt ^ zc));
            p.set_x(t, xt ^ xc);
            p.set_z(c, zc ^ zt);
        }
        Gate::Cz(a, b) => {
            conjugate(p, Gate::H(b));
            conjugate(p, Gate::Cnot(a, b));
            conjugate(p, Gate::H(b));
        }
    }
}

/// Generators of the stabilizer group of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliString>,
}

impl StabilizerTableau {
    /// `|0…0⟩`, generated by `Z_q`.
    pub fn zero_state(n: usize) -> Self {
        let rows = (0..n).map(|q| PauliString::single(n, q, 'Z').expect("in range")).collect();
        Self { n, rows }
    }

    /// Validates sign, commutation and independence of the generators.
    pub fn new(rows: Vec<PauliString>) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.n());
        if rows.iter().any(|r| r.n() != n) {
            return Err(Error::InvalidRegion("generators act on different qubit counts".into()));
        }
        if rows.iter().any(|r| !r.is_hermitian()) {
            return Err(Error::ImaginaryGenerator);
        }
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if rows[i].anticommutes(&rows[j]) {
                    return Err(Error::NonCommutingGenerators { first: i, second: j });
                }
            }
        }
        let t = Self { n, rows };
        let rank = t.symplectic_rank();
        if rank != n || t.rows.len() != n {
            return Err(Error::DependentGenerators { rank, n });
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.rows
    }

    fn bit_row(&self, p: &PauliString, cols: &[usize]) -> BitRow {
        let mut r = BitRow::zeros(2 * cols.len());
        for (k, &q) in cols.iter().enumerate() {
            r.set(k, p.x(q));
            r.set(cols.len() + k, p.z(q));
        }
        r
    }

    fn symplectic_rank(&self) -> usize {
        let cols: Vec<usize> = (0..self.n).collect();
        let rows: Vec<BitRow> = self.rows.iter().map(|p| self.bit_row(p, &cols)).collect();
        gf2::rank(&rows, 2 * self.n)
    }

    pub fn apply_gate(&self, gate: Gate) -> Result<Self> {
        let mut t = self.clone();
        t.apply_in_place(gate)?;
        Ok(t)
    }

    pub fn apply_in_place(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.n)?;
        for p in &mut self.rows {
            conjugate(p, gate);
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        for &g in gates {
            self.apply_in_place(g)?;
        }
        Ok(())
    }

    /// Reduced row echelon form over GF(2), columns ordered `x_0…x_{n-1}, z_0…z_{n-1}`.
    pub fn canonicalize(&self) -> Result<Self> {
        let n = self.n;
        let mut rows = self.rows.clone();
        let mut r = 0;
        for col in 0..2 * n {
            let bit = |p: &PauliString| if col < n { p.x(col) } else { p.z(col - n) };
            let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i])) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && bit(row) {
                    row.mul_assign_right(&pivot);
                }
            }
            r += 1;
        }
        if r != n || rows.len() != n {
            return Err(Error::DependentGenerators { rank: r, n });
        }
        if rows.iter().any(|p| !p.is_hermitian()) {
            return Err(Error::ImaginaryGenerator);
        }
        Ok(Self { n, rows })
    }

    fn check_region(&self, region: &[usize]) -> Result<Vec<bool>> {
        let mut mask = alloc::vec![false; self.n];
        for &q in region {
            if q >= self.n {
                return Err(Error::InvalidRegion(alloc::format!("qubit {q} out of range for {} qubits", self.n)));
            }
            if mask[q] {
                return Err(Error::InvalidRegion(alloc::format!("qubit {q} listed twice")));
            }
            mask[q] = true;
        }
        Ok(mask)
    }

    /// Entanglement entropy (in bits) of region `R`: `rank(G restricted to R̄) - |R̄|`.
    pub fn entropy(&self, region: &[usize]) -> Result<usize> {
        let mask = self.check_region(region)?;
        let outside: Vec<usize> = (0..self.n).filter(|&q| !mask[q]).collect();
        let rows: Vec<BitRow> = self.rows.iter().map(|p| self.bit_row(p, &outside)).collect();
        let rank = gf2::rank(&rows, 2 * outside.len());
        Ok(rank - outside.len())
    }

    /// `S(A) + S(B) - S(A∪B)`.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<usize> {
        let ma = self.check_region(a)?;
        let mb = self.check_region(b)?;
        if ma.iter().zip(&mb).any(|(x, y)| *x && *y) {
            return Err(Error::OverlappingRegions);
        }
        let ab: Vec<usize> = a.iter().chain(b).copied().collect();
        Ok(self.entropy(a)? + self.entropy(b)? - self.entropy(&ab)?)
    }

    /// One generator per line, e.g. `+XXI`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.rows {
            s.push_str(&p.to_text());
            s.push('\n');
        }
        s
    }

    /// Parses the line format of [`to_text`](Self::to_text); blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(PauliString::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::random_clifford_circuit;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn texts(t: &StabilizerTableau) -> Vec<String> {
        t.generators().iter().map(|p| p.to_text()).collect()
    }

    #[test]
    fn hadamard_maps_z_to_x() {
        let t = StabilizerTableau::zero_state(1).apply_gate(Gate::H(0)).unwrap();
        assert_eq!(texts(&t), ["+X"]);
    }

    #[test]
    fn bell_pair() {
        let t = StabilizerTableau::zero_state(2)
            .apply_gate(Gate::H(0))
            .unwrap()
            .apply_gate(Gate::Cnot(0, 1))
            .unwrap()
            .canonicalize()
            .unwrap();
        assert_eq!(texts(&t), ["+XX", "+ZZ"]);
    }

    #[test]
    fn s_fixes_z() {
        let t = StabilizerTableau::zero_state(1).apply_gate(Gate::S(0)).unwrap();
        assert_eq!(texts(&t), ["+Z"]);
    }

    #[test]
    fn s_squared_on_x_gives_minus_x() {
        let t = StabilizerTableau::zero_state(1)
            .apply_gate(Gate::H(0))
            .unwrap()
            .apply_gate(Gate::S(0))
            .unwrap();
        assert_eq!(texts(&t), ["+Y"]);
        assert_eq!(texts(&t.apply_gate(Gate::S(0)).unwrap()), ["-X"]);
    }

    #[test]
    fn bad_targets() {
        let t = StabilizerTableau::zero_state(2);
        assert!(matches!(t.apply_gate(Gate::H(2)), Err(Error::TargetOutOfRange { target: 2, n: 2 })));
        assert!(matches!(t.apply_gate(Gate::Cnot(1, 1)), Err(Error::RepeatedTarget)));
    }

    #[test]
    fn swapped_rows_canonicalize_identically() {
        let a = StabilizerTableau::from_text("+XX\n+ZZ\n").unwrap();
        let b = StabilizerTableau::from_text("+ZZ\n+XX\n").unwrap();
        assert_eq!(a.canonicalize().unwrap(), b.canonicalize().unwrap());
    }

    #[test]
    fn dependent_and_imaginary_rejected() {
        assert!(matches!(
            StabilizerTableau::from_text("+XX\n+XX\n"),
            Err(Error::DependentGenerators { rank: 1, n: 2 })
        ));
        assert!(matches!(StabilizerTableau::from_text("+iZ\n"), Err(Error::ImaginaryGenerator)));
        assert!(matches!(
            StabilizerTableau::from_text("+XI\n+ZI\n"),
            Err(Error::NonCommutingGenerators { first: 0, second: 1 })
        ));
    }

    #[test]
    fn ghz_entropies() {
        let mut t = StabilizerTableau::zero_state(8);
        t.apply_in_place(Gate::H(0)).unwrap();
        for q in 1..8 {
            t.apply_in_place(Gate::Cnot(0, q)).unwrap();
        }
        assert_eq!(t.entropy(&[0, 1]).unwrap(), 1);
        assert_eq!(t.mutual_information(&[0, 1], &[4, 5]).unwrap(), 1);
        assert!(matches!(t.mutual_information(&[0, 1], &[1, 2]), Err(Error::OverlappingRegions)));
        assert_eq!(StabilizerTableau::zero_state(4).entropy(&[0, 2]).unwrap(), 0);
    }

    #[test]
    fn bell_links_separated_regions() {
        // pairs (1,2), (3,4), (5,6), (7,0) on 8 qubits
        let mut t = StabilizerTableau::zero_state(8);
        for k in 0..4 {
            let a = 2 * k + 1;
            let b = (2 * k + 2) % 8;
            t.apply_in_place(Gate::H(a)).unwrap();
            t.apply_in_place(Gate::Cnot(a, b)).unwrap();
        }
        assert_eq!(t.mutual_information(&[1, 2], &[5, 6]).unwrap(), 0);
        assert_eq!(t.entropy(&[0, 1]).unwrap(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn invariants_hold(seed in any::<u64>(), n in 1usize..12, depth in 0usize..16) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let circuit = random_clifford_circuit(n, depth, &mut rng);
            let mut t = StabilizerTableau::zero_state(n);
            t.apply_circuit(&circuit).unwrap();
            let all: Vec<usize> = (0..n).collect();
            prop_assert_eq!(t.entropy(&all).unwrap(), 0);
            prop_assert_eq!(t.entropy(&[]).unwrap(), 0);
            let canon = t.canonicalize().unwrap();
            prop_assert_eq!(&canon.canonicalize().unwrap(), &canon);
            let text = StabilizerTableau::from_text(&t.to_text()).unwrap();
            prop_assert_eq!(&text, &t);
            if n >= 2 {
                let a: Vec<usize> = (0..n / 2).collect();
                let b: Vec<usize> = (n / 2..n).collect();
                let sab = t.entropy(&all).unwrap();
                prop_assert!(sab <= t.entropy(&a).unwrap() + t.entropy(&b).unwrap());
                // conjugation commutes with canonical form
                let g = circuit.first().copied().unwrap_or(Gate::H(0));
                let lhs = t.apply_gate(g).unwrap().canonicalize().unwrap();
                let rhs = canon.apply_gate(g).unwrap().canonicalize().unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
