//! Exact stabilizer-state computations over GF(2).

pub mod gf2;
mod pauli;
mod tableau;

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

pub use pauli::PauliString;
pub use tableau::{conjugate, Gate, StabilizerTableau};

/// `depth` layers of random single-qubit Cliffords followed by random CNOT/CZ
/// gates on a random pairing of the qubits.
pub fn random_clifford_circuit<R: Rng + ?Sized>(n: usize, depth: usize, rng: &mut R) -> Vec<Gate> {
    let mut gates = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..depth {
        for q in 0..n {
            match rng.random_range(0..6) {
                0 => gates.push(Gate::H(q)),
                1 => gates.push(Gate::S(q)),
                2 => gates.push(Gate::X(q)),
                3 => gates.push(Gate::Y(q)),
                4 => gates.push(Gate::Z(q)),
                _ => {}
            }
        }
        order.shuffle(rng);
        for pair in order.chunks_exact(2) {
            match rng.random_range(0..3) {
                0 => gates.push(Gate::Cnot(pair[0], pair[1])),
                1 => gates.push(Gate::Cz(pair[0], pair[1])),
                _ => {}
            }
        }
    }
    gates
}
