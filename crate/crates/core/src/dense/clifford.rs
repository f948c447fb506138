use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::state::{checked_size, DenseState};
use crate::linalg::CMat;
use crate::stabilizer::{Gate, PauliString, StabilizerTableau};
use crate::{math, Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

fn mat(n: usize, entries: &[C64]) -> CMat {
    CMat::from_row_slice(n, n, entries)
}

/// Dense matrix of a Clifford gate (two-qubit gates with the first listed qubit major).
pub fn gate_matrix(gate: Gate) -> CMat {
    let s = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    match gate {
        Gate::H(_) => mat(2, &[s, s, s, -s]),
        Gate::S(_) => mat(2, &[ONE, ZERO, ZERO, I]),
        Gate::X(_) => mat(2, &[ZERO, ONE, ONE, ZERO]),
        Gate::Y(_) => mat(2, &[ZERO, -I, I, ZERO]),
        Gate::Z(_) => mat(2, &[ONE, ZERO, ZERO, -ONE]),
        Gate::Cnot(..) => {
            let mut m = CMat::zeros(4, 4);
            for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                m[(r, c)] = ONE;
            }
            m
        }
        Gate::Cz(..) => mat(4, &[
            ONE, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, ONE, ZERO, ZERO, ZERO, ZERO, -ONE,
        ]),
    }
}

pub fn apply_clifford(psi: &mut DenseState, gate: Gate) -> Result<()> {
    if psi.local_dim() != 2 {
        return Err(Error::GeometryMismatch("Clifford gates act on qubits".into()));
    }
    match gate.qubits() {
        (a, None) => psi.apply_one(a, &gate_matrix(gate)),
        (a, Some(b)) => psi.apply_two(a, b, &gate_matrix(gate)),
    }
}

/// Dense image of `|0…0⟩` under a gate sequence.
pub fn dense_clifford_state(n: usize, gates: &[Gate]) -> Result<DenseState> {
    let mut psi = DenseState::basis(n, 2, 0)?;
    for &g in gates {
        apply_clifford(&mut psi, g)?;
    }
    Ok(psi)
}

/// `P |v⟩` for a Pauli string on `n` qubits (qubit 0 most significant).
pub fn apply_pauli(amps: &[C64], p: &PauliString) -> Vec<C64> {
    let n = p.n();
    let mut xmask = 0usize;
    let mut zmask = 0usize;
    let mut ymask = 0usize;
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        match (p.x(q), p.z(q)) {
            (true, true) => ymask |= bit,
            (true, false) => xmask |= bit,
            (false, true) => zmask |= bit,
            _ => {}
        }
    }
    let global = I.powu(u32::from(p.phase()));
    let flip = xmask | ymask;
    let mut out = alloc::vec![ZERO; amps.len()];
    for (b, &a) in amps.iter().enumerate() {
        if a == ZERO {
            continue;
        }
        // Z: (−1)^bit; Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩.
        let z_sign = (b & zmask).count_ones() % 2;
        let y_ones = (b & ymask).count_ones();
        let y_zeros = ymask.count_ones() - y_ones;
        let mut f = I.powu(y_zeros) * (-I).powu(y_ones);
        if z_sign == 1 {
            f = -f;
        }
        out[b ^ flip] += a * f * global;
    }
    out
}

/// Largest `‖g|ψ⟩ − |ψ⟩‖` over the generators.
pub fn stabilizer_residual(t: &StabilizerTableau, psi: &DenseState) -> f64 {
    t.generators()
        .iter()
        .map(|g| {
            let v = apply_pauli(psi.amplitudes(), g);
            math::sqrt(v.iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>())
        })
        .fold(0.0, f64::max)
}

/// Dense stabilizer state: the projector `Π (1 + g)/2` applied to a seeded
/// random vector.
pub fn stabilizer_dense_state(t: &StabilizerTableau) -> Result<DenseState> {
    let n = t.n();
    checked_size(2, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v = DenseState::random(n, 2, &mut rng)?.amplitudes().to_vec();
    for g in t.generators() {
        let gv = apply_pauli(&v, g);
        for (x, y) in v.iter_mut().zip(gv) {
            *x = (*x + y) * 0.5;
        }
    }
    DenseState::new(n, 2, v)
}
