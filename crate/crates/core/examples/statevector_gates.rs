//! The gate vocabulary on a three-qubit register, checked against dense matrices.

use std::f64::consts::FRAC_PI_2;

use quantum_forest::statevector::dense::{circuit_matrix, gate_matrix};
use quantum_forest::statevector::{swap_as_cnots, Gate, StateVector};

fn main() -> quantum_forest::Result<()> {
    // Qubit 0 is the most significant bit of the basis index.
    let mut s = StateVector::new(3)?;
    s.apply(&Gate::H(0))?;
    s.apply(&Gate::Cnot { control: 0, target: 2 })?;
    print!("{}", s.dump());

    // A uniformly controlled rotation: one Ry angle per value of qubits (0, 1).
    let ucr = Gate::Ucr {
        controls: vec![0, 1],
        target: 2,
        angles: vec![0.0, FRAC_PI_2, 0.0, 2.0 * FRAC_PI_2],
    };
    s.apply(&ucr)?;
    println!("P(q2 = 1) = {:.6}", s.probability(2, true)?);

    let cnots = swap_as_cnots(0, 2)?;
    let diff = circuit_matrix(&cnots, 3)?.max_abs_diff(&gate_matrix(&Gate::Swap(0, 2), 3)?);
    println!("SWAP vs three CNOTs: max difference {diff}");

    let m = gate_matrix(&ucr, 3)?;
    let mut t = StateVector::random(3, &mut rand::thread_rng())?;
    let want = m.apply(&t);
    t.apply(&ucr)?;
    let err = t.amplitudes().iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    println!("kernel vs dense: {err:.2e}");
    Ok(())
}
