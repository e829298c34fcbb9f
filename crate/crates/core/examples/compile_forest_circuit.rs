//! Compile the state preparation for a forest and read the flag qubit.

use quantum_forest::circuit::{compile_forest_op, grover_iterate};
use quantum_forest::forest::{beta_classical, generate_random_forest, ForestParams, InputObject};
use quantum_forest::statevector::StateVector;

fn main() -> quantum_forest::Result<()> {
    let forest = generate_random_forest(&ForestParams::small_binary((10.0, 20.0)), 3)?;
    let x = InputObject::new(vec![0.0, 1.0, 1.0]);
    let circuit = compile_forest_op(&forest, &x)?;
    print!("{}", circuit.dump());
    println!(
        "{} qubits, {} gates, {} query levels, Q has {} gates",
        circuit.width(),
        circuit.gates.len(),
        circuit.metadata.query_levels,
        grover_iterate(&circuit).len()
    );

    let mut state = StateVector::new(circuit.width())?;
    state.apply_all(&circuit.gates)?;
    let p = state.probability(circuit.layout.phi_qubit(), true)?;
    println!("P(phi = 1) = {p:.12}");
    println!("beta       = {:.12}", beta_classical(&forest, &x)?);
    Ok(())
}
