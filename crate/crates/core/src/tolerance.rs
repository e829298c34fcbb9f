//! Numeric tolerances shared by the simulator, compiler and tests.

/// Amplitude-level checks: norm preservation, state equality.
pub const STATE: f64 = 1e-10;

/// Probability-level checks: marginals compared against classical values.
pub const PROBABILITY: f64 = 1e-9;

/// Largest state the simulator will allocate (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;

/// Largest register for which dense matrices are built.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Budget for one phase-estimation run, in single-gate passes over the state
/// (`(t - 1)` Grover iterates times their gate count times `2^qubits`).
pub const MAX_AMPLITUDE_UPDATES: u128 = 1 << 38;
