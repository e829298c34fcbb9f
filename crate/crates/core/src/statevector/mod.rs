//! Dense state-vector simulator.
//!
//! Basis ordering: qubit 0 is the most significant bit of the basis index, so
//! on three qubits `|q0 q1 q2⟩ = |1 0 0⟩` is index 4. Registers are contiguous
//! qubit ranges and read their value with the lowest-numbered qubit as MSB.
//!
//! Gates are applied in place by stride kernels. [`dense`] builds explicit
//! matrices for small systems and exists only as a cross-check.

pub mod dense;
mod gate;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::ops::Range;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;

pub use gate::{swap_as_cnots, Control, Gate, Mat2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegisterName {
    /// Tree index.
    Lambda,
    /// Node index.
    Psi,
    /// Result qubit.
    Phi,
    /// Phase-estimation register.
    Phase,
}

/// A named, contiguous range of qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: RegisterName,
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub fn new(name: RegisterName, start: usize, len: usize) -> Self {
        Register { name, start, len }
    }

    pub fn qubits(&self) -> Range<usize> {
        self.start..self.start + self.len
    }

    pub fn qubit(&self, k: usize) -> usize {
        debug_assert!(k < self.len);
        self.start + k
    }

    /// Least significant qubit of the register value.
    pub fn lsb(&self) -> usize {
        self.start + self.len - 1
    }

    /// Value of this register in basis state `index` of an `num_qubits` system.
    pub fn value_of(&self, index: usize, num_qubits: usize) -> usize {
        if self.len == 0 {
            return 0;
        }
        let shift = num_qubits - self.start - self.len;
        (index >> shift) & ((1usize << self.len) - 1)
    }
}

/// Which basis indices a controlled kernel acts on: `index & mask == value`.
#[derive(Clone, Copy, Debug, Default)]
struct ControlMask {
    mask: usize,
    value: usize,
}

impl ControlMask {
    fn with(mut self, bit: usize, on: bool) -> Self {
        self.mask |= bit;
        if on {
            self.value |= bit;
        }
        self
    }

    fn admits(&self, index: usize) -> bool {
        index & self.mask == self.value
    }
}

/// `2^N` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits > tolerance::MAX_QUBITS {
            return Err(Error::Resource(format!(
                "{num_qubits} qubits exceeds the simulator limit of {}",
                tolerance::MAX_QUBITS
            )));
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps explicit amplitudes; length must be a power of two and the vector normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        let state = StateVector { num_qubits, amps };
        state.check_normalized()?;
        Ok(state)
    }

    /// Random normalized state with uniformly drawn amplitude components.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        let dim = 1usize << num_qubits;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm = amps.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Self::from_amplitudes(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > tolerance::STATE {
            return Err(Error::Unnormalized(n));
        }
        Ok(())
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn bit(&self, qubit: usize) -> usize {
        1usize << (self.num_qubits - 1 - qubit)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        self.apply_controlled(gate, &[])
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        gates.into_iter().try_for_each(|g| self.apply(g))
    }

    /// Applies `gate` on the subspace where every extra control matches its value.
    pub fn apply_controlled(&mut self, gate: &Gate, extra: &[Control]) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let touched = gate.qubits();
        let mut mask = ControlMask::default();
        for c in extra {
            if c.qubit >= self.num_qubits {
                return Err(Error::InvalidGate(format!(
                    "control qubit {} out of range",
                    c.qubit
                )));
            }
            let bit = self.bit(c.qubit);
            if touched.contains(&c.qubit) || mask.mask & bit != 0 {
                return Err(Error::InvalidGate(format!(
                    "control qubit {} overlaps the gate or another control",
                    c.qubit
                )));
            }
            mask = mask.with(bit, c.on);
        }

        match gate {
            Gate::H(q) => self.kernel_fixed(*q, mask, Mat2::hadamard()),
            Gate::X(q) => self.kernel_fixed(*q, mask, Mat2::X),
            Gate::Z(q) => self.kernel_fixed(*q, mask, Mat2::Z),
            Gate::Ry { target, angle } => self.kernel_fixed(*target, mask, Mat2::ry(*angle)),
            Gate::Cnot { control, target } => {
                let mask = mask.with(self.bit(*control), true);
                self.kernel_fixed(*target, mask, Mat2::X)
            }
            Gate::Swap(a, b) => self.kernel_swap(*a, *b, mask),
            Gate::Controlled {
                controls,
                target,
                op,
            } => {
                let mask = controls
                    .iter()
                    .fold(mask, |m, c| m.with(self.bit(c.qubit), c.on));
                self.kernel_fixed(*target, mask, *op)
            }
            Gate::Ucg {
                controls,
                target,
                blocks,
            } => {
                let blocks: Vec<Option<Mat2>> = blocks
                    .iter()
                    .map(|b| (!b.is_identity()).then_some(*b))
                    .collect();
                self.kernel_multiplexed(controls, *target, mask, &blocks)
            }
            Gate::Ucr {
                controls,
                target,
                angles,
            } => {
                let blocks: Vec<Option<Mat2>> = angles
                    .iter()
                    .map(|&a| (a != 0.0).then(|| Mat2::ry(a)))
                    .collect();
                self.kernel_multiplexed(controls, *target, mask, &blocks)
            }
            Gate::GlobalPhase(phi) => {
                let factor = Complex64::from_polar(1.0, *phi);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if mask.admits(i) {
                        *a *= factor;
                    }
                }
            }
        }
        Ok(())
    }

    /// Every basis index pair `(i0, i0 | tb)` with the target bit `tb` clear in `i0`.
    fn pair_indices(dim: usize, tb: usize) -> impl Iterator<Item = (usize, usize)> {
        let low = tb - 1;
        (0..dim / 2).map(move |k| {
            let i0 = ((k & !low) << 1) | (k & low);
            (i0, i0 | tb)
        })
    }

    fn rotate_pair(&mut self, i0: usize, i1: usize, m: &Mat2) {
        let (a0, a1) = (self.amps[i0], self.amps[i1]);
        self.amps[i0] = m.0[0][0] * a0 + m.0[0][1] * a1;
        self.amps[i1] = m.0[1][0] * a0 + m.0[1][1] * a1;
    }

    fn kernel_fixed(&mut self, target: usize, mask: ControlMask, m: Mat2) {
        for (i0, i1) in Self::pair_indices(self.amps.len(), self.bit(target)) {
            if mask.admits(i0) {
                self.rotate_pair(i0, i1, &m);
            }
        }
    }

    fn kernel_multiplexed(
        &mut self,
        controls: &[usize],
        target: usize,
        mask: ControlMask,
        blocks: &[Option<Mat2>],
    ) {
        let control_bits: Vec<usize> = controls.iter().map(|&c| self.bit(c)).collect();
        for (i0, i1) in Self::pair_indices(self.amps.len(), self.bit(target)) {
            if !mask.admits(i0) {
                continue;
            }
            let k = control_bits
                .iter()
                .fold(0usize, |k, &b| (k << 1) | usize::from(i0 & b != 0));
            if let Some(m) = &blocks[k] {
                self.rotate_pair(i0, i1, m);
            }
        }
    }

    fn kernel_swap(&mut self, a: usize, b: usize, mask: ControlMask) {
        let (ba, bb) = (self.bit(a), self.bit(b));
        for i in 0..self.amps.len() {
            if i & ba != 0 && i & bb == 0 && mask.admits(i) {
                self.amps.swap(i, i ^ ba ^ bb);
            }
        }
    }

    /// Exact probability that `qubit` reads `value`.
    pub fn probability(&self, qubit: usize, value: bool) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::InvalidInput(format!("qubit {qubit} out of range")));
        }
        let bit = self.bit(qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & bit != 0) == value)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    fn check_register(&self, reg: &Register) -> Result<()> {
        if reg.start + reg.len > self.num_qubits {
            return Err(Error::InvalidInput(format!(
                "register {:?} exceeds {} qubits",
                reg.name, self.num_qubits
            )));
        }
        Ok(())
    }

    /// Exact probability that `reg` reads `value`.
    pub fn register_probability(&self, reg: &Register, value: usize) -> Result<f64> {
        Ok(self
            .register_distribution(reg)?
            .get(value)
            .copied()
            .unwrap_or(0.0))
    }

    /// Exact marginal distribution of `reg`, indexed by register value.
    pub fn register_distribution(&self, reg: &Register) -> Result<Vec<f64>> {
        self.check_register(reg)?;
        let mut dist = vec![0.0; 1usize << reg.len];
        for (i, a) in self.amps.iter().enumerate() {
            dist[reg.value_of(i, self.num_qubits)] += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Inverse quantum Fourier transform on `reg`:
    /// `|p⟩ → t^{-1/2} Σ_k e^{-2πi pk/t} |k⟩` with `t = 2^len`.
    pub fn apply_inverse_qft(&mut self, reg: &Register) -> Result<()> {
        self.check_register(reg)?;
        let t = 1usize << reg.len;
        let shift = self.num_qubits - reg.start - reg.len;
        let reg_mask = (t - 1) << shift;
        let twiddle: Vec<Complex64> = (0..t)
            .map(|m| Complex64::from_polar(1.0, -2.0 * PI * m as f64 / t as f64))
            .collect();
        let scale = 1.0 / (t as f64).sqrt();
        let mut column = vec![Complex64::new(0.0, 0.0); t];
        for base in 0..self.amps.len() {
            if base & reg_mask != 0 {
                continue;
            }
            for (p, slot) in column.iter_mut().enumerate() {
                *slot = self.amps[base | (p << shift)];
            }
            for k in 0..t {
                let mut acc = Complex64::new(0.0, 0.0);
                for (p, a) in column.iter().enumerate() {
                    acc += a * twiddle[(p * k) % t];
                }
                self.amps[base | (k << shift)] = acc * scale;
            }
        }
        Ok(())
    }

    /// Draws a basis index from `|a_j|²` with the given generator.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        self.check_normalized()?;
        let u: f64 = rng.gen::<f64>() * self.norm_sqr();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            if u < acc {
                return Ok(i);
            }
        }
        Ok(last_nonzero)
    }

    /// [`sample`](Self::sample) with a fresh ChaCha8 stream seeded by `seed`.
    pub fn sample_seeded(&self, seed: u64) -> Result<usize> {
        self.sample(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Text dump, one `index real imag` line per amplitude.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, a) in self.amps.iter().enumerate() {
            let _ = writeln!(out, "{i} {:e} {:e}", a.re, a.im);
        }
        out
    }
}

/// Functional form of [`StateVector::apply`].
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// Applies `Ry(angles[k])` to `target` for each control value `k`.
pub fn apply_ucr(
    state: &StateVector,
    controls: &[usize],
    target: usize,
    angles: &[f64],
) -> Result<StateVector> {
    apply_gate(
        state,
        &Gate::Ucr {
            controls: controls.to_vec(),
            target,
            angles: angles.to_vec(),
        },
    )
}
