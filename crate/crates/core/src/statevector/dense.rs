//! Explicit unitary matrices for small systems, built entry by entry from the
//! gate definitions. Used to cross-check the stride kernels.

use num_complex::Complex64;

use super::{Gate, Mat2, StateVector};
use crate::error::{Error, Result};
use crate::tolerance;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = DenseMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out.data[c * self.dim + r] = self.get(r, c).conj();
            }
        }
        out
    }

    /// `self * rhs`
    pub fn matmul(&self, rhs: &DenseMatrix) -> Self {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn apply(&self, state: &StateVector) -> Vec<Complex64> {
        let amps = state.amplitudes();
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * amps[c]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U†U - I|`
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&DenseMatrix::identity(self.dim))
    }
}

/// Matrix of `gate` on an `num_qubits` system (qubit 0 = most significant bit).
pub fn gate_matrix(gate: &Gate, num_qubits: usize) -> Result<DenseMatrix> {
    if num_qubits > tolerance::MAX_DENSE_QUBITS {
        return Err(Error::Resource(format!(
            "dense matrices are limited to {} qubits",
            tolerance::MAX_DENSE_QUBITS
        )));
    }
    gate.validate(num_qubits)?;
    let dim = 1usize << num_qubits;
    let bit = |q: usize| num_qubits - 1 - q;
    let read = |index: usize, q: usize| (index >> bit(q)) & 1;
    let mut m = DenseMatrix::zeros(dim);

    // Single-target gates: entry (r, c) is block(c)[r_t][c_t] when r and c agree off the target.
    let single = |m: &mut DenseMatrix, target: usize, block: &dyn Fn(usize) -> Mat2| {
        for c in 0..dim {
            let b = block(c);
            for rt in 0..2 {
                let r = (c & !(1 << bit(target))) | (rt << bit(target));
                m.data[r * dim + c] = b.0[rt][read(c, target)];
            }
        }
    };
    let select = |c: usize, controls: &[usize]| {
        controls.iter().fold(0usize, |k, &q| (k << 1) | read(c, q))
    };

    match gate {
        Gate::H(q) => single(&mut m, *q, &|_| Mat2::hadamard()),
        Gate::X(q) => single(&mut m, *q, &|_| Mat2::X),
        Gate::Z(q) => single(&mut m, *q, &|_| Mat2::Z),
        Gate::Ry { target, angle } => single(&mut m, *target, &|_| Mat2::ry(*angle)),
        Gate::Cnot { control, target } => single(&mut m, *target, &|c| {
            if read(c, *control) == 1 {
                Mat2::X
            } else {
                Mat2::IDENTITY
            }
        }),
        Gate::Controlled {
            controls,
            target,
            op,
        } => single(&mut m, *target, &|c| {
            if controls.iter().all(|ctl| (read(c, ctl.qubit) == 1) == ctl.on) {
                *op
            } else {
                Mat2::IDENTITY
            }
        }),
        Gate::Ucg {
            controls,
            target,
            blocks,
        } => single(&mut m, *target, &|c| blocks[select(c, controls)]),
        Gate::Ucr {
            controls,
            target,
            angles,
        } => single(&mut m, *target, &|c| Mat2::ry(angles[select(c, controls)])),
        Gate::Swap(a, b) => {
            for c in 0..dim {
                let (ba, bb) = (read(c, *a), read(c, *b));
                let r = (c & !(1 << bit(*a)) & !(1 << bit(*b))) | (bb << bit(*a)) | (ba << bit(*b));
                m.data[r * dim + c] = Complex64::new(1.0, 0.0);
            }
        }
        Gate::GlobalPhase(phi) => {
            let z = Complex64::from_polar(1.0, *phi);
            for i in 0..dim {
                m.data[i * dim + i] = z;
            }
        }
    }
    Ok(m)
}

/// Matrix of a gate sequence applied left to right (first gate acts first).
pub fn circuit_matrix<'a>(
    gates: impl IntoIterator<Item = &'a Gate>,
    num_qubits: usize,
) -> Result<DenseMatrix> {
    let mut acc = DenseMatrix::identity(1usize << num_qubits);
    for g in gates {
        acc = gate_matrix(g, num_qubits)?.matmul(&acc);
    }
    Ok(acc)
}
