use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);
    pub const Z: Mat2 = Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]]);

    pub fn hadamard() -> Mat2 {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Mat2([[s, s], [s, -s]])
    }

    /// `[[cos(ξ/2), -sin(ξ/2)], [sin(ξ/2), cos(ξ/2)]]`
    pub fn ry(angle: f64) -> Mat2 {
        let (s, c) = (angle / 2.0).sin_cos();
        Mat2([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn adjoint(&self) -> Mat2 {
        let m = &self.0;
        Mat2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::IDENTITY
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        d
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

/// A control wire and the value it must hold for the gate to act.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Control { qubit, on: true }
    }

    pub fn zero(qubit: usize) -> Self {
        Control { qubit, on: false }
    }
}

/// Gate vocabulary of the simulator.
///
/// Multiplexed gates (`Ucg`, `Ucr`) select their block by the value of the
/// control register read with `controls[0]` as the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    /// Phase flip of `|1⟩`.
    Z(usize),
    Ry { target: usize, angle: f64 },
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    /// A one-qubit operator applied when every control matches its value.
    Controlled {
        controls: Vec<Control>,
        target: usize,
        op: Mat2,
    },
    /// Uniformly controlled gate: block `k` acts on `target` when the controls read `k`.
    Ucg {
        controls: Vec<usize>,
        target: usize,
        blocks: Vec<Mat2>,
    },
    /// Uniformly controlled `Ry` rotation, one angle per control value.
    Ucr {
        controls: Vec<usize>,
        target: usize,
        angles: Vec<f64>,
    },
    /// Multiplies the whole state by `e^{iφ}`. Observable only under extra controls.
    GlobalPhase(f64),
}

impl Gate {
    /// All qubits the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) | Gate::Ry { target: q, .. } => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Controlled {
                controls, target, ..
            } => controls
                .iter()
                .map(|c| c.qubit)
                .chain(std::iter::once(*target))
                .collect(),
            Gate::Ucg {
                controls, target, ..
            }
            | Gate::Ucr {
                controls, target, ..
            } => controls.iter().copied().chain(std::iter::once(*target)).collect(),
            Gate::GlobalPhase(_) => Vec::new(),
        }
    }

    /// Checks qubit ranges, distinctness and block counts.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= num_qubits) {
            return Err(Error::InvalidGate(format!(
                "{} references qubit {q} of a {num_qubits}-qubit state",
                self.name()
            )));
        }
        let mut sorted = qubits.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qubits.len() {
            return Err(Error::InvalidGate(format!(
                "{} repeats a qubit in {qubits:?}",
                self.name()
            )));
        }
        let expect_blocks = |controls: usize, got: usize| {
            if controls >= usize::BITS as usize || got != 1usize << controls {
                Err(Error::InvalidGate(format!(
                    "{} with {controls} controls needs 2^{controls} blocks, got {got}",
                    self.name()
                )))
            } else {
                Ok(())
            }
        };
        match self {
            Gate::Ucg {
                controls, blocks, ..
            } => expect_blocks(controls.len(), blocks.len()),
            Gate::Ucr {
                controls, angles, ..
            } => expect_blocks(controls.len(), angles.len()),
            _ => Ok(()),
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::H(_) | Gate::X(_) | Gate::Z(_) | Gate::Cnot { .. } | Gate::Swap(..) => {
                self.clone()
            }
            Gate::Ry { target, angle } => Gate::Ry {
                target: *target,
                angle: -angle,
            },
            Gate::Controlled {
                controls,
                target,
                op,
            } => Gate::Controlled {
                controls: controls.clone(),
                target: *target,
                op: op.adjoint(),
            },
            Gate::Ucg {
                controls,
                target,
                blocks,
            } => Gate::Ucg {
                controls: controls.clone(),
                target: *target,
                blocks: blocks.iter().map(Mat2::adjoint).collect(),
            },
            Gate::Ucr {
                controls,
                target,
                angles,
            } => Gate::Ucr {
                controls: controls.clone(),
                target: *target,
                angles: angles.iter().map(|a| -a).collect(),
            },
            Gate::GlobalPhase(phi) => Gate::GlobalPhase(-phi),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::Ry { .. } => "RY",
            Gate::Cnot { .. } => "CNOT",
            Gate::Swap(..) => "SWAP",
            Gate::Controlled { .. } => "CU",
            Gate::Ucg { .. } => "UCG",
            Gate::Ucr { .. } => "UCR",
            Gate::GlobalPhase(_) => "GPHASE",
        }
    }
}

/// One line per gate: name, qubits, parameters.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Z(q) => write!(f, " {q}"),
            Gate::Ry { target, angle } => write!(f, " {target} angle={angle}"),
            Gate::Cnot { control, target } => write!(f, " {control} {target}"),
            Gate::Swap(a, b) => write!(f, " {a} {b}"),
            Gate::Controlled {
                controls,
                target,
                op,
            } => {
                let pattern: String = controls
                    .iter()
                    .map(|c| format!("{}{}", if c.on { "+" } else { "-" }, c.qubit))
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, " ctrl=[{pattern}] {target} op={}", fmt_mat2(op))
            }
            Gate::Ucg {
                controls,
                target,
                blocks,
            } => {
                let active: Vec<String> = blocks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| !b.is_identity())
                    .map(|(k, b)| format!("{k}:{}", fmt_mat2(b)))
                    .collect();
                write!(f, " ctrl={controls:?} {target} blocks=[{}]", active.join(" "))
            }
            Gate::Ucr {
                controls,
                target,
                angles,
            } => {
                let active: Vec<String> = angles
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a != 0.0)
                    .map(|(k, a)| format!("{k}:{a}"))
                    .collect();
                write!(f, " ctrl={controls:?} {target} angles=[{}]", active.join(" "))
            }
            Gate::GlobalPhase(phi) => write!(f, " phase={phi}"),
        }
    }
}

fn fmt_mat2(m: &Mat2) -> String {
    if *m == Mat2::X {
        return "X".into();
    }
    if *m == Mat2::Z {
        return "Z".into();
    }
    let e = |c: Complex64| format!("{}{:+}i", c.re, c.im);
    format!(
        "[[{},{}],[{},{}]]",
        e(m.0[0][0]),
        e(m.0[0][1]),
        e(m.0[1][0]),
        e(m.0[1][1])
    )
}

/// `SWAP(a, b)` as `CNOT(a, b) CNOT(b, a) CNOT(a, b)`.
pub fn swap_as_cnots(a: usize, b: usize) -> Result<[Gate; 3]> {
    if a == b {
        return Err(Error::InvalidGate(format!("SWAP needs two distinct qubits, got {a} twice")));
    }
    Ok([
        Gate::Cnot {
            control: a,
            target: b,
        },
        Gate::Cnot {
            control: b,
            target: a,
        },
        Gate::Cnot {
            control: a,
            target: b,
        },
    ])
}
