//! Compiles a forest and an input object into the state-preparation circuit
//! and the two reflections used by amplitude estimation.
//!
//! Qubit layout, most significant first: `λ` (tree index, `log2 n` qubits),
//! `ψ` (node index, `h + 1` qubits), `φ` (result, 1 qubit).
//!
//! One tree is walked by `h` stages of `×2` (a SWAP cascade) followed by a
//! conditional `+1` (a UCG on the least significant `ψ` qubit keyed on the
//! parent index), and finished by a UCR that rotates `φ` by the leaf angle.
//! For a forest the same stages are multiplexed over `λ`, so each stage is a
//! single uniformly controlled gate whose blocks come from every tree.

mod tables;

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::forest::{save_forest, DecisionTree, InputObject, RandomForest};
use crate::statevector::{Control, Gate, Mat2, Register, RegisterName};

pub use tables::{expected_leaves, BranchOutcomeTable, LeafAngleTable};

/// Register placement for a forest of `num_trees` trees of height `height`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Layout {
    pub lambda: Register,
    pub psi: Register,
    pub phi: Register,
}

impl Layout {
    pub fn new(num_trees: usize, height: usize) -> Result<Self> {
        if num_trees == 0 || !num_trees.is_power_of_two() {
            return Err(Error::Compile(format!(
                "the tree count must be a power of two, got {num_trees}"
            )));
        }
        if height == 0 {
            return Err(Error::Compile("tree height must be at least 1".into()));
        }
        let lambda_len = num_trees.trailing_zeros() as usize;
        let lambda = Register::new(RegisterName::Lambda, 0, lambda_len);
        let psi = Register::new(RegisterName::Psi, lambda_len, height + 1);
        let phi = Register::new(RegisterName::Phi, lambda_len + height + 1, 1);
        Ok(Layout { lambda, psi, phi })
    }

    /// `log2 n + h + 2`
    pub fn width(&self) -> usize {
        self.lambda.len + self.psi.len + self.phi.len
    }

    pub fn height(&self) -> usize {
        self.psi.len - 1
    }

    pub fn registers(&self) -> [Register; 3] {
        [self.lambda, self.psi, self.phi]
    }

    pub fn phi_qubit(&self) -> usize {
        self.phi.start
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircuitMetadata {
    pub forest_hash: String,
    pub input_hash: String,
    pub num_trees: usize,
    pub height: usize,
    pub y_min: f64,
    pub y_max: f64,
    /// Number of `+1` stages, each one superposed query of the input.
    pub query_levels: usize,
}

/// An ordered gate list over the `λ`, `ψ`, `φ` registers.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledCircuit {
    pub layout: Layout,
    pub gates: Vec<Gate>,
    pub metadata: CircuitMetadata,
}

impl CompiledCircuit {
    pub fn width(&self) -> usize {
        self.layout.width()
    }

    pub fn registers(&self) -> [Register; 3] {
        self.layout.registers()
    }

    /// Register header followed by one line per gate.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for r in self.registers() {
            let _ = writeln!(out, "# {:?} qubits {}..{}", r.name, r.start, r.start + r.len);
        }
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }
}

/// `|j⟩ → |2j⟩` on `ψ` for `j < 2^h`: a cyclic left shift by adjacent SWAPs.
pub fn compile_times2(psi: &Register) -> Vec<Gate> {
    (0..psi.len.saturating_sub(1))
        .map(|k| Gate::Swap(psi.qubit(k), psi.qubit(k + 1)))
        .collect()
}

/// The `+1` stage of `level` (0 = root) for tree `tree_index`.
///
/// After the `×2` of this level `ψ` holds `2p` for a parent `p` on `level`;
/// the UCG flips the least significant `ψ` qubit when `p`'s predicate holds.
pub fn compile_plus1(
    layout: &Layout,
    level: usize,
    tree_index: usize,
    outcomes: &BranchOutcomeTable,
) -> Result<Gate> {
    plus1_stage(layout, level, &[tree_index], false, outcomes)
}

fn plus1_stage(
    layout: &Layout,
    level: usize,
    trees: &[usize],
    lambda_controlled: bool,
    outcomes: &BranchOutcomeTable,
) -> Result<Gate> {
    let h = layout.height();
    if level >= h {
        return Err(Error::Compile(format!("level {level} is past the tree height {h}")));
    }
    let parent_bits = h;
    let mut blocks = vec![Mat2::IDENTITY; trees.len() << parent_bits];
    for (slot, &tree) in trees.iter().enumerate() {
        for parent in (1usize << level)..(1usize << (level + 1)) {
            if outcomes.outcome(tree, parent)? {
                blocks[(slot << parent_bits) | parent] = Mat2::X;
            }
        }
    }
    let lambda = lambda_controlled.then_some(layout.lambda.qubits());
    let controls = lambda
        .into_iter()
        .flatten()
        .chain(layout.psi.qubits().take(parent_bits))
        .collect();
    Ok(Gate::Ucg {
        controls,
        target: layout.psi.lsb(),
        blocks,
    })
}

fn leaf_rotation(
    layout: &Layout,
    trees: &[usize],
    lambda_controlled: bool,
    angles: &LeafAngleTable,
) -> Result<Gate> {
    let psi_bits = layout.psi.len;
    let first_leaf = 1usize << layout.height();
    let mut table = vec![0.0; trees.len() << psi_bits];
    for (slot, &tree) in trees.iter().enumerate() {
        for leaf in first_leaf..(2 * first_leaf) {
            table[(slot << psi_bits) | leaf] = 2.0 * angles.angle(tree, leaf)?;
        }
    }
    let lambda = lambda_controlled.then_some(layout.lambda.qubits());
    let controls = lambda
        .into_iter()
        .flatten()
        .chain(layout.psi.qubits())
        .collect();
    Ok(Gate::Ucr {
        controls,
        target: layout.phi_qubit(),
        angles: table,
    })
}

/// Single-tree operator on `ψ`, `φ`:
/// `|1⟩|0⟩ → |j⟩(cos α|0⟩ + sin α|1⟩)` for the leaf `j` the walk reaches.
pub fn compile_tree_op(
    layout: &Layout,
    tree: &DecisionTree,
    tree_index: usize,
    outcomes: &BranchOutcomeTable,
    angles: &LeafAngleTable,
) -> Result<Vec<Gate>> {
    if tree.height() != layout.height() {
        return Err(Error::Compile(format!(
            "tree height {} does not match the layout height {}",
            tree.height(),
            layout.height()
        )));
    }
    walk_stages(layout, &[tree_index], false, outcomes, angles)
}

fn walk_stages(
    layout: &Layout,
    trees: &[usize],
    lambda_controlled: bool,
    outcomes: &BranchOutcomeTable,
    angles: &LeafAngleTable,
) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    for level in 0..layout.height() {
        gates.extend(compile_times2(&layout.psi));
        gates.push(plus1_stage(layout, level, trees, lambda_controlled, outcomes)?);
    }
    gates.push(leaf_rotation(layout, trees, lambda_controlled, angles)?);
    Ok(gates)
}

/// State preparation for the whole forest:
/// `|0…0⟩ → n^{-1/2} Σ_i |i⟩|j_i⟩(cos α_i|0⟩ + sin α_i|1⟩)`.
pub fn compile_forest_op(forest: &RandomForest, x: &InputObject) -> Result<CompiledCircuit> {
    let layout = Layout::new(forest.num_trees(), forest.height())?;
    let outcomes = BranchOutcomeTable::evaluate(forest, x)?;
    let angles = LeafAngleTable::new(forest)?;

    let mut gates: Vec<Gate> = layout.lambda.qubits().map(Gate::H).collect();
    gates.push(Gate::X(layout.psi.lsb()));
    let trees: Vec<usize> = (0..forest.num_trees()).collect();
    gates.extend(walk_stages(&layout, &trees, true, &outcomes, &angles)?);

    let query_levels = gates
        .iter()
        .filter(|g| matches!(g, Gate::Ucg { target, .. } if *target == layout.psi.lsb()))
        .count();
    Ok(CompiledCircuit {
        layout,
        gates,
        metadata: CircuitMetadata {
            forest_hash: digest(save_forest(forest).as_bytes()),
            input_hash: digest(
                &x.values
                    .iter()
                    .flat_map(|v| v.to_le_bytes())
                    .collect::<Vec<u8>>(),
            ),
            num_trees: forest.num_trees(),
            height: forest.height(),
            y_min: forest.y_min(),
            y_max: forest.y_max(),
            query_levels,
        },
    })
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

/// Reversed gate order with every gate inverted.
pub fn compile_inverse(circuit: &CompiledCircuit) -> CompiledCircuit {
    CompiledCircuit {
        layout: circuit.layout,
        gates: circuit.gates.iter().rev().map(Gate::inverse).collect(),
        metadata: circuit.metadata.clone(),
    }
}

/// `2|0…0⟩⟨0…0| - I` on `width` qubits starting at 0.
pub fn zero_reflection(width: usize) -> Vec<Gate> {
    let minus_on_zero = Mat2([
        [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0)],
        [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
    ]);
    vec![
        // Flip the sign of |0…0⟩ only, giving I - 2|0⟩⟨0|; the global -1 completes it.
        Gate::Controlled {
            controls: (1..width).map(Control::zero).collect(),
            target: 0,
            op: minus_on_zero,
        },
        Gate::GlobalPhase(PI),
    ]
}

/// `D = 2|Ψ⟩⟨Ψ| - I = U (2|0⟩⟨0| - I) U⁻¹`, as gates applied in order.
pub fn build_d(circuit: &CompiledCircuit) -> Vec<Gate> {
    let mut gates = compile_inverse(circuit).gates;
    gates.extend(zero_reflection(circuit.width()));
    gates.extend(circuit.gates.iter().cloned());
    gates
}

/// `V = I - 2P` with `P` projecting onto `φ = 1`.
pub fn build_v(layout: &Layout) -> Vec<Gate> {
    vec![Gate::Z(layout.phi_qubit())]
}

/// Grover iterate `Q = D·V` (V acts first).
pub fn grover_iterate(circuit: &CompiledCircuit) -> Vec<Gate> {
    let mut gates = build_v(&circuit.layout);
    gates.extend(build_d(circuit));
    gates
}
