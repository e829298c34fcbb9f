mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use quantum_forest::circuit::{
    build_d, build_v, compile_forest_op, compile_inverse, compile_plus1, compile_times2,
    compile_tree_op, expected_leaves, grover_iterate, BranchOutcomeTable, LeafAngleTable, Layout,
};
use quantum_forest::forest::{beta_classical, load_forest, InputObject};
use quantum_forest::statevector::dense::{circuit_matrix, DenseMatrix};
use quantum_forest::statevector::{Control, Gate, StateVector};
use quantum_forest::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn lambda_controls(layout: &Layout, tree: usize) -> Vec<Control> {
    layout
        .lambda
        .qubits()
        .enumerate()
        .map(|(k, q)| Control {
            qubit: q,
            on: (tree >> (layout.lambda.len - 1 - k)) & 1 == 1,
        })
        .collect()
}

#[test]
fn layout_and_width() {
    let l = Layout::new(4, 3).unwrap();
    assert_eq!(l.width(), 2 + 3 + 2);
    assert_eq!((l.lambda.start, l.psi.start, l.phi_qubit()), (0, 2, 6));
    assert!(matches!(Layout::new(3, 2), Err(Error::Compile(_))));
    assert!(matches!(Layout::new(2, 0), Err(Error::Compile(_))));
}

#[test]
fn each_branch_lands_on_its_leaf_with_its_angle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..60 {
        let (forest, x) = common::random_forest([1, 2, 4, 8][trial % 4], 1 + trial % 3, &mut rng);
        let circuit = compile_forest_op(&forest, &x).unwrap();
        let layout = circuit.layout;
        let mut state = StateVector::new(layout.width()).unwrap();
        state.apply_all(&circuit.gates).unwrap();
        let n = forest.num_trees() as f64;
        let mut mass = 0.0;
        for (i, (leaf, alpha)) in expected_leaves(&forest, &x).unwrap().into_iter().enumerate() {
            let base = (i << (layout.psi.len + 1)) | (leaf << 1);
            let a0 = state.amplitudes()[base];
            let a1 = state.amplitudes()[base | 1];
            assert!((a0 - Complex64::new(alpha.cos() / n.sqrt(), 0.0)).norm() < TOL);
            assert!((a1 - Complex64::new(alpha.sin() / n.sqrt(), 0.0)).norm() < TOL);
            mass += a0.norm_sqr() + a1.norm_sqr();
        }
        // Nothing outside the reached leaves.
        assert!((mass - 1.0).abs() < TOL);
        let lambda = state.register_distribution(&layout.lambda).unwrap();
        assert!(lambda.iter().all(|p| (p - 1.0 / n).abs() < TOL));
        let p1 = state.probability(layout.phi_qubit(), true).unwrap();
        assert!((p1 - beta_classical(&forest, &x).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn multiplexed_forest_equals_per_tree_controlled_ops() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for trial in 0..20 {
        let (forest, x) = common::random_forest([2, 4][trial % 2], 1 + trial % 3, &mut rng);
        let circuit = compile_forest_op(&forest, &x).unwrap();
        let layout = circuit.layout;
        let outcomes = BranchOutcomeTable::evaluate(&forest, &x).unwrap();
        let angles = LeafAngleTable::new(&forest).unwrap();

        let mut reference = StateVector::new(layout.width()).unwrap();
        for q in layout.lambda.qubits() {
            reference.apply(&Gate::H(q)).unwrap();
        }
        reference.apply(&Gate::X(layout.psi.lsb())).unwrap();
        for (i, tree) in forest.trees().iter().enumerate() {
            let ctl = lambda_controls(&layout, i);
            for g in compile_tree_op(&layout, tree, i, &outcomes, &angles).unwrap() {
                reference.apply_controlled(&g, &ctl).unwrap();
            }
        }
        let mut state = StateVector::new(layout.width()).unwrap();
        state.apply_all(&circuit.gates).unwrap();
        assert!(state.max_abs_diff(&reference) < TOL);
    }
}

#[test]
fn times_two_shifts_psi() {
    let layout = Layout::new(1, 2).unwrap();
    let gates = compile_times2(&layout.psi);
    for j in 1..4 {
        // ψ value j, φ = 0; ψ occupies qubits 0..3.
        let mut s = StateVector::basis(4, j << 1).unwrap();
        s.apply_all(&gates).unwrap();
        assert_eq!(s.register_probability(&layout.psi, 2 * j).unwrap(), 1.0);
    }
}

#[test]
fn plus_one_follows_outcome_table() {
    let layout = Layout::new(1, 2).unwrap();
    // Root true, node 2 false, node 3 true.
    let outcomes = BranchOutcomeTable::from_rows(2, vec![vec![true, false, true]]);
    let root = compile_plus1(&layout, 0, 0, &outcomes).unwrap();
    let mut s = StateVector::basis(4, 2 << 1).unwrap();
    s.apply(&root).unwrap();
    assert_eq!(s.register_probability(&layout.psi, 3).unwrap(), 1.0);

    // A superposition of parents 2 and 3 at level 1 (ψ = 4 and 6 after ×2).
    let level1 = compile_plus1(&layout, 1, 0, &outcomes).unwrap();
    let h = 0.5f64.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    amps[4 << 1] = Complex64::new(h, 0.0);
    amps[6 << 1] = Complex64::new(h, 0.0);
    let mut s = StateVector::from_amplitudes(amps).unwrap();
    s.apply(&level1).unwrap();
    assert!((s.register_probability(&layout.psi, 4).unwrap() - 0.5).abs() < TOL);
    assert!((s.register_probability(&layout.psi, 7).unwrap() - 0.5).abs() < TOL);

    assert!(matches!(compile_plus1(&layout, 2, 0, &outcomes), Err(Error::Compile(_))));
    let short = BranchOutcomeTable::from_rows(2, vec![vec![true]]);
    assert!(matches!(compile_plus1(&layout, 1, 0, &short), Err(Error::Compile(_))));
}

#[test]
fn inverse_returns_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..20 {
        let (forest, x) = common::random_forest(4, 2, &mut rng);
        let circuit = compile_forest_op(&forest, &x).unwrap();
        let mut s = StateVector::new(circuit.width()).unwrap();
        s.apply_all(&circuit.gates).unwrap();
        s.apply_all(&compile_inverse(&circuit).gates).unwrap();
        assert!((s.amplitudes()[0] - Complex64::new(1.0, 0.0)).norm() < TOL);
        assert_eq!(compile_inverse(&compile_inverse(&circuit)), circuit);
    }
}

#[test]
fn reflections() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for trial in 0..12 {
        let (forest, x) = common::random_forest([1, 2, 4][trial % 3], 1 + trial % 3, &mut rng);
        let circuit = compile_forest_op(&forest, &x).unwrap();
        let w = circuit.width();
        let d = build_d(&circuit);
        let v = build_v(&circuit.layout);

        let mut psi = StateVector::new(w).unwrap();
        psi.apply_all(&circuit.gates).unwrap();
        let mut dpsi = psi.clone();
        dpsi.apply_all(&d).unwrap();
        assert!(dpsi.max_abs_diff(&psi) < TOL);

        // A state orthogonal to |Ψ⟩ is negated.
        let r = StateVector::random(w, &mut rng).unwrap();
        let overlap = psi.inner(&r);
        let perp: Vec<Complex64> = r.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| a - overlap * b).collect();
        let norm = perp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let perp = StateVector::from_amplitudes(perp.iter().map(|a| a / norm).collect()).unwrap();
        let mut dperp = perp.clone();
        dperp.apply_all(&d).unwrap();
        let negated: Vec<Complex64> = perp.amplitudes().iter().map(|a| -a).collect();
        assert!(dperp.amplitudes().iter().zip(&negated).all(|(a, b)| (a - b).norm() < TOL));

        if w <= 6 {
            let id = DenseMatrix::identity(1 << w);
            for ops in [&d, &v] {
                let m = circuit_matrix(ops.iter(), w).unwrap();
                assert!(m.unitarity_defect() < TOL);
                assert!(m.max_abs_diff(&m.adjoint()) < TOL);
                assert!(m.matmul(&m).max_abs_diff(&id) < TOL);
            }
            let q = circuit_matrix(grover_iterate(&circuit).iter(), w).unwrap();
            assert!(q.unitarity_defect() < TOL);
        }
    }
}

#[test]
fn query_levels_equal_height() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for h in 1..=4 {
        let (forest, x) = common::random_forest(2, h, &mut rng);
        assert_eq!(compile_forest_op(&forest, &x).unwrap().metadata.query_levels, h);
    }
}

#[test]
fn metadata_hashes_track_inputs() {
    let doc = r#"{"n":1,"h":1,"schema":[{"kind":"real"}],
        "trees":[{"nodes":{"1":{"kind":"greater","attr":1,"threshold":0.5}},"leaves":{"2":3.0,"3":7.0}}]}"#;
    let forest = load_forest(doc).unwrap();
    let a = compile_forest_op(&forest, &InputObject::new(vec![0.2])).unwrap();
    let b = compile_forest_op(&forest, &InputObject::new(vec![0.9])).unwrap();
    assert_eq!(a.metadata.forest_hash, b.metadata.forest_hash);
    assert_ne!(a.metadata.input_hash, b.metadata.input_hash);
    assert_eq!(a.metadata.forest_hash.len(), 16);
    let dump = a.dump();
    assert!(dump.starts_with("# Lambda qubits 0..0\n"));
    assert_eq!(dump.lines().count(), 3 + a.gates.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn amplitude_of_flag_is_beta(seed in any::<u64>(), log_n in 0usize..4, h in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (forest, x) = common::random_forest(1 << log_n, h, &mut rng);
        let circuit = compile_forest_op(&forest, &x).unwrap();
        let mut s = StateVector::new(circuit.width()).unwrap();
        s.apply_all(&circuit.gates).unwrap();
        let p = s.probability(circuit.layout.phi_qubit(), true).unwrap();
        prop_assert!((p - beta_classical(&forest, &x).unwrap()).abs() < 1e-9);
    }
}
